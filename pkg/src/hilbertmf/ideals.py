"""Fractional ideals of a real quadratic ring of integers in Hermite normal form.

An ideal is stored as ``content * (Z*a + Z*(b + w))`` with ``a > 0``,
``0 <= b < a`` and a positive rational ``content``.  The triple is unique,
so equality and hashing are plain tuple comparisons.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import nextprime, primerange
from sympy.ntheory import sqrt_mod

from .quadfield import (
    FieldElement,
    QuadField,
    SearchBoundExceeded,
    as_element,
)

DEFAULT_PRINCIPAL_BUDGET = 10**6


class NotSmoothError(ArithmeticError):
    def __init__(self, cofactor: int, bound: int):
        super().__init__(f"norm has cofactor {cofactor} with no prime factor <= {bound}")
        self.cofactor = cofactor
        self.bound = bound


def _hnf2(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF of a rank-2 sublattice of Z^2 given by generators.

    Returns ``(A, B, C)`` with basis ``(A, 0), (B, C)``, ``A, C > 0``, ``0 <= B < A``.
    """
    A = 0
    pivot: tuple[int, int] | None = None
    for v0, v1 in vectors:
        if v1 == 0:
            A = math.gcd(A, v0)
            continue
        if pivot is None:
            pivot = (v0, v1)
            continue
        p0, p1 = pivot
        g, s, t = _xgcd(p1, v1)
        pivot = (s * p0 + t * v0, g)
        A = math.gcd(A, (v1 // g) * p0 - (p1 // g) * v0)
    if pivot is None or A == 0:
        raise ValueError("generators do not span a rank-2 lattice")
    B, C = pivot
    if C < 0:
        B, C = -B, -C
    return A, B % A, C


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class IdealHNF:
    """``content * (Z*a + Z*(b + w))`` in the field ``F``."""

    __slots__ = ("field", "a", "b", "content")

    def __init__(self, F: QuadField, a: int, b: int, content: Fraction | int = 1):
        self.field = F
        self.a = a
        self.b = b
        self.content = Fraction(content)
        if a <= 0 or not 0 <= b < a or self.content <= 0:
            raise ValueError(f"invalid HNF triple ({a}, {b}, {content})")
        if (b * b + b * F.t + F.n) % a:
            raise ValueError(f"({a}, {b}) is not the HNF of an ideal in {F}")

    # constructors
    @classmethod
    def from_generators(cls, F: QuadField, gens: Sequence) -> IdealHNF:
        elems = [as_element(F, g) for g in gens]
        elems = [g for g in elems if g]
        if not elems:
            raise ValueError("all generators are zero")
        w = F.omega
        zgens = []
        for g in elems:
            zgens.append(g)
            zgens.append(g * w)
        den = 1
        for g in zgens:
            den = math.lcm(den, g.a.denominator, g.b.denominator)
        vecs = [(int(g.a * den), int(g.b * den)) for g in zgens]
        A, B, C = _hnf2(vecs)
        # ideals satisfy C | A and C | B
        return cls(F, A // C, (B // C) % (A // C), Fraction(C, den))

    @classmethod
    def unit(cls, F: QuadField) -> IdealHNF:
        return cls(F, 1, 0, 1)

    @classmethod
    def principal(cls, x) -> IdealHNF:
        if not isinstance(x, FieldElement):
            raise TypeError("principal() needs a FieldElement")
        return cls.from_generators(x.field, [x])

    # structure
    def key(self) -> tuple:
        return (self.field.D, self.a, self.b, self.content)

    def __eq__(self, other):
        return isinstance(other, IdealHNF) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def basis(self) -> tuple[FieldElement, FieldElement]:
        F, c = self.field, self.content
        return F(self.a * c, 0), F(self.b * c, c)

    def norm(self) -> Fraction:
        return self.a * self.content**2

    def is_integral(self) -> bool:
        return self.content.denominator == 1

    def is_unit_ideal(self) -> bool:
        return self.a == 1 and self.content == 1

    def contains(self, x) -> bool:
        x = as_element(self.field, x)
        c = self.content
        t = x.b / c
        if t.denominator != 1:
            return False
        r = (x.a - t * self.b * c) / (self.a * c)
        return r.denominator == 1

    __contains__ = contains

    def __mul__(self, other: IdealHNF) -> IdealHNF:
        if isinstance(other, (FieldElement, int, Fraction)):
            other = IdealHNF.from_generators(self.field, [other])
        if not isinstance(other, IdealHNF):
            return NotImplemented
        if self.is_unit_ideal():
            return other
        if other.is_unit_ideal():
            return self
        x1, x2 = self.basis()
        y1, y2 = other.basis()
        return IdealHNF.from_generators(self.field, [x1 * y1, x1 * y2, x2 * y1, x2 * y2])

    __rmul__ = __mul__

    def conjugate(self) -> IdealHNF:
        F = self.field
        prim = IdealHNF.from_generators(F, [F(self.a), F(self.b + F.t, -1)])
        return IdealHNF(F, prim.a, prim.b, prim.content * self.content)

    def inverse(self) -> IdealHNF:
        c = self.conjugate()
        return IdealHNF(self.field, c.a, c.b, c.content / self.norm())

    def __truediv__(self, other: IdealHNF) -> IdealHNF:
        return self * other.inverse()

    def __pow__(self, e: int) -> IdealHNF:
        base = self if e >= 0 else self.inverse()
        result = IdealHNF.unit(self.field)
        for _ in range(abs(e)):
            result = result * base
        return result

    def divides(self, other: IdealHNF) -> bool:
        """True iff ``other`` is contained in ``self``."""
        return all(self.contains(g) for g in other.basis())

    def residue(self, x) -> tuple[int, int]:
        """Canonical residue of an integral element modulo this integral ideal."""
        if not self.is_integral():
            raise ValueError("residues need an integral ideal")
        x0, x1 = as_element(self.field, x).int_coords()
        c = int(self.content)
        A, B, C = self.a * c, self.b * c, c
        k = x1 // C
        return (x0 - k * B) % A, x1 - k * C

    @property
    def label(self) -> str:
        return format_label(self)

    def __repr__(self):
        return f"<ideal {self.label} of norm {self.norm()}>"

    def __lt__(self, other: IdealHNF):
        return ideal_sort_key(self) < ideal_sort_key(other)


def ideal_sort_key(I: IdealHNF) -> tuple:
    return (I.norm(), I.content, I.a, I.b)


def format_label(I: IdealHNF) -> str:
    base = f"{I.a}.{I.b}"
    c = I.content
    if c == 1:
        return base
    if c.denominator == 1:
        return f"{base}*{c.numerator}"
    return f"{base}*{c.numerator}/{c.denominator}"


_LABEL = re.compile(r"\s*(\d+)\.(\d+)(?:\*(\d+)(?:/(\d+))?)?\s*")


def parse_label(F: QuadField, text: str) -> IdealHNF:
    """Parse ``a.b``, ``a.b*n`` or ``a.b*p/q``.

    A bare ``N.m`` that is not a valid HNF pair is read as the unique ideal of
    norm ``N`` whose least positive integer is ``m`` (so ``4.2`` is ``2O_F``
    when ``D = 5``).
    """
    m = _LABEL.fullmatch(text)
    if not m:
        raise ValueError(f"bad ideal label {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    num = int(m.group(3)) if m.group(3) else 1
    den = int(m.group(4)) if m.group(4) else 1
    try:
        return IdealHNF(F, a, b, Fraction(num, den))
    except ValueError:
        if m.group(3):
            raise
    # not an HNF pair: read "N.m" as norm N with least positive integer m
    hits = [I for I in enumerate_ideals(F, a) if I.norm() == a and min_integer(I) == b]
    if len(hits) != 1:
        raise ValueError(f"{text!r} is neither an HNF label nor a unique (norm, min integer) pair")
    return hits[0]


def min_integer(I: IdealHNF) -> Fraction:
    """Least positive rational integer multiple of 1 lying in ``I``."""
    return I.a * I.content


def parse_ideal(F: QuadField, text: str) -> IdealHNF:
    """Label grammar, or ``(g1, g2, ...)`` listing generators in the element grammar."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        gens = [F.parse(g) for g in s[1:-1].split(",") if g.strip()]
        return IdealHNF.from_generators(F, gens)
    return parse_label(F, s)


ideal_from_generators = IdealHNF.from_generators


def ideal_norm(I: IdealHNF) -> Fraction:
    return I.norm()


# prime splitting


@dataclass(frozen=True)
class Splitting:
    p: int
    kind: str  # "split" | "inert" | "ramified"
    primes: tuple[tuple[IdealHNF, int, int], ...]  # (prime, e, f)

    @property
    def g(self) -> int:
        return len(self.primes)


def _roots_mod_p(F: QuadField, p: int) -> list[int]:
    t, n = F.t, F.n
    if p == 2:
        return [r for r in range(2) if (r * r - t * r + n) % 2 == 0]
    d = (t * t - 4 * n) % p
    inv2 = pow(2, -1, p)
    if d == 0:
        return [(t * inv2) % p]
    if pow(d, (p - 1) // 2, p) != 1:
        return []
    s = sqrt_mod(d, p)
    return sorted({((t + s) * inv2) % p, ((t - s) * inv2) % p})


def prime_splitting(F: QuadField, p: int) -> Splitting:
    roots = _roots_mod_p(F, p)
    if not roots:
        return Splitting(p, "inert", ((IdealHNF(F, 1, 0, p), 1, 2),))
    primes = tuple((IdealHNF(F, p, (-r) % p, 1), 1, 1) for r in roots)
    if F.disc % p == 0:
        (P, _, _), = primes
        return Splitting(p, "ramified", ((P, 2, 1),))
    return Splitting(p, "split", primes)


def primes_above(F: QuadField, p: int) -> list[IdealHNF]:
    return [P for P, _, _ in prime_splitting(F, p).primes]


def primes_up_to(F: QuadField, B: int) -> list[IdealHNF]:
    """All prime ideals of norm <= B, sorted by (norm, label)."""
    out = []
    for p in primerange(2, int(B) + 1):
        for P, _, f in prime_splitting(F, p).primes:
            if p**f <= B:
                out.append(P)
    return sorted(out, key=ideal_sort_key)


def factor_ideal(I: IdealHNF, bound: int = 10**6) -> list[tuple[IdealHNF, int]]:
    """Prime factorisation of a fractional ideal whose norm is ``bound``-smooth."""
    F = I.field
    if not I.is_integral():
        den = I.content.denominator
        num = I * den
        fn = dict(factor_ideal(num, bound))
        for P, e in factor_ideal(IdealHNF(F, 1, 0, den), bound):
            fn[P] = fn.get(P, 0) - e
        return sorted(((P, e) for P, e in fn.items() if e), key=lambda pe: ideal_sort_key(pe[0]))
    N = int(I.norm())
    ps = []
    rest = N
    for p in primerange(2, bound + 1):
        if p * p > rest:
            break
        if rest % p == 0:
            ps.append(p)
            while rest % p == 0:
                rest //= p
    if rest > 1:
        if rest > bound:
            raise NotSmoothError(rest, bound)
        ps.append(rest)
    out = []
    J = I
    for p in ps:
        for P in primes_above(F, p):
            Pinv = P.inverse()
            e = 0
            while True:
                K = J * Pinv
                if not K.is_integral():
                    break
                J = K
                e += 1
            if e:
                out.append((P, e))
    if not J.is_unit_ideal():
        raise ArithmeticError(f"factorisation left cofactor {J}")
    return out


# principality and class groups


def _scale_to_integral(I: IdealHNF) -> tuple[IdealHNF, int]:
    q = I.content.denominator
    return IdealHNF(I.field, I.a, I.b, I.content * q), q


def is_principal(I: IdealHNF, budget: int = DEFAULT_PRINCIPAL_BUDGET) -> FieldElement | None:
    """A generator of ``I`` or ``None`` when ``I`` is proved non-principal.

    Every principal ideal has a generator ``x`` with ``|x1/x2|`` in
    ``[1/e, e)`` (``e`` the fundamental unit), so ``|x_j| <= sqrt(N*e)``.
    The search covers that whole region, hence a miss is a proof.  Among the
    hits the generator with the smallest ``(|b|, |a|, sign)`` key is returned.
    """
    F = I.field
    J, q = _scale_to_integral(I)
    N = int(J.norm())
    eps = float(F.fundamental_unit().floats()[0])
    w1, w2 = F.omega_floats()
    delta = w1 - w2
    bmax = int(2 * math.sqrt(N * eps) / delta) + 1
    if 2 * bmax + 1 > budget:
        raise SearchBoundExceeded(f"principality search for {I.label} needs {2 * bmax + 1} steps")
    t, n = F.t, F.n
    best = None
    for babs in range(0, bmax + 1):
        for b in ((babs, -babs) if babs else (0,)):
            for target in (N, -N):
                disc = b * b * t * t - 4 * (b * b * n - target)
                if disc < 0:
                    continue
                r = math.isqrt(disc)
                if r * r != disc:
                    continue
                for num in {-b * t + r, -b * t - r}:
                    if num % 2:
                        continue
                    a = num // 2
                    x = F(a, b)
                    if J.contains(x):
                        k = (abs(b), abs(a), b < 0, a < 0)
                        if best is None or k < best[0]:
                            best = (k, x)
        if best is not None:
            break
    if best is None:
        return None
    return best[1] / q


def equivalent(I: IdealHNF, J: IdealHNF) -> bool:
    return is_principal(I / J) is not None


def minkowski_bound(F: QuadField) -> float:
    return math.sqrt(F.disc) / 2


@dataclass
class ClassGroup:
    field: QuadField
    representatives: list[IdealHNF]
    table: list[list[int]] = field(default_factory=list)

    @property
    def h(self) -> int:
        return len(self.representatives)

    @property
    def narrow_h(self) -> int:
        return self.h if self.field.fundamental_unit().norm() == -1 else 2 * self.h

    @property
    def narrow_differs(self) -> bool:
        return self.narrow_h != self.h

    def index(self, I: IdealHNF) -> int:
        """Index of the class containing ``I``."""
        for i, R in enumerate(self.representatives):
            if equivalent(I, R):
                return i
        raise ArithmeticError(f"{I.label} matches no class representative")

    def generator_to_rep(self, I: IdealHNF) -> tuple[int, FieldElement]:
        """(i, x) with ``I = x * t_i``."""
        for i, R in enumerate(self.representatives):
            x = is_principal(I / R)
            if x is not None:
                return i, x
        raise ArithmeticError(f"{I.label} matches no class representative")


@lru_cache(maxsize=None)
def class_group(F: QuadField) -> ClassGroup:
    """Class group by closure of the primes below the Minkowski bound.

    Representatives: ``O_F`` for the trivial class, and for every other class
    the prime of least ``(norm, a, b)`` lying in it.
    """
    M = minkowski_bound(F)
    gens = primes_up_to(F, int(M))
    found = [IdealHNF.unit(F)]
    frontier = [found[0]]
    while frontier:
        nxt = []
        for R in frontier:
            for P in gens:
                X = R * P
                if not any(equivalent(X, S) for S in found):
                    found.append(X)
                    nxt.append(X)
        frontier = nxt
    h = len(found)
    reps: list[IdealHNF | None] = [IdealHNF.unit(F)] + [None] * (h - 1)
    missing = h - 1
    p = 2
    while missing:
        for P in primes_above(F, p):
            for i in range(1, h):
                if reps[i] is None and equivalent(P, found[i]):
                    reps[i] = P
                    missing -= 1
        p = nextprime(p)
    order = [0] + sorted(range(1, h), key=lambda i: ideal_sort_key(reps[i]))
    reps_sorted = [reps[i] for i in order]
    cg = ClassGroup(F, reps_sorted)
    cg.table = [[cg.index(A * B) for B in reps_sorted] for A in reps_sorted]
    return cg


def different_ideal(F: QuadField) -> IdealHNF:
    """The different, generated by ``f'(w) = 2w - t``."""
    return IdealHNF.from_generators(F, [F(-F.t, 2)])


def enumerate_ideals(F: QuadField, B: int) -> list[IdealHNF]:
    """All integral ideals of norm <= B, sorted by (norm, label)."""
    primes = primes_up_to(F, B)
    out: list[IdealHNF] = []

    def rec(start: int, I: IdealHNF, N: int):
        out.append(I)
        for i in range(start, len(primes)):
            P = primes[i]
            NP = int(P.norm())
            if N * NP > B:
                break
            J, M = I, N
            while M * NP <= B:
                J, M = J * P, M * NP
                rec(i + 1, J, M)

    rec(0, IdealHNF.unit(F), 1)
    return sorted(out, key=ideal_sort_key)


def enumerate_ideal_norms(F: QuadField, B: int) -> list[int]:
    """Norms of all integral ideals of norm <= B (multiplicity included), no HNF work."""
    local: list[list[int]] = []
    for p in primerange(2, int(B) + 1):
        s = prime_splitting(F, p)
        local.append([p**f for _, _, f in s.primes])
    prime_norms = sorted(q for qs in local for q in qs if q <= B)
    norms = [1]
    for q in prime_norms:
        new = []
        for N in norms:
            M = N * q
            while M <= B:
                new.append(M)
                M *= q
        norms.extend(new)
    return sorted(norms)
