"""Frobenius data in abelian extensions, local factors and compatible systems.

Local factors use the ``det(I - rho(Frob) T)`` convention and are stored by
their non-constant coefficients: ``(c1, c2)`` means ``1 + c1 T + c2 T^2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from sympy import factorint, isprime, primerange, totient
from sympy.ntheory import n_order

from .hecke import HeckeEigensystem
from .ideals import prime_splitting, primes_up_to
from .quadfield import FieldElement, QuadField, make_field


class RamifiedError(ValueError):
    """The prime ramifies where an unramified prime is required."""


class BadReductionError(ValueError):
    """The prime divides the discriminant of the curve."""


# abelian extensions


@dataclass(frozen=True)
class AbelianGaloisDesc:
    """``cyclotomic`` Q(zeta_N) with group (Z/N)^x, or ``quadratic`` Q(sqrt D) with group {+-1}."""

    kind: str
    modulus: int

    def __post_init__(self):
        if self.kind not in ("cyclotomic", "quadratic"):
            raise ValueError(f"unknown extension kind {self.kind!r}")
        if self.modulus < 1:
            raise ValueError("modulus must be positive")

    @classmethod
    def cyclotomic(cls, N: int) -> AbelianGaloisDesc:
        return cls("cyclotomic", N)

    @classmethod
    def quadratic(cls, D: int) -> AbelianGaloisDesc:
        return cls("quadratic", D)

    @property
    def degree(self) -> int:
        return int(totient(self.modulus)) if self.kind == "cyclotomic" else 2

    def group(self) -> list[int]:
        if self.kind == "cyclotomic":
            return [a for a in range(1, self.modulus + 1) if math.gcd(a, self.modulus) == 1][: self.degree]
        return [1, -1]

    def discriminant(self) -> int:
        if self.kind != "quadratic":
            raise ValueError("discriminant is only tracked for quadratic fields")
        return make_field(self.modulus).disc


def kronecker(d: int, p: int) -> int:
    """Kronecker symbol ``(d / p)`` for a prime ``p``."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = d % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def frobenius_cyclotomic(p: int, N: int) -> int:
    """Frobenius at ``p`` in Gal(Q(zeta_N)/Q) = (Z/N)^x, i.e. ``p mod N``."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if N % p == 0:
        raise RamifiedError(f"{p} ramifies in Q(zeta_{N})")
    return p % N


def efg_data(ext, p: int) -> tuple[int, int, int]:
    """Ramification index, inertial degree and number of primes above ``p``."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if isinstance(ext, QuadField):
        s = prime_splitting(ext, p)
        _, e, f = s.primes[0]
        return e, f, s.g
    if ext.kind == "quadratic":
        k = kronecker(ext.discriminant(), p)
        return {0: (2, 1, 1), 1: (1, 1, 2), -1: (1, 2, 1)}[k]
    N = ext.modulus
    v = 0
    while N % p == 0:
        N //= p
        v += 1
    e = int(totient(p**v)) if v else 1
    f = int(n_order(p, N)) if N > 1 else 1
    g = ext.degree // (e * f)
    return e, f, g


# Dirichlet characters


@dataclass(frozen=True)
class DirichletCharacter:
    """Values ``chi(a) = exp(2 pi i r(a))`` stored as exact phases ``r(a)`` in ``[0, 1)``."""

    modulus: int
    phases: Mapping[int, Fraction]

    @classmethod
    def trivial(cls, N: int) -> DirichletCharacter:
        return cls.from_generators(N, {})

    @classmethod
    def from_generators(cls, N: int, gens: Mapping[int, Fraction]) -> DirichletCharacter:
        """Close the generator values under multiplication, rejecting inconsistent tables.

        Elements missing from the closure raise, so ``gens`` must generate
        (Z/N)^x.
        """
        table: dict[int, Fraction] = {1 % N: Fraction(0)}
        todo = [1 % N]
        gens = {g % N: Fraction(r) % 1 for g, r in gens.items()}
        for g in gens:
            if math.gcd(g, N) != 1:
                raise ValueError(f"{g} is not a unit mod {N}")
        while todo:
            a = todo.pop()
            for g, r in gens.items():
                b = (a * g) % N
                val = (table[a] + r) % 1
                if b in table:
                    if table[b] != val:
                        raise ValueError(f"character table is not multiplicative at {b} mod {N}")
                else:
                    table[b] = val
                    todo.append(b)
        units = [a for a in range(N) if math.gcd(a, N) == 1]
        if len(table) != len(units):
            raise ValueError("the given generators do not generate (Z/N)^x")
        return cls(N, table)

    @classmethod
    def kronecker_character(cls, D: int) -> DirichletCharacter:
        """The quadratic character of Q(sqrt D), modulo its discriminant."""
        d = make_field(D).disc
        N = abs(d)
        table = {}
        for a in range(N):
            if math.gcd(a, N) == 1:
                table[a] = Fraction(0) if _kronecker_any(d, a) == 1 else Fraction(1, 2)
        return cls(N, table)

    def phase(self, a: int) -> Fraction | None:
        return self.phases.get(a % self.modulus)

    def __call__(self, a: int) -> int | complex:
        """Exact ``0``, ``1`` or ``-1`` where possible, otherwise a complex root of unity."""
        r = self.phase(a)
        if r is None:
            return 0
        if r == 0:
            return 1
        if r == Fraction(1, 2):
            return -1
        return cmath.exp(2j * math.pi * float(r))

    def order(self) -> int:
        return math.lcm(*(r.denominator for r in self.phases.values()))

    def check(self) -> None:
        """Multiplicativity and values being roots of unity, exactly."""
        for a, ra in self.phases.items():
            if not (0 <= ra < 1):
                raise ValueError(f"phase {ra} out of range")
            for b, rb in self.phases.items():
                if self.phases[(a * b) % self.modulus] != (ra + rb) % 1:
                    raise ValueError(f"not multiplicative at {a}, {b}")

    def conductor(self) -> int:
        N = self.modulus
        for d in sorted(x for x in range(1, N + 1) if N % x == 0):
            if all(r == 0 for a, r in self.phases.items() if a % d == 1 % d):
                return d
        return N

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def primitive_value(self, p: int) -> int | complex:
        """Value at ``p`` of the primitive character inducing this one (0 if ``p`` divides the conductor)."""
        d = self.conductor()
        if d % p == 0 and d > 1:
            return 0
        a = p % d
        while math.gcd(a, self.modulus) != 1:
            a += d
        return self(a)


def _kronecker_any(d: int, n: int) -> int:
    out = 1
    for p, e in factorint(n).items():
        out *= kronecker(d, p) ** e
    return out


# local factors


@dataclass(frozen=True)
class LocalFactor:
    """``P(T) = 1 + c1 T + c2 T^2 + ...`` at the prime ``label`` of norm ``norm``."""

    label: str
    coeffs: tuple
    norm: int

    @property
    def degree(self) -> int:
        d = len(self.coeffs)
        while d and not self.coeffs[d - 1]:
            d -= 1
        return d

    def __call__(self, T):
        out = 1
        for i, c in enumerate(self.coeffs, start=1):
            out = out + c * T**i
        return out

    def trace(self):
        """``-P'(0)``: the trace of Frobenius."""
        return -self.coeffs[0] if self.coeffs else 0

    def det(self):
        return self.coeffs[1] if len(self.coeffs) > 1 else 0


def artin_local_factor(chi: DirichletCharacter, p: int) -> LocalFactor:
    """``1 - chi(p) T`` for unramified ``p``; the inertia invariants decide ramified ``p``."""
    chi.check()
    if chi.modulus % p:
        return LocalFactor(str(p), (-chi(p),), p)
    val = chi.primitive_value(p)
    return LocalFactor(str(p), (-val,) if val else (), p)


def _prime_norm(es: HeckeEigensystem, q: str) -> int:
    if es.base is None:
        return int(q)
    from .ideals import parse_ideal

    return int(parse_ideal(es.base, q).norm())


def eigensystem_to_local_factor(es: HeckeEigensystem, q: str, l: int | None = None) -> LocalFactor:
    """``1 - theta(T_q) T + theta(S_q) N(q) T^2`` for ``q`` prime to the level and ``l``."""
    N = _prime_norm(es, q)
    if es.divides_level(q):
        raise RamifiedError(f"{q} divides the level {es.level}")
    if l is not None and N % l == 0:
        raise RamifiedError(f"{q} lies above l = {l}")
    if q not in es.theta_T:
        raise KeyError(f"no eigenvalue stored for T_{q}")
    return LocalFactor(q, (-es.theta_T[q], es.S(q) * N), N)


# elliptic curves


def curve_discriminant(a: Sequence[int]) -> int:
    a1, a2, a3, a4, a6 = a
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def point_count_trace_oracle(a: Sequence[int], p: int) -> int:
    """``a_p = p + 1 - #E(F_p)`` by exhaustive search over ``x`` (and ``y`` when ``p = 2``)."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if curve_discriminant(a) % p == 0:
        raise BadReductionError(f"{p} divides the discriminant")
    a1, a2, a3, a4, a6 = (int(x) % p for x in a)
    x = np.arange(p, dtype=np.int64)
    rhs = (((x * x % p) * x) % p + a2 * (x * x % p) + a4 * x + a6) % p
    if p == 2:
        count = 1
        for y in range(2):
            lhs = (y * y + a1 * x * y + a3 * y) % p
            count += int(np.sum(lhs == rhs))
        return p + 1 - count
    # (2y + a1 x + a3)^2 = 4 rhs + (a1 x + a3)^2
    disc = (4 * rhs + (a1 * x + a3) ** 2) % p
    squares = np.zeros(p, dtype=np.int64)
    squares[(x * x) % p] = 1
    sols = np.where(disc == 0, 1, np.where(squares[disc] == 1, 2, 0))
    return p + 1 - (1 + int(sols.sum()))


# compatible systems


def _label_norm(label: str) -> int:
    """Norm of an integer label or an HNF label ``a.b[*n]``."""
    if "." not in label:
        return int(label)
    head, _, content = label.partition("*")
    a = int(head.split(".")[0])
    c = Fraction(content) if content else Fraction(1)
    return int(a * c * c)


@dataclass
class CompatibleSystem:
    label: str
    field: str
    dim: int
    exceptional: tuple[str, ...]
    factors: dict[str, LocalFactor]
    ell: int | None = None

    def ell_primes(self) -> set[str]:
        """Labels of stored-or-omitted primes lying above ``ell``."""
        if self.ell is None:
            return set()
        return {str(self.ell)} | {q for q in self.factors if _label_norm(q) % self.ell == 0}

    def classification(self) -> str:
        vals = [c for f in self.factors.values() for c in f.coeffs]
        if all(isinstance(c, (int, Fraction)) or (isinstance(c, complex) and c.imag == 0 and float(c.real).is_integer()) for c in vals):
            if all(Fraction(c.real if isinstance(c, complex) else c).denominator == 1 for c in vals):
                return "integral"
            return "rational"
        if all(isinstance(c, FieldElement) for c in vals):
            return "integral" if all(c.is_integral() for c in vals) else "rational"
        return "complex"


@dataclass
class CompatReport:
    compatible: bool
    compared: list[str]
    mismatch: str | None
    classification: tuple[str, str]
    bound: int

    def lines(self) -> list[str]:
        out = [f"compared {len(self.compared)} primes of norm <= {self.bound}"]
        out.append(f"classification {self.classification[0]} {self.classification[1]}")
        if self.compatible:
            out.append(f"compatible through bound {self.bound}")
        else:
            out.append(f"mismatch at {self.mismatch}")
        return out


def strict_compat_check(A: CompatibleSystem, B: CompatibleSystem, bound: int) -> CompatReport:
    """Compare factors at shared primes of norm ``<= bound`` outside ``S u S_l u S_l'``."""
    if A.field != B.field:
        raise ValueError(f"systems over different fields: {A.field} vs {B.field}")
    excluded = set(A.exceptional) | set(B.exceptional) | A.ell_primes() | B.ell_primes()
    shared = sorted(
        (q for q in set(A.factors) & set(B.factors) if _label_norm(q) <= bound and q not in excluded),
        key=lambda q: (_label_norm(q), q),
    )
    if not shared:
        raise ValueError("no common primes to compare")
    cls = (A.classification(), B.classification())
    for q in shared:
        if _pad(A.factors[q].coeffs, A.dim) != _pad(B.factors[q].coeffs, B.dim):
            return CompatReport(False, shared, q, cls, bound)
    return CompatReport(True, shared, None, cls, bound)


def _pad(coeffs: tuple, n: int) -> tuple:
    return tuple(coeffs) + (0,) * (n - len(coeffs))


def cyclotomic_system(l: int, B: int) -> CompatibleSystem:
    """The l-adic cyclotomic character: ``1 - p T`` at every ``p != l`` up to ``B``."""
    factors = {str(p): LocalFactor(str(p), (-p,), p) for p in primerange(2, B + 1) if p != l}
    return CompatibleSystem(f"cyclotomic-{l}", "Q", 1, (), factors, l)


def global_factors(systems: Sequence[CompatibleSystem]) -> dict[str, LocalFactor]:
    """Local factors of the L-function of a family, each taken from a member unramified there.

    Members are assumed strictly compatible; where several members supply a
    factor the first one wins.
    """
    out: dict[str, LocalFactor] = {}
    for sys_ in systems:
        excluded = set(sys_.exceptional) | sys_.ell_primes()
        for q, f in sys_.factors.items():
            if q not in excluded and q not in out:
                out[q] = f
    return out


def system_from_eigensystem(es: HeckeEigensystem, l: int, B: int, label: str | None = None) -> CompatibleSystem:
    """Local factors at every stored prime of norm ``<= B`` away from the level and ``l``.

    The exceptional set is the set of primes dividing the level.
    """
    factors = {}
    exceptional = []
    for q in es.theta_T:
        N = _prime_norm(es, q)
        if N > B:
            continue
        if es.divides_level(q):
            exceptional.append(q)
            continue
        if N % l == 0:
            continue
        factors[q] = eigensystem_to_local_factor(es, q, l)
    field_name = str(es.coeff_field)
    return CompatibleSystem(label or f"eigen-{es.level}-l{l}", field_name, 2, tuple(sorted(exceptional)), factors, l)


def perturb(system: CompatibleSystem, q: str, delta=1) -> CompatibleSystem:
    """Copy of ``system`` with ``c1`` at ``q`` shifted by ``delta``."""
    factors = dict(system.factors)
    f = factors[q]
    factors[q] = LocalFactor(q, (f.coeffs[0] + delta,) + tuple(f.coeffs[1:]), f.norm)
    return CompatibleSystem(system.label, system.field, system.dim, system.exceptional, factors, system.ell)


def primes_of_norm_up_to(F: QuadField | None, B: int) -> list[str]:
    if F is None:
        return [str(p) for p in primerange(2, B + 1)]
    return [P.label for P in primes_up_to(F, B)]
