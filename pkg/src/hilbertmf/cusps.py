"""Cusps of Hilbert modular groups over a real quadratic field.

A cusp is a point of P^1(F).  For the full group SL2(O_F) cusps correspond
to ideal classes through ``[a : b] -> a*O_F + b*O_F``.  For principal
congruence subgroups we attach an exact invariant: the ideal class together
with the unit orbit of the residue pair taken modulo ``n * t_i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import lcm

from .ideals import ClassGroup, IdealHNF, class_group
from .quadfield import FieldElement, QuadField, as_element, format_element
from .sl2 import Mat2


class Cusp:
    """``[alpha : beta]`` stored canonically as ``[x : 1]`` or ``[1 : 0]``."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha, beta, F: QuadField | None = None):
        if F is None:
            F = alpha.field if isinstance(alpha, FieldElement) else beta.field
        alpha, beta = as_element(F, alpha), as_element(F, beta)
        if not alpha and not beta:
            raise ValueError("[0 : 0] is not a point of P^1")
        if not beta:
            alpha, beta = F.one, F.zero
        else:
            alpha, beta = alpha / beta, F.one
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def __setattr__(self, name, value):
        raise AttributeError("Cusp is immutable")

    @classmethod
    def infinity(cls, F: QuadField) -> Cusp:
        return cls(F.one, F.zero)

    @property
    def field(self) -> QuadField:
        return self.alpha.field

    def is_infinity(self) -> bool:
        return not self.beta

    def integral_pair(self) -> tuple[FieldElement, FieldElement]:
        """Smallest rational-integer rescaling with both entries in O_F."""
        if self.is_infinity():
            return self.alpha, self.beta
        den = lcm(self.alpha.a.denominator, self.alpha.b.denominator)
        return self.alpha * den, self.field(den)

    def ideal(self) -> IdealHNF:
        return IdealHNF.from_generators(self.field, list(self.integral_pair()))

    def __eq__(self, other):
        return isinstance(other, Cusp) and self.alpha == other.alpha and self.beta == other.beta

    def __hash__(self):
        return hash((self.alpha, self.beta))

    def __repr__(self):
        return f"Cusp({format_cusp(self)})"


def format_cusp(k: Cusp) -> str:
    if k.is_infinity():
        return "inf"
    return f"{format_element(k.alpha)};{format_element(k.beta)}"


def parse_cusp(F: QuadField, text: str) -> Cusp:
    """``inf``, ``alpha;beta``, or a single element ``x`` meaning ``[x : 1]``."""
    s = text.strip()
    if s.lower() in ("inf", "oo", "infinity"):
        return Cusp.infinity(F)
    if ";" in s:
        a, b = s.split(";")
        return Cusp(F.parse(a), F.parse(b), F)
    return Cusp(F.parse(s), F.one, F)


def act(gamma: Mat2, kappa: Cusp) -> Cusp:
    """Mobius action ``[a*al + b*be : c*al + d*be]`` of a determinant-one matrix."""
    if gamma.det() != gamma.field.one:
        raise ValueError("act() needs a matrix of determinant 1")
    al, be = kappa.alpha, kappa.beta
    return Cusp(gamma.a * al + gamma.b * be, gamma.c * al + gamma.d * be, kappa.field)


def cusp_ideal_class(kappa: Cusp, cg: ClassGroup | None = None) -> int:
    """Class index of ``alpha*O_F + beta*O_F``; 0 is the principal class."""
    cg = cg or class_group(kappa.field)
    return cg.index(kappa.ideal())


@dataclass(frozen=True, order=True)
class CuspInvariant:
    ideal_class: int
    level_residue: tuple

    def __str__(self):
        return f"class {self.ideal_class}, residue {self.level_residue}"


def _unit_orbit_min(pair: tuple[FieldElement, FieldElement], modulus: IdealHNF) -> tuple:
    """Least residue pair in the orbit of ``pair`` under multiplication by units."""
    F = pair[0].field
    eps = F.fundamental_unit()

    def reduce(v):
        return tuple(modulus.residue(x) for x in v)

    seen = set()
    todo = [reduce(pair)]
    while todo:
        key = todo.pop()
        if key in seen:
            continue
        seen.add(key)
        elems = [F(*r) for r in key]
        todo.append(reduce([x * eps for x in elems]))
        todo.append(reduce([-x for x in elems]))
    return min(seen)


def cusp_invariant(kappa: Cusp, n: IdealHNF, cg: ClassGroup | None = None) -> CuspInvariant:
    """Invariant under the principal congruence subgroup of level ``n``.

    With ``I = alpha*O + beta*O = x * t_i`` the pair ``(alpha/x, beta/x)``
    generates ``t_i`` and is defined up to units; its residues modulo
    ``n * t_i`` are unchanged by matrices congruent to 1 mod ``n``.
    """
    F = kappa.field
    cg = cg or class_group(F)
    I = kappa.ideal()
    i, x = cg.generator_to_rep(I)
    t = cg.representatives[i]
    al, be = kappa.integral_pair()
    pair = (al / x, be / x)
    modulus = n * t
    return CuspInvariant(i, _unit_orbit_min(pair, modulus))


@dataclass
class CuspClassification:
    level: IdealHNF
    classes: dict[CuspInvariant, list[Cusp]]
    method: str = "invariant-based"

    @property
    def count(self) -> int:
        return len(self.classes)

    def class_of(self, kappa: Cusp, cg: ClassGroup | None = None) -> int | None:
        inv = cusp_invariant(kappa, self.level, cg)
        keys = sorted(self.classes)
        return keys.index(inv) if inv in self.classes else None

    def lines(self) -> list[str]:
        out = [f"level {self.level.label}", f"method {self.method}"]
        for j, inv in enumerate(sorted(self.classes)):
            members = " ".join(format_cusp(k) for k in self.classes[inv])
            out.append(f"class {j} [{inv}] : {members}")
        out.append(f"{self.count} classes")
        return out


def classify_cusps(F: QuadField, n: IdealHNF, cusps: list[Cusp]) -> CuspClassification:
    """Partition ``cusps`` by :func:`cusp_invariant` (a lower bound on the true class count)."""
    cg = class_group(F)
    classes: dict[CuspInvariant, list[Cusp]] = {}
    for k in cusps:
        classes.setdefault(cusp_invariant(k, n, cg), []).append(k)
    return CuspClassification(n, classes)


def random_cusp(F: QuadField, rng: random.Random, size: int = 5) -> Cusp:
    """Seeded cusp ``[x : y]`` with small integral coordinates."""
    while True:
        x = F(rng.randint(-size, size), rng.randint(-size, size))
        y = F(rng.randint(-size, size), rng.randint(-size, size))
        if x or y:
            return Cusp(x, y, F)
