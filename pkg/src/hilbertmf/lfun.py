"""Dirichlet series over ideals and Euler products of local factors.

Evaluation is restricted to the half-plane of absolute convergence.  Every
value carries a truncation bound derived from a caller-declared growth
exponent and a floating-point rounding allowance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from sympy import primerange

from .galois import LocalFactor, eigensystem_to_local_factor, _prime_norm
from .hecke import HeckeEigensystem, IdealExpansion, dirichlet_terms
from .ideals import enumerate_ideals, primes_up_to
from .quadfield import QuadField

EPS = 2.0**-52


class ConvergenceError(ValueError):
    """``Re(s)`` lies outside the region covered by the declared growth."""


@dataclass(frozen=True)
class LValue:
    value: complex
    tail: float
    rounding: float
    terms: int

    @property
    def bound(self) -> float:
        return self.tail + self.rounding


def _to_complex(x) -> complex:
    return complex(x) if not isinstance(x, Fraction) else complex(float(x))


def _csum(values: Iterable[complex]) -> complex:
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def _divisor_tail(a: float, B: float) -> float:
    """Upper bound for ``sum_{n > B} d(n) n^-a`` using ``sum_{n <= x} d(n) <= x (1 + log x)``."""
    return a * B ** (1 - a) * ((1 + math.log(B)) / (a - 1) + 1 / (a - 1) ** 2)


def _power_tail(a: float, B: float) -> float:
    """Upper bound for ``sum_{n > B} n^-a``."""
    return B ** (1 - a) / (a - 1)


# Dirichlet series


@dataclass(frozen=True)
class DirichletSeriesData:
    """``sum C(m) N(m)^-s`` over ideals of norm ``<= bound``, with ``|C(m)| <= kappa N(m)^g``.

    ``terms`` is a list of ``(norm, C)`` pairs that must be complete through
    ``bound`` (zero coefficients included).  ``field`` is ``None`` over Q.
    """

    field: QuadField | None
    terms: tuple[tuple[int, object], ...]
    bound: int
    growth: float = 0.0
    kappa: float = 1.0

    @classmethod
    def from_function(cls, field: QuadField | None, B: int, coef, growth: float = 0.0, kappa: float = 1.0):
        """``C`` given as a function of the norm (every ideal of that norm gets the same value)."""
        norms = range(1, B + 1) if field is None else [int(I.norm()) for I in enumerate_ideals(field, B)]
        return cls(field, tuple((n, coef(n)) for n in norms), B, growth, kappa)

    @classmethod
    def from_expansion(cls, exp: IdealExpansion, growth: float | None = None, kappa: float = 1.0):
        """``C(m)`` from an expansion; growth defaults to ``k0/2 + 1/2``."""
        g = exp.weight.k0 / 2 + 0.5 if growth is None else growth
        terms = tuple((N, C) for _, N, C in dirichlet_terms(exp))
        return cls(exp.base, terms, exp.norm_bound, g, kappa)


def _check_abscissa(s: complex, g: float) -> float:
    a = complex(s).real - g
    if a <= 1:
        raise ConvergenceError(f"Re(s) = {complex(s).real} must exceed g + 1 = {g + 1}")
    return a


def eval_dirichlet(d: DirichletSeriesData, s: complex, B: int | None = None) -> LValue:
    """Partial sum over norms ``<= B`` with an integral-comparison tail bound."""
    a = _check_abscissa(s, d.growth)
    B = d.bound if B is None else B
    if B > d.bound:
        raise ValueError(f"terms are only complete through {d.bound}")
    s = complex(s)
    vals = [_to_complex(C) * cmath.exp(-s * math.log(N)) for N, C in d.terms if N <= B]
    value = _csum(vals)
    if d.field is None:
        tail = d.kappa * _power_tail(a, B)
    else:
        tail = d.kappa * _divisor_tail(a, B)
    rounding = 8 * EPS * math.fsum(abs(v) for v in vals)
    return LValue(value, tail, rounding, len(vals))


# Euler products


@dataclass(frozen=True)
class EulerProductData:
    """Local factors of all primes of norm ``<= bound``.

    ``root_growth`` bounds the inverse roots of each factor by ``N(p)^rho``;
    ``primes_per_norm`` bounds how many primes share a norm (1 over Q, 2 for
    a quadratic field).
    """

    factors: Mapping[str, LocalFactor]
    bound: int
    root_growth: float = 0.0
    dim: int = 1
    primes_per_norm: int = 1

    def __post_init__(self):
        for f in self.factors.values():
            if len(f.coeffs) > self.dim:
                raise ValueError(f"factor at {f.label} exceeds degree {self.dim}")


def eval_euler(e: EulerProductData, s: complex, B: int | None = None) -> LValue:
    """``prod 1/P(N(p)^-s)`` over norms ``<= B``, accumulated as a sum of logarithms."""
    B = e.bound if B is None else B
    s = complex(s)
    a = s.real - e.root_growth
    if e.factors and a <= 1:
        raise ConvergenceError(f"Re(s) = {s.real} must exceed {e.root_growth + 1}")
    logs = []
    for f in sorted(e.factors.values(), key=lambda f: (f.norm, f.label)):
        if f.norm > B:
            continue
        x = cmath.exp(-s * math.log(f.norm))
        P = 1 + _csum(_to_complex(c) * x ** (i + 1) for i, c in enumerate(f.coeffs))
        if abs(P) < 1e-300:
            raise ZeroDivisionError(f"local factor at {f.label} vanishes at s = {s}")
        logs.append(-cmath.log(P))
    total = _csum(logs)
    value = cmath.exp(total)
    if not e.factors:
        return LValue(value, 0.0, 0.0, 0)
    r = B ** (e.root_growth - s.real)
    T = e.primes_per_norm * e.dim * _power_tail(a, B) / (1 - r)
    tail = abs(value) * math.expm1(T)
    rounding = abs(value) * 8 * EPS * (len(logs) + math.fsum(abs(x) for x in logs))
    return LValue(value, tail, rounding, len(logs))


def trivial_character_factors(B: int) -> dict[str, LocalFactor]:
    return {str(p): LocalFactor(str(p), (-1,), p) for p in primerange(2, B + 1)}


def system_euler_data(factors: Mapping[str, LocalFactor], B: int, root_growth: float, dim: int, field: QuadField | None = None):
    return EulerProductData(dict(factors), B, root_growth, dim, 1 if field is None else 2)


# comparisons


@dataclass(frozen=True)
class Comparison:
    series: LValue
    product: LValue

    @property
    def discrepancy(self) -> float:
        return abs(self.series.value - self.product.value)

    @property
    def combined_bound(self) -> float:
        return self.series.bound + self.product.bound

    @property
    def within_tails(self) -> bool:
        return self.discrepancy <= self.combined_bound

    def lines(self) -> list[str]:
        out = [
            f"series\t{_fmt(self.series.value)}\t{self.series.bound:.3e}",
            f"product\t{_fmt(self.product.value)}\t{self.product.bound:.3e}",
            f"discrepancy\t{self.discrepancy:.3e}",
        ]
        out.append("agree within tails" if self.within_tails else "MISMATCH beyond tails")
        return out


def _fmt(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:.15g}"
    return f"{z.real:.15g}{z.imag:+.15g}i"


def dedekind_zeta(F: QuadField | None, s: complex, B: int) -> Comparison:
    """``zeta_F(s)`` as an ideal sum and as an Euler product, both truncated at norm ``B``."""
    if complex(s).real <= 1:
        raise ConvergenceError("Re(s) must exceed 1")
    series = eval_dirichlet(DirichletSeriesData.from_function(F, B, lambda n: 1), s)
    if F is None:
        factors = trivial_character_factors(B)
        per = 1
    else:
        factors = {P.label: LocalFactor(P.label, (-1,), int(P.norm())) for P in primes_up_to(F, B)}
        per = 2
    product = eval_euler(EulerProductData(factors, B, 0.0, 1, per), s)
    return Comparison(series, product)


def _is_normalised(exp: IdealExpansion) -> bool:
    one = "1" if exp.base is None else "1.0"
    return exp.coefficients.get(one) == 1


def lfun_of_eigenform(
    es: HeckeEigensystem,
    exp: IdealExpansion,
    s: complex,
    B: int,
    growth: float | None = None,
) -> Comparison:
    """``D(s, f)`` against the product of the eigensystem's local factors.

    At primes dividing the level the factor is ``1 - theta(T_q) T``.  The
    product tail uses the Ramanujan bound ``|roots| <= N(q)^((k0-1)/2)``.
    """
    if not _is_normalised(exp):
        raise ValueError("expansion is not normalised: c(O_F) != 1")
    series = eval_dirichlet(DirichletSeriesData.from_expansion(exp, growth), s, B)
    factors = {}
    for q in es.theta_T:
        N = _prime_norm(es, q)
        if N > B:
            continue
        if es.divides_level(q):
            factors[q] = LocalFactor(q, (-es.theta_T[q],), N)
        else:
            factors[q] = eigensystem_to_local_factor(es, q)
    rho = (es.weight.k0 - 1) / 2
    per = 1 if es.base is None else 2
    product = eval_euler(EulerProductData(factors, B, rho, 2, per), s)
    return Comparison(series, product)
