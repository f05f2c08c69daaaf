"""Translation lattices, their trace duals, totally positive lattice points,
and Fourier series ``sum A(nu) e(Tr(nu z))`` on H^2."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import mpmath
import numpy as np

from .ideals import IdealHNF, _hnf2
from .quadfield import FieldElement, QuadField, as_element

DEFAULT_GRID = 64


@dataclass(frozen=True)
class TranslationModule:
    """A rank-2 Z-lattice in F given by a basis of field elements."""

    basis: tuple[FieldElement, FieldElement]

    def __post_init__(self):
        b1, b2 = self.basis
        if b1.a * b2.b - b1.b * b2.a == 0:
            raise ValueError("basis vectors are dependent")

    @classmethod
    def from_ideal(cls, I: IdealHNF) -> TranslationModule:
        return cls(I.basis())

    @property
    def field(self) -> QuadField:
        return self.basis[0].field

    def covolume(self) -> float:
        (p1, p2), (q1, q2) = (b.floats() for b in self.basis)
        return abs(p1 * q2 - p2 * q1)

    def hnf_key(self) -> tuple:
        """Canonical key: denominator and integer HNF of the coordinate lattice."""
        den = 1
        for b in self.basis:
            den = math.lcm(den, b.a.denominator, b.b.denominator)
        vecs = [(int(b.a * den), int(b.b * den)) for b in self.basis]
        return (den,) + _hnf2(vecs)

    def __eq__(self, other):
        return isinstance(other, TranslationModule) and self.hnf_key() == other.hnf_key()

    def __hash__(self):
        return hash(self.hnf_key())

    def contains(self, x) -> bool:
        x = as_element(self.field, x)
        (a1, b1), (a2, b2) = ((b.a, b.b) for b in self.basis)
        det = a1 * b2 - a2 * b1
        m = (x.a * b2 - x.b * a2) / det
        n = (a1 * x.b - b1 * x.a) / det
        return m.denominator == 1 and n.denominator == 1

    __contains__ = contains

    def to_ideal(self) -> IdealHNF:
        return IdealHNF.from_generators(self.field, list(self.basis))

    def scaled(self, c) -> TranslationModule:
        c = as_element(self.field, c)
        return TranslationModule(tuple(c * b for b in self.basis))


def dual_lattice(t: TranslationModule) -> TranslationModule:
    """``{nu : Tr(nu a) in Z for all a in t}`` via the inverse trace Gram matrix."""
    b1, b2 = t.basis
    g11, g12, g22 = (b1 * b1).trace(), (b1 * b2).trace(), (b2 * b2).trace()
    det = g11 * g22 - g12 * g12
    # rows of the inverse Gram matrix give the dual basis in terms of b1, b2
    n1 = b1 * (g22 / det) - b2 * (g12 / det)
    n2 = b2 * (g11 / det) - b1 * (g12 / det)
    return TranslationModule((n1, n2))


def is_koecher_admissible(nu: FieldElement) -> bool:
    return nu.is_zero() or nu.is_totally_positive()


def enumerate_totally_positive(
    lattice: TranslationModule, T, mod_units: bool = False
) -> list[FieldElement]:
    """Totally positive lattice points of trace ``<= T``, sorted by (trace, first embedding).

    With ``mod_units`` only points with ``1/e+ <= x1/x2 < e+`` are kept, one per
    orbit of the totally positive unit group.  This representative has the
    least trace in its orbit, so every orbit meeting ``Tr <= T`` appears.
    """
    F = lattice.field
    T = Fraction(T)
    if T <= 0:
        return []
    b1, b2 = lattice.basis
    (p1, p2), (q1, q2) = b1.floats(), b2.floats()
    det = p1 * q2 - p2 * q1
    Tf = float(T)
    # x = m b1 + n b2 ranges over the triangle x_j > 0, x1 + x2 <= T
    corners = [(0.0, 0.0), (Tf, 0.0), (0.0, Tf)]
    ms = [(u * q2 - v * q1) / det for u, v in corners]
    ns = [(p1 * v - p2 * u) / det for u, v in corners]
    out = []
    for m in range(math.floor(min(ms)) - 1, math.ceil(max(ms)) + 2):
        for n in range(math.floor(min(ns)) - 1, math.ceil(max(ns)) + 2):
            x = b1 * m + b2 * n
            if x.is_totally_positive() and x.trace() <= T:
                out.append(x)
    if mod_units:
        e = F.totally_positive_unit_generator()
        out = [x for x in out if (e * x - x.conjugate()).sign(0) >= 0 and (x - e * x.conjugate()).sign(0) < 0]
    return sorted(out, key=lambda x: (x.trace(), x.floats()[0]))


@dataclass(frozen=True)
class FourierSeries:
    """Finitely supported ``nu -> A(nu)`` on the dual of a translation module.

    Coefficients off the totally positive cone (other than ``nu = 0``) are
    rejected.
    """

    lattice: TranslationModule
    coefficients: Mapping[FieldElement, complex]
    weight: tuple[int, int] = (2, 2)
    dual: TranslationModule = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dual", dual_lattice(self.lattice))
        coeffs = {}
        for nu, A in self.coefficients.items():
            nu = as_element(self.lattice.field, nu)
            if nu not in self.dual:
                raise ValueError(f"{nu} is not in the dual lattice")
            if A and not is_koecher_admissible(nu):
                raise ValueError(f"Koecher: coefficient at {nu} must vanish")
            coeffs[nu] = A
        object.__setattr__(self, "coefficients", coeffs)

    def support(self) -> list[FieldElement]:
        return sorted((nu for nu, A in self.coefficients.items() if A), key=lambda x: (x.trace(), x.floats()[0]))

    def __call__(self, z) -> complex:
        return eval_series(self, z).value


def koecher_filter(
    lattice: TranslationModule, coefficients: Mapping[FieldElement, complex], weight=(2, 2)
) -> FourierSeries:
    """Drop coefficients outside the totally positive cone and zero."""
    kept = {nu: A for nu, A in coefficients.items() if is_koecher_admissible(nu)}
    return FourierSeries(lattice, kept, weight)


@dataclass(frozen=True)
class SeriesEvaluation:
    value: complex
    tail: float
    terms: int


def _check_upper(z) -> None:
    for zj in z:
        if np.any(np.imag(zj) <= 0):
            raise ValueError("imaginary parts must be positive")


def eval_series(
    f: FourierSeries,
    z,
    truncation=None,
    decay: tuple[float, float] | None = None,
) -> SeriesEvaluation:
    """Partial sum over ``Tr(nu) <= truncation``.

    ``decay = (kappa, g)`` asserts ``|A(nu)| <= kappa * Tr(nu)^g`` beyond the
    stored support; the tail then integrates that bound against the number
    of dual points per unit trace.  ``z`` may hold numpy arrays.
    """
    _check_upper(z)
    z1, z2 = z
    total = 0j
    terms = 0
    for nu in f.support():
        if truncation is not None and nu.trace() > truncation:
            continue
        n1, n2 = nu.floats()
        total = total + f.coefficients[nu] * np.exp(2j * math.pi * (n1 * z1 + n2 * z2))
        terms += 1
    tail = 0.0
    if decay is not None:
        kappa, g = decay
        T = float(truncation) if truncation is not None else max((float(nu.trace()) for nu in f.support()), default=0.0)
        ymin = float(np.min(np.imag(np.asarray([z1, z2]))))
        a = 2 * math.pi * ymin
        dens = 1.0 / f.dual.covolume()
        tail = float(kappa * dens * a ** (-(g + 2)) * mpmath.gammainc(g + 2, a * T))
    return SeriesEvaluation(total, tail, terms)


@dataclass(frozen=True)
class CoefficientEstimate:
    value: complex
    disagreement: float
    grid: int

    def converged(self, tol: float) -> bool:
        return self.disagreement <= tol


def _trapezoid(g: Callable, nu: FieldElement, y, lattice: TranslationModule, N: int) -> complex:
    b1, b2 = (b.floats() for b in lattice.basis)
    s = np.arange(N) / N
    S, U = np.meshgrid(s, s, indexing="ij")
    x1 = S * b1[0] + U * b2[0]
    x2 = S * b1[1] + U * b2[1]
    z1 = x1 + 1j * y[0]
    z2 = x2 + 1j * y[1]
    vals = np.asarray(g((z1, z2)), dtype=complex)
    n1, n2 = nu.floats()
    w = np.exp(-2j * math.pi * (n1 * z1 + n2 * z2))
    prod = (vals * w).ravel()
    return complex(math.fsum(prod.real.tolist()), math.fsum(prod.imag.tolist())) / (N * N)


def numeric_fourier_coefficient(
    g: Callable,
    nu: FieldElement,
    y: Sequence[float],
    lattice: TranslationModule,
    grid: int = DEFAULT_GRID,
) -> CoefficientEstimate:
    """Trapezoidal period integral ``covol^-1 int g(x + iy) e(-Tr(nu (x + iy))) dx``.

    ``g`` must accept a pair of numpy arrays.  The rule is applied on an
    ``N x N`` grid of the fundamental parallelogram and again at ``2N``;
    the difference is reported as ``disagreement``.
    """
    if min(y) <= 0:
        raise ValueError("y must be totally positive")
    coarse = _trapezoid(g, nu, y, lattice, grid)
    fine = _trapezoid(g, nu, y, lattice, 2 * grid)
    return CoefficientEstimate(fine, abs(fine - coarse), 2 * grid)
