"""Slash operators, Eisenstein series and Poincare series on H^2.

Series over coset representatives ``(c, d)`` (bottom rows of elements of
SL2(O_F)) are truncated on the unit-invariant region
``|N(c z + d)| = |c1 z1 + d1| * |c2 z2 + d2| <= R^2``.  Every unit orbit is
either wholly inside or wholly outside, so the truncated Eisenstein sum is
a sum over whole cosets.  One representative per orbit is picked by
balancing ``c``: ``c1 > 0`` and ``|c1| y1 / (|c2| y2)`` in ``[1/e, e)`` for
the fundamental unit ``e``.

Terms are evaluated in double precision from exact integer data and summed
with :func:`math.fsum`; a working precision above 53 bits switches to
:mod:`mpmath`.  The reported tail is a heuristic integral-comparison bound
on the absolute sum of omitted terms.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
import numpy as np

from .ideals import IdealHNF
from .quadfield import FieldElement, QuadField
from .sl2 import Mat2

DEFAULT_RADIUS = 12.0
DOUBLE_PRECISION = 53

Point = tuple[complex, complex]


@dataclass(frozen=True)
class AutomorphyWeight:
    k: tuple[int, int]

    def __post_init__(self):
        if len(self.k) != 2:
            raise ValueError("weight needs two entries")
        if (self.k[0] - self.k[1]) % 2:
            raise ValueError(f"weight {self.k} entries differ in parity")

    @property
    def parallel(self) -> bool:
        return self.k[0] == self.k[1]

    def require_convergent(self) -> None:
        if min(self.k) <= 2:
            raise ValueError(f"series need every k_j > 2, got {self.k}")


@dataclass(frozen=True)
class LatticeSumSpec:
    """Truncation ``|N(cz+d)| <= radius**2`` and an optional level filter."""

    radius: float = DEFAULT_RADIUS
    level: IdealHNF | None = None
    prec: int = DOUBLE_PRECISION
    scale: str = "mean-height"

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.prec < DOUBLE_PRECISION:
            raise ValueError("precision below 53 bits is not supported")
        if self.scale not in ("absolute", "mean-height"):
            raise ValueError(f"unknown truncation scale {self.scale!r}")

    def doubled(self) -> LatticeSumSpec:
        return replace(self, radius=2 * self.radius)

    def bound(self, z: Point) -> float:
        """The cut-off ``X`` in ``|N(cz + d)| <= X`` at the point ``z``."""
        X = self.radius**2
        if self.scale == "mean-height":
            X *= (complex(z[0]).imag + complex(z[1]).imag) / 2
        return X


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail: float
    terms: int
    heuristic: bool = True


def _check_point(z: Sequence[complex]) -> None:
    if len(z) != 2 or any(complex(x).imag <= 0 for x in z):
        raise ValueError(f"{z} is not a point of H^2")


def mobius(gamma: Mat2, z: Sequence, prec: int = DOUBLE_PRECISION) -> tuple:
    """Componentwise ``(a z + b) / (c z + d)`` under the two embeddings."""
    out = []
    for j, zj in enumerate(z):
        a, b, c, d = _entry_embeddings(gamma, j, prec)
        den = c * zj + d
        if den == 0:
            raise ZeroDivisionError("point is a pole of the fractional linear map")
        out.append((a * zj + b) / den)
    return tuple(out)


def _entry_embeddings(gamma: Mat2, j: int, prec: int):
    if prec <= DOUBLE_PRECISION:
        return tuple(x.floats()[j] for x in gamma)
    return tuple(x.embeddings(prec)[j] for x in gamma)


def automorphy_factor(gamma: Mat2, z: Sequence, k: Sequence[int], prec: int = DOUBLE_PRECISION):
    """``prod_j (c_j z_j + d_j)^{k_j}``."""
    out = 1
    for j, zj in enumerate(z):
        _, _, c, d = _entry_embeddings(gamma, j, prec)
        out = out * (c * zj + d) ** k[j]
    return out


def slash(fval: Callable, gamma: Mat2, k: Sequence[int], prec: int = DOUBLE_PRECISION) -> Callable:
    """``(f|_k gamma)(z) = prod_j (c_j z_j + d_j)^{-k_j} f(gamma z)`` for ``det gamma = 1``."""
    if gamma.det() != gamma.field.one:
        raise ValueError("slash needs a matrix of determinant 1")
    k = tuple(k)

    def g(z):
        return fval(mobius(gamma, z, prec)) / automorphy_factor(gamma, z, k, prec)

    return g


# enumeration of coset representatives


def _lattice_in_box(F: QuadField, bounds, shifts) -> tuple[np.ndarray, np.ndarray]:
    """Integer pairs ``(x0, x1)`` with ``|x0 + x1 w_j + s_j| <= bounds[j]`` for both ``j``."""
    w1, w2 = F.omega_floats()
    B1, B2 = bounds
    s1, s2 = shifts
    delta = w1 - w2
    # (x0 + x1 w1 + s1) - (x0 + x1 w2 + s2) = x1 delta + s1 - s2
    lo = math.ceil((-(B1 + B2) - (s1 - s2)) / delta - 1e-9)
    hi = math.floor(((B1 + B2) - (s1 - s2)) / delta + 1e-9)
    if hi < lo:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    x1 = np.arange(lo, hi + 1, dtype=np.int64)
    a = np.maximum(-B1 - x1 * w1 - s1, -B2 - x1 * w2 - s2)
    b = np.minimum(B1 - x1 * w1 - s1, B2 - x1 * w2 - s2)
    x0lo = np.ceil(a - 1e-9).astype(np.int64)
    x0hi = np.floor(b + 1e-9).astype(np.int64)
    counts = np.maximum(x0hi - x0lo + 1, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    starts = np.repeat(x0lo, counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    return starts + offsets, np.repeat(x1, counts)


def _coprime(F: QuadField, c0, c1, d0, d1) -> np.ndarray:
    """``c O + d O = O`` via the gcd of the 2x2 minors of ``c, c w, d, d w`` in Z^2."""
    t, n = F.t, F.n
    g = np.gcd(c0 * (c0 + t * c1) + n * c1 * c1, d0 * (d0 + t * d1) + n * d1 * d1)
    g = np.gcd(g, c0 * d1 - c1 * d0)
    g = np.gcd(g, c0 * d0 + t * c0 * d1 + n * c1 * d1)
    g = np.gcd(g, -n * c1 * d1 - (c0 + t * c1) * d0)
    return np.abs(g) == 1


def _residues(I: IdealHNF, x0: np.ndarray, x1: np.ndarray) -> np.ndarray:
    """Residue codes of integral elements modulo an integral ideal (vectorised ``I.residue``)."""
    c = int(I.content)
    A, B, C = I.a * c, I.b * c, c
    k = x1 // C
    r0 = (x0 - k * B) % A
    r1 = x1 - k * C
    return r0 * C + r1


def _unit_residue_codes(F: QuadField, n: IdealHNF) -> np.ndarray:
    """Residue codes of all units of O_F modulo ``n``."""
    eps = F.fundamental_unit()
    C = int(n.content)
    seen: set[tuple[int, int]] = set()
    todo = [n.residue(F.one)]
    while todo:
        r = todo.pop()
        if r in seen:
            continue
        seen.add(r)
        x = F(*r)
        todo += [n.residue(x * eps), n.residue(-x)]
    return np.array(sorted(r0 * C + r1 for r0, r1 in seen), dtype=np.int64)


@dataclass
class Orbits:
    """Representatives ``(c, d)`` with ``c != 0``, one per unit orbit, inside the truncation."""

    c0: np.ndarray
    c1: np.ndarray
    d0: np.ndarray
    d1: np.ndarray

    def __len__(self):
        return len(self.c0)


def enumerate_orbits(F: QuadField, z: Point, X: float, level: IdealHNF | None = None) -> Orbits:
    """Coprime ``(c, d)``, ``c != 0``, with ``|N(cz + d)| <= X``, one per orbit of ``O_F^x``."""
    (x1, y1), (x2, y2) = [(complex(v).real, complex(v).imag) for v in z]
    w1, w2 = F.omega_floats()
    eps = float(F.fundamental_unit().floats()[0])
    log_eps = math.log(eps)
    # balanced c has |c_j| y_j <= sqrt(N(c) y1 y2 eps) <= sqrt(X eps)
    cb = math.sqrt(X * eps)
    c0, c1 = _lattice_in_box(F, (cb / y1, cb / y2), (0.0, 0.0))
    c1f, c2f = c0 + c1 * w1, c0 + c1 * w2
    keep = (c1f > 0) & (np.abs(c1f * c2f) * y1 * y2 <= X)
    c0, c1, c1f, c2f = c0[keep], c1[keep], c1f[keep], c2f[keep]
    # balance: p = log(|c1| y1 / (|c2| y2)) / (2 log e) + 1/2 in [0, 1)
    p = (np.log(np.abs(c1f) * y1) - np.log(np.abs(c2f) * y2)) / (2 * log_eps) + 0.5
    near = np.abs(p - np.round(p)) < 1e-9
    p = np.where(near, np.round(p), p)
    keep = (p >= 0) & (p < 1)
    c0, c1, c1f, c2f = c0[keep], c1[keep], c1f[keep], c2f[keep]
    if level is not None:
        keep = _residues(level, c0, c1) == 0
        c0, c1, c1f, c2f = c0[keep], c1[keep], c1f[keep], c2f[keep]
        units = _unit_residue_codes(F, level)
    out = ([], [], [], [])
    X2 = X * X
    for a0, a1, u1, u2 in zip(c0.tolist(), c1.tolist(), c1f.tolist(), c2f.tolist()):
        A1, A2 = (u1 * y1) ** 2, (u2 * y2) ** 2
        if A1 * A2 > X2:
            continue
        U1 = math.sqrt(max(X2 / A2 - A1, 0.0))
        U2 = math.sqrt(max(X2 / A1 - A2, 0.0))
        d0, d1 = _lattice_in_box(F, (U1, U2), (u1 * x1, u2 * x2))
        if not len(d0):
            continue
        r1 = d0 + d1 * w1 + u1 * x1
        r2 = d0 + d1 * w2 + u2 * x2
        ok = (r1 * r1 + A1) * (r2 * r2 + A2) <= X2
        a0v = np.full(len(d0), a0, np.int64)
        a1v = np.full(len(d0), a1, np.int64)
        ok &= _coprime(F, a0v, a1v, d0, d1)
        if level is not None:
            ok &= np.isin(_residues(level, d0, d1), units)
        if ok.any():
            out[0].append(a0v[ok])
            out[1].append(a1v[ok])
            out[2].append(d0[ok])
            out[3].append(d1[ok])
    if not out[0]:
        e = np.empty(0, np.int64)
        return Orbits(e, e, e, e)
    return Orbits(*(np.concatenate(v) for v in out))


def _heuristic_tail(count: int, X: float, k: int) -> float:
    # counting function ~ C X^2, tail ~ int_X^oo t^-k d(C t^2)
    return 2.0 * max(count, 1) * X ** (-k) / (k - 2)


def _jvals(F: QuadField, orb: Orbits, z: Point) -> tuple[np.ndarray, np.ndarray]:
    w1, w2 = F.omega_floats()
    z1, z2 = complex(z[0]), complex(z[1])
    j1 = (orb.c0 + orb.c1 * w1) * z1 + (orb.d0 + orb.d1 * w1)
    j2 = (orb.c0 + orb.c1 * w2) * z2 + (orb.d0 + orb.d1 * w2)
    return j1, j2


def _fsum_complex(vals) -> complex:
    vals = np.asarray(vals, dtype=complex)
    return complex(math.fsum(vals.real.tolist()), math.fsum(vals.imag.tolist()))


def _mp_point(z: Point, prec: int):
    with mpmath.workprec(prec):
        return tuple(mpmath.mpc(complex(v).real, complex(v).imag) for v in z)


def eisenstein_eval(F: QuadField, k: Sequence[int], spec: LatticeSumSpec, z: Point) -> SeriesValue:
    """``E(z) = sum over cosets of N(cz + d)^{-k}`` for parallel even ``k > 2``."""
    w = AutomorphyWeight(tuple(k))
    w.require_convergent()
    if not w.parallel or w.k[0] % 2:
        raise ValueError(f"Eisenstein series need parallel even weight, got {w.k}")
    _check_point(z)
    kk = w.k[0]
    X = spec.bound(z)
    orb = enumerate_orbits(F, z, X, spec.level)
    if spec.prec <= DOUBLE_PRECISION:
        j1, j2 = _jvals(F, orb, z)
        terms = (j1 * j2) ** (-kk)
        value = 1.0 + _fsum_complex(terms)
    else:
        value = complex(_mp_eisenstein(F, orb, z, kk, spec.prec))
    return SeriesValue(value, _heuristic_tail(len(orb) + 1, X, kk), len(orb) + 1)


def _mp_eisenstein(F, orb, z, k, prec):
    with mpmath.workprec(prec):
        w1, w2 = F.omega_embeddings(prec)
        z1, z2 = _mp_point(z, prec)
        total = mpmath.mpc(1)
        for c0, c1, d0, d1 in zip(*(v.tolist() for v in (orb.c0, orb.c1, orb.d0, orb.d1))):
            j1 = (c0 + c1 * w1) * z1 + d0 + d1 * w1
            j2 = (c0 + c1 * w2) * z2 + d0 + d1 * w2
            total += (j1 * j2) ** (-k)
        return total


# Poincare series


def _solve_ad_minus_bc(F: QuadField, c: tuple[int, int], d: tuple[int, int]) -> tuple[int, int]:
    """Some ``a`` in O_F with ``a d - b c = 1`` for some ``b``; reduced so ``a/c`` is small."""
    t, n = F.t, F.n

    def times_w(v):
        return (-n * v[1], v[0] + t * v[1])

    cols = [(d, (1, 0, 0, 0)), (times_w(d), (0, 1, 0, 0)), (c, (0, 0, 1, 0)), (times_w(c), (0, 0, 0, 1))]

    def combine(p, q, s, r):
        return (
            (s * p[0][0] + r * q[0][0], s * p[0][1] + r * q[0][1]),
            tuple(s * x + r * y for x, y in zip(p[1], q[1])),
        )

    # clear the second coordinate into a single pivot column
    pivot = None
    rest = []
    for col in cols:
        if col[0][1] == 0:
            rest.append(col)
        elif pivot is None:
            pivot = col
        else:
            g, s, r = _xgcd(pivot[0][1], col[0][1])
            u, v = pivot[0][1] // g, col[0][1] // g
            new_pivot = combine(pivot, col, s, r)
            rest.append(combine(pivot, col, v, -u))
            pivot = new_pivot
    # gcd of first coordinates among the remaining columns
    acc = None
    for col in rest:
        if acc is None:
            acc = col
            continue
        g, s, r = _xgcd(acc[0][0], col[0][0])
        acc = combine(acc, col, s, r)
    if acc is None or abs(acc[0][0]) != 1:
        raise ValueError(f"({c}, {d}) is not a coprime pair")
    coeff = acc[1] if acc[0][0] == 1 else tuple(-x for x in acc[1])
    a = F(coeff[0], coeff[1])
    cc = F(*c)
    q = a / cc
    a = a - F(round(q.a), round(q.b)) * cc
    return a.int_coords()


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@lru_cache(maxsize=1 << 20)
def _a_cached(D: int, c0: int, c1: int, d0: int, d1: int) -> tuple[int, int]:
    from .quadfield import make_field

    return _solve_ad_minus_bc(make_field(D), (c0, c1), (d0, d1))


def poincare_eval(
    F: QuadField, nu: FieldElement, k: Sequence[int], spec: LatticeSumSpec, z: Point
) -> SeriesValue:
    """``P_nu(z) = sum over {+-T^b} backslash Gamma of e(Tr(nu gamma z)) | gamma``.

    Cosets are bottom rows ``(c, d)`` up to sign.  Each unit orbit
    ``(u c, u d)`` is summed in closed loop over ``u = e^n``, using
    ``gamma_u z = u^{-2} gamma z`` and the factor ``prod u_j^{-k_j}``.
    """
    w = AutomorphyWeight(tuple(k))
    w.require_convergent()
    if not nu.is_totally_positive():
        raise ValueError("Poincare series need a totally positive index")
    _check_point(z)
    if spec.prec > DOUBLE_PRECISION:
        return _mp_poincare(F, nu, w.k, spec, z)
    k1, k2 = w.k
    X = spec.bound(z)
    orb = enumerate_orbits(F, z, X, spec.level)
    nu1, nu2 = nu.floats()
    e1, e2 = F.fundamental_unit().floats()
    z1, z2 = complex(z[0]), complex(z[1])
    # gamma z for each representative
    if len(orb):
        a = np.array(
            [_a_cached(F.D, *r) for r in zip(*(v.tolist() for v in (orb.c0, orb.c1, orb.d0, orb.d1)))],
            dtype=np.int64,
        ).reshape(-1, 2)
    else:
        a = np.empty((0, 2), np.int64)
    w1, w2 = F.omega_floats()
    j1, j2 = _jvals(F, orb, z)
    cf1, cf2 = orb.c0 + orb.c1 * w1, orb.c0 + orb.c1 * w2
    g1 = (a[:, 0] + a[:, 1] * w1) / cf1 - 1.0 / (cf1 * j1)
    g2 = (a[:, 0] + a[:, 1] * w2) / cf2 - 1.0 / (cf2 * j2)
    base = j1 ** (-k1) * j2 ** (-k2)
    # identity coset (0, 1)
    g1 = np.concatenate([[z1], g1])
    g2 = np.concatenate([[z2], g2])
    base = np.concatenate([[1.0 + 0j], base])
    terms = _unit_sum(g1, g2, base, nu1, nu2, e1, e2, k1, k2)
    value = _fsum_complex(terms)
    X_tail = _heuristic_tail(len(base), X, min(k1, k2)) * max(1.0, math.log(max(X, math.e)))
    return SeriesValue(value, X_tail, len(base))


def _unit_sum(g1, g2, base, nu1, nu2, e1, e2, k1, k2, cutoff: float = 60.0) -> np.ndarray:
    """``sum_n prod u_j^{-k_j} e(nu1 u1^-2 g1 + nu2 u2^-2 g2) * base`` with ``u = e^n``, vectorised."""
    L = math.log(abs(e1))
    Y1 = 2 * math.pi * nu1 * g1.imag
    Y2 = 2 * math.pi * nu2 * g2.imag
    # exponent -(Y1 e1^{-2n} + Y2 e1^{2n}); keep n where both parts stay below cutoff
    lo = np.floor(-np.log(cutoff / Y1) / (2 * L)) - 1
    hi = np.ceil(np.log(cutoff / Y2) / (2 * L)) + 1
    nmin, nmax = int(lo.min()), int(hi.max())
    out = []
    for m in range(nmin, nmax + 1):
        u1, u2 = e1**m, e2**m
        expo = 2j * math.pi * (nu1 * g1 / (u1 * u1) + nu2 * g2 / (u2 * u2))
        live = expo.real > -cutoff
        vals = np.zeros_like(base)
        vals[live] = base[live] * np.exp(expo[live]) / (u1**k1 * u2**k2)
        out.append(vals)
    return np.sum(np.array(out), axis=0)


def _mp_poincare(F, nu, k, spec, z) -> SeriesValue:
    prec = spec.prec
    k1, k2 = k
    X = spec.bound(z)
    orb = enumerate_orbits(F, z, X, spec.level)
    with mpmath.workprec(prec):
        w1, w2 = F.omega_embeddings(prec)
        nu1, nu2 = nu.embeddings(prec)
        e1, e2 = F.fundamental_unit().embeddings(prec)
        z1, z2 = _mp_point(z, prec)
        reps = [((0, 0), (1, 0))] + [
            ((c0, c1), (d0, d1))
            for c0, c1, d0, d1 in zip(*(v.tolist() for v in (orb.c0, orb.c1, orb.d0, orb.d1)))
        ]
        total = mpmath.mpc(0)
        for (c0, c1), (d0, d1) in reps:
            if (c0, c1) == (0, 0):
                g1, g2, base = z1, z2, mpmath.mpc(1)
            else:
                a0, a1 = _a_cached(F.D, c0, c1, d0, d1)
                cf1, cf2 = c0 + c1 * w1, c0 + c1 * w2
                j1 = cf1 * z1 + d0 + d1 * w1
                j2 = cf2 * z2 + d0 + d1 * w2
                g1 = (a0 + a1 * w1) / cf1 - 1 / (cf1 * j1)
                g2 = (a0 + a1 * w2) / cf2 - 1 / (cf2 * j2)
                base = j1 ** (-k1) * j2 ** (-k2)
            for sgn in (1, -1):
                m = 0 if sgn == 1 else -1
                while True:
                    u1, u2 = e1**m, e2**m
                    expo = 2j * mpmath.pi * (nu1 * g1 / u1**2 + nu2 * g2 / u2**2)
                    term = base * mpmath.exp(expo) / (u1**k1 * u2**k2)
                    total += term
                    if expo.real < -60 and abs(m) > 2:
                        break
                    m += sgn
        value = complex(total)
    tail = _heuristic_tail(len(reps), X, min(k1, k2)) * max(1.0, math.log(max(X, math.e)))
    return SeriesValue(value, tail, len(reps))


# probes


@dataclass
class ProbeResult:
    limit: complex
    ts: tuple[float, ...]
    values: tuple[complex, ...]
    converged: bool


def cusp_limit_probe(fval: Callable, ts: Sequence[float] = (2, 4, 8, 16), tol: float = 1e-3) -> ProbeResult:
    """Evaluate along ``z = (it, it)`` and report the last value as the limit.

    The sequence counts as converged when successive differences shrink and
    the last one is below ``tol``.
    """
    ts = tuple(float(t) for t in ts)
    vals = tuple(complex(fval((1j * t, 1j * t))) for t in ts)
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    converged = bool(diffs) and diffs[-1] < tol and all(
        b <= a + 1e-15 for a, b in zip(diffs, diffs[1:])
    )
    return ProbeResult(vals[-1], ts, vals, converged)


def transformation_points(gamma: Mat2, rng: random.Random, count: int = 10) -> list[Point]:
    """Seeded sample points where both ``z`` and ``gamma z`` keep moderate imaginary parts.

    For ``c != 0`` the points lie near the isometric circles
    ``|c_j z_j + d_j| = 1``; otherwise they are drawn from a box with
    ``Im z_j`` in ``[0.8, 1.5]``.
    """
    pts = []
    cf = gamma.c.floats()
    df = gamma.d.floats()
    for _ in range(count):
        z = []
        for j in range(2):
            if gamma.c:
                r = rng.uniform(0.85, 1.15)
                th = rng.uniform(0.3 * math.pi, 0.7 * math.pi)
                w = r * complex(math.cos(th), math.sin(th))
                # |c z + d| = r with Im z > 0 whatever the sign of c_j
                z.append(((w if cf[j] > 0 else w.conjugate()) - df[j]) / cf[j])
            else:
                z.append(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5)))
        pts.append(tuple(z))
    return pts


def smallest_totally_positive_dual(F: QuadField) -> FieldElement:
    """Least-trace totally positive element of the inverse different, ties broken by label order."""
    from .fourier import TranslationModule, dual_lattice, enumerate_totally_positive

    dual = dual_lattice(TranslationModule.from_ideal(IdealHNF.unit(F)))
    T = 1
    while True:
        pts = enumerate_totally_positive(dual, T, mod_units=True)
        if pts:
            return min(pts, key=lambda x: (x.trace(), x.floats()[0]))
        T *= 2
