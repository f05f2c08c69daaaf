"""Weight bookkeeping, ideal-indexed Fourier coefficients and Hecke eigensystems.

Coefficients live in an explicitly declared coefficient field ``K`` (``Q`` or
a real quadratic field) and are stored exactly as :class:`fractions.Fraction`
or :class:`FieldElement` values.

Component data follow the convention: component ``i`` has translation
module ``t_i O_F`` and coefficients ``a_i(xi)`` for totally positive ``xi`` in
``t_i^{-1} d^{-1}``; the integral ideal attached to ``xi`` is
``m = xi t_i d``.  Unit invariance reads ``a_i(e xi) = prod_j e_j^{k_j/2} a_i(xi)``
for totally positive units ``e``, which makes
``c(m) = a_i(xi) prod_j xi_j^{-k_j/2}`` independent of ``xi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

import mpmath

from .ideals import (
    IdealHNF,
    class_group,
    different_ideal,
    factor_ideal,
    ideal_sort_key,
    is_principal,
    parse_ideal,
)
from .quadfield import (
    DEFAULT_PRECISION,
    FieldElement,
    QuadField,
    format_element,
    parse_field,
)

Coefficient = Union[Fraction, FieldElement]


class UnitInvarianceError(ValueError):
    """Component data disagree with the totally positive unit law."""


# weights


@dataclass(frozen=True)
class WeightData:
    k: tuple[int, ...]
    v: tuple[int, ...]
    w: tuple[int, ...]
    w_hat: tuple[int, ...]
    k0: int
    eps: int = 1

    @property
    def t(self) -> tuple[int, ...]:
        return (1,) * len(self.k)

    @property
    def parallel(self) -> bool:
        return len(set(self.k)) == 1

    @property
    def two_w_minus_k(self) -> int:
        """``[2w - k]``, the integer with ``2w - k = [2w - k] t``."""
        vals = {2 * wj - kj for wj, kj in zip(self.w, self.k)}
        (r,) = vals
        return r


def weight_data(k: Sequence[int]) -> WeightData:
    """``v`` is the unique vector with ``min v = 0`` and ``k + 2v`` parallel; ``w = v + k - t``."""
    k = tuple(int(x) for x in k)
    if not k or any(x < 1 for x in k):
        raise ValueError(f"weights must be >= 1, got {k}")
    if len({x % 2 for x in k}) != 1:
        raise ValueError(f"weight {k} entries differ in parity")
    k0 = max(k)
    v = tuple((k0 - x) // 2 for x in k)
    w = tuple(vj + kj - 1 for vj, kj in zip(v, k))
    w_hat = tuple(kj - wj for kj, wj in zip(k, w))
    return WeightData(k, v, w, w_hat, k0)


def diamond_from_S(theta_S: Coefficient, a: IdealHNF | int, weight: WeightData) -> Coefficient:
    """``<a> = theta(S_a) / N(a)^{[2w-k]}``."""
    N = a.norm() if isinstance(a, IdealHNF) else Fraction(a)
    return theta_S / (Fraction(N) ** weight.two_w_minus_k)


# coefficient fields


@dataclass(frozen=True)
class CoefficientField:
    """``Q`` (``K = None``) or a real quadratic field ``K``."""

    K: QuadField | None = None

    @classmethod
    def parse(cls, text: str) -> CoefficientField:
        s = text.strip()
        return cls(None) if s == "Q" else cls(parse_field(s))

    def __str__(self):
        return "Q" if self.K is None else str(self.K)

    def coerce(self, x) -> Coefficient:
        if self.K is None:
            if isinstance(x, FieldElement):
                raise TypeError("field element in a rational coefficient field")
            return Fraction(x)
        if isinstance(x, FieldElement):
            return x
        return self.K(Fraction(x))

    def parse_value(self, text: str) -> Coefficient:
        return Fraction(text.strip()) if self.K is None else self.K.parse(text)

    def format_value(self, x: Coefficient) -> str:
        if self.K is None:
            return str(Fraction(x))
        return format_element(self.coerce(x))

    def embed(self, x: Coefficient, prec: int = DEFAULT_PRECISION):
        """Real value under the first embedding of ``K``."""
        if self.K is None:
            with mpmath.workprec(prec):
                return mpmath.mpf(x.numerator) / x.denominator
        return self.coerce(x).embeddings(prec)[0]

    def is_integral(self, x: Coefficient) -> bool:
        if self.K is None:
            return Fraction(x).denominator == 1
        return self.coerce(x).is_integral()

    def in_ideal(self, x: Coefficient, alpha) -> bool:
        """Membership of ``x`` in the integral ideal ``alpha`` (an int for ``Q``)."""
        if self.K is None:
            return (Fraction(x) / int(alpha)).denominator == 1
        return alpha.contains(self.coerce(x))

    def parse_ideal(self, text: str):
        if self.K is None:
            return abs(int(text))
        return parse_ideal(self.K, text)


QQ = CoefficientField(None)


# ideal-indexed expansions


def _label_key(base: QuadField | None, label: str):
    if base is None:
        return (int(label), label)
    return ideal_sort_key(parse_ideal(base, label))


@dataclass
class IdealExpansion:
    """Finitely many ``a(m, f)`` indexed by integral-ideal labels, stored through ``norm_bound``.

    ``base`` is the field F, or ``None`` for the degree-1 case where labels
    are positive integers.
    """

    base: QuadField | None
    weight: WeightData
    level: str
    coeff_field: CoefficientField
    coefficients: dict[str, Coefficient]
    norm_bound: int
    constant_terms: list[Coefficient] = field(default_factory=list)

    def __post_init__(self):
        coeffs = {}
        for label, x in self.coefficients.items():
            label = str(label) if self.base is None else parse_ideal(self.base, str(label)).label
            if self._norm(label) > self.norm_bound:
                raise ValueError(f"{label} has norm above the bound {self.norm_bound}")
            coeffs[label] = self.coeff_field.coerce(x)
        self.coefficients = coeffs
        self.constant_terms = [self.coeff_field.coerce(x) for x in self.constant_terms]

    def _norm(self, label: str) -> int:
        if self.base is None:
            n = int(label)
            if n < 1:
                raise ValueError(f"bad label {label}")
            return n
        I = parse_ideal(self.base, label)
        if not I.is_integral():
            raise ValueError(f"{label} is not integral")
        return int(I.norm())

    def label_of(self, m) -> str | None:
        """Canonical label, or ``None`` for zero / non-integral input."""
        if self.base is None:
            if isinstance(m, Fraction) and m.denominator != 1:
                return None
            return str(int(m)) if int(m) >= 1 else None
        if isinstance(m, str):
            m = parse_ideal(self.base, m)
        return m.label if m.is_integral() else None

    def a(self, m) -> Coefficient:
        """``a(m, f)``; zero for unstored, zero and non-integral ``m``."""
        label = self.label_of(m)
        zero = self.coeff_field.coerce(0)
        if label is None:
            return zero
        return self.coefficients.get(label, zero)

    def sorted_labels(self) -> list[str]:
        return sorted(self.coefficients, key=lambda s: _label_key(self.base, s))

    def is_A_integral(self, predicate: Callable[[Coefficient], bool] | None = None) -> bool:
        pred = predicate or self.coeff_field.is_integral
        return all(pred(x) for x in self.coefficients.values()) and all(
            pred(x) for x in self.constant_terms
        )

    def scaled(self, c) -> IdealExpansion:
        c = self.coeff_field.coerce(c)
        return self.replace_coefficients({m: c * x for m, x in self.coefficients.items()})

    def replace_coefficients(self, coeffs: Mapping[str, Coefficient], bound: int | None = None) -> IdealExpansion:
        return IdealExpansion(
            self.base,
            self.weight,
            self.level,
            self.coeff_field,
            dict(coeffs),
            self.norm_bound if bound is None else bound,
            list(self.constant_terms),
        )

    def same_space(self, other: IdealExpansion) -> bool:
        base = (None if self.base is None else self.base.D) == (None if other.base is None else other.base.D)
        return base and self.weight == other.weight and self.level == other.level


def congruent_mod(f: IdealExpansion, g: IdealExpansion, alpha, B: int) -> bool:
    """``a(m, f) - a(m, g)`` in ``alpha`` for every stored label of norm ``<= B``."""
    if not f.same_space(g):
        raise ValueError("expansions live in different spaces")
    if B > min(f.norm_bound, g.norm_bound):
        raise ValueError(f"coefficients are only stored through {min(f.norm_bound, g.norm_bound)}")
    K = f.coeff_field
    for label in set(f.coefficients) | set(g.coefficients):
        if f._norm(label) <= B and not K.in_ideal(f.a(label) - g.a(label), alpha):
            return False
    return True


def is_eigen_mod(
    f: IdealExpansion,
    operator: Callable[[IdealExpansion], IdealExpansion],
    a,
    alpha,
    B: int,
) -> bool:
    """``f | T == a f`` modulo ``alpha`` through norm ``B``."""
    Tf = operator(f)
    return congruent_mod(Tf, f.scaled(a), alpha, B)


# component tuples and c(m, f)


@dataclass
class Component:
    """Coefficients ``a_i(xi)`` of one holomorphic component, keyed by ``xi``."""

    coefficients: dict[FieldElement, Coefficient]


@dataclass
class ComponentTuple:
    field: QuadField
    weight: WeightData
    coeff_field: CoefficientField
    components: list[Component]

    @property
    def representatives(self) -> list[IdealHNF]:
        return class_group(self.field).representatives

    def a(self, i: int, xi: FieldElement) -> Coefficient:
        return self.components[i].coefficients.get(xi, self.coeff_field.coerce(0))


def unit_factor(e: FieldElement, k: Sequence[int], prec: int = DEFAULT_PRECISION):
    """``prod_j e_j^{k_j/2}`` for a totally positive unit ``e``.

    For parallel ``k`` this is ``N(e)^{k/2} = 1`` exactly; otherwise a real
    number built from positive roots.
    """
    if len(set(k)) == 1 and e.norm() == 1:
        return Fraction(1)
    with mpmath.workprec(prec):
        e1, e2 = e.embeddings(prec)
        return mpmath.power(e1, mpmath.mpf(k[0]) / 2) * mpmath.power(e2, mpmath.mpf(k[1]) / 2)


def propagate_unit_law(
    seed: Mapping[FieldElement, Coefficient],
    k: Sequence[int],
    e: FieldElement,
    steps: Iterable[int] = (-1, 0, 1),
    prec: int = DEFAULT_PRECISION,
) -> dict[FieldElement, object]:
    """Extend seed values to ``e^n xi`` by ``a(e^n xi) = (prod e_j^{k_j/2})^n a(xi)``."""
    out: dict[FieldElement, object] = {}
    fac = unit_factor(e, k, prec)
    for xi, a in seed.items():
        for n in steps:
            val = a * (fac**n) if isinstance(fac, Fraction) else _real(a, prec) * fac**n
            out[xi * e**n] = val
    return out


def _real(x, prec):
    if isinstance(x, FieldElement):
        return x.embeddings(prec)[0]
    if isinstance(x, Fraction):
        with mpmath.workprec(prec):
            return mpmath.mpf(x.numerator) / x.denominator
    return x


def xi_weight_factor(xi: FieldElement, k: Sequence[int], prec: int = DEFAULT_PRECISION):
    """``prod_j xi_j^{-k_j/2}`` with positive real roots; exact for parallel even ``k``."""
    if not xi.is_totally_positive():
        raise ValueError("xi must be totally positive")
    if len(set(k)) == 1 and k[0] % 2 == 0:
        return Fraction(xi.norm()) ** (-(k[0] // 2))
    with mpmath.workprec(prec):
        x1, x2 = xi.embeddings(prec)
        return mpmath.power(x1, -mpmath.mpf(k[0]) / 2) * mpmath.power(x2, -mpmath.mpf(k[1]) / 2)


def _totally_positive_generator(F: QuadField, J: IdealHNF) -> FieldElement | None:
    x = is_principal(J)
    if x is None:
        return None
    eps = F.fundamental_unit()
    for u in (F.one, -F.one, eps, -eps):
        if (u * x).is_totally_positive():
            return u * x
    return None


def xi_for_ideal(F: QuadField, m: IdealHNF) -> tuple[int, FieldElement]:
    """``(lam, xi)`` with ``0 << xi`` in ``t_lam^{-1} d^{-1}`` and ``m = xi t_lam d``.

    ``xi`` is normalised into the half-open domain ``1 <= xi1/xi2 < e+^2``.
    """
    cg = class_group(F)
    dd = different_ideal(F)
    for lam, t in enumerate(cg.representatives):
        xi = _totally_positive_generator(F, m / (t * dd))
        if xi is not None:
            return lam, _normalise_xi(F, xi)
    raise ArithmeticError(f"{m.label} has no totally positive generator relative to any t_i d (narrow class)")


def _normalise_xi(F: QuadField, xi: FieldElement) -> FieldElement:
    e = F.totally_positive_unit_generator()
    e2 = e * e
    for _ in range(10_000):
        if (xi - xi.conjugate()).sign(0) < 0:
            xi = xi * e
        elif (xi - e2 * xi.conjugate()).sign(0) >= 0:
            xi = xi * e.inverse()
        else:
            return xi
    raise RuntimeError("xi normalisation did not terminate")


def c_from_xi(comp: ComponentTuple, lam: int, xi: FieldElement, prec: int = DEFAULT_PRECISION):
    return comp.a(lam, xi) * xi_weight_factor(xi, comp.weight.k, prec)


def c_from_components(comp: ComponentTuple, m, prec: int = DEFAULT_PRECISION, check: bool = True):
    """``c(m, f) = a_lam(xi) prod xi_j^{-k_j/2}``; 0 for ``m = 0`` or non-integral ``m``.

    With ``check`` the value is recomputed from ``xi e+`` whenever that
    coefficient is stored, and a disagreement raises :class:`UnitInvarianceError`.
    """
    F = comp.field
    if m is None or (not isinstance(m, IdealHNF) and m == 0):
        return Fraction(0)
    if not m.is_integral():
        return Fraction(0)
    lam, xi = xi_for_ideal(F, m)
    val = c_from_xi(comp, lam, xi, prec)
    if check:
        e = F.totally_positive_unit_generator()
        other = xi * e
        if other in comp.components[lam].coefficients:
            alt = c_from_xi(comp, lam, other, prec)
            if not _agree(val, alt, prec):
                raise UnitInvarianceError(f"c({m.label}) differs between xi and xi*e: {val} vs {alt}")
    return val


def _agree(x, y, prec) -> bool:
    if isinstance(x, (Fraction, FieldElement)) and isinstance(y, (Fraction, FieldElement)):
        return x == y
    scale = max(abs(_real(x, prec)), abs(_real(y, prec)), 1)
    return abs(_real(x, prec) - _real(y, prec)) <= 1e-12 * scale


def capital_C(c, N, k0: int, prec: int = DEFAULT_PRECISION):
    """``C(m) = N(m)^{k0/2} c(m)`` with the positive real root."""
    N = Fraction(N)
    if not c:
        return c
    if k0 % 2 == 0:
        return c * N ** (k0 // 2)
    with mpmath.workprec(prec):
        root = mpmath.power(mpmath.mpf(N.numerator) / N.denominator, mpmath.mpf(k0) / 2)
        return _real(c, prec) * root


def dirichlet_terms(exp: IdealExpansion, prec: int = DEFAULT_PRECISION) -> list[tuple[str, int, object]]:
    """``(label, N(m), C(m))`` for every stored ``m``, with ``c(m) = a(m)`` (normalised data)."""
    out = []
    for label in exp.sorted_labels():
        N = exp._norm(label)
        if exp.base is None:
            # degree-1 coefficients are already the C(n) of the classical series
            out.append((label, N, exp.coefficients[label]))
        else:
            c = exp.coefficients[label]
            out.append((label, N, capital_C(c, N, exp.weight.k0, prec)))
    return out


# Hecke eigensystems


@dataclass
class HeckeEigensystem:
    """``theta(T_q)`` on primes and ``theta(S_a)`` on ideals coprime to the level.

    ``base`` is ``None`` for degree-1 data, where labels are rational integers.
    """

    base: QuadField | None
    level: str
    weight: WeightData
    coeff_field: CoefficientField
    theta_T: dict[str, Coefficient]
    theta_S: dict[str, Coefficient]

    def level_norm(self) -> int:
        if self.base is None:
            return int(self.level)
        return int(parse_ideal(self.base, self.level).norm())

    def divides_level(self, q: str) -> bool:
        if self.base is None:
            return int(self.level) % int(q) == 0
        return parse_ideal(self.base, q).divides(parse_ideal(self.base, self.level))

    def S(self, label: str) -> Coefficient:
        """``theta(S_a)``, extended multiplicatively from stored prime values when needed."""
        if label in self.theta_S:
            return self.theta_S[label]
        if self.base is None:
            n = int(label)
            out = self.coeff_field.coerce(1)
            p = 2
            while n > 1:
                while n % p == 0:
                    out = out * self.theta_S[str(p)]
                    n //= p
                p += 1
            return out
        out = self.coeff_field.coerce(1)
        for P, e in factor_ideal(parse_ideal(self.base, label)):
            out = out * self.theta_S[P.label] ** e
        return out

    def diamond(self, label: str) -> Coefficient:
        a = int(label) if self.base is None else parse_ideal(self.base, label)
        return diamond_from_S(self.S(label), a, self.weight)


def check_S_multiplicative(es: HeckeEigensystem, pairs: Iterable[tuple[str, str, str]]) -> bool:
    """``theta(S_ab) == theta(S_a) theta(S_b)`` on ``(a, b, ab)`` label triples."""
    return all(es.S(ab) == es.S(a) * es.S(b) for a, b, ab in pairs)


# degree-1 oracle


def _series_mul(f: list[int], g: list[int], B: int) -> list[int]:
    out = [0] * (B + 1)
    for i, a in enumerate(f[: B + 1]):
        if a:
            for j, b in enumerate(g[: B + 1 - i]):
                if b:
                    out[i + j] += a * b
    return out


def _euler_cube(B: int, step: int = 1) -> list[int]:
    """``prod (1 - q^{step n})^3`` through ``q^B`` by Jacobi's identity."""
    out = [0] * (B + 1)
    n = 0
    while step * n * (n + 1) // 2 <= B:
        out[step * n * (n + 1) // 2] += (-1) ** n * (2 * n + 1)
        n += 1
    return out


def _pentagonal(B: int, step: int = 1) -> list[int]:
    """``prod (1 - q^{step n})`` through ``q^B`` by Euler's pentagonal theorem."""
    out = [0] * (B + 1)
    out[0] = 1
    m = 1
    while step * m * (3 * m - 1) // 2 <= B:
        for g in (m * (3 * m - 1) // 2, m * (3 * m + 1) // 2):
            if step * g <= B:
                out[step * g] += (-1) ** m
        m += 1
    return out


def _euler_power(B: int, e: int, step: int = 1) -> list[int]:
    """``prod (1 - q^{step n})^e`` through ``q^B``."""
    res = [1] + [0] * B
    for _ in range(e // 3):
        res = _series_mul(res, _euler_cube(B, step), B)
    for _ in range(e % 3):
        res = _series_mul(res, _pentagonal(B, step), B)
    return res


def classical_qexp(N: int, k: int, B: int) -> list[int]:
    """``a(0..B)`` of Delta (``N=1, k=12``) or ``eta(z)^2 eta(11z)^2`` (``N=11, k=2``)."""
    if (N, k) == (1, 12):
        base = _euler_power(B - 1, 24)
    elif (N, k) == (11, 2):
        base = _series_mul(_euler_power(B - 1, 2), _euler_power(B - 1, 2, step=11), B - 1)
    else:
        raise ValueError(f"no built-in form of level {N} and weight {k}")
    return [0] + base[:B]


def classical_degree1_oracle(N: int, k: int, B: int) -> IdealExpansion:
    a = classical_qexp(N, k, B)
    return IdealExpansion(
        None,
        weight_data((k,)),
        str(N),
        QQ,
        {str(n): Fraction(a[n]) for n in range(1, B + 1)},
        B,
        [Fraction(0)],
    )


def hecke_degree1(f: IdealExpansion, p: int, chi: Callable[[int], int] | None = None) -> IdealExpansion:
    """``T_p`` on a degree-1 expansion: ``b(n) = a(pn) + chi(p) p^{k-1} a(n/p)``.

    For ``p | N`` the second term is absent (``U_p``).  The result is stored
    through ``floor(B/p)``.
    """
    if f.base is not None:
        raise ValueError("hecke_degree1 works on degree-1 expansions")
    N = int(f.level)
    k = f.weight.k[0]
    chi_p = 0 if N % p == 0 else (1 if chi is None else chi(p))
    B = f.norm_bound // p
    out = {}
    for n in range(1, B + 1):
        val = f.a(p * n)
        if n % p == 0:
            val = val + chi_p * p ** (k - 1) * f.a(n // p)
        out[str(n)] = val
    return f.replace_coefficients(out, B)


def eigensystem_from_degree1(f: IdealExpansion, primes: Iterable[int]) -> HeckeEigensystem:
    """``theta(T_p) = a(p)`` and ``theta(S_p) = p^(k-2)`` (trivial character) for a normalised eigenform.

    The power of ``p`` is ``N(p)^[2w-k]`` with ``<p> = 1``.
    """
    if f.a(1) != 1:
        raise ValueError("expansion is not normalised: a(1) != 1")
    N = int(f.level)
    k = f.weight.k0
    primes = list(primes)
    T = {str(p): f.a(p) for p in primes}
    S = {str(p): Fraction(p) ** (k - 2) for p in primes if N % p}
    return HeckeEigensystem(None, f.level, f.weight, f.coeff_field, T, S)


# Hida condition


@dataclass(frozen=True)
class HidaResult:
    status: str  # "true" | "undetermined"
    certificate: str
    generators: tuple[tuple[str, str], ...] = ()

    def __bool__(self):
        return self.status == "true"


def hida_condition_check(v: Sequence[int], coeff: CoefficientField, F: QuadField | None = None, primes: Iterable[str] = ()) -> HidaResult:
    """Tri-state check of the Hida condition for the twisting ideals ``x^v O(v)``.

    ``v = 0`` holds trivially.  For ``v != 0`` the coefficient field must be
    the real quadratic field ``F`` itself (it contains ``Phi(v)``); then each
    stored prime ``q`` yields ``q^{v1} conj(q)^{v2}``, which must be
    principal.  The least generator found by the principality search is
    recorded as the fixed choice ``{q^v}``.
    """
    v = tuple(v)
    if all(x == 0 for x in v):
        return HidaResult("true", "trivial: x^v = 1")
    if coeff.K is None:
        raise ValueError("Q does not contain Phi(v) for v != 0")
    K = coeff.K
    if F is not None and F.D != K.D:
        raise ValueError("only K = F is supported for v != 0")
    h = class_group(K).h
    gens = []
    all_principal = True
    for label in primes:
        q = parse_ideal(K, label)
        J = q ** v[0] * q.conjugate() ** v[1]
        x = is_principal(J)
        if x is None:
            all_principal = False
        else:
            gens.append((label, format_element(x)))
    if h == 1:
        return HidaResult("true", f"h(K) = 1 for K = {K}", tuple(gens))
    if all_principal and gens:
        return HidaResult("true", "principal on every stored prime", tuple(gens))
    return HidaResult("undetermined", f"h(K) = {h} and some tested ideals are not principal", tuple(gens))


def synthetic_components(
    F: QuadField,
    k: Sequence[int],
    seeds: Mapping[int, Mapping[FieldElement, Coefficient]],
    coeff: CoefficientField = QQ,
    prec: int = DEFAULT_PRECISION,
) -> ComponentTuple:
    """Component data from seed values on orbit representatives, propagated by the unit law."""
    wd = weight_data(k)
    e = F.totally_positive_unit_generator()
    comps = []
    for i in range(class_group(F).h):
        data = propagate_unit_law(seeds.get(i, {}), wd.k, e, prec=prec)
        comps.append(Component(data))
    return ComponentTuple(F, wd, coeff, comps)
