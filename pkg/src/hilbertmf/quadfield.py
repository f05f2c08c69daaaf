"""Exact arithmetic in real quadratic fields Q(sqrt D) and their rings of integers.

Elements are stored as ``a + b*w`` with rational ``a, b`` where ``w`` is the
standard integral generator: ``(1 + sqrt D)/2`` when ``D = 1 (mod 4)`` and
``sqrt D`` otherwise.  Ring operations never touch floating point; real
embeddings are produced on request with :mod:`mpmath` at a configurable
binary precision.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath

DEFAULT_PRECISION = 128
DEFAULT_UNIT_SEARCH = 10**4

Rational = Union[int, Fraction]


class SearchBoundExceeded(ArithmeticError):
    """A bounded search (unit box, principality box) found nothing in budget."""


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def sign_of_sqrt_combination(u: Rational, v: Rational, D: int) -> int:
    """Exact sign of ``u + v*sqrt(D)`` for rationals ``u, v`` and ``D > 0`` non-square."""
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    # opposite signs: compare u^2 with v^2 D
    diff = u * u - v * v * D
    return su if diff > 0 else sv


class QuadField:
    """The field Q(sqrt D) with integral basis {1, w}.

    ``w`` satisfies ``w^2 = t*w - n`` with ``(t, n) = (1, (1-D)/4)`` for
    ``D = 1 mod 4`` and ``(0, -D)`` otherwise.
    """

    def __init__(self, D: int):
        if not isinstance(D, int) or D <= 1:
            raise ValueError(f"D must be an integer > 1, got {D!r}")
        if not is_squarefree(D):
            raise ValueError(f"D = {D} is not square-free")
        self.D = D
        if D % 4 == 1:
            self.omega_half = True
            self.disc = D
            self.t = 1
            self.n = (1 - D) // 4
        else:
            self.omega_half = False
            self.disc = 4 * D
            self.t = 0
            self.n = -D
        self._unit_lock = threading.Lock()
        self._fundamental_unit: FieldElement | None = None
        self._sqrtD = math.sqrt(D)

    def __repr__(self) -> str:
        return f"Q(sqrt {self.D})"

    __str__ = __repr__

    def __reduce__(self):
        return (make_field, (self.D,))

    # element constructors
    def __call__(self, a: Rational = 0, b: Rational = 0) -> FieldElement:
        return FieldElement(self, a, b)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1, 0)

    @property
    def omega(self) -> FieldElement:
        return FieldElement(self, 0, 1)

    @property
    def sqrtD(self) -> FieldElement:
        """sqrt(D) as a field element."""
        if self.omega_half:
            return FieldElement(self, -1, 2)
        return FieldElement(self, 0, 1)

    def omega_embeddings(self, prec: int | None = None) -> tuple[mpmath.mpf, mpmath.mpf]:
        with mpmath.workprec(prec or DEFAULT_PRECISION):
            r = mpmath.sqrt(self.D)
            if self.omega_half:
                return (1 + r) / 2, (1 - r) / 2
            return +r, -r

    def omega_floats(self) -> tuple[float, float]:
        r = self._sqrtD
        if self.omega_half:
            return (1 + r) / 2, (1 - r) / 2
        return r, -r

    def fundamental_unit(self, bound: int = DEFAULT_UNIT_SEARCH) -> FieldElement:
        """Smallest unit > 1 under the first embedding.

        Search runs over ``b = 1..bound`` solving the norm equation for ``a``;
        since ``u - u' = b*(w1 - w2)`` the first hit is the smallest unit.
        """
        if self._fundamental_unit is not None:
            return self._fundamental_unit
        with self._unit_lock:
            if self._fundamental_unit is None:
                self._fundamental_unit = self._search_unit(bound)
        return self._fundamental_unit

    def _search_unit(self, bound: int) -> FieldElement:
        t, n = self.t, self.n
        for b in range(1, bound + 1):
            hits = []
            for target in (1, -1):
                # a^2 + a*b*t + b^2*n - target = 0
                disc = b * b * t * t - 4 * (b * b * n - target)
                if disc < 0:
                    continue
                r = math.isqrt(disc)
                if r * r != disc:
                    continue
                for num in (-b * t + r, -b * t - r):
                    if num % 2 or abs(num // 2) > bound:
                        continue
                    u = FieldElement(self, num // 2, b)
                    if (u - 1).sign(0) > 0:
                        hits.append(u)
            if hits:
                return min(hits, key=lambda u: u.floats()[0])
        raise SearchBoundExceeded(f"no unit with |a|, |b| <= {bound} in {self}")

    def totally_positive_unit_generator(self) -> FieldElement:
        """Generator of the group of totally positive units."""
        e = self.fundamental_unit()
        if e.norm() == 1 and e.is_totally_positive():
            return e
        return e * e

    def parse(self, text: str) -> FieldElement:
        return parse_element(self, text)


@lru_cache(maxsize=None)
def make_field(D: int) -> QuadField:
    """Return the (cached) descriptor of Q(sqrt D)."""
    return QuadField(D)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class FieldElement:
    """``a + b*w`` in a real quadratic field, with exact rational coordinates."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadField, a: Rational = 0, b: Rational = 0):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self):
        return (FieldElement, (self.field, self.a, self.b))

    # coercion
    def _coerce(self, other) -> FieldElement | None:
        if isinstance(other, FieldElement):
            if other.field.D != self.field.D:
                raise ValueError(f"elements of {self.field} and {other.field} cannot be combined")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.field
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = b * d
        return FieldElement(F, a * c - bd * F.n, a * d + b * c + bd * F.t)

    __rmul__ = __mul__

    def conjugate(self) -> FieldElement:
        F = self.field
        return FieldElement(F, self.a + self.b * F.t, -self.b)

    def norm(self) -> Fraction:
        F = self.field
        a, b = self.a, self.b
        return a * a + a * b * F.t + b * b * F.n

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.field.t

    def inverse(self) -> FieldElement:
        N = self.norm()
        if N == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return FieldElement(self.field, c.a / N, c.b / N)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = self.field.one
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field.D == other.field.D and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.field.D, self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_zero(self) -> bool:
        return not self

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def coords(self) -> tuple[Fraction, Fraction]:
        return self.a, self.b

    def int_coords(self) -> tuple[int, int]:
        if not self.is_integral():
            raise ValueError(f"{self} is not integral")
        return int(self.a), int(self.b)

    def sqrt_form(self) -> tuple[Fraction, Fraction]:
        """(u, v) with self = u + v*sqrt(D)."""
        if self.field.omega_half:
            return self.a + self.b / 2, self.b / 2
        return self.a, self.b

    def sign(self, j: int) -> int:
        """Exact sign of the j-th real embedding (j = 0 or 1)."""
        u, v = self.sqrt_form()
        return sign_of_sqrt_combination(u, v if j == 0 else -v, self.field.D)

    def is_totally_positive(self) -> bool:
        return self.sign(0) > 0 and self.sign(1) > 0

    def embeddings(self, prec: int | None = None) -> tuple[mpmath.mpf, mpmath.mpf]:
        with mpmath.workprec(prec or DEFAULT_PRECISION):
            w1, w2 = self.field.omega_embeddings(prec)
            a = mpmath.mpf(self.a.numerator) / self.a.denominator
            b = mpmath.mpf(self.b.numerator) / self.b.denominator
            return a + b * w1, a + b * w2

    def floats(self) -> tuple[float, float]:
        """Double-precision embeddings (for vectorised numerics)."""
        w1, w2 = self.field.omega_floats()
        a, b = float(self.a), float(self.b)
        return a + b * w1, a + b * w2

    def __repr__(self):
        return format_element(self)

    __str__ = __repr__


def as_element(F: QuadField, x) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    return FieldElement(F, x, 0)


def format_element(x: FieldElement) -> str:
    """Serialise as ``a/b + c/d*w`` (lowercase ASCII, terms omitted when zero)."""

    def q(r: Fraction) -> str:
        return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"

    if x.b == 0:
        return q(x.a)
    bpart = f"{q(abs(x.b))}*w"
    if x.a == 0:
        return bpart if x.b > 0 else "-" + bpart
    return f"{q(x.a)} {'+' if x.b > 0 else '-'} {bpart}"


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*w)?\s*")


def parse_element(F: QuadField, text: str) -> FieldElement:
    """Parse the ``a/b + c/d*w`` grammar (also accepts ``w``, ``-w``, ``1-w``, ``3/2*w``)."""
    s = text.strip().lower().replace(" ", "")
    if not s:
        raise ValueError("empty field element")
    a = Fraction(0)
    b = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse field element {text!r}")
        sgn, num, wpart = m.groups()
        if num is None and wpart is None:
            raise ValueError(f"cannot parse field element {text!r}")
        if pos > 0 and not sgn:
            raise ValueError(f"missing operator in {text!r}")
        val = Fraction(num) if num is not None else Fraction(1)
        if sgn == "-":
            val = -val
        if wpart is not None:
            b += val
        else:
            a += val
        pos = m.end()
    return FieldElement(F, a, b)


def parse_field(text: str) -> QuadField:
    m = re.fullmatch(r"\s*Q\(\s*sqrt\s*(\d+)\s*\)\s*", text)
    if not m:
        raise ValueError(f"cannot parse field descriptor {text!r}")
    return make_field(int(m.group(1)))
