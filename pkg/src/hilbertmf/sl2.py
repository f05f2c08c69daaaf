"""2x2 matrices over a real quadratic field, and seeded random elements of
SL2(O_F) and its principal congruence subgroups."""

from __future__ import annotations

import random
from typing import NamedTuple

from .ideals import IdealHNF
from .quadfield import FieldElement, QuadField, as_element


class Mat2(NamedTuple):
    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    @classmethod
    def of(cls, F: QuadField, a, b, c, d) -> Mat2:
        return cls(*(as_element(F, x) for x in (a, b, c, d)))

    @property
    def field(self) -> QuadField:
        return self.a.field

    def __matmul__(self, o: Mat2) -> Mat2:
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> Mat2:
        det = self.det()
        if not det:
            raise ZeroDivisionError("singular matrix")
        inv = det.inverse()
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def is_integral(self) -> bool:
        return all(x.is_integral() for x in self)

    def height(self) -> int:
        """Largest absolute integer coordinate of an entry in the basis {1, w}."""
        return max(max(abs(x.a), abs(x.b)) for x in self)

    def in_level(self, n: IdealHNF) -> bool:
        """Membership in the principal congruence subgroup of level ``n``."""
        one = self.field.one
        return (
            self.is_integral()
            and self.det() == one
            and all(x in n for x in (self.a - 1, self.b, self.c, self.d - 1))
        )

    def floats(self) -> tuple[tuple[float, float], ...]:
        """Entries under both embeddings, as ``((a1, a2), (b1, b2), ...)``."""
        return tuple(x.floats() for x in self)


def identity(F: QuadField) -> Mat2:
    return Mat2.of(F, 1, 0, 0, 1)


def translation(F: QuadField, x) -> Mat2:
    return Mat2.of(F, 1, x, 0, 1)


def inversion(F: QuadField) -> Mat2:
    return Mat2.of(F, 0, -1, 1, 0)


def unit_diagonal(F: QuadField, u: FieldElement) -> Mat2:
    return Mat2.of(F, u, 0, 0, u.inverse())


def _random_integral(F: QuadField, rng: random.Random, size: int) -> FieldElement:
    return F(rng.randint(-size, size), rng.randint(-size, size))


def random_gamma(
    F: QuadField,
    rng: random.Random,
    *,
    length: int = 4,
    size: int = 1,
    max_height: int | None = None,
    tries: int = 10_000,
) -> Mat2:
    """A seeded word in ``T^x``, ``S`` and unit diagonals, optionally height-limited."""
    eps = F.fundamental_unit()
    for _ in range(tries):
        g = identity(F)
        for _ in range(rng.randint(1, length)):
            r = rng.random()
            if r < 0.5:
                g = g @ translation(F, _random_integral(F, rng, size))
            elif r < 0.85:
                g = g @ inversion(F)
            else:
                g = g @ unit_diagonal(F, eps if rng.random() < 0.5 else eps.inverse())
        if g == identity(F):
            continue
        if max_height is None or g.height() <= max_height:
            return g
    raise RuntimeError("no group element within the requested height")


def random_level_gamma(
    F: QuadField, n: IdealHNF, rng: random.Random, *, length: int = 4, size: int = 1
) -> Mat2:
    """A seeded product of upper and lower unipotents with off-diagonal entries in ``n``."""
    A, B = n.basis()
    g = identity(F)
    for i in range(rng.randint(1, length)):
        x = rng.randint(-size, size) * A + rng.randint(-size, size) * B
        step = Mat2.of(F, 1, x, 0, 1) if i % 2 == 0 else Mat2.of(F, 1, 0, x, 1)
        g = g @ step
    return g
