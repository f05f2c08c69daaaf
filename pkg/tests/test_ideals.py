import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hilbertmf.ideals import (
    IdealHNF,
    NotSmoothError,
    class_group,
    different_ideal,
    enumerate_ideals,
    equivalent,
    factor_ideal,
    format_label,
    is_principal,
    minkowski_bound,
    parse_ideal,
    prime_splitting,
    primes_up_to,
)
from hilbertmf.quadfield import make_field

from oracles import brute_ideal_triples


def random_ideal(F, rng, size=6):
    while True:
        g = [F(rng.randint(-size, size), rng.randint(-size, size)) for _ in range(2)]
        if any(g):
            return IdealHNF.from_generators(F, g)


def test_generators_examples(F5, F10):
    two = IdealHNF.from_generators(F5, [2])
    assert two.norm() == 4
    assert IdealHNF.from_generators(F5, [F5.omega, 1]) == IdealHNF.unit(F5)
    p2 = IdealHNF.from_generators(F10, [2, F10.sqrtD])
    assert p2.norm() == 2


def test_all_zero_generators_rejected(F5):
    with pytest.raises(ValueError):
        IdealHNF.from_generators(F5, [0, F5.zero])


def test_norm_examples(F5):
    assert IdealHNF.principal(F5.sqrtD).norm() == 5
    assert IdealHNF.unit(F5).norm() == 1


@pytest.mark.parametrize("D", [2, 5, 10, 13])
def test_from_generators_idempotent(D, rng):
    F = make_field(D)
    for _ in range(30):
        I = random_ideal(F, rng)
        assert IdealHNF.from_generators(F, list(I.basis())) == I


@pytest.mark.parametrize("D", [5, 10])
def test_norm_multiplicative(D):
    F = make_field(D)
    rng = random.Random(D)
    for _ in range(500):
        I, J = random_ideal(F, rng), random_ideal(F, rng)
        assert (I * J).norm() == I.norm() * J.norm()


def test_fractional_arithmetic(F10, rng):
    for _ in range(40):
        I, J = random_ideal(F10, rng), random_ideal(F10, rng)
        assert (I / J) * J == I
        assert I * I.inverse() == IdealHNF.unit(F10)


@pytest.mark.parametrize(
    "p, kind, efg",
    [(2, "inert", (1, 2, 1)), (5, "ramified", (2, 1, 1)), (11, "split", (1, 1, 2)), (3, "inert", (1, 2, 1))],
)
def test_prime_splitting_q5(F5, p, kind, efg):
    s = prime_splitting(F5, p)
    assert s.kind == kind
    _, e, f = s.primes[0]
    assert (e, f, s.g) == efg
    prod = IdealHNF.unit(F5)
    for P, e, _ in s.primes:
        prod = prod * P**e
    assert prod == IdealHNF.principal(F5(p))


def test_inert_two_matches_polynomial_oracle():
    # x^2 - x - 1 has no root in F_2, so 2 stays prime in Q(sqrt 5)
    assert all((x * x - x - 1) % 2 for x in range(2))
    assert prime_splitting(make_field(5), 2).kind == "inert"


@pytest.mark.parametrize("D", [2, 3, 5, 10, 13])
def test_splitting_efg(D):
    F = make_field(D)
    for P in primes_up_to(F, 60):
        s = prime_splitting(F, int(P.norm()) if P.a > 1 else int(P.content))
        assert sum(e * f for _, e, f in s.primes) == 2
        assert (s.kind == "ramified") == (F.disc % s.p == 0)


def test_factor_examples(F5):
    four = IdealHNF.principal(F5(4))
    assert factor_ideal(four) == [(IdealHNF.principal(F5(2)), 2)]
    five = IdealHNF.principal(F5(5))
    assert factor_ideal(five) == [(IdealHNF.principal(F5.sqrtD), 2)]
    fac = factor_ideal(IdealHNF.principal(F5(11)))
    assert [e for _, e in fac] == [1, 1]
    assert {int(P.norm()) for P, _ in fac} == {11}
    assert fac[0][0] != fac[1][0]


@pytest.mark.parametrize("D", [5, 10, 13])
def test_factor_remultiplies(D, rng):
    F = make_field(D)
    for _ in range(40):
        I = random_ideal(F, rng) / random_ideal(F, rng, 3)
        prod = IdealHNF.unit(F)
        for P, e in factor_ideal(I):
            prod = prod * P**e
        assert prod == I


def test_factor_not_smooth(F5):
    with pytest.raises(NotSmoothError):
        factor_ideal(IdealHNF.principal(F5(101)), bound=50)


@pytest.mark.parametrize("D, h", [(5, 1), (2, 1), (13, 1), (10, 2), (15, 2), (3, 1)])
def test_class_numbers(D, h):
    assert class_group(make_field(D)).h == h


def test_d10_prime_above_two_not_principal(F10):
    # a^2 - 10 b^2 = +-2 is impossible mod 5, so no element has norm +-2
    assert all((a * a) % 5 not in (2, 3) for a in range(5))
    P = IdealHNF.from_generators(F10, [2, F10.sqrtD])
    assert is_principal(P) is None
    assert is_principal(P * P) is not None


def test_is_principal_returns_generator(F5, rng):
    for _ in range(20):
        I = random_ideal(F5, rng)
        x = is_principal(I)
        assert IdealHNF.principal(x) == I


@pytest.mark.parametrize("D", [10, 15])
def test_random_ideals_meet_every_class(D):
    F = make_field(D)
    cg = class_group(F)
    rng = random.Random(7)
    ideals = [random_ideal(F, rng) for _ in range(200)]
    reps = []
    for I in ideals:
        if not any(equivalent(I, R) for R in reps):
            reps.append(I)
    assert len(reps) == cg.h
    # equivalence is an equivalence relation on a sample
    sample = ideals[:12]
    for a in sample:
        assert equivalent(a, a)
        for b in sample:
            assert equivalent(a, b) == equivalent(b, a)
            for c in sample[:4]:
                if equivalent(a, b) and equivalent(b, c):
                    assert equivalent(a, c)


def test_class_group_representatives(F10):
    cg = class_group(F10)
    assert cg.representatives[0] == IdealHNF.unit(F10)
    assert cg.representatives[1].norm() == 2
    assert minkowski_bound(F10) == pytest.approx(40**0.5 / 2)


@pytest.mark.parametrize("D", [2, 3, 5, 7, 10, 13])
def test_different(D):
    F = make_field(D)
    d = different_ideal(F)
    assert d.norm() == F.disc
    fprime = 2 * F.omega - F.t
    assert d == IdealHNF.principal(fprime)


def test_different_examples(F5):
    assert different_ideal(F5) == IdealHNF.principal(2 * F5.omega - 1)
    F2 = make_field(2)
    assert different_ideal(F2) == IdealHNF.principal(2 * F2.sqrtD)


def test_enumerate_examples(F5):
    small = enumerate_ideals(F5, 5)
    assert [int(I.norm()) for I in small] == [1, 4, 5]
    assert small[1] == IdealHNF.principal(F5(2))
    assert enumerate_ideals(F5, 1) == [IdealHNF.unit(F5)]
    # 3 O_F has norm 9, so there are 6 ideals of norm <= 11
    assert len(enumerate_ideals(F5, 11)) == 6


@pytest.mark.parametrize("D", [2, 5, 10, 13])
def test_enumerate_matches_brute_force(D):
    F = make_field(D)
    got = {(I.a, I.b, int(I.content)) for I in enumerate_ideals(F, 50)}
    assert got == set(brute_ideal_triples(D, 50))


def test_labels(F5):
    two = IdealHNF.principal(F5(2))
    assert format_label(two) == "1.0*2"
    assert parse_ideal(F5, "1.0*2") == two
    # an "N.m" label that is not an HNF pair names the ideal of norm N with least integer m
    assert parse_ideal(F5, "4.2") == two
    assert parse_ideal(F5, "(2, w)") == IdealHNF.unit(F5)
    assert parse_ideal(F5, "5.2").norm() == 5


@given(st.sampled_from([2, 5, 10, 13]), st.integers(1, 9), st.integers(-9, 9), st.integers(1, 4))
def test_label_round_trip(D, a, b, d):
    F = make_field(D)
    I = IdealHNF.from_generators(F, [F(a, b)]) / IdealHNF.principal(F(d))
    assert parse_ideal(F, I.label) == I
    assert parse_ideal(F, I.label).label == I.label
