import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import isprime, primerange

from hilbertmf.galois import (
    AbelianGaloisDesc,
    BadReductionError,
    CompatibleSystem,
    DirichletCharacter,
    LocalFactor,
    RamifiedError,
    artin_local_factor,
    cyclotomic_system,
    efg_data,
    eigensystem_to_local_factor,
    frobenius_cyclotomic,
    global_factors,
    kronecker,
    perturb,
    point_count_trace_oracle,
    strict_compat_check,
    system_from_eigensystem,
)
from hilbertmf.hecke import HeckeEigensystem, QQ, classical_degree1_oracle, eigensystem_from_degree1, weight_data
from hilbertmf.ideals import prime_splitting
from hilbertmf.quadfield import make_field

from oracles import brute_point_count, multiplicative_order

CURVE_11 = (0, -1, 1, -10, -20)


def level11(B=200):
    f = classical_degree1_oracle(11, 2, B)
    return eigensystem_from_degree1(f, primerange(2, B + 1))


# Frobenius and splitting


def test_frobenius_examples():
    assert frobenius_cyclotomic(2, 5) == 2
    assert efg_data(AbelianGaloisDesc.cyclotomic(5), 2) == (1, 4, 1)
    assert frobenius_cyclotomic(7, 3) == 1
    assert efg_data(AbelianGaloisDesc.cyclotomic(3), 7) == (1, 1, 2)
    with pytest.raises(RamifiedError):
        frobenius_cyclotomic(5, 5)


def test_efg_examples(F5):
    assert efg_data(AbelianGaloisDesc.quadratic(5), 11) == (1, 1, 2)
    assert efg_data(AbelianGaloisDesc.cyclotomic(4), 2) == (2, 1, 1)
    assert efg_data(AbelianGaloisDesc.quadratic(5), 2) == (1, 2, 1)
    assert efg_data(F5, 2) == (1, 2, 1)
    assert efg_data(AbelianGaloisDesc.quadratic(5), 5) == (2, 1, 1)


def test_frobenius_order_is_f():
    rng = random.Random(100)
    done = 0
    while done < 100:
        N = rng.randint(2, 300)
        p = rng.choice(list(primerange(2, 500)))
        if N % p == 0:
            continue
        a = frobenius_cyclotomic(p, N)
        e, f, g = efg_data(AbelianGaloisDesc.cyclotomic(N), p)
        assert multiplicative_order(a, N) == f
        assert e == 1 and e * f * g == AbelianGaloisDesc.cyclotomic(N).degree
        done += 1


@pytest.mark.parametrize("D", [2, 3, 5, 13, 10])
def test_quadratic_efg_matches_ideals(D):
    F = make_field(D)
    for p in primerange(2, 60):
        assert efg_data(AbelianGaloisDesc.quadratic(D), p) == efg_data(F, p)
        assert efg_data(F, p)[2] == prime_splitting(F, p).g


def test_kronecker_small():
    assert kronecker(5, 11) == 1 and kronecker(5, 2) == -1 and kronecker(12, 3) == 0


# characters


def mod4():
    return DirichletCharacter.from_generators(4, {3: Fraction(1, 2)})


def test_artin_examples():
    triv = DirichletCharacter.trivial(1)
    for p in primerange(2, 100):
        assert artin_local_factor(triv, p).coeffs == (-1,)
    assert artin_local_factor(mod4(), 3).coeffs == (1,)
    chi5 = DirichletCharacter.from_generators(5, {2: Fraction(1, 4)})
    assert chi5.is_primitive()
    assert artin_local_factor(chi5, 5).coeffs == ()
    assert abs(chi5(2) - 1j) < 1e-15


def test_imprimitive_character_at_ramified_prime():
    # chi mod 12 induced from the character mod 4
    chi = DirichletCharacter.from_generators(12, {5: Fraction(0), 7: Fraction(1, 2)})
    assert chi.conductor() == 4
    assert artin_local_factor(chi, 3).coeffs == (1,)
    assert artin_local_factor(chi, 2).coeffs == ()


def test_character_rejects_bad_tables():
    with pytest.raises(ValueError):
        DirichletCharacter.from_generators(5, {2: Fraction(1, 3)})
    with pytest.raises(ValueError):
        DirichletCharacter.from_generators(8, {3: Fraction(1, 2)})
    with pytest.raises(ValueError):
        DirichletCharacter.from_generators(8, {2: Fraction(1, 2)})


@given(st.integers(3, 60), st.integers(0, 11))
def test_character_values_are_roots_of_unity(N, seed):
    from sympy.ntheory import primitive_root

    try:
        g = primitive_root(N)
    except ValueError:
        g = None
    if g is None or primitive_root(N) is None:
        return
    from sympy import totient

    phi = int(totient(N))
    chi = DirichletCharacter.from_generators(N, {g: Fraction(seed % phi, phi)})
    chi.check()
    for a in range(1, N):
        v = chi(a)
        assert v == 0 or abs(abs(v) - 1) < 1e-12
        if v != 0:
            assert abs(v ** chi.order() - 1) < 1e-9


def test_kronecker_character_matches_splitting():
    chi = DirichletCharacter.kronecker_character(5)
    assert chi.modulus == 5
    for p in primerange(2, 100):
        e, f, g = efg_data(AbelianGaloisDesc.quadratic(5), p)
        assert chi(p) == {(1, 1, 2): 1, (1, 2, 1): -1, (2, 1, 1): 0}[(e, f, g)]


# local factors from eigensystems


def test_eigensystem_factor_examples():
    es = level11(20)
    assert eigensystem_to_local_factor(es, "2").coeffs == (2, 2)
    assert eigensystem_to_local_factor(es, "3").coeffs == (1, 3)
    with pytest.raises(RamifiedError):
        eigensystem_to_local_factor(es, "11")
    with pytest.raises(RamifiedError):
        eigensystem_to_local_factor(es, "3", l=3)
    es0 = HeckeEigensystem(None, "1", weight_data((2,)), QQ, {"7": Fraction(0)}, {"7": Fraction(1)})
    assert eigensystem_to_local_factor(es0, "7").coeffs == (0, 7)


def test_factor_round_trip():
    es = level11(200)
    for q in es.theta_T:
        if q == "11":
            continue
        P = eigensystem_to_local_factor(es, q)
        assert P(0) == 1
        assert P.trace() == es.theta_T[q]
        assert P.det() == es.S(q) * int(q)
        assert P.degree == 2


def test_curve_examples():
    assert point_count_trace_oracle(CURVE_11, 2) == -2
    assert point_count_trace_oracle(CURVE_11, 3) == -1
    with pytest.raises(BadReductionError):
        point_count_trace_oracle(CURVE_11, 11)


def test_point_count_matches_brute_force():
    for p in primerange(2, 120):
        if p == 11:
            continue
        assert point_count_trace_oracle(CURVE_11, p) == p + 1 - brute_point_count(CURVE_11, p)


def test_modularity_level_11():
    es = level11(200)
    for p in primerange(2, 200):
        if p == 11:
            continue
        ap = point_count_trace_oracle(CURVE_11, p)
        assert es.theta_T[str(p)] == ap
        assert ap * ap <= 4 * p


# compatible systems


def test_cyclotomic_system():
    s3 = cyclotomic_system(3, 50)
    assert s3.factors["7"].coeffs == (-7,)
    assert "3" not in s3.factors
    assert s3.classification() == "integral"
    g = global_factors([s3, cyclotomic_system(5, 50)])
    assert g["3"].coeffs == (-3,) and g["5"].coeffs == (-5,)
    assert strict_compat_check(s3, cyclotomic_system(5, 50), 50).compatible


def test_compat_examples():
    es = level11(200)
    a, b = system_from_eigensystem(es, 3, 200), system_from_eigensystem(es, 5, 200)
    assert a.exceptional == ("11",)
    r = strict_compat_check(a, b, 200)
    assert r.compatible and r.lines()[-1] == "compatible through bound 200"
    bad = strict_compat_check(a, perturb(b, "13"), 200)
    assert not bad.compatible and bad.mismatch == "13"
    assert bad.lines()[-1] == "mismatch at 13"
    # a perturbation at l = 3 is ignored because p = 3 lies in S_3
    assert strict_compat_check(a, perturb(b, "3"), 200).compatible


def test_compat_symmetric_reflexive():
    rng = random.Random(9)
    es = level11(100)
    systems = [system_from_eigensystem(es, l, 100) for l in (3, 5, 7)]
    for _ in range(5):
        q = rng.choice([q for q in systems[0].factors if q not in ("3", "5", "7")])
        systems.append(perturb(systems[rng.randrange(3)], q, rng.choice([-1, 2])))
    for A in systems:
        assert strict_compat_check(A, A, 100).compatible
        for B in systems:
            assert strict_compat_check(A, B, 100).compatible == strict_compat_check(B, A, 100).compatible


def test_compat_needs_overlap():
    A = CompatibleSystem("a", "Q", 1, (), {"2": LocalFactor("2", (-2,), 2)})
    B = CompatibleSystem("b", "Q", 1, (), {"3": LocalFactor("3", (-3,), 3)})
    with pytest.raises(ValueError):
        strict_compat_check(A, B, 10)
