import cmath
import math
import random

import numpy as np
import pytest

from hilbertmf.fourier import (
    FourierSeries,
    TranslationModule,
    dual_lattice,
    enumerate_totally_positive,
    eval_series,
    koecher_filter,
    numeric_fourier_coefficient,
)
from hilbertmf.ideals import IdealHNF, different_ideal
from hilbertmf.quadfield import make_field

from oracles import omega_roots


def module(F, x=1):
    return TranslationModule.from_ideal(IdealHNF.principal(F(x)))


def test_dual_of_integers(F5):
    O = module(F5)
    dual = dual_lattice(O)
    assert dual == TranslationModule.from_ideal(IdealHNF.principal(F5.sqrtD).inverse())
    # trace pairing against the basis {1, w} is integral on the dual basis
    for nu in dual.basis:
        assert nu.trace().denominator == 1
        assert (nu * F5.omega).trace().denominator == 1
    assert dual.to_ideal().inverse() == different_ideal(F5)


def test_dual_scaling(F5):
    dual2 = dual_lattice(module(F5, 2))
    assert dual2 == dual_lattice(module(F5)).scaled(F5(1, 0) / 2)


@pytest.mark.parametrize("D", [2, 5, 10, 13])
def test_double_dual(D):
    F = make_field(D)
    rng = random.Random(D)
    for _ in range(20):
        b1 = F(rng.randint(-5, 5), rng.randint(-5, 5))
        b2 = F(rng.randint(-5, 5), rng.randint(-5, 5))
        if b1.a * b2.b - b1.b * b2.a == 0:
            continue
        t = TranslationModule((b1, b2))
        assert dual_lattice(dual_lattice(t)) == t
        assert dual_lattice(t).covolume() == pytest.approx(1 / t.covolume())


def brute_totally_positive(F, lattice, T):
    """Scan a coordinate box wide enough to hold every point with both embeddings in (0, T]."""
    (p1, p2), (q1, q2) = (b.floats() for b in lattice.basis)
    det = abs(p1 * q2 - p2 * q1)
    box = int(T * (abs(p1) + abs(p2) + abs(q1) + abs(q2)) / det) + 2
    b1, b2 = lattice.basis
    out = set()
    for m in range(-box, box + 1):
        for n in range(-box, box + 1):
            e1, e2 = m * p1 + n * q1, m * p2 + n * q2
            if e1 > -1e-9 and e2 > -1e-9 and e1 + e2 <= T + 1e-9:
                x = b1 * m + b2 * n
                if x.is_totally_positive() and x.trace() <= T:
                    out.add(x)
    return out


def test_enumerate_examples(F5):
    assert enumerate_totally_positive(module(F5), 2) == [F5.one]
    assert enumerate_totally_positive(module(F5), 3) == [F5.one, F5(2, -1), F5(1, 1)]
    assert enumerate_totally_positive(module(F5), 1.5) == []


@pytest.mark.parametrize("D", [2, 5, 13])
@pytest.mark.parametrize("dual", [False, True])
def test_enumerate_matches_brute_force(D, dual):
    F = make_field(D)
    t = module(F)
    lat = dual_lattice(t) if dual else t
    for T in (3, 8, 20):
        assert set(enumerate_totally_positive(lat, T)) == brute_totally_positive(F, lat, T)


@pytest.mark.parametrize("D", [2, 5, 13])
def test_unit_representatives(D):
    F = make_field(D)
    e = F.totally_positive_unit_generator()
    lat = dual_lattice(module(F))
    T = 10
    full = set(enumerate_totally_positive(lat, T))
    reps = enumerate_totally_positive(lat, T, mod_units=True)
    rebuilt = set()
    for xi in reps:
        for n in range(-8, 9):
            y = xi * e**n
            if y.trace() <= T:
                rebuilt.add(y)
    assert rebuilt == full
    # no two representatives share an orbit
    for i, x in enumerate(reps):
        for y in reps[i + 1 :]:
            q = x / y
            assert not (q.is_unit() and q.is_totally_positive())


def test_koecher(F5):
    t = module(F5)
    nu = dual_lattice(t).basis[0]
    bad = nu if not nu.is_totally_positive() else -nu
    with pytest.raises(ValueError):
        FourierSeries(t, {bad: 1.0})
    with pytest.raises(ValueError):
        FourierSeries(t, {F5(1, 0) / 3: 1.0})
    f = koecher_filter(t, {bad: 1.0, F5.one: 2.0, F5.zero: 3.0})
    assert set(f.coefficients) == {F5.one, F5.zero}
    assert koecher_filter(t, f.coefficients).coefficients == f.coefficients


def test_constant_and_single_term(F5):
    t = module(F5)
    f = FourierSeries(t, {F5.zero: 2.5})
    assert f((0.3 + 1j, -0.2 + 0.4j)) == 2.5
    nu = F5.one
    g = FourierSeries(t, {nu: 1.5 - 1j})
    z = (0.1 + 0.7j, 0.4 + 1.1j)
    n1, n2 = nu.floats()
    direct = (1.5 - 1j) * cmath.exp(2j * math.pi * (n1 * z[0] + n2 * z[1]))
    assert abs(g(z) - direct) < 1e-12
    with pytest.raises(ValueError):
        g((0.1 + 0.7j, 0.4 - 1j))


def random_series(F, rng, T=4, size=6):
    t = module(F)
    support = enumerate_totally_positive(dual_lattice(t), T)
    chosen = rng.sample(support, min(size, len(support)))
    coeffs = {nu: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for nu in chosen}
    coeffs[F.zero] = complex(rng.uniform(-1, 1), 0)
    return FourierSeries(t, coeffs), support


def test_periodicity(F5, rng):
    f, _ = random_series(F5, rng)
    z = (0.13 + 0.8j, -0.4 + 0.6j)
    for a in (F5.one, F5.omega, F5(3, -2)):
        a1, a2 = a.floats()
        assert abs(f(z) - f((z[0] + a1, z[1] + a2))) < 1e-10


def test_vectorised_evaluation(F5, rng):
    f, _ = random_series(F5, rng)
    z1 = np.array([0.1 + 1j, 0.2 + 0.5j])
    z2 = np.array([0.3 + 0.9j, -0.1 + 0.7j])
    vec = eval_series(f, (z1, z2)).value
    for i in range(2):
        assert abs(vec[i] - f((z1[i], z2[i]))) < 1e-14


def test_tail_estimate(F5):
    t = module(F5)
    support = enumerate_totally_positive(dual_lattice(t), 12)
    f = FourierSeries(t, {nu: 1.0 for nu in support})
    z = (0.2 + 0.3j, 0.1 + 0.3j)
    cut = eval_series(f, z, truncation=4, decay=(1.0, 0.0))
    full = eval_series(f, z)
    assert abs(full.value - cut.value) <= cut.tail


@pytest.mark.parametrize("D", [5, 13])
def test_coefficient_round_trip(D):
    F = make_field(D)
    rng = random.Random(D)
    f, support = random_series(F, rng)
    g = lambda z: eval_series(f, z).value
    y = (0.4, 0.3)
    for nu in support[:8]:
        est = numeric_fourier_coefficient(g, nu, y, f.lattice)
        assert abs(est.value - f.coefficients.get(nu, 0)) < 1e-6
        assert est.converged(1e-8)
    est0 = numeric_fourier_coefficient(g, F.zero, y, f.lattice)
    assert abs(est0.value - f.coefficients[F.zero]) < 1e-6


def test_coefficient_independent_of_y(F5, rng):
    f, support = random_series(F5, rng)
    g = lambda z: eval_series(f, z).value
    for nu in support[:5]:
        a = numeric_fourier_coefficient(g, nu, (0.5, 0.4), f.lattice).value
        b = numeric_fourier_coefficient(g, nu, (0.9, 0.7), f.lattice).value
        assert abs(a - b) < 1e-5


def test_coarse_grid_is_reported(F5):
    t = module(F5)
    support = enumerate_totally_positive(dual_lattice(t), 40)
    f = FourierSeries(t, {nu: 1.0 for nu in support})
    g = lambda z: eval_series(f, z).value
    est = numeric_fourier_coefficient(g, F5.one, (0.05, 0.05), t, grid=4)
    assert est.disagreement > 1e-3


def test_smallest_dual_elements(F5):
    pair = enumerate_totally_positive(dual_lattice(module(F5)), 1)
    assert pair == [F5(3, -1) / 5, F5(2, 1) / 5]
    assert pair[0] == pair[1].conjugate()
    w1, w2 = omega_roots(5)
    assert pair[1].floats()[0] == pytest.approx(0.4 + 0.2 * w1)
    assert pair[1].floats()[1] == pytest.approx(0.4 + 0.2 * w2)
