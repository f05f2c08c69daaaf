from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hilbertmf.quadfield import (
    FieldElement,
    SearchBoundExceeded,
    format_element,
    make_field,
    parse_element,
    parse_field,
)

from oracles import brute_fundamental_unit, brute_norm, omega_roots

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
integers = st.integers(-40, 40)
fields = st.sampled_from([2, 3, 5, 6, 7, 10, 13])


def elements(D, coords=rationals):
    return st.builds(lambda a, b: FieldElement(make_field(D), a, b), coords, coords)


@pytest.mark.parametrize("D, disc, half", [(5, 5, True), (2, 8, False), (13, 13, True), (10, 40, False)])
def test_make_field(D, disc, half):
    F = make_field(D)
    assert F.disc == disc
    assert F.omega_half is half


@pytest.mark.parametrize("D", [0, 1, 4, 12, -5])
def test_make_field_rejects(D):
    with pytest.raises(ValueError):
        make_field(D)


def test_omega_satisfies_min_poly():
    for D in (2, 3, 5, 13, 17):
        F = make_field(D)
        w = F.omega
        if D % 4 == 1:
            assert w * w - w - (D - 1) // 4 == F.zero
        else:
            assert w * w == F(D)


def test_embeddings_examples(F5):
    w1, w2 = F5.omega.embeddings()
    assert float(w1) == pytest.approx(1.6180339887, abs=1e-10)
    assert float(w2) == pytest.approx(-0.6180339887, abs=1e-10)
    assert tuple(float(x) for x in F5.one.embeddings()) == (1.0, 1.0)
    r1, r2 = omega_roots(5)
    x = F5(3, 2).embeddings()
    assert float(x[0]) == pytest.approx(3 + 2 * r1, abs=1e-12)
    assert float(x[1]) == pytest.approx(3 + 2 * r2, abs=1e-12)


def test_norm_trace_examples(F5):
    assert F5.omega.norm() == -1
    assert F5.omega.trace() == 1
    assert F5(2).norm() == 4 and F5(2).trace() == 4
    assert F5(3, 1).norm() == 11 == brute_norm(5, 3, 1)


@given(fields.flatmap(lambda D: st.tuples(elements(D), elements(D))))
def test_norm_multiplicative_trace_additive(pair):
    x, y = pair
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


@given(fields.flatmap(lambda D: st.tuples(elements(D), elements(D))))
def test_embeddings_are_homomorphic(pair):
    x, y = pair
    for j in range(2):
        s = float((x + y).embeddings()[j])
        p = float((x * y).embeddings()[j])
        xj, yj = float(x.embeddings()[j]), float(y.embeddings()[j])
        assert s == pytest.approx(xj + yj, rel=1e-10, abs=1e-10)
        assert p == pytest.approx(xj * yj, rel=1e-10, abs=1e-10)


@given(fields.flatmap(lambda D: elements(D)))
def test_inverse(x):
    if x:
        assert x * x.inverse() == x.field.one


@pytest.mark.parametrize("D", [2, 3, 5, 6, 10, 13])
def test_fundamental_unit_matches_brute_force(D):
    F = make_field(D)
    u = F.fundamental_unit()
    assert abs(u.norm()) == 1
    assert (int(u.a), int(u.b)) == brute_fundamental_unit(D)


def test_fundamental_unit_examples():
    assert make_field(5).fundamental_unit() == make_field(5).omega
    F2 = make_field(2)
    assert F2.fundamental_unit() == F2(1, 1)
    F10 = make_field(10)
    assert F10.fundamental_unit() == F10(3, 1)


def test_fundamental_unit_search_budget():
    with pytest.raises(SearchBoundExceeded):
        make_field(94).fundamental_unit(bound=100)


def test_total_positivity(F5):
    assert not F5.omega.is_totally_positive()
    assert F5(2, 1).is_totally_positive()
    assert F5.totally_positive_unit_generator() == F5(1, 1)
    assert F5.totally_positive_unit_generator() == F5.omega**2


@given(fields.flatmap(lambda D: elements(D, integers)), st.integers(-3, 3))
def test_total_positivity_unit_square_invariant(x, n):
    e = x.field.fundamental_unit() ** n
    assert x.is_totally_positive() == (e * e * x).is_totally_positive()


def test_total_positivity_is_exact_near_zero():
    F = make_field(2)
    # 3363 - 2378 sqrt 2 is about 1.5e-4 > 0 and its conjugate is large
    x = F(3363, -2378)
    assert x.sign(0) == 1 and x.sign(1) == 1
    assert x.is_totally_positive()


@given(fields.flatmap(lambda D: elements(D)))
def test_element_format_round_trip(x):
    assert parse_element(x.field, format_element(x)) == x


def test_element_grammar(F5):
    assert format_element(F5(Fraction(1, 2), Fraction(-3, 4))) == "1/2 - 3/4*w"
    assert parse_element(F5, "1-w") == F5(1, -1)
    assert parse_element(F5, "w") == F5.omega
    with pytest.raises(ValueError):
        parse_element(F5, "2*x")


def test_field_grammar():
    assert str(make_field(7)) == "Q(sqrt 7)"
    assert parse_field("Q(sqrt 7)") is make_field(7)
