from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feynpoly.poly import (
    MultiPoly,
    NotDivisible,
    exact_div,
    parse_poly,
    partial_derivative,
    poly_sum,
    set_var_zero,
    term_count,
    try_exact_div,
)

from conftest import polys

N = 3


def a(i, n=N):
    return MultiPoly.variable(n, i)


def test_text_format_descending_graded_lex():
    p = a(0) * a(1) + a(0) * a(2) + a(0) ** 2 * 3 - 2
    assert p.to_text() == "+3*a1^2+1*a1*a2+1*a1*a3-2"


def test_zero_prints_as_zero():
    assert MultiPoly.zero(2).to_text() == "0"
    assert parse_poly("0", 2).is_zero()


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_poly("+1*b1", 2)
    with pytest.raises(ValueError):
        parse_poly("+1*a3", 2)


def test_constant_and_degree():
    p = MultiPoly.constant(2, 5)
    assert p.degree() == 0 and p.constant_term() == 5
    assert MultiPoly.zero(2).degree() == -1
    assert (a(0) * a(1) ** 2).degree() == 3


def test_exact_division_and_remainder():
    p = (a(0) + a(1)) * (a(1) - a(2) * 3)
    assert exact_div(p, a(0) + a(1)) == a(1) - a(2) * 3
    with pytest.raises(NotDivisible):
        exact_div(p + 1, a(0) + a(1))
    assert try_exact_div(a(0), a(1)) is None
    with pytest.raises(ZeroDivisionError):
        exact_div(p, MultiPoly.zero(N))


def test_scale_div_requires_exact():
    assert (a(0) * 4 + 6).scale_div(2) == a(0) * 2 + 3
    with pytest.raises(NotDivisible):
        (a(0) * 3).scale_div(2)


def test_derivative_and_substitution():
    p = a(0) ** 3 * a(1) + a(1) * a(2)
    assert partial_derivative(p, 0) == a(0) ** 2 * a(1) * 3
    assert set_var_zero(p, 2) == a(0) ** 3 * a(1)
    assert p.evaluate([1, 2, Fraction(1, 2)]) == Fraction(3)


def test_variable_count_mismatch():
    with pytest.raises(ValueError):
        a(0, 2) + a(0, 3)
    assert a(0, 2).with_nvars(3) == a(0, 3)


def test_poly_sum_matches_fold():
    ps = [a(0) * k + a(1) ** k for k in range(5)]
    acc = MultiPoly.zero(N)
    for p in ps:
        acc = acc + p
    assert poly_sum(ps, N) == acc
    assert term_count(acc) == len(acc)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == MultiPoly.zero(N)
    assert p * 1 == p and p + 0 == p


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_exact_division_inverts_multiplication(p, q):
    if q.is_zero():
        return
    assert exact_div(p * q, q) == p


@settings(max_examples=60, deadline=None)
@given(polys())
def test_text_round_trip(p):
    assert parse_poly(p.to_text(), N) == p


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), st.integers(0, N - 1))
def test_leibniz_rule(p, q, i):
    assert (p * q).derivative(i) == p.derivative(i) * q + p * q.derivative(i)


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), st.lists(st.integers(-3, 3), min_size=N, max_size=N))
def test_evaluation_is_a_homomorphism(p, q, pt):
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)
