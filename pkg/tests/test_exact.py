"""Exact-arithmetic layer: polynomials, series, Bernoulli data."""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import akiyama_tanigawa
from horolab import (
    PowerSeries,
    RationalPolynomial,
    bernoulli_number,
    bernoulli_polynomial,
    distribution_relation_check,
    format_rational,
    parse_rational,
    periodic_bernoulli,
    residue_generating_series,
)
from horolab.exact import exp_minus_one_over_z, exp_series

rationals = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)


def test_rational_strings():
    assert format_rational(Fraction(-1)) == "-1/1"
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert parse_rational("2/4") == Fraction(1, 2)
    assert parse_rational("-3") == Fraction(-3)
    with pytest.raises(TypeError):
        parse_rational(3)


def test_polynomial_basics():
    p = RationalPolynomial([1, 0, 3])
    assert p.degree == 2
    assert p(Fraction(1, 2)) == Fraction(7, 4)
    assert p.derivative() == RationalPolynomial([0, 6])
    assert RationalPolynomial([]).degree == -1
    assert (p - p).degree == -1
    q = RationalPolynomial([0, 1])
    assert (p * q).coeffs == (Fraction(0), Fraction(1), Fraction(0), Fraction(3))


def test_bernoulli_polynomial_small_degrees():
    assert bernoulli_polynomial(0).coeffs == (Fraction(1),)
    assert bernoulli_polynomial(2).coeffs == (Fraction(1, 6), Fraction(-1), Fraction(1))
    assert bernoulli_polynomial(3).coeffs == (
        Fraction(0),
        Fraction(1, 2),
        Fraction(-3, 2),
        Fraction(1),
    )
    assert bernoulli_polynomial(3)(Fraction(1, 3)) == Fraction(1, 27)


def test_bernoulli_numbers_against_independent_oracle():
    oracle = akiyama_tanigawa(30)  # B1 = +1/2 in that convention
    for k in range(31):
        expected = -oracle[k] if k == 1 else oracle[k]
        assert bernoulli_number(k) == expected
        assert bernoulli_polynomial(k)(Fraction(0)) == expected


def test_bernoulli_polynomial_against_generating_function():
    # Expand t*exp(t*x0)/(exp(t)-1) at fixed rational x0 by plain series
    # arithmetic and compare coefficients times k! with polynomial evaluation.
    order = 12
    for x0 in (Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 7)):
        series = exp_series(x0, order) * exp_minus_one_over_z(order).inverse()
        fact = 1
        for k in range(order + 1):
            if k:
                fact *= k
            assert series.coefficient(k) * fact == bernoulli_polynomial(k)(x0)


def test_bernoulli_derivative_and_difference_relations():
    for k in range(1, 31):
        assert bernoulli_polynomial(k).derivative() == k * bernoulli_polynomial(k - 1)
        diff = bernoulli_polynomial(k)(Fraction(1)) - bernoulli_polynomial(k)(Fraction(0))
        assert diff == (1 if k == 1 else 0)


def test_periodic_bernoulli_examples():
    assert periodic_bernoulli(2, Fraction(7, 3)) == Fraction(-1, 18)
    assert periodic_bernoulli(3, 0) == 0
    assert periodic_bernoulli(1, Fraction(-1, 4)) == Fraction(1, 4)


@given(k=st.integers(min_value=0, max_value=8), x=rationals, shift=st.integers(-3, 3))
def test_periodic_bernoulli_is_periodic(k, x, shift):
    assert periodic_bernoulli(k, x + shift) == periodic_bernoulli(k, x)


def test_distribution_relation_examples():
    check = distribution_relation_check(2, 2, 0)
    assert check.equal and check.lhs == Fraction(1, 12)
    check = distribution_relation_check(0, 5, 0)
    assert check.equal and check.lhs == 5
    assert distribution_relation_check(3, 3, Fraction(1, 2)).equal
    with pytest.raises(ValueError):
        distribution_relation_check(2, 2, Fraction(3, 2))


def test_distribution_relation_grid():
    for k in range(0, 7):
        for m in range(1, 5):
            for x in (Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)):
                assert distribution_relation_check(k, m, x).equal


def test_residue_generating_series_examples():
    lhs, rhs = residue_generating_series(0, 1, 0)
    assert lhs.coeffs == rhs.coeffs == (Fraction(-1, 2),)
    lhs, rhs = residue_generating_series(1, 2, 3)
    assert lhs.coeffs == rhs.coeffs
    lhs, rhs = residue_generating_series(1, 3, 20)
    assert lhs.coeffs == rhs.coeffs
    with pytest.raises(ValueError):
        residue_generating_series(3, 3, 5)


def test_power_series_basics():
    f = exp_series(1, 6)
    assert f.coefficient(3) == Fraction(1, 6)
    assert (f * f.inverse()).coeffs == PowerSeries.one(6).coeffs
    with pytest.raises(ValueError):
        PowerSeries([0, 1], 1).inverse()
    with pytest.raises(ValueError):
        PowerSeries([1, 1], 1).exp()
    with pytest.raises(ValueError):
        PowerSeries([0, 1], 1).log()
    assert f.derivative().coeffs == exp_series(1, 5).coeffs


def test_power_series_composition():
    order = 8
    f = exp_series(1, order)
    g = (PowerSeries.one(order) + PowerSeries([0, 1], order)).log()  # log(1+z)
    assert f.compose(g).coeffs == (PowerSeries.one(order) + PowerSeries([0, 1], order)).coeffs
    with pytest.raises(ValueError):
        f.compose(PowerSeries.one(3))


@settings(deadline=None, max_examples=60)
@given(coeffs=st.lists(rationals, min_size=1, max_size=7))
def test_power_series_exp_log_roundtrip(coeffs):
    order = len(coeffs)
    f = PowerSeries([Fraction(0)] + coeffs, order)
    one_plus = PowerSeries.one(order) + f
    assert one_plus.log().exp().coeffs == one_plus.coeffs
    assert f.exp().log().coeffs == f.coeffs


def test_bernoulli_cache_is_thread_safe():
    import horolab.exact as exact

    with exact._bernoulli_lock:
        pass  # the lock exists and is reentrant-free
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(lambda k: bernoulli_polynomial(25)(Fraction(k, 7)), range(16)))
    expected = [bernoulli_polynomial(25)(Fraction(k, 7)) for k in range(16)]
    assert results == expected
