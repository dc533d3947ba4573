import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from localfactors import bounds
from localfactors.errors import NonAdmissibleWarning

ADMISSIBLE = st.fractions(min_value=Fraction(11, 18), max_value=1).filter(lambda d: Fraction(11, 18) < d < 1)
DEGREES = st.integers(1, 8)


def test_examples():
    assert bounds.convexity_exponent(1) == Fraction(1, 2)
    assert bounds.theta(Fraction(7, 10)) == Fraction(4, 5)
    assert bounds.theta("7/10") == Fraction(4, 5)
    assert bounds.subconvex_exponent(1, Fraction(7, 10)) == Fraction(2, 5)
    assert bounds.beta_prime_choice(2, Fraction(1, 10)) == Fraction(21, 20)
    assert bounds.beta_prime_choice(3, Fraction(2, 10)) == Fraction(21, 20)
    assert bounds.optimal_H(1, Fraction(7, 10)) == 1
    assert abs(bounds.optimal_H(1e6, Fraction(7, 10)) / 10 ** 4.8 - 1) < 1e-12


def test_boundary_values_warn():
    with pytest.warns(NonAdmissibleWarning):
        assert bounds.theta(Fraction(11, 18)) == Fraction(20, 27)
    with pytest.warns(NonAdmissibleWarning):
        assert bounds.subconvex_exponent(2, 1) == 1
    with pytest.raises(ValueError):
        bounds.theta(Fraction(1, 2))


def test_degree_one_beta_is_rejected():
    with pytest.raises(ValueError):
        bounds.beta_prime_choice(1, Fraction(1, 10))
    with pytest.raises(ValueError):
        bounds.beta_prime_choice(2, 0)


@given(DEGREES, ADMISSIBLE)
def test_subconvex_gap_is_exact(d, d0):
    th = bounds.theta(d0)
    assert Fraction(20, 27) < th < 1
    assert bounds.convexity_exponent(d) - bounds.subconvex_exponent(d, d0) == (1 - th) / 2
    assert bounds.savings(d, d0) == (1 - th) / 2 > 0


@given(ADMISSIBLE, ADMISSIBLE)
def test_theta_monotone_and_savings_decreasing(a, b):
    if a == b:
        return
    lo, hi = sorted((a, b))
    assert bounds.theta(lo) < bounds.theta(hi)
    assert bounds.savings(3, lo) > bounds.savings(3, hi)


@given(st.integers(2, 8), ADMISSIBLE, st.fractions(min_value=Fraction(1, 1000), max_value=1))
def test_chain_exponent(d, d0, eps):
    if eps <= 0:
        return
    assert bounds.chain_exponent(d, d0, eps) == d - 1 + bounds.theta(d0) + eps / 2


@given(st.floats(1e-3, 1e12), ADMISSIBLE)
def test_window_balance(x, d0):
    H = bounds.optimal_H(x, d0)
    assert abs(x ** float(2 * d0 + 1) / H / (H * H) - 1) <= 1e-12


def test_results_are_exact_rationals():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert isinstance(bounds.savings(5, Fraction(3, 4)), Fraction)
    assert bounds.as_fraction(0.7) == Fraction(7, 10)
