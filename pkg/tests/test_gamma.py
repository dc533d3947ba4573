import cmath
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from localfactors.errors import PoleAtSample
from localfactors.gamma import bernoulli, gamma, log_gamma, log_gamma_sum

COMPLEX = st.builds(complex, st.floats(-40, 60), st.floats(-80, 80)).filter(
    lambda z: not (abs(z.imag) < 1e-3 and z.real < 0.5))


def test_bernoulli_numbers():
    assert [bernoulli(n) for n in (0, 1, 2, 4, 6, 12)] == [
        1, Fraction(-1, 2), Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-691, 2730)]


@given(COMPLEX)
def test_log_gamma_matches_independent_oracle(z):
    expected = complex(mpmath.loggamma(mpmath.mpc(z.real, z.imag)))
    got = log_gamma(z)
    assert abs(got.real - expected.real) <= 1e-12 * max(1.0, abs(expected.real))
    assert abs(got.imag - expected.imag) <= 1e-12 * max(1.0, abs(expected.imag))


def test_half_and_integers():
    assert math.isclose(gamma(0.5).real, math.sqrt(math.pi), rel_tol=1e-14)
    for n in range(1, 20):
        assert math.isclose(gamma(n).real, math.factorial(n - 1), rel_tol=1e-13)


@given(st.builds(complex, st.floats(0.05, 40), st.floats(-60, 60)))
def test_recurrence(z):
    assert abs(cmath.exp(log_gamma(z + 1) - log_gamma(z)) - z) <= 1e-10 * abs(z)


@given(st.builds(complex, st.floats(0.05, 20), st.floats(-30, 30)))
def test_duplication(z):
    lhs = log_gamma(z) + log_gamma(z + 0.5)
    rhs = (1 - 2 * z) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * z)
    assert abs(cmath.exp(lhs - rhs) - 1) <= 1e-10


@given(st.builds(complex, st.floats(-10, 10), st.floats(0.1, 10)))
def test_reflection(z):
    prod = gamma(z) * gamma(1 - z)
    assert abs(prod * cmath.sin(math.pi * z) - math.pi) <= 1e-9 * math.pi


@pytest.mark.parametrize("z", [0, -1, -7, -30])
def test_poles(z):
    with pytest.raises(PoleAtSample):
        log_gamma(z)


def test_sum_is_permutation_invariant_bitwise():
    args = [1.5 + 2j, 0.3 - 1j, 4 + 0.1j, 2.2 + 0j]
    signs = [1, -1, 1, -1]
    a = log_gamma_sum(args, signs)
    b = log_gamma_sum(args[::-1], signs[::-1])
    assert a == b
