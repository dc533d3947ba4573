import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from localfactors.archimedean import (ArchPlaceParams, GammaRatio, PlaceKind, analytic_conductor,
                                      gamma_ratio_A, gamma_ratio_G, k_inf_leading, place_conductor_factor)

REAL = st.floats(-3, 3)


def test_ratio_a_worked_value():
    assert abs(gamma_ratio_A(0, 2, 0, 0) - 8 / 3) <= 1e-10 * 8 / 3


def test_ratio_g_complex_worked_value():
    assert abs(gamma_ratio_G("complex", 0.5, 0, 2) - math.pi ** 2 / 2) <= 1e-10 * math.pi ** 2 / 2


def test_ratio_g_real_against_independent_oracle():
    s, sp, w = mpmath.mpf("0.5") + 0.2j, mpmath.mpf("0.1"), mpmath.mpf(2)
    g = mpmath.gamma
    expected = (mpmath.pi ** (-sp) * g((sp + 1 - s) / 2) * g((sp + w - s) / 2) * g((sp + s) / 2)
                * g((sp + w + s - 1) / 2) / (g(w / 2) * g(sp + w / 2)))
    got = gamma_ratio_G(PlaceKind.REAL, complex(s), float(sp), float(w))
    assert abs(got - complex(expected)) <= 1e-12 * abs(complex(expected))


@given(st.builds(complex, st.floats(0, 1), st.floats(-2, 2)), st.builds(complex, st.floats(1, 3), st.floats(-2, 2)),
       st.builds(complex, REAL, st.floats(-0.3, 0.3)), st.builds(complex, REAL, st.floats(-0.3, 0.3)))
def test_ratio_a_symmetries_are_exact(sp, w, mu1, mu2):
    a = gamma_ratio_A(sp, w, mu1, mu2)
    assert gamma_ratio_A(sp, w, -mu1, mu2) == a
    assert gamma_ratio_A(sp, w, mu1, -mu2) == a
    assert gamma_ratio_A(sp, w, -mu1, -mu2) == a


@given(st.builds(complex, st.floats(0.2, 0.8), st.floats(-20, 20)), st.floats(1.1, 3))
def test_ratio_g_reflection(s, w):
    for kind in PlaceKind:
        a, b = gamma_ratio_G(kind, s, 0, w), gamma_ratio_G(kind, 1 - s, 0, w)
        assert abs(a - b) <= 1e-12 * abs(a)


def test_conductor_factors():
    real = ArchPlaceParams("real", t=2.0, t_v=-5.0)
    cplx = ArchPlaceParams("complex", t=2.0, t_v=0.5, ell_v=3)
    assert place_conductor_factor(real) == 4.0
    assert place_conductor_factor(cplx) == 1 + 9 + 4 * 2.5 ** 2
    assert analytic_conductor([real, cplx], t=0.0) == 6.0 * (1 + 9 + 1)
    with pytest.raises(ValueError):
        ArchPlaceParams("real", ell_v=1)


def test_leading_kernel_factorizes_through_conductor():
    place = ArchPlaceParams("complex", t=3.0, t_v=1.0, ell_v=2, mu1=0.4, mu2=-1.0, w=1.2)
    lead = k_inf_leading(place, 0.25)
    const = math.pi ** 0.5 * gamma_ratio_A(0.25, 1.2, 0.4, -1.0)
    assert abs(lead - const * place_conductor_factor(place) ** -1.2) <= 1e-13 * abs(lead)


def test_real_place_needs_supplied_ratio():
    place = ArchPlaceParams("real", t=1.0, w=1.5)
    with pytest.raises(ValueError):
        k_inf_leading(place, 0.1)
    ratio = GammaRatio(lambda sp, w, m1, m2: [w + sp], lambda sp, w, m1, m2: [2 * w])
    expected = complex(mpmath.gamma(1.6) / mpmath.gamma(3.0)) * 2.0 ** -1.5
    assert abs(k_inf_leading(place, 0.1, ratio) - expected) < 1e-13
