import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hirota_painleve.exceptions import InvalidInputError
from hirota_painleve.phase import (HirotaParams, Region, SpacetimePoint, TransitionRegion, classify_region,
                                   scaled_coords, signature_sign, stationary_points, theta, theta_prime,
                                   theta_second)

alphas = st.floats(-3, 3)
betas = st.floats(0.05, 3)


def test_beta_must_be_positive():
    with pytest.raises(InvalidInputError):
        HirotaParams(1.0, 0.0)


def test_time_must_be_positive():
    with pytest.raises(InvalidInputError):
        SpacetimePoint(1.0, 0.0)


def test_region_bound_positive():
    with pytest.raises(InvalidInputError):
        TransitionRegion(0.0)


class TestTheta:
    def test_substitution(self, standard_params):
        assert theta(1.0, standard_params, 1.0) == pytest.approx(13.0 / 3.0)

    def test_zero(self, standard_params):
        assert theta(0.0, standard_params, 7.0) == 0.0

    def test_imaginary_argument(self):
        assert theta(1j, HirotaParams(0.0, 1.0), 0.0) == pytest.approx(-4j)

    def test_second_derivative_vanishes_at_kstar(self):
        p = HirotaParams(1.3, 0.7)
        assert abs(theta_second(p.kstar, p)) < 1e-12


class TestStationaryPoints:
    def test_real_roots(self, standard_params):
        sp = stationary_points(standard_params, 0.0)
        assert (sp.k1, sp.k2) == (pytest.approx(-1.0), pytest.approx(0.0))
        assert not sp.degenerate

    def test_degenerate_at_critical_velocity(self, standard_params):
        sp = stationary_points(standard_params, standard_params.xi_critical)
        assert sp.degenerate
        assert sp.k1 == sp.k2 == pytest.approx(standard_params.kstar)

    def test_purely_imaginary_pair(self):
        p = HirotaParams(0.0, 1.0)
        sp = stationary_points(p, 3.0)
        assert sp.k1 == pytest.approx(-0.5j)
        assert sp.k2 == pytest.approx(0.5j)
        assert abs(theta_prime(sp.k1, p, 3.0)) < 1e-12

    @settings(max_examples=1000, deadline=None)
    @given(alphas, betas, st.floats(-20, 20))
    def test_roots_vanish_and_sum(self, a, b, xi):
        p = HirotaParams(a, b)
        sp = stationary_points(p, xi)
        assert abs(sp.k1 + sp.k2 + a / (3 * b)) < 1e-12 * (1 + abs(a / b))
        scale = 1 + 12 * b * abs(sp.k1) ** 2 + 4 * abs(a * sp.k1) + abs(xi)
        assert abs(theta_prime(sp.k1, p, xi)) < 1e-10 * scale
        assert abs(theta_prime(sp.k2, p, xi)) < 1e-10 * scale
        if xi < p.xi_critical and not sp.degenerate:
            assert sp.k1.imag == sp.k2.imag == 0 and sp.k1.real <= sp.k2.real
        elif xi > p.xi_critical and not sp.degenerate:
            assert sp.k1.imag < 0 and sp.k2 == np.conj(sp.k1)


class TestScaledCoords:
    def test_s_value(self, standard_params):
        sc = scaled_coords(SpacetimePoint(1010.0, 1000.0), standard_params)
        assert sc.s == pytest.approx(1.0)

    def test_s_zero_on_ray(self, standard_params):
        assert scaled_coords(SpacetimePoint(1000.0, 1000.0), standard_params).s == 0.0

    def test_khat(self, standard_params):
        sc = scaled_coords(SpacetimePoint(1000.0, 1000.0), standard_params)
        assert sc.khat(standard_params.kstar + 0.1) == pytest.approx(1.0)

    @settings(max_examples=300, deadline=None)
    @given(alphas, betas, st.floats(-5, 5), st.floats(0.1, 1e4), st.floats(-5, 5))
    def test_cubic_rescaling_identity(self, a, b, xi, t, k):
        p = HirotaParams(a, b)
        sc = scaled_coords(SpacetimePoint(xi * t, t), p)
        kh = sc.khat(k)
        lhs = t * theta(k, p, xi) - t * theta(p.kstar, p, xi)
        rhs = sc.s * kh + (4.0 / 3.0) * kh**3
        assert abs(lhs - rhs) / (1 + abs(t * theta(k, p, xi)) + abs(t * theta(p.kstar, p, xi))) < 1e-12


    @settings(max_examples=500, deadline=None)
    @given(alphas, betas, st.floats(-5, 5), st.floats(0.1, 1e4), st.floats(-5, 5))
    def test_rescaling_defect_is_roundoff(self, a, b, xi, t, k):
        # measured against the size of the terms that are subtracted
        p = HirotaParams(a, b)
        sc = scaled_coords(SpacetimePoint(xi * t, t), p)
        kh = sc.khat(k)
        terms = [t * theta(k, p, xi), t * theta(p.kstar, p, xi), sc.s * kh, (4.0 / 3.0) * kh**3]
        defect = abs(terms[0] - terms[1] - terms[2] - terms[3])
        assert defect <= 64 * np.finfo(float).eps * (1 + sum(abs(v) for v in terms))


class TestClassifyRegion:
    @pytest.mark.parametrize("xi, expected", [(0.99, Region.P_LE), (1.2, Region.OUTSIDE), (1.01, Region.P_GE),
                                              (1.0, Region.P_LE)])
    def test_examples(self, standard_params, xi, expected):
        got = classify_region(SpacetimePoint(xi * 1000.0, 1000.0), standard_params, TransitionRegion(5.0))
        assert got is expected

    @settings(max_examples=200, deadline=None)
    @given(st.floats(1e-6, 0.5), st.floats(1.0, 1e4))
    def test_mirror_symmetry(self, offset, t):
        p, region = HirotaParams(1.0, 1.0 / 3.0), TransitionRegion(5.0)
        # offsets are exact binary multiples so the mirrored xi is exact
        offset = np.ldexp(np.round(np.ldexp(offset, 20)), -20)
        left = classify_region(SpacetimePoint((1.0 - offset) * t, t), p, region)
        right = classify_region(SpacetimePoint((1.0 + offset) * t, t), p, region)
        swap = {Region.P_LE: Region.P_GE, Region.P_GE: Region.P_LE, Region.OUTSIDE: Region.OUTSIDE}
        assert swap[left] is right


class TestSignature:
    def test_real_axis_is_zero(self, standard_params):
        assert np.all(signature_sign(np.linspace(-3, 3, 41), standard_params, 0.7) == 0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-3, 3), st.floats(0.01, 3), st.floats(-3, 3))
    def test_conjugate_antisymmetry(self, re, im, xi):
        p = HirotaParams(1.0, 1.0 / 3.0)
        k = re + 1j * im
        assert signature_sign(np.conj(k), p, xi) == -signature_sign(k, p, xi)

    def test_matches_direct_complex_arithmetic(self):
        k = 0.1j
        direct = (1j * 4.0 * k**3).real
        assert signature_sign(k, HirotaParams(0.0, 1.0), 0.0) == np.sign(direct)
