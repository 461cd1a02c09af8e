import warnings

import numpy as np
import pytest
from scipy.special import airy

from hirota_painleve.exceptions import InvalidInputError, RangeError
from hirota_painleve.painleve2 import (AblowitzSegurSolver, boundary_values, eval_table, leading_asymptote,
                                       linear_airy_solve, solve)


@pytest.fixture(scope="module")
def half():
    return solve(0.5)


class TestBoundaryValues:
    def test_zero_amplitude(self):
        assert boundary_values(0.0, 8.0) == (0.0, 0.0)

    def test_value_at_matching_point(self):
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 30
        y0, yp0 = boundary_values(0.5, 8.0)
        assert y0 == pytest.approx(-2.35e-8, rel=2e-3)
        assert y0 == pytest.approx(float(-0.5 * mpmath.airyai(8)), rel=1e-13)
        assert yp0 == pytest.approx(float(-0.5 * mpmath.airyai(8, derivative=1)), rel=1e-13)

    def test_close_to_leading_asymptote(self):
        # the truncated asymptote differs by O(s0^{-3/2}) relative
        y0, yp0 = boundary_values(0.5, 8.0)
        ya, ypa = leading_asymptote(0.5, 8.0)
        assert abs(y0 / ya - 1) < 8.0**-1.5
        assert abs(yp0 / ypa - 1) < 8.0**-1.5

    def test_linear_in_rho(self):
        unit = np.array(boundary_values(1 - 1e-16, 9.0))
        np.testing.assert_allclose(boundary_values(0.37, 9.0), 0.37 * unit, rtol=1e-14)

    @pytest.mark.parametrize("rho", [1.0, 1.5, -0.1, np.nan])
    def test_out_of_range(self, rho):
        with pytest.raises(RangeError):
            boundary_values(rho, 8.0)

    def test_matching_point_too_small(self):
        with pytest.raises(InvalidInputError):
            boundary_values(0.5, 3.0)


class TestSolve:
    def test_zero_amplitude(self):
        table = solve(0.0)
        assert not table.y.any() and not table.H.any()

    @pytest.mark.parametrize("rho", [0.1, 0.5, 0.9])
    def test_table_invariants(self, rho):
        table = solve(rho)
        assert table.max_residual < 1e-8
        assert np.all(np.diff(table.s_samples) <= 0.01 + 1e-12)
        y0, yp0 = boundary_values(rho, table.s0)
        assert table.y[-1] == pytest.approx(y0, rel=1e-10) and table.y_prime[-1] == pytest.approx(yp0, rel=1e-10)
        assert table.H[-1] == 0.0
        assert np.all(np.diff(table.H) <= 0) and np.all(table.H >= 0)
        assert np.max(np.abs(table.y) * (1 + np.abs(table.s_samples)) ** 0.25) <= 10

    def test_residual_at_random_points(self, half, rng):
        s = rng.uniform(half.s_min + 0.01, half.s0 - 0.01, 1000)
        assert half.residual(s).max() < 1e-8

    def test_matching_point_robustness(self, half):
        far = solve(0.5, s0=12.0)
        assert abs(eval_table(half, 0.0)[0] - eval_table(far, 0.0)[0]) < 1e-8

    def test_monotone_in_amplitude(self):
        s = np.linspace(0, 8, 161)
        ys = [np.abs(eval_table(solve(r), s)[0]) for r in (0.1, 0.5, 0.9)]
        assert np.all(ys[0] <= ys[1]) and np.all(ys[1] <= ys[2])

    def test_linearization_limit(self):
        rho = 1e-6
        table = solve(rho)
        lin = linear_airy_solve()
        s = table.s_samples[table.s_samples >= 0]
        ratio = table.y[-s.size:] / rho
        ref = lin(s)[0]
        assert np.max(np.abs(ratio - ref) / np.abs(ref)) < 1e-4
        # the linear solve itself reproduces -Ai on the same range
        assert np.max(np.abs(ref + airy(s)[0]) / airy(s)[0]) < 1e-6

    def test_negative_axis_amplitude_diagnostic(self, half):
        # recorded only; compared loosely with the known decay-rate constant
        expected = np.sqrt(-np.log(1 - 0.25) / np.pi)
        assert half.minus_infinity_amplitude == pytest.approx(expected, rel=0.05)

    @pytest.mark.parametrize("kwargs", [dict(s_min=1.0), dict(s0=7.0), dict(spacing=0.02)])
    def test_bad_arguments(self, kwargs):
        with pytest.raises(InvalidInputError):
            solve(0.5, **kwargs)


class TestEval:
    def test_at_matching_point(self, half):
        y, yp, H = eval_table(half, half.s0)
        assert (y, yp) == boundary_values(0.5, half.s0) and H == 0.0

    def test_exact_at_samples(self, half):
        i = 1234
        y, yp, H = eval_table(half, half.s_samples[i])
        assert (y, yp, H) == (half.y[i], half.y_prime[i], half.H[i])

    def test_spacing_refinement(self, half):
        finer = solve(0.5, spacing=0.005)
        assert abs(eval_table(half, 0.0)[0] - eval_table(finer, 0.0)[0]) < 1e-7

    def test_interpolation_matches_dense_solution(self, half, rng):
        s = rng.uniform(-14.9, 7.9, 200)
        assert np.max(np.abs(eval_table(half, s)[0] - half.dense(s)[0])) < 1e-8

    def test_out_of_range(self, half):
        with pytest.raises(RangeError):
            eval_table(half, -20.0)
        with pytest.raises(RangeError):
            eval_table(half, 8.5)


class TestEstimator:
    def test_predict_and_transform(self):
        est = AblowitzSegurSolver(rho=0.5).fit()
        assert est.predict([0.0])[0] == pytest.approx(-0.17898, abs=1e-5)
        assert est.transform([0.0, 1.0]).shape == (2, 3)

    def test_warns_near_one(self):
        with pytest.warns(RuntimeWarning, match="approaches"):
            AblowitzSegurSolver(rho=0.999).fit()

    def test_no_warning_for_moderate_rho(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            AblowitzSegurSolver(rho=0.5).fit()
