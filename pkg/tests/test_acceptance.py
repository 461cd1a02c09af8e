"""Acceptance criteria, one test per criterion at the stated tolerances.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Criteria 5 and 6 share one full-domain run of the validation pipeline
(about 15 minutes on one core).
"""

import numpy as np
import pytest

from hirota_painleve.asymptotics import m1_matrix, u_asymptotic, u_from_m1, xi_from_s
from hirota_painleve.harness import ExperimentConfig, fit_decay_exponent, signature_grid, validate
from hirota_painleve.painleve2 import eval_table, linear_airy_solve, solve
from hirota_painleve.pde_oracle import (SolverConfig, default_domain, evolve, linear_symbol, mass,
                                        sample_on_grid)
from hirota_painleve.core_numerics import Grid
from hirota_painleve.phase import HirotaParams, SpacetimePoint, scaled_coords, theta
from hirota_painleve.scattering import builtin_profile, default_k_grid, jost_transfer, scattering_data

PARAMS = HirotaParams(1.0, 1.0 / 3.0)
RESULTS = {}


def record(criterion, ok, detail):
    RESULTS[criterion] = (bool(ok), detail)
    assert ok, detail


@pytest.fixture(scope="module")
def validation_report():
    return validate(ExperimentConfig())


def test_criterion_1_scattering_unitarity(rng):
    profile = builtin_profile("sech", 0.5)
    data = scattering_data(profile, default_k_grid(), PARAMS)
    defect = float(data.unitarity_defect.max())
    k = rng.uniform(-10, 10, 100)
    det_err = float(np.max(np.abs(np.linalg.det(jost_transfer(profile, k)) - 1.0)))
    record(1, defect < 1e-8 and det_err < 1e-10,
           f"max ||a|^2-|b|^2-1| = {defect:.2e} (< 1e-8), max |det - 1| = {det_err:.2e} (< 1e-10)")


def test_criterion_2_exact_phase_rescaling(rng):
    # |kstar| <= 5/3 here; for |kstar| >~ 4 the subtraction itself loses more than 1e-12 of 1 + |t theta(k)|
    n = 10_000
    alpha = rng.uniform(-2, 2, n)
    beta = rng.uniform(0.2, 2, n)
    xi = rng.uniform(-5, 5, n)
    t = 10 ** rng.uniform(-1, 4, n)
    k = rng.uniform(-5, 5, n)
    worst = 0.0
    for a, b, x, tt, kk in zip(alpha, beta, xi, t, k):
        p = HirotaParams(a, b)
        sc = scaled_coords(SpacetimePoint(x * tt, tt), p)
        kh = sc.khat(kk)
        lhs = tt * theta(kk, p, x)
        rel = abs(lhs - tt * theta(p.kstar, p, x) - sc.s * kh - (4.0 / 3.0) * kh**3) / (1 + abs(lhs))
        worst = max(worst, float(rel))
    record(2, worst < 1e-12, f"max relative defect over 1e4 draws = {worst:.2e} (< 1e-12)")


def test_criterion_3_painleve_certification():
    details, ok = [], True
    for rho in (0.1, 0.5, 0.9):
        table = solve(rho, -15.0, 8.0)
        far = solve(rho, -15.0, 12.0)
        drift = abs(eval_table(table, 0.0)[0] - eval_table(far, 0.0)[0])
        ok &= table.max_residual < 1e-8 and drift < 1e-8
        details.append(f"rho={rho}: residual {table.max_residual:.1e}, s0 drift {drift:.1e}")
    tiny = solve(1e-6)
    s = tiny.s_samples[tiny.s_samples >= 0]
    ref = linear_airy_solve()(s)[0]
    lin = float(np.max(np.abs(tiny.y[-s.size:] / 1e-6 - ref) / np.abs(ref)))
    ok &= lin < 1e-4
    details.append(f"linearisation rel err {lin:.1e} (< 1e-4)")
    record(3, ok, "; ".join(details))


def test_criterion_4_pde_oracle_certification():
    profile = builtin_profile("sech", 0.4)
    domain = default_domain()
    start = sample_on_grid(profile, domain)
    end = evolve(profile, 50.0, SolverConfig(), PARAMS, domain)
    drift = abs(mass(end) - mass(start)) / mass(start)

    box = Grid(-64.0, 64.0, 2**10, periodic=True)
    dts = np.array([0.05, 0.025, 0.0125])
    ref = evolve(profile, 5.0, SolverConfig(dt=dts[0] / 32, edge_threshold=None), PARAMS, box).values
    errs = [np.abs(evolve(profile, 5.0, SolverConfig(dt=d, edge_threshold=None), PARAMS, box).values - ref).max()
            for d in dts]
    order = float(np.polyfit(np.log(dts), np.log(errs), 1)[0])

    eps = 1e-6
    gauss = lambda x: eps * np.exp(-(x**2))
    lin = evolve(gauss, 1.0, SolverConfig(dt=0.05, edge_threshold=None), PARAMS, box).values
    exact = np.fft.ifft(np.exp(linear_symbol(box.wavenumbers(), PARAMS)) * np.fft.fft(gauss(box.points)))
    lin_err = float(np.abs(lin - exact).max() / np.abs(exact).max())
    record(4, drift < 1e-6 and order >= 3.8 and lin_err < 1e-8,
           f"mass drift {drift:.1e} (< 1e-6), fitted order {order:.2f} (>= 3.8), linear-flow err {lin_err:.1e} (< 1e-8)")


def test_criterion_5_modulus_law(validation_report):
    last = validation_report["per_time"][-1]
    ratio = last["modulus_ratio_s0"]
    record(5, 0.9 <= ratio <= 1.1, f"t={last['t']:g}: |u_num| (3 beta t)^(1/3) / |y(0)| = {ratio:.4f} (in [0.9, 1.1])")


def test_criterion_6_error_decay_exponent(validation_report):
    samples = [(r["t"], r["max_err"]) for r in validation_report["per_time"]]
    fit = fit_decay_exponent(samples)
    errs = ", ".join(f"{e:.3e}" for _, e in samples)
    note = f", excluded t={list(fit.excluded)}" if fit.excluded else ""
    record(6, -0.9 <= fit.exponent <= -0.45 and fit.r_squared >= 0.9,
           f"max-over-s errors [{errs}]: exponent {fit.exponent:.3f} (in [-0.9, -0.45]), "
           f"r^2 {fit.r_squared:.3f} (>= 0.9){note}")


def test_criterion_7_m1_route_consistency(rng):
    table = solve(0.5)
    worst = 0.0
    for _ in range(100):
        s, t, gamma = rng.uniform(-4.9, 4.9), 10 ** rng.uniform(1, 4), rng.uniform(-np.pi, np.pi)
        p = SpacetimePoint(float(xi_from_s(s, t, PARAMS) * t), float(t))
        direct = u_asymptotic(p, PARAMS, table, gamma).u_asymp
        via_m1 = u_from_m1(m1_matrix(p, PARAMS, table, gamma), p, PARAMS)
        worst = max(worst, abs(via_m1 - direct) / abs(direct))
    record(7, worst < 1e-12, f"max relative mismatch over 100 points = {worst:.1e} (< 1e-12)")


def test_criterion_8_signature_table():
    ok, details = True, []
    for xi, real_expected in ((0.5, True), (1.5, False)):
        re, im, sign, roots = signature_grid(PARAMS, xi, resolution=101)
        grid = sign.reshape(101, 101)
        axis_zero = bool(np.any(im == 0) and np.all(sign[im == 0] == 0))
        antisym = bool(np.array_equal(grid, -grid[::-1]))
        is_real = roots.k1.imag == 0 and roots.k2.imag == 0
        conj_pair = roots.k1.imag < 0 and roots.k2 == np.conj(roots.k1)
        roots_ok = is_real if real_expected else conj_pair
        ok &= axis_zero and antisym and roots_ok
        details.append(f"xi={xi}: real-axis zero {axis_zero}, antisymmetric {antisym}, "
                       f"{'real' if real_expected else 'complex'} stationary points {roots_ok}")
    record(8, ok, "; ".join(details))
