"""Real Ablowitz-Segur-type solutions of Painleve II, ``y'' = s y + 2 y^3``.

The solution is selected by its decay as ``s -> +inf``,

    y(s) ~ -(rho / (2 sqrt(pi))) s^{-1/4} exp(-(2/3) s^{3/2}),

with ``rho = |r(kstar)| in [0, 1)``. It is seeded at a matching point ``s0``
and integrated backwards; in that direction the decaying solution is the
dominant one, so the shooting is stable.

The amplitude parameter of the local model problem is identified with
``|r(kstar)|`` through the prefactor of this asymptote.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.special import airy
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core_numerics import OdeProblem, integrate_ode, trapezoid_cumulative
from .exceptions import IntegrationError, InvalidInputError, RangeError

DEFAULT_S_MIN = -15.0
DEFAULT_S0 = 8.0
DEFAULT_TOL = 1e-12
DEFAULT_SPACING = 0.01
RESIDUAL_STEP = 2e-3
NEAR_ONE = 0.99


def _check_rho(rho):
    if not np.isfinite(rho) or rho < 0:
        raise RangeError(f"rho must be a finite non-negative number, got {rho}")
    if rho >= 1:
        raise RangeError(f"rho={rho} is outside [0, 1); the model problem requires |r(kstar)| < 1")


def leading_asymptote(rho, s):
    """The leading-order decay formula and its logarithmic-derivative slope."""
    s = np.asarray(s, dtype=float)
    y = -(rho / (2.0 * np.sqrt(np.pi))) * s**-0.25 * np.exp(-(2.0 / 3.0) * s**1.5)
    return y, y * (-np.sqrt(s) - 0.25 / s)


def boundary_values(rho: float, s0: float):
    """Seed ``(y(s0), y'(s0))`` on the decaying branch.

    At ``s0 >= 6`` the cubic term is below ``1e-16`` relative, so the solution
    coincides with ``-rho Ai(s)``, whose leading asymptote is exactly the
    selecting formula. Seeding with the Airy function itself removes the
    ``O(s0^{-3/2})`` error of the truncated asymptote, which would otherwise
    leak into ``y`` at the ``1e-3`` level.
    """
    _check_rho(rho)
    if not s0 >= 6:
        raise InvalidInputError(f"matching point s0 must be >= 6, got {s0}")
    ai, aip, _, _ = airy(s0)
    return -rho * float(ai), -rho * float(aip)


def _rhs(s, z):
    y, yp = z
    return np.array([yp, s * y + 2.0 * y**3])


def _linear_rhs(s, z):
    return np.array([z[1], s * z[0]])


@dataclass(frozen=True)
class Painleve2Table:
    rho: float
    s_samples: np.ndarray
    y: np.ndarray
    y_prime: np.ndarray
    H: np.ndarray
    s0: float
    tol: float = DEFAULT_TOL
    max_residual: float = 0.0
    minus_infinity_amplitude: float = float("nan")
    dense: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for name in ("s_samples", "y", "y_prime", "H"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = self.s_samples.size
        if n < 2 or any(getattr(self, k).size != n for k in ("y", "y_prime", "H")):
            raise InvalidInputError("table columns must share one length >= 2")
        if not np.all(np.diff(self.s_samples) > 0):
            raise InvalidInputError("s_samples must be strictly increasing")

    @property
    def s_min(self) -> float:
        return float(self.s_samples[0])

    @cached_property
    def _splines(self):
        s, y, yp = self.s_samples, self.y, self.y_prime
        return (CubicHermiteSpline(s, y, yp),
                CubicHermiteSpline(s, yp, s * y + 2.0 * y**3),
                CubicHermiteSpline(s, self.H, -(y**2)))

    def eval(self, s):
        return eval_table(self, s)

    def residual(self, s):
        """``|y'' - s y - 2 y^3|`` with ``y''`` from the dense solver output.

        ``y''`` is a fourth-order central difference of the dense ``y'``.
        """
        if self.dense is None:
            raise InvalidInputError("table carries no dense solution (loaded from file?)")
        s = np.atleast_1d(np.asarray(s, dtype=float))
        h = RESIDUAL_STEP
        if np.any(s - 2 * h < self.s_min) or np.any(s + 2 * h > self.s0):
            raise RangeError("residual points must lie 2*step inside the table")
        if self.rho == 0:
            return np.zeros_like(s)
        d = self.dense
        yp = [d(s + j * h)[1] for j in (-2, -1, 1, 2)]
        ypp = (yp[0] - 8.0 * yp[1] + 8.0 * yp[2] - yp[3]) / (12.0 * h)
        y = d(s)[0]
        return np.abs(ypp - s * y - 2.0 * y**3)


def eval_table(table: Painleve2Table, s):
    """Cubic Hermite interpolation of ``(y, y', H)``; exact at the samples."""
    scalar = np.ndim(s) == 0
    sq = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(sq < table.s_min) or np.any(sq > table.s0):
        raise RangeError(f"s outside the tabulated range [{table.s_min}, {table.s0}]; widen the table")
    fy, fyp, fh = table._splines
    y, yp, H = fy(sq), fyp(sq), fh(sq)
    # polynomial evaluation at a right knot can be off by an ulp; samples are returned verbatim
    idx = np.clip(np.searchsorted(table.s_samples, sq), 0, table.s_samples.size - 1)
    hit = table.s_samples[idx] == sq
    y[hit], yp[hit], H[hit] = table.y[idx[hit]], table.y_prime[idx[hit]], table.H[idx[hit]]
    if scalar:
        return float(y[0]), float(yp[0]), float(H[0])
    return y, yp, H


def _grid(s_min, s0, spacing):
    n = int(np.ceil((s0 - s_min) / spacing - 1e-9)) + 1
    return np.linspace(s_min, s0, n)


def _oscillation_amplitude(s, y, yp, window=3.0):
    """Mean of ``|s|^{1/4} sqrt(y^2 + y'^2/|s|)`` over the leftmost window (diagnostic)."""
    sel = s <= min(s[0] + window, -1.0)
    if not np.any(sel):
        return float("nan")
    a = np.abs(s[sel])
    return float(np.mean(a**0.25 * np.sqrt(y[sel] ** 2 + yp[sel] ** 2 / a)))


def solve(rho: float, s_min: float = DEFAULT_S_MIN, s0: float = DEFAULT_S0,
          tol: float = DEFAULT_TOL, spacing: float = DEFAULT_SPACING) -> Painleve2Table:
    """Integrate backwards from ``s0`` to ``s_min`` and tabulate ``y, y', H``.

    ``H(s) = int_s^{s0} y^2``, i.e. the indefinite integral anchored at the
    decaying end; any other constant of integration only shifts the diagonal
    of the local model matrix.
    """
    _check_rho(rho)
    if not s_min < 0 < s0:
        raise InvalidInputError(f"need s_min < 0 < s0, got s_min={s_min}, s0={s0}")
    if s0 < 8:
        raise InvalidInputError(f"matching point s0 must be >= 8, got {s0}")
    if not (0 < spacing <= DEFAULT_SPACING):
        raise InvalidInputError(f"table spacing must lie in (0, {DEFAULT_SPACING}]")
    s = _grid(s_min, s0, spacing)
    if rho == 0:
        zeros = np.zeros_like(s)
        return Painleve2Table(0.0, s, zeros, zeros, zeros, float(s0), tol, 0.0, 0.0)
    y0, yp0 = boundary_values(rho, s0)
    # error control stays relative down to the tiny seed values
    atol = tol * min(abs(y0), abs(yp0))
    try:
        traj = integrate_ode(OdeProblem(_rhs, np.array([y0, yp0]), (float(s0), float(s_min)), tol, atol))
    except IntegrationError as exc:
        exc.context.update(rho=rho, s_min=s_min, s0=s0)
        raise IntegrationError(
            f"Painleve II integration for rho={rho} stopped at s={exc.last_point}; "
            "rho may be too close to 1", exc.last_point, exc.context) from exc
    z = traj(s)
    y, yp = z[0].copy(), z[1].copy()
    y[-1], yp[-1] = y0, yp0
    H = trapezoid_cumulative(s, y**2)
    table = Painleve2Table(float(rho), s, y, yp, H, float(s0), tol,
                           minus_infinity_amplitude=_oscillation_amplitude(s, y, yp),
                           dense=traj)
    inner = s[(s - 2 * RESIDUAL_STEP >= s[0]) & (s + 2 * RESIDUAL_STEP <= s[-1])]
    object.__setattr__(table, "max_residual", float(np.max(table.residual(inner))))
    return table


def linear_airy_solve(s_min: float = DEFAULT_S_MIN, s0: float = DEFAULT_S0, tol: float = DEFAULT_TOL):
    """Dense solution of ``y'' = s y`` seeded with ``boundary_values(1^-, s0)`` at ``s0``."""
    ai, aip, _, _ = airy(s0)
    y0 = np.array([-float(ai), -float(aip)])
    atol = tol * np.min(np.abs(y0))
    return integrate_ode(OdeProblem(_linear_rhs, y0, (float(s0), float(s_min)), tol, atol))


class AblowitzSegurSolver(BaseEstimator):
    """Estimator wrapper around :func:`solve`.

    ``fit`` tabulates the solution for ``rho``; ``predict(s)`` returns ``y(s)``
    and ``transform(s)`` returns the ``(y, y', H)`` columns.
    """

    def __init__(self, rho=0.5, s_min=DEFAULT_S_MIN, s0=DEFAULT_S0, tol=DEFAULT_TOL):
        self.rho = rho
        self.s_min = s_min
        self.s0 = s0
        self.tol = tol

    def fit(self, X=None, y=None):
        if self.rho >= NEAR_ONE and self.rho < 1:
            warnings.warn(f"rho={self.rho} approaches the excluded value 1", RuntimeWarning, stacklevel=2)
        self.table_ = solve(self.rho, self.s_min, self.s0, self.tol)
        return self

    def predict(self, X):
        check_is_fitted(self, "table_")
        return eval_table(self.table_, np.asarray(X, dtype=float).ravel())[0]

    def transform(self, X):
        check_is_fitted(self, "table_")
        return np.column_stack(eval_table(self.table_, np.asarray(X, dtype=float).ravel()))
