"""Leading-order transition-region asymptotics.

For ``(x, t)`` near the ray ``x/t = alpha^2/(3 beta)``,

    u(x, t) = -(3 beta t)^{-1/3} exp(-2i t theta(kstar) - i gamma) y(s) + O(t^{-2/3}),

where ``gamma = arg r(kstar)`` and ``y`` is the Painleve II solution with
amplitude ``|r(kstar)|``. The same expression holds on both sides of the
ray, so a single evaluator serves both halves of the region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_1d, as_spacetime_array
from .exceptions import InvalidInputError, RangeError
from .painleve2 import DEFAULT_S0, DEFAULT_S_MIN, DEFAULT_TOL, Painleve2Table, eval_table, solve
from .phase import HirotaParams, SpacetimePoint, TransitionRegion, scaled_coords, theta
from .scattering import ScatteringTransform


def _wrap(angle):
    return np.angle(np.exp(1j * np.asarray(angle)))


@dataclass(frozen=True)
class AsymptoticSample:
    point: SpacetimePoint
    s: float
    u_asymp: complex
    modulus: float
    phase: float


@dataclass(frozen=True)
class M1Matrix:
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.shape != (2, 2):
            raise InvalidInputError("M1Matrix needs a 2x2 array")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def trace(self) -> complex:
        return complex(self.entries[0, 0] + self.entries[1, 1])


def _carrier_phase(x, t, params: HirotaParams, gamma, with_time=True):
    """``2 t theta(kstar) + gamma``; ``with_time=False`` drops the factor t (diagnostic only)."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    th = theta(params.kstar, params, x / t)
    return (2.0 * t * th if with_time else 2.0 * th) + gamma


def _scaled_s(x, t, params: HirotaParams):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return (3.0 * params.beta) ** (-1.0 / 3.0) * (x / t - params.xi_critical) * t ** (2.0 / 3.0)


def u_asymptotic_array(x, t, params: HirotaParams, table: Painleve2Table, gamma, with_time=True):
    """Vectorised leading-order field at arrays of ``x`` and ``t``."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise InvalidInputError("times must be positive")
    s = _scaled_s(x, t, params)
    y = eval_table(table, s.ravel())[0].reshape(s.shape)
    amp = (3.0 * params.beta * t) ** (-1.0 / 3.0)
    return -amp * np.exp(-1j * _carrier_phase(x, t, params, gamma, with_time)) * y


def u_asymptotic(p: SpacetimePoint, params: HirotaParams, table: Painleve2Table,
                 gamma: float) -> AsymptoticSample:
    s = scaled_coords(p, params).s
    y = eval_table(table, s)[0]
    amp = (3.0 * params.beta * p.t) ** (-1.0 / 3.0)
    carrier = float(_carrier_phase(p.x, p.t, params, gamma))
    u = -amp * np.exp(-1j * carrier) * y
    # total argument: leading minus sign plus the sign of y
    arg_y = np.pi if y < 0 else 0.0
    phase = float(_wrap(np.pi - carrier + arg_y))
    return AsymptoticSample(point=p, s=s, u_asymp=complex(u), modulus=float(amp * abs(y)), phase=phase)


def m1_matrix(p: SpacetimePoint, params: HirotaParams, table: Painleve2Table, gamma: float) -> M1Matrix:
    """Residue matrix of the local Painleve model at ``(x, t)``.

    Diagonal ``+-(i/2) H(s)`` with the table's anchor, off-diagonal
    ``(i/2) e^{-i phi} y`` and ``-(i/2) e^{i phi} y``,
    ``phi = 2 t theta(kstar) + gamma``.
    """
    s = scaled_coords(p, params).s
    y, _, H = eval_table(table, s)
    phi = float(_carrier_phase(p.x, p.t, params, gamma))
    e = np.array([[0.5j * H, 0.5j * np.exp(-1j * phi) * y],
                  [-0.5j * np.exp(1j * phi) * y, -0.5j * H]])
    return M1Matrix(e)


def u_from_m1(m1: M1Matrix, p: SpacetimePoint, params: HirotaParams) -> complex:
    """Potential via ``u = 2i lim k (m - I)_12`` with ``k (m - I) -> m1 / (3 beta t)^{1/3}``."""
    return complex(2j * m1.entries[0, 1] * (3.0 * params.beta * p.t) ** (-1.0 / 3.0))


def xi_from_s(s, t, params: HirotaParams):
    """Inverse of the scaled variable: ``xi = alpha^2/(3 beta) + (3 beta)^{1/3} s t^{-2/3}``."""
    return params.xi_critical + (3.0 * params.beta) ** (1.0 / 3.0) * np.asarray(s, dtype=float) * t ** (-2.0 / 3.0)


def sample_transition_line(t, s_values, params: HirotaParams, table: Painleve2Table, gamma: float,
                           region: TransitionRegion | None = None) -> list[AsymptoticSample]:
    if not t > 0:
        raise InvalidInputError(f"time must be positive, got {t}")
    s_values = as_1d(s_values, "s_values")
    if region is not None and np.any(np.abs(s_values) >= region.M):
        raise RangeError(f"all |s| must be < M={region.M}")
    xi = xi_from_s(s_values, t, params)
    return [u_asymptotic(SpacetimePoint(float(v * t), float(t)), params, table, gamma) for v in xi]


class TransitionAsymptotics(BaseEstimator):
    """End-to-end estimator: ``fit`` on an initial profile, ``predict`` at ``(x, t)`` rows.

    Fitting runs direct scattering to obtain ``rho_`` and ``gamma_`` and then
    tabulates the Painleve II solution ``table_`` for ``rho_``.
    """

    def __init__(self, alpha=1.0, beta=1.0 / 3.0, k_min=-10.0, k_max=10.0, n_k=2001,
                 s_min=DEFAULT_S_MIN, s0=DEFAULT_S0, tol=DEFAULT_TOL, n_jobs=None):
        self.alpha = alpha
        self.beta = beta
        self.k_min = k_min
        self.k_max = k_max
        self.n_k = n_k
        self.s_min = s_min
        self.s0 = s0
        self.tol = tol
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        scatter = ScatteringTransform(alpha=self.alpha, beta=self.beta, k_min=self.k_min,
                                      k_max=self.k_max, n_k=self.n_k, n_jobs=self.n_jobs).fit(X)
        self.params_ = HirotaParams(self.alpha, self.beta)
        self.scattering_ = scatter.data_
        self.rho_, self.gamma_ = scatter.rho_, scatter.gamma_
        self.table_ = solve(self.rho_, self.s_min, self.s0, self.tol)
        return self

    def predict(self, X):
        check_is_fitted(self, "table_")
        pts = as_spacetime_array(X)
        return u_asymptotic_array(pts[:, 0], pts[:, 1], self.params_, self.table_, self.gamma_)

    def scaled_s(self, X):
        check_is_fitted(self, "params_")
        pts = as_spacetime_array(X)
        return _scaled_s(pts[:, 0], pts[:, 1], self.params_)
