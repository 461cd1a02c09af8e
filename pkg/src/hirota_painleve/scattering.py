"""Direct scattering for the Zakharov-Shabat problem at ``t = 0``.

The x-part of the Lax pair, ``Phi_x + i k [sigma3, Phi] = U Phi`` with
``U = [[0, u], [conj(u), 0]]``, is integrated from the left end of the
profile support with ``Phi = I``. The integration runs in the interaction
picture ``Phi = E W E^{-1}``, ``E = exp(-i k x sigma3)``:

    W_x = [[0, u e^{2ikx}], [conj(u) e^{-2ikx}, 0]] W,

which is exactly equivalent but has a constant state wherever ``u``
vanishes. ``W`` at the right end is the transfer matrix; its first row gives
``a(k) = W11`` and ``b(k) = W12`` and the reflection coefficient is
``r = conj(b) / a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from scipy.interpolate import CubicSpline
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_profile_array, check_strictly_increasing
from .core_numerics import DEFAULT_ATOL, DEFAULT_RTOL, ComplexField, Grid, OdeProblem, integrate_ode
from .exceptions import IntegrationError, InvalidInputError, UnitarityError
from .phase import HirotaParams

DEFAULT_DECAY_CUTOFF = 1e-12
DEFAULT_HALF_WIDTH = 40.0
DEFAULT_PROFILE_POINTS = 8001
VANISHING_REFLECTION = 1e-12
UNITARITY_SLACK = 1e-6
# without a cap the first step can jump over a localized profile whose tails are flat zero
MAX_STEP = 0.25

PROFILE_FAMILIES = ("sech", "gaussian")


@dataclass(frozen=True)
class InitialProfile:
    field: ComplexField
    decay_cutoff: float = DEFAULT_DECAY_CUTOFF

    def __post_init__(self):
        if self.field.grid.periodic:
            raise InvalidInputError("initial profiles live on closed-interval grids")
        ends = np.abs(self.field.values[[0, -1]])
        if np.any(ends > self.decay_cutoff):
            raise InvalidInputError(
                f"profile does not decay: |u0| at the endpoints is {ends.tolist()}, "
                f"cutoff {self.decay_cutoff:g}; widen the interval")

    @property
    def x(self) -> np.ndarray:
        return self.field.x

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    def interpolant(self) -> CubicSpline:
        return CubicSpline(self.x, self.values)

    def __call__(self, x):
        """Cubic interpolation of ``u0``; zero outside the sampled interval."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        inside = (x >= self.x[0]) & (x <= self.x[-1])
        out[inside] = self.interpolant()(x[inside])
        return out


def profile_from_function(func, half_width=DEFAULT_HALF_WIDTH, n=DEFAULT_PROFILE_POINTS,
                          decay_cutoff=DEFAULT_DECAY_CUTOFF) -> InitialProfile:
    grid = Grid(-half_width, half_width, n)
    return InitialProfile(ComplexField(grid, func(grid.points)), decay_cutoff)


def builtin_profile(family: str, amplitude: float, width: float = 1.0,
                    half_width=DEFAULT_HALF_WIDTH, n=DEFAULT_PROFILE_POINTS,
                    decay_cutoff=DEFAULT_DECAY_CUTOFF) -> InitialProfile:
    """``A sech(x/w)`` or ``A exp(-x^2/w^2)`` sampled on ``[-half_width, half_width]``."""
    if width <= 0:
        raise InvalidInputError(f"profile width must be positive, got {width}")
    if family == "sech":
        def func(x):
            return amplitude / np.cosh(np.clip(x / width, -700, 700))
    elif family == "gaussian":
        def func(x):
            return amplitude * np.exp(-(x / width) ** 2)
    else:
        raise InvalidInputError(f"unknown profile family {family!r}; expected one of {PROFILE_FAMILIES}")
    return profile_from_function(func, half_width, n, decay_cutoff)


def profile_from_samples(x, u, decay_cutoff=DEFAULT_DECAY_CUTOFF) -> InitialProfile:
    """Build a profile from uniformly spaced samples (e.g. read from CSV)."""
    x = check_strictly_increasing(x, "profile x")
    u = np.asarray(u, dtype=complex)
    if u.shape != x.shape:
        raise InvalidInputError("profile x and u must have equal length")
    grid = Grid(float(x[0]), float(x[-1]), x.size)
    if not np.allclose(x, grid.points, rtol=0, atol=1e-9 * max(1.0, grid.length)):
        raise InvalidInputError("profile samples must be uniformly spaced")
    return InitialProfile(ComplexField(grid, u), decay_cutoff)


def sech_transmission_oracle(amplitude, k):
    """Closed-form ``|b|`` and ``|r|`` for the real potential ``A sech(x)``.

    Defocusing Zakharov-Shabat: ``|b(k)| = sinh(pi A) / cosh(pi k)`` and
    ``|a|^2 = 1 + |b|^2``. Used only as an independent check.
    """
    k = np.asarray(k, dtype=float)
    b = np.sinh(np.pi * amplitude) / np.cosh(np.pi * k)
    return b, b / np.sqrt(1.0 + b * b)


def _transfer_block(spline, x_span, ks, rtol, atol, method):
    m = ks.size
    twoik = 2j * ks

    def rhs(x, w):
        u = spline(x)
        e = np.exp(twoik * x)
        p = u * e
        q = np.conj(u) / e
        w = w.reshape(4, m)
        return np.concatenate([p * w[2], p * w[3], q * w[0], q * w[1]])

    w0 = np.concatenate([np.ones(m), np.zeros(m), np.zeros(m), np.ones(m)]).astype(complex)
    try:
        traj = integrate_ode(OdeProblem(rhs, w0, x_span, rtol, atol), method=method, max_step=MAX_STEP)
    except IntegrationError as exc:
        exc.context["k"] = ks.tolist()
        raise
    return traj.y_final.reshape(2, 2, m).transpose(2, 0, 1)


def transfer_matrix(profile: InitialProfile, k, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL,
                    method="RK45", chunk_size=256, n_jobs=None) -> np.ndarray:
    """Interaction-picture transfer matrix ``W(x_max)`` for each k, shape ``(m, 2, 2)``.

    The k-grid is split into independent chunks which can be mapped in
    parallel with ``n_jobs`` (joblib semantics).
    """
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    if not np.all(np.isfinite(ks)):
        raise InvalidInputError("spectral points must be finite")
    spline = profile.interpolant()
    x_span = (float(profile.x[0]), float(profile.x[-1]))
    if np.all(profile.values == 0):
        return np.broadcast_to(np.eye(2, dtype=complex), (ks.size, 2, 2)).copy()
    chunks = np.array_split(ks, max(1, int(np.ceil(ks.size / chunk_size))))
    blocks = Parallel(n_jobs=n_jobs)(
        delayed(_transfer_block)(spline, x_span, c, rtol, atol, method) for c in chunks)
    return np.concatenate(blocks, axis=0)


def jost_transfer(profile: InitialProfile, k, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL,
                  method="RK45", **kwargs) -> np.ndarray:
    """Left Jost solution ``Phi_-`` evaluated at the right end of the support.

    Scalar ``k`` gives a 2x2 matrix; an array gives shape ``(m, 2, 2)``.
    """
    scalar = np.ndim(k) == 0
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    w = transfer_matrix(profile, ks, rtol, atol, method, **kwargs)
    phase = np.exp(-2j * ks * profile.x[-1])
    phi = w.copy()
    phi[:, 0, 1] *= phase
    phi[:, 1, 0] /= phase
    return phi[0] if scalar else phi


@dataclass(frozen=True)
class ScatteringData:
    k_grid: np.ndarray
    a: np.ndarray
    b: np.ndarray
    r: np.ndarray
    kstar: float
    kstar_amplitude: float
    kstar_phase: float

    def __post_init__(self):
        for name in ("k_grid", "a", "b", "r"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def unitarity_defect(self) -> np.ndarray:
        return np.abs(np.abs(self.a) ** 2 - np.abs(self.b) ** 2 - 1.0)

    def reflection(self, k):
        """Cubic interpolation of ``r`` on the k-grid."""
        k = np.asarray(k, dtype=float)
        if np.any(k < self.k_grid[0]) or np.any(k > self.k_grid[-1]):
            raise InvalidInputError("k outside the scattering grid")
        return CubicSpline(self.k_grid, self.r)(k)


def default_k_grid() -> np.ndarray:
    return np.linspace(-10.0, 10.0, 2001)


def scattering_data(profile: InitialProfile, k_grid, params: HirotaParams,
                    rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL, method="RK45",
                    **kwargs) -> ScatteringData:
    k_grid = check_strictly_increasing(k_grid, "k_grid")
    kstar = params.kstar
    if not k_grid[0] <= kstar <= k_grid[-1]:
        raise InvalidInputError(
            f"kstar={kstar} lies outside the k-grid [{k_grid[0]}, {k_grid[-1]}]")
    if k_grid.size < 4:
        raise InvalidInputError("k-grid needs at least 4 points for cubic interpolation")
    w = transfer_matrix(profile, k_grid, rtol, atol, method, **kwargs)
    a = w[:, 0, 0]
    b = w[:, 0, 1]
    small = np.abs(a) < 1.0 - UNITARITY_SLACK
    if np.any(small):
        bad = k_grid[small][0]
        raise UnitarityError(f"|a(k)| = {abs(a[small][0]):.3e} < 1 at k={bad}; "
                             "integration or truncation failed")
    r = np.conj(b) / a
    hit = np.flatnonzero(np.isclose(k_grid, kstar, rtol=0, atol=1e-14))
    rk = r[hit[0]] if hit.size else CubicSpline(k_grid, r)(kstar)
    rho = float(abs(rk))
    gamma = float(np.angle(rk)) if rho >= VANISHING_REFLECTION else 0.0
    return ScatteringData(k_grid=k_grid, a=a, b=b, r=r, kstar=kstar,
                          kstar_amplitude=rho, kstar_phase=gamma)


def reflection_at_kstar(data: ScatteringData):
    """``(rho, gamma) = (|r(kstar)|, arg r(kstar))``; gamma is 0 when rho vanishes."""
    rho = float(data.kstar_amplitude)
    if rho < VANISHING_REFLECTION:
        return rho, 0.0
    return rho, float(data.kstar_phase)


class ScatteringTransform(TransformerMixin, BaseEstimator):
    """Estimator wrapper: ``fit`` on a profile, ``transform`` k-values to ``r(k)``.

    ``X`` for ``fit`` is an ``(n, 3)`` array of ``x, Re u0, Im u0`` rows (the
    CSV layout) or an :class:`InitialProfile`.
    """

    def __init__(self, alpha=1.0, beta=1.0 / 3.0, k_min=-10.0, k_max=10.0, n_k=2001,
                 rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL, decay_cutoff=DEFAULT_DECAY_CUTOFF,
                 n_jobs=None):
        self.alpha = alpha
        self.beta = beta
        self.k_min = k_min
        self.k_max = k_max
        self.n_k = n_k
        self.rtol = rtol
        self.atol = atol
        self.decay_cutoff = decay_cutoff
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        profile = X if isinstance(X, InitialProfile) else _profile_from_array(X, self.decay_cutoff)
        params = HirotaParams(self.alpha, self.beta)
        k_grid = np.linspace(self.k_min, self.k_max, self.n_k)
        self.profile_ = profile
        self.data_ = scattering_data(profile, k_grid, params, self.rtol, self.atol, n_jobs=self.n_jobs)
        self.rho_, self.gamma_ = reflection_at_kstar(self.data_)
        self.kstar_ = params.kstar
        return self

    def transform(self, X):
        check_is_fitted(self, "data_")
        k = np.asarray(X, dtype=float).ravel()
        return self.data_.reflection(k)


def _profile_from_array(X, decay_cutoff):
    arr = as_profile_array(X)
    return profile_from_samples(arr[:, 0], arr[:, 1] + 1j * arr[:, 2], decay_cutoff)
