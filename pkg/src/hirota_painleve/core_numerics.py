"""Grids, sampled fields, adaptive ODE integration and cumulative quadrature."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp

from .exceptions import IntegrationError, InvalidInputError

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid.

    Periodic grids hold ``n`` points on ``[x_min, x_max)``; closed grids hold
    ``n`` points on ``[x_min, x_max]``.
    """

    x_min: float
    x_max: float
    n: int
    periodic: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise InvalidInputError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise InvalidInputError(f"x_min={self.x_min} must be < x_max={self.x_max}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidInputError(f"grid needs n >= 2 points, got {self.n}")
        if self.periodic and not _is_power_of_two(int(self.n)):
            raise InvalidInputError(f"periodic grid size must be a power of two, got {self.n}")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def spacing(self) -> float:
        if self.periodic:
            return self.length / self.n
        return self.length / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return self.x_min + self.spacing * np.arange(self.n)

    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in FFT order (periodic grids only)."""
        if not self.periodic:
            raise InvalidInputError("wavenumbers are only defined on periodic grids")
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ComplexField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1 or values.shape[0] != self.grid.n:
            raise InvalidInputError(
                f"field has {values.shape} samples, grid expects ({self.grid.n},)")
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.points


@dataclass(frozen=True)
class OdeProblem:
    """``dy/dt = rhs(t, y)`` on ``t_span``; ``t_span[1] < t_span[0]`` integrates backwards."""

    rhs: Callable
    y0: np.ndarray
    t_span: tuple
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise InvalidInputError("ODE tolerances must be strictly positive")
        if len(self.t_span) != 2 or self.t_span[0] == self.t_span[1]:
            raise InvalidInputError(f"degenerate integration interval {self.t_span}")


@dataclass(frozen=True)
class Trajectory:
    """Dense-output solution of an :class:`OdeProblem`."""

    t: np.ndarray
    y: np.ndarray
    dense: object = field(repr=False)
    nfev: int = 0

    @property
    def t_final(self) -> float:
        return float(self.t[-1])

    @property
    def y_final(self) -> np.ndarray:
        return self.y[:, -1]

    def __call__(self, t):
        t0, t1 = sorted((self.t[0], self.t[-1]))
        tq = np.asarray(t, dtype=float)
        if np.any(tq < t0 - 1e-12 * max(1.0, abs(t0))) or np.any(tq > t1 + 1e-12 * max(1.0, abs(t1))):
            raise InvalidInputError(f"dense output queried outside [{t0}, {t1}]")
        return self.dense(tq)


def integrate_ode(problem: OdeProblem, method: str = "RK45", max_step: float = np.inf) -> Trajectory:
    """Integrate ``problem`` with an adaptive embedded Runge-Kutta pair.

    The default is the Dormand-Prince 5(4) pair. SciPy controls the RMS of the
    scaled error estimate; both tolerances are divided by ``sqrt(dim)`` so that
    every component individually satisfies
    ``|err_i| <= atol + rtol * |y_i|``.
    """
    y0 = np.atleast_1d(np.asarray(problem.y0))
    if not np.all(np.isfinite(y0)):
        raise InvalidInputError("initial state must be finite")
    shrink = np.sqrt(y0.size)
    sol = solve_ivp(problem.rhs, problem.t_span, y0, method=method,
                    rtol=problem.rtol / shrink, atol=problem.atol / shrink,
                    dense_output=True, max_step=max_step)
    if sol.status != 0:
        last = float(sol.t[-1]) if sol.t.size else float(problem.t_span[0])
        raise IntegrationError(f"ODE integration failed at t={last}: {sol.message}", last_point=last)
    return Trajectory(t=sol.t, y=sol.y, dense=sol.sol, nfev=sol.nfev)


def trapezoid_cumulative(points, values) -> np.ndarray:
    """Cumulative trapezoid integral anchored at the last sample.

    ``out[i] = integral of values from points[i] to points[-1]``, so
    ``out[-1] == 0``.
    """
    points = np.asarray(points, dtype=float)
    values = np.asarray(values)
    if points.ndim != 1 or points.shape != values.shape:
        raise InvalidInputError("points and values must be 1-D arrays of equal length")
    if points.size < 2:
        raise InvalidInputError("need at least two samples to integrate")
    steps = np.diff(points)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise InvalidInputError("sample points must be strictly monotone")
    running = cumulative_trapezoid(values, points, initial=0.0)
    return running[-1] - running
