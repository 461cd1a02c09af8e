"""Phase function, stationary points and transition-region geometry.

The phase is ``theta(k) = 4 beta k^3 + 2 alpha k^2 + xi k`` with ``xi = x/t``.
Its two stationary points merge at ``kstar = -alpha / (6 beta)`` when
``xi = alpha^2 / (3 beta)``; around that ray the long-time behaviour is
governed by the scaled variables ``s`` and ``khat`` defined below.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError


@dataclass(frozen=True)
class HirotaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise InvalidInputError("alpha and beta must be finite")
        if not self.beta > 0:
            raise InvalidInputError(f"beta must be positive, got {self.beta}")

    @property
    def kstar(self) -> float:
        """Merged stationary point ``-alpha / (6 beta)``."""
        return -self.alpha / (6.0 * self.beta)

    @property
    def xi_critical(self) -> float:
        """Critical velocity ``alpha^2 / (3 beta)``."""
        return self.alpha**2 / (3.0 * self.beta)


@dataclass(frozen=True)
class SpacetimePoint:
    x: float
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise InvalidInputError(f"time must be positive, got t={self.t}")

    @property
    def xi(self) -> float:
        return self.x / self.t


@dataclass(frozen=True)
class StationaryPoints:
    k1: complex
    k2: complex
    degenerate: bool


@dataclass(frozen=True)
class ScaledCoords:
    s: float
    kstar: float
    scale: float

    def khat(self, k):
        return self.scale * (np.asarray(k) - self.kstar)


@dataclass(frozen=True)
class TransitionRegion:
    M: float

    def __post_init__(self):
        if not self.M > 0:
            raise InvalidInputError(f"region bound M must be positive, got {self.M}")


class Region(str, enum.Enum):
    P_LE = "P_le"
    P_GE = "P_ge"
    OUTSIDE = "outside"


def theta(k, params: HirotaParams, xi):
    k = np.asarray(k)
    return 4.0 * params.beta * k**3 + 2.0 * params.alpha * k**2 + xi * k


def theta_prime(k, params: HirotaParams, xi):
    k = np.asarray(k)
    return 12.0 * params.beta * k**2 + 4.0 * params.alpha * k + xi


def theta_second(k, params: HirotaParams):
    return 24.0 * params.beta * np.asarray(k) + 4.0 * params.alpha


def stationary_points(params: HirotaParams, xi: float) -> StationaryPoints:
    """Roots of ``theta'``.

    Real with ``k1 <= k2`` below the critical velocity; above it ``k1`` has
    negative imaginary part and ``k2 = conj(k1)``.
    """
    a, b = params.alpha, params.beta
    disc = a * a - 3.0 * b * xi
    scale = 4.0 * np.finfo(float).eps * (a * a + abs(3.0 * b * xi))
    degenerate = abs(disc) <= scale
    if degenerate:
        root = 0.0
    elif disc > 0:
        root = np.sqrt(disc)
    else:
        root = 1j * np.sqrt(-disc)
    k1 = complex((-a - root) / (6.0 * b))
    k2 = complex((-a + root) / (6.0 * b))
    return StationaryPoints(k1=k1, k2=k2, degenerate=bool(degenerate))


def scaled_coords(p: SpacetimePoint, params: HirotaParams) -> ScaledCoords:
    b3 = 3.0 * params.beta
    s = b3 ** (-1.0 / 3.0) * (p.xi - params.xi_critical) * p.t ** (2.0 / 3.0)
    return ScaledCoords(s=float(s), kstar=params.kstar, scale=float((b3 * p.t) ** (1.0 / 3.0)))


def classify_region(p: SpacetimePoint, params: HirotaParams, region: TransitionRegion) -> Region:
    offset = p.xi - params.xi_critical
    size = abs(offset) * p.t ** (2.0 / 3.0)
    if size >= region.M:
        return Region.OUTSIDE
    # the critical ray itself belongs to the left half
    return Region.P_LE if offset <= 0 else Region.P_GE


def signature_sign(k, params: HirotaParams, xi):
    """Sign of ``Re(i theta(k))`` (``-Im theta``) as integers in {-1, 0, 1}."""
    value = np.real(1j * theta(np.asarray(k, dtype=complex), params, xi))
    return np.sign(value).astype(int)
