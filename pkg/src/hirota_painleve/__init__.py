"""Transition-region long-time asymptotics of the defocusing Hirota equation.

The pipeline maps an initial profile to its reflection coefficient, solves
the matching Painleve II problem, evaluates the leading-order field near the
ray ``x/t = alpha^2/(3 beta)`` and checks it against a direct spectral solver.
"""

from .asymptotics import AsymptoticSample, M1Matrix, TransitionAsymptotics, m1_matrix, u_asymptotic, u_from_m1
from .core_numerics import ComplexField, Grid, OdeProblem, Trajectory, integrate_ode, trapezoid_cumulative
from .exceptions import (BlowUpError, BoundaryContaminationError, IntegrationError, InvalidInputError,
                         NumericalError, RangeError, UnitarityError)
from .harness import DecayFit, ExperimentConfig, fit_decay_exponent, signature_grid, validate
from .painleve2 import AblowitzSegurSolver, Painleve2Table, eval_table, solve
from .pde_oracle import FieldState, HirotaSolver, SolverConfig, evolve, evolve_snapshots, mass
from .phase import (HirotaParams, Region, ScaledCoords, SpacetimePoint, StationaryPoints, TransitionRegion,
                    classify_region, scaled_coords, stationary_points, theta)
from .scattering import (InitialProfile, ScatteringData, ScatteringTransform, builtin_profile, jost_transfer,
                         scattering_data)

__all__ = [
    "AblowitzSegurSolver", "AsymptoticSample", "BlowUpError", "BoundaryContaminationError", "ComplexField",
    "DecayFit", "ExperimentConfig", "FieldState", "Grid", "HirotaParams", "HirotaSolver", "InitialProfile",
    "IntegrationError", "InvalidInputError", "M1Matrix", "NumericalError", "OdeProblem", "Painleve2Table",
    "RangeError", "Region", "ScaledCoords", "ScatteringData", "ScatteringTransform", "SolverConfig",
    "SpacetimePoint", "StationaryPoints", "Trajectory", "TransitionAsymptotics", "TransitionRegion",
    "UnitarityError", "builtin_profile", "classify_region", "eval_table", "evolve", "evolve_snapshots",
    "fit_decay_exponent", "integrate_ode", "jost_transfer", "m1_matrix", "mass", "scaled_coords",
    "scattering_data", "signature_grid", "solve", "stationary_points", "theta", "trapezoid_cumulative",
    "u_asymptotic", "u_from_m1", "validate",
]
