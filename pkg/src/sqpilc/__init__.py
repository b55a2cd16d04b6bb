"""Iterative learning control for repetitive motion tasks via SQP steps.

The package closes an optimization loop around a repetitive process:
each trial the measured output corrects a convex quadratic subproblem
built from a surrogate process model, and the damped step updates the
input trajectory for the next trial.
"""

from sqpilc.trajectory import (
    DerivativeOperator,
    Trajectory,
    derivative_matrix,
    discrete_derivative,
    load_trajectory,
    rms_error,
    save_trajectory,
)

__all__ = [
    "DerivativeOperator",
    "Trajectory",
    "derivative_matrix",
    "discrete_derivative",
    "load_trajectory",
    "rms_error",
    "save_trajectory",
]

__version__ = "0.1.0"
