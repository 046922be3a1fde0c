"""D-optimum approximate design on finite candidate sets.

Multiplicative weight updates with provably safe removal of non-optimal
support points, worst-case and covering-ellipse instance generators, a
benchmark harness, and an sklearn-style estimator front end.
"""

from .bounds import (BoundKind, lambda1_star, lower_bound_new,
                     lower_bound_old, prunable)
from .core import (DesignMeasure, DesignProblem, InfoMatrix, excess,
                   information_matrix, log_det, smallest_relative_eigenvalue,
                   variance_function, variance_profile)
from .estimator import DOptimalDesign
from .exceptions import (DegenerateWeights, DimensionMismatch, DomainError,
                         OptDesignError, OverPruned, SingularDesign)
from .instances import (EllipseParams, TightInstance, covering_ellipse,
                        gen_gaussian_ellipse, gen_tightness)
from .rng import normal_cloud, normals, splitmix64, uniforms
from .solver import (Realloc, Solution, SolverConfig, SolverState,
                     SolverTrace, TraceRow, multiplicative_step,
                     optimality_certificate, prune_step,
                     reallocate_boost, reallocate_proportional, solve)

__version__ = "0.1.0"

__all__ = [
    "BoundKind", "lambda1_star", "lower_bound_new", "lower_bound_old",
    "prunable",
    "DesignMeasure", "DesignProblem", "InfoMatrix", "excess",
    "information_matrix", "log_det", "smallest_relative_eigenvalue",
    "variance_function", "variance_profile",
    "DOptimalDesign",
    "DegenerateWeights", "DimensionMismatch", "DomainError",
    "OptDesignError", "OverPruned", "SingularDesign",
    "EllipseParams", "TightInstance", "covering_ellipse",
    "gen_gaussian_ellipse", "gen_tightness",
    "normal_cloud", "normals", "splitmix64", "uniforms",
    "Realloc", "Solution", "SolverConfig", "SolverState", "SolverTrace",
    "TraceRow", "multiplicative_step", "optimality_certificate",
    "prune_step", "reallocate_boost", "reallocate_proportional", "solve",
]
