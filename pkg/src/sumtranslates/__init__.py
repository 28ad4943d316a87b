"""Sums of translated concave kernels on the real axis.

Evaluate configurations J(t) + sum_j K_j(t - y_j), locate their
per-interval maxima, and invert the map from node vectors to consecutive
maximum differences; applications include equioscillation, weighted
generalized-polynomial ratio targets, and log-concave interpolation.
"""

from .apps import (
    InterpolationProblem,
    InterpolationResult,
    hermite_fejer_interpolate,
    log_concave_interpolate,
    semiaxis_solve,
    weighted_poly_ratio_map,
)
from .core import (
    MaximaReport,
    NodeConfig,
    Problem,
    as_nodes,
    difference_map,
    differences_from_report,
    evaluate_sum,
    in_regularity_set,
    local_maxima,
    tail_bound,
    write_profile,
)
from .exceptions import (
    AdmissibilityError,
    DescriptorError,
    FieldError,
    HypothesesError,
    KernelError,
    NotInRegularitySetError,
    SolverFailedError,
    SumTranslatesError,
)
from .fields import (
    AdmissibilityReport,
    Field,
    discrete_field,
    is_admissible,
    neg_abs_field,
    neg_square_field,
    probe_divergence,
    semiaxis_field,
    table_field,
)
from .kernels import (
    NEG_INF,
    Kernel,
    ShiftCheckReport,
    SlopeLimits,
    check_shift_inequalities,
    eval_kernel,
    log_kernel,
    log_linear_kernel,
    slope_limits,
    table_kernel,
)
from .oracle import GridSpec, grid_invert, grid_local_maxima
from .solver import (
    EquioscillationResult,
    LipschitzProbe,
    SolveResult,
    equioscillate,
    invert_difference,
    local_lipschitz_probe,
    require_solver_hypotheses,
)
from .sumscan import BACKEND

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "AdmissibilityReport",
    "BACKEND",
    "DescriptorError",
    "EquioscillationResult",
    "Field",
    "FieldError",
    "GridSpec",
    "HypothesesError",
    "InterpolationProblem",
    "InterpolationResult",
    "Kernel",
    "NEG_INF",
    "KernelError",
    "LipschitzProbe",
    "MaximaReport",
    "as_nodes",
    "NodeConfig",
    "NotInRegularitySetError",
    "Problem",
    "ShiftCheckReport",
    "SlopeLimits",
    "SolveResult",
    "SolverFailedError",
    "SumTranslatesError",
    "check_shift_inequalities",
    "difference_map",
    "differences_from_report",
    "discrete_field",
    "equioscillate",
    "eval_kernel",
    "evaluate_sum",
    "grid_invert",
    "grid_local_maxima",
    "hermite_fejer_interpolate",
    "in_regularity_set",
    "invert_difference",
    "is_admissible",
    "local_lipschitz_probe",
    "local_maxima",
    "log_concave_interpolate",
    "log_kernel",
    "log_linear_kernel",
    "neg_abs_field",
    "neg_square_field",
    "probe_divergence",
    "require_solver_hypotheses",
    "semiaxis_field",
    "semiaxis_solve",
    "slope_limits",
    "table_field",
    "table_kernel",
    "tail_bound",
    "weighted_poly_ratio_map",
    "write_profile",
]
