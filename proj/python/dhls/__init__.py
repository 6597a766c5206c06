"""Sharp constants and optimizers of the discrete critical
Hardy-Littlewood-Sobolev inequality on n-dimensional integer grids."""

from ._core import (
    CapacityError,
    ContractViolationError,
    GridSpec,
    KernelOperator,
    NonConvergenceError,
    OptimizerResult,
    __version__,
    certify,
    check_symmetry,
    kernel_value,
    linear_index,
    lower_bound_uniform,
    point_of,
    row_sum,
    solve_optimizer,
    sphere_area,
    sweep,
    upper_bound_center,
    verify_decay,
)

__all__ = [
    "CapacityError",
    "ContractViolationError",
    "GridSpec",
    "KernelOperator",
    "NonConvergenceError",
    "OptimizerResult",
    "__version__",
    "certify",
    "check_symmetry",
    "kernel_value",
    "linear_index",
    "lower_bound_uniform",
    "point_of",
    "row_sum",
    "solve_optimizer",
    "sphere_area",
    "sweep",
    "upper_bound_center",
    "verify_decay",
]
