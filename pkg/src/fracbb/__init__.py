"""fracbb: spectral calculus on the torus and Bergman boundary checks.

Band-limited fields with Clifford-algebra values, fractional Laplacian and
Riesz multipliers, Dirac-type operators with closed-form inverses, explicit
inverting kernels with boundedness scans, sum-space norms computed by a
certified primal-dual solver, disk power-series norms, and randomized
inequality verification harnesses.
"""

from .clifford import CliffordElement, conjugate, invert_vector, multiply, p0
from .decomposition import (
    ComplementResult,
    DecompositionResult,
    smooth_complement,
    solve_decomposition,
)
from .disk import (
    PowerSeries,
    RatioReport,
    analytic_projection,
    bbb_ratio,
    bergman_norm,
    boundary_trace,
    dilate,
    hminus_half_boundary_norm,
    mixed_boundary_norm,
    random_series,
)
from .errors import (
    AliasingError,
    ConvergenceError,
    InputError,
    InvariantViolation,
    ToolkitError,
)
from .experiments import (
    DiracSeriesTrace,
    ExperimentConfig,
    InequalityReport,
    bilinear_A,
    bilinear_A_diracs,
    dirac_pair_limit,
    random_field,
    verify_bb,
)
from .kernels import (
    KernelSpec,
    ScanReport,
    dyadic_block_sum,
    kernel_K_1d,
    kernel_K_nd,
    kernel_component_nd,
    sawtooth_eval,
    sawtooth_field,
    sup_norm_scan,
)
from .norms import SumSpaceSplit, l1_norm, l2_norm, sobolev_norm, sum_space_norm
from .operators import (
    MultiplierOp,
    dirac_D,
    dirac_Dbar,
    dirac_op,
    fractional_laplacian,
    fractional_laplacian_op,
    invert_D,
    invert_D2,
    riesz,
    riesz_op,
)
from .spectral import (
    GridField,
    SpectralField,
    band_indices,
    convolve,
    forward_transform,
    freq_norm,
    inverse_transform,
    project_zero_mean,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "CliffordElement",
    "ComplementResult",
    "ConvergenceError",
    "DecompositionResult",
    "DiracSeriesTrace",
    "ExperimentConfig",
    "GridField",
    "InequalityReport",
    "InputError",
    "InvariantViolation",
    "KernelSpec",
    "MultiplierOp",
    "PowerSeries",
    "RatioReport",
    "ScanReport",
    "SpectralField",
    "SumSpaceSplit",
    "ToolkitError",
    "analytic_projection",
    "band_indices",
    "bbb_ratio",
    "bergman_norm",
    "bilinear_A",
    "bilinear_A_diracs",
    "boundary_trace",
    "conjugate",
    "convolve",
    "dilate",
    "dirac_D",
    "dirac_Dbar",
    "dirac_op",
    "dirac_pair_limit",
    "dyadic_block_sum",
    "forward_transform",
    "fractional_laplacian",
    "fractional_laplacian_op",
    "freq_norm",
    "hminus_half_boundary_norm",
    "invert_D",
    "invert_D2",
    "invert_vector",
    "kernel_K_1d",
    "kernel_K_nd",
    "kernel_component_nd",
    "l1_norm",
    "l2_norm",
    "mixed_boundary_norm",
    "multiply",
    "p0",
    "project_zero_mean",
    "random_field",
    "random_series",
    "riesz",
    "riesz_op",
    "sawtooth_eval",
    "sawtooth_field",
    "smooth_complement",
    "sobolev_norm",
    "solve_decomposition",
    "sum_space_norm",
    "sup_norm_scan",
    "verify_bb",
]
