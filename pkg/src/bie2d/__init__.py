"""Boundary integral equation solver for 2D Laplace problems with
close-evaluation of layer potentials via matched kernel expansions."""

from .circle_oracle import (
    circle_aliasing_error,
    circle_density,
    circle_error_mu1,
    circle_kernel_coeffs,
    circle_spectral_eval,
)
from .closeeval import (
    DEFAULT_THRESHOLD,
    METHODS,
    eval_dlp_asymptotic,
    eval_dlp_naive,
    eval_dlp_subtraction,
    eval_naive_many,
    eval_slp_asymptotic,
    eval_slp_naive,
    evaluate,
    evaluate_auto,
    evaluate_auto_many,
    in_boundary_layer,
)
from .geometry import (
    BoundaryCurve,
    ClosePointFrame,
    CurveError,
    FlatPointError,
    ProjectionError,
    closest_point,
    curve_eval,
    frame_from_offset,
    offset_point,
    project_batch,
)
from .harness import (
    ConfigError,
    ErrorField,
    ExperimentConfig,
    body_fitted_grid,
    cartesian_grid,
    circle_oracle_field,
    fit_slope,
    kernel_slope_data,
    load_config,
    run_experiment,
)
from .kernels import (
    CoefficientDomainError,
    InnerKernelCoeffs,
    SingularKernelError,
    dlp_kernel,
    dlp_outer,
    inner_coeffs,
    k_in,
    k_in_fourier,
    k_residual,
    s_in,
    s_in_fourier,
    s_residual,
    slp_kernel,
)
from .nystrom import (
    CompatibilityError,
    DensitySolution,
    IllConditionedError,
    solve_exterior_neumann,
    solve_interior_dirichlet,
)
from .spectral import FourierCoeffs, analyze, convolve_eval, nodes, ptr, synth

__version__ = "0.1.0"
