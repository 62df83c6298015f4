"""Shape-constrained self-referential rational cubic spline interpolation.

Construction and evaluation of C1 interpolants defined as fixed points of a
per-interval contraction system, with admissible-parameter identification for
positivity, band containment, and one-sided line constraints.
"""

from .analysis import (
    ErrorBoundInputs,
    MarginReport,
    empirical_margin,
    margin_of_samples,
    perturbation_bound,
    tension_csv,
    tension_study,
    total_error_bound,
)
from .constraints import (
    AboveLine,
    BelowLine,
    BoundsReport,
    Constraint,
    Positivity,
    Rectangle,
    SelectionPolicy,
    Status,
    ThresholdResult,
    ValidationReport,
    above_line_bounds,
    auto_select,
    below_line_bounds,
    constraint_margins,
    cubic_nonneg_oracle,
    positivity_alpha_bounds,
    positivity_bounds,
    positivity_v_threshold,
    rectangle_bounds,
    validate,
)
from .data import (
    DataSet,
    Partition,
    build_partition,
    estimate_derivatives_amm,
    validate_dataset,
)
from .errors import (
    AlphaOnBoundary,
    ContractivityViolation,
    DataFileError,
    DataNotAboveLine,
    DataNotBelowLine,
    DataOutsideRectangle,
    DepthTooLarge,
    DerivativesAlreadyPresent,
    ExpectationFailed,
    FractalSplineError,
    MissingDerivatives,
    NegativeV,
    NonFiniteValue,
    NonIncreasingKnots,
    NonPositiveData,
    NonPositiveU,
    OutOfDomain,
    TooFewPoints,
    UnknownScenario,
)
from .model import (
    FifModel,
    IfsParams,
    SampleSet,
    build_model,
    eval_affine_fif,
    eval_affine_points,
    eval_classical,
    eval_classical_derivative,
    eval_derivative_point,
    eval_derivative_points,
    eval_point,
    eval_points,
    eval_q,
    eval_q_derivative,
    sample_attractor,
    sample_count,
)
from .scenarios import SCENARIO_NAMES, SCENARIOS, ScenarioSpec, get_scenario, run_scenario

__version__ = "0.1.0"
