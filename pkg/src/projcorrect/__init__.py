"""projcorrect: self-correction of almost-collineations of finite projective spaces.

Given a map between finite projective spaces that sends most lines to
lines, reconstruct the nearby semilinear map (Frobenius power + matrix up
to scalar) by local majority voting, and certify the quantitative regime
with exact rational arithmetic.
"""

from .bounds import BoundReport, compute_A, compute_B, hypotheses, max_eps
from .corrector import (
    CorrectionOutcome,
    CorrectionReport,
    ExactMode,
    SampledMode,
    SemilinearMap,
    apply_semilinear,
    correct_map,
    correct_point_exact,
    correct_point_sampled,
    derive_seed,
    is_line_preserving,
    preserved_line_fraction_exact,
    preserved_line_fraction_sampled,
    reconstruct_semilinear,
    splitmix64,
)
from .errors import DegenerateConfigError, EnumerationLimitError, NotSemilinearError
from .field import (
    GF,
    FieldElement,
    FieldSpec,
    Frobenius,
    enumerate_elements,
    frobenius_apply,
)
from .gadgets import (
    DesarguesConfig,
    MarkedLine,
    add_gadget,
    add_gadget_chart,
    chart_eval,
    chart_inv,
    desargues_build,
    desargues_check,
    desargues_theorem_check,
    mult_gadget,
    mult_gadget_chart,
    sigma_from_line,
)
from .harness import (
    ExperimentSpec,
    TrialResult,
    corrupt_swap,
    emit_report,
    gen_semilinear,
    naive_correct_point,
    render_report,
    run_experiment,
)
from .kernels import BACKEND
from .projspace import (
    PointMap,
    PointedLine,
    ProjLine,
    ProjPoint,
    ProjSpace,
    enumerate_lines,
    enumerate_points,
    identity_map,
    intersect_lines,
    line_through,
    lines_through_point,
    pointed_lines_at,
    points_on_line,
    proj_space,
    sample_line,
    sample_point,
    span_dimension,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundReport",
    "CorrectionOutcome",
    "CorrectionReport",
    "DegenerateConfigError",
    "DesarguesConfig",
    "EnumerationLimitError",
    "ExactMode",
    "ExperimentSpec",
    "FieldElement",
    "FieldSpec",
    "Frobenius",
    "GF",
    "MarkedLine",
    "NotSemilinearError",
    "PointMap",
    "PointedLine",
    "ProjLine",
    "ProjPoint",
    "ProjSpace",
    "SampledMode",
    "SemilinearMap",
    "TrialResult",
    "add_gadget",
    "add_gadget_chart",
    "apply_semilinear",
    "chart_eval",
    "chart_inv",
    "compute_A",
    "compute_B",
    "correct_map",
    "correct_point_exact",
    "correct_point_sampled",
    "corrupt_swap",
    "derive_seed",
    "desargues_build",
    "desargues_check",
    "desargues_theorem_check",
    "emit_report",
    "enumerate_elements",
    "enumerate_lines",
    "enumerate_points",
    "frobenius_apply",
    "gen_semilinear",
    "hypotheses",
    "identity_map",
    "intersect_lines",
    "is_line_preserving",
    "line_through",
    "lines_through_point",
    "max_eps",
    "mult_gadget",
    "mult_gadget_chart",
    "naive_correct_point",
    "pointed_lines_at",
    "points_on_line",
    "preserved_line_fraction_exact",
    "preserved_line_fraction_sampled",
    "proj_space",
    "reconstruct_semilinear",
    "render_report",
    "run_experiment",
    "sample_line",
    "sample_point",
    "sigma_from_line",
    "span_dimension",
    "splitmix64",
]
