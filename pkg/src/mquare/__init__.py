"""Metamodel quality evaluation toolkit.

Encodes a metamodel quality model (characteristics, sub-characteristics,
requirements, and measures) as data; validates machine-readable
evaluation plans; computes measure values, applies decision criteria, and
aggregates grades; analyzes textual metamodels for structural measure
elements; and renders measurement tables and evaluation reports.
"""

from .catalog import (
    ArtifactKind,
    Catalog,
    Characteristic,
    MeasureKind,
    MeasureSpec,
    Orientation,
    QualityRequirement,
    SubCharacteristic,
    load_builtin_catalog,
    measures_for_requirement,
    parse_measure_id,
    required_artifacts,
)
from .measurement import (
    DecisionCriteria,
    ElementValues,
    MeasureOutcome,
    MeasureStatus,
    MeasureValue,
    Nominal,
    NotApplicable,
    Numeric,
    apply_criteria,
    compute_cap2,
    compute_measure,
    element_warnings,
)
from .formula import (
    FormulaExpr,
    evaluate_formula,
    format_formula,
    parse_formula,
)
from .scoring import (
    Scorecard,
    ScorecardRow,
    Verdict,
    build_scorecard,
    default_formula,
)
from .plan import (
    EvaluationPlan,
    MetamodelVersion,
    Purpose,
    PURPOSES,
    ScheduleEntry,
    Severity,
    ValidationFinding,
    init_plan,
    render_plan_document,
    validate_plan,
)
from .session import (
    ConsolidatedResults,
    MeasurementSession,
    compute_session,
    consolidate,
    evaluate,
    evaluate_sessions,
)
from .analyzer import (
    CouplingReport,
    InstantiationComplexity,
    MetamodelGraph,
    coupling_report,
    instantiation_complexity,
    parse_mmdl,
    serialize_mmdl,
    suggest_elements,
)
from .report import EvaluationMeta, render_report

__version__ = "0.1.0"
