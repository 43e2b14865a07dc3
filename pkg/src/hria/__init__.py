"""Human-rights impact assessment engine for AI products and services."""

from .catalog import RightEntry, RightsCatalog, builtin_catalog, register
from .errors import DomainError, HriaError
from .scoring import (
    CombinedScore,
    ImpactBand,
    Level,
    RiskRatings,
    ScoreBreakdown,
    aggregate_band,
    combine_likelihood,
    combine_severity,
    likelihood_bin,
    overall_impact,
    score_ratings,
    severity_bin,
)
from .assessment import (
    EXCLUDED,
    Assessment,
    ExcludingFactor,
    Metadata,
    MitigationMeasure,
    RiskEntry,
    RiskReport,
    Round,
    ScopingRecord,
    Stakeholder,
    add_risk,
    apply_round,
    comparative_table,
    new_assessment,
    rate_risk,
    update_scoping,
)
from .workflow import (
    IntegratedAssessment,
    PrecautionaryFlag,
    Stage,
    StageChecklist,
    accept_precautionary,
    advance,
    complete_stage,
    flag_precautionary,
    integrate,
    mark_task,
)

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "CombinedScore",
    "DomainError",
    "EXCLUDED",
    "ExcludingFactor",
    "HriaError",
    "ImpactBand",
    "IntegratedAssessment",
    "Level",
    "Metadata",
    "MitigationMeasure",
    "PrecautionaryFlag",
    "RightEntry",
    "RightsCatalog",
    "RiskEntry",
    "RiskRatings",
    "RiskReport",
    "Round",
    "ScopingRecord",
    "ScoreBreakdown",
    "Stage",
    "StageChecklist",
    "Stakeholder",
    "accept_precautionary",
    "add_risk",
    "advance",
    "aggregate_band",
    "apply_round",
    "builtin_catalog",
    "combine_likelihood",
    "combine_severity",
    "comparative_table",
    "complete_stage",
    "flag_precautionary",
    "integrate",
    "likelihood_bin",
    "mark_task",
    "new_assessment",
    "overall_impact",
    "rate_risk",
    "register",
    "score_ratings",
    "severity_bin",
    "update_scoping",
]
