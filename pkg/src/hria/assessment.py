"""Assessment document model: scoping record, risk register, and rounds.

An Assessment is an immutable value; every operation returns a new copy.
Risks carry assessor-supplied ratings only; likelihood, severity and overall
levels are always recomputed through the scoring module, never stored, so a
report can never drift from its inputs.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum

from .errors import (
    AssessmentFinalized,
    DomainError,
    DuplicateRiskId,
    EmptyRegister,
    InvalidKey,
    InvalidMetadata,
    InvariantViolation,
    NonMonotoneIndex,
    RiskNotRated,
    UnknownRisk,
)
from .catalog import RightsCatalog
from .scoring import (
    ImpactBand,
    Level,
    RiskRatings,
    ScoreBreakdown,
    aggregate_band,
    score_ratings,
)
from .timefmt import format_ts, parse_ts, utcnow
from .workflow import (
    FlagStatus,
    PrecautionaryFlag,
    Stage,
    StageChecklist,
    StageTransitionRecord,
    ChecklistItem,
    _close_flag,
    default_checklists,
    flag_precautionary,
    STAGE_TASKS,
)

logger = logging.getLogger(__name__)

_RISK_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]*$")

# Canonical scoping question sets. Answers under other keys must carry the
# "x-" prefix marking them as project-specific extensions.
CONTEXT_QUESTIONS: dict[str, str] = {
    "affected-rights": "Which human rights are potentially affected by the product/service?",
    "legal-instruments": (
        "Which international/regional legal instruments have been implemented "
        "at an operational level?"
    ),
    "relevant-authorities": (
        "Which are the most relevant courts or authoritative bodies in the "
        "field of human rights in the context?"
    ),
    "relevant-decisions": (
        "What are the relevant decisions and provisions in the field of human rights?"
    ),
}
CONTROLS_QUESTIONS: dict[str, str] = {
    "existing-policies": (
        "What policies and procedures are in place to assess the potential "
        "impact on human rights, including stakeholder engagement?"
    ),
    "prior-assessments": (
        "Has an impact assessment been carried out in relation to specific "
        "issues or features of the product/service (e.g. use of biometrics)?"
    ),
}
EXTENSION_PREFIX = "x-"


@dataclass(frozen=True)
class Stakeholder:
    name: str
    category: str
    engaged: bool = False
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "engaged": self.engaged,
            "name": self.name,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Stakeholder":
        return cls(
            name=data["name"],
            category=data["category"],
            engaged=bool(data.get("engaged", False)),
            notes=data.get("notes", ""),
        )


@dataclass(frozen=True)
class ScopingRecord:
    product_description: str = ""
    target_countries: tuple[str, ...] = ()
    rights_holders: tuple[str, ...] = ()
    data_categories: tuple[str, ...] = ()
    processing_purposes: tuple[str, ...] = ()
    duty_bearers: tuple[str, ...] = ()
    human_rights_context: dict[str, str] = field(default_factory=dict)
    controls_in_place: dict[str, str] = field(default_factory=dict)
    stakeholders: tuple[Stakeholder, ...] = ()

    def to_dict(self) -> dict:
        return {
            "controls_in_place": dict(self.controls_in_place),
            "data_categories": list(self.data_categories),
            "duty_bearers": list(self.duty_bearers),
            "human_rights_context": dict(self.human_rights_context),
            "processing_purposes": list(self.processing_purposes),
            "product_description": self.product_description,
            "rights_holders": list(self.rights_holders),
            "stakeholders": [s.to_dict() for s in self.stakeholders],
            "target_countries": list(self.target_countries),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScopingRecord":
        return cls(
            product_description=data.get("product_description", ""),
            target_countries=tuple(data.get("target_countries", [])),
            rights_holders=tuple(data.get("rights_holders", [])),
            data_categories=tuple(data.get("data_categories", [])),
            processing_purposes=tuple(data.get("processing_purposes", [])),
            duty_bearers=tuple(data.get("duty_bearers", [])),
            human_rights_context=dict(data.get("human_rights_context", {})),
            controls_in_place=dict(data.get("controls_in_place", {})),
            stakeholders=tuple(
                Stakeholder.from_dict(s) for s in data.get("stakeholders", [])
            ),
        )


def _check_question_keys(answers: dict[str, str], canonical: dict[str, str], where: str) -> None:
    for key in answers:
        if key not in canonical and not key.startswith(EXTENSION_PREFIX):
            raise InvalidKey(
                f"{where} key {key!r} is neither a canonical question key "
                f"({', '.join(sorted(canonical))}) nor an {EXTENSION_PREFIX!r}-prefixed extension"
            )


@dataclass(frozen=True)
class ExcludingFactor:
    description: str
    legal_basis: str

    def to_dict(self) -> dict:
        return {"description": self.description, "legal_basis": self.legal_basis}


@dataclass(frozen=True)
class MitigationMeasure:
    description: str
    category: str = ""

    def to_dict(self) -> dict:
        return {"category": self.category, "description": self.description}


class Excluded(Enum):
    """Marker for a residual that an accepted excluding factor removed from scoring."""

    MARKER = "excluded"


EXCLUDED = Excluded.MARKER


@dataclass(frozen=True)
class Round:
    """One re-assessment iteration: EFs, MMs, and the residual ratings."""

    index: int
    excluding_factors: tuple[ExcludingFactor, ...]
    mitigation_measures: tuple[MitigationMeasure, ...]
    residual: RiskRatings | Excluded
    rationale: str
    created_at: datetime

    @property
    def is_excluded(self) -> bool:
        return self.residual is EXCLUDED

    def to_dict(self) -> dict:
        residual = "excluded" if self.is_excluded else self.residual.to_dict()
        return {
            "created_at": format_ts(self.created_at),
            "excluding_factors": [ef.to_dict() for ef in self.excluding_factors],
            "index": self.index,
            "mitigation_measures": [mm.to_dict() for mm in self.mitigation_measures],
            "rationale": self.rationale,
            "residual": residual,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Round":
        raw = data["residual"]
        residual: RiskRatings | Excluded
        residual = EXCLUDED if raw == "excluded" else RiskRatings.from_dict(raw)
        return cls(
            index=data["index"],
            excluding_factors=tuple(
                ExcludingFactor(description=ef["description"], legal_basis=ef["legal_basis"])
                for ef in data.get("excluding_factors", [])
            ),
            mitigation_measures=tuple(
                MitigationMeasure(
                    description=mm["description"], category=mm.get("category", "")
                )
                for mm in data.get("mitigation_measures", [])
            ),
            residual=residual,
            rationale=data.get("rationale", ""),
            created_at=parse_ts(data["created_at"]),
        )


@dataclass(frozen=True)
class RiskEntry:
    """One envisaged risk to a right or freedom."""

    id: str
    right_key: str
    description: str
    guiding_answers: dict[str, str] = field(default_factory=dict)
    initial: RiskRatings | None = None
    precautionary: bool = False
    rounds: tuple[Round, ...] = ()

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "guiding_answers": dict(self.guiding_answers),
            "id": self.id,
            "initial": self.initial.to_dict() if self.initial else None,
            "precautionary": self.precautionary,
            "right_key": self.right_key,
            "rounds": [r.to_dict() for r in self.rounds],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RiskEntry":
        initial = data.get("initial")
        return cls(
            id=data["id"],
            right_key=data["right_key"],
            description=data["description"],
            guiding_answers=dict(data.get("guiding_answers", {})),
            initial=RiskRatings.from_dict(initial) if initial else None,
            precautionary=bool(data.get("precautionary", False)),
            rounds=tuple(Round.from_dict(r) for r in data.get("rounds", [])),
        )


@dataclass(frozen=True)
class Metadata:
    title: str
    description: str = ""
    assessor: str = ""

    def to_dict(self) -> dict:
        return {
            "assessor": self.assessor,
            "description": self.description,
            "title": self.title,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Metadata":
        return cls(
            title=data["title"],
            description=data.get("description", ""),
            assessor=data.get("assessor", ""),
        )


@dataclass(frozen=True)
class Assessment:
    metadata: Metadata
    created_at: datetime
    scoping: ScopingRecord = field(default_factory=ScopingRecord)
    risks: tuple[RiskEntry, ...] = ()
    stage: Stage = Stage.PRELIMINARY_ANALYSIS
    checklists: dict[Stage, StageChecklist] = field(default_factory=default_checklists)
    stage_log: tuple[StageTransitionRecord, ...] = ()
    precautionary_flags: tuple[PrecautionaryFlag, ...] = ()

    @property
    def finalized(self) -> bool:
        return self.stage is Stage.FURTHER_IMPLEMENTATION

    def risk(self, risk_id: str) -> RiskEntry:
        for risk in self.risks:
            if risk.id == risk_id:
                return risk
        raise UnknownRisk(f"no risk with id {risk_id!r}")

    def to_dict(self) -> dict:
        return {
            "checklists": {
                stage.value: [item.to_dict() for item in checklist.items]
                for stage, checklist in sorted(
                    self.checklists.items(), key=lambda kv: kv[0].value
                )
            },
            "created_at": format_ts(self.created_at),
            "metadata": self.metadata.to_dict(),
            "precautionary_flags": [f.to_dict() for f in self.precautionary_flags],
            "risks": [r.to_dict() for r in self.risks],
            "scoping": self.scoping.to_dict(),
            "stage": self.stage.value,
            "stage_log": [t.to_dict() for t in self.stage_log],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Assessment":
        checklists = {}
        for stage_token, items in data.get("checklists", {}).items():
            stage = Stage(stage_token)
            checklists[stage] = StageChecklist(
                stage=stage,
                items=tuple(
                    ChecklistItem(task=i["task"], done=bool(i["done"])) for i in items
                ),
            )
        for stage in Stage:
            checklists.setdefault(
                stage,
                StageChecklist(
                    stage=stage,
                    items=tuple(ChecklistItem(task=t) for t in STAGE_TASKS[stage]),
                ),
            )
        return cls(
            metadata=Metadata.from_dict(data["metadata"]),
            created_at=parse_ts(data["created_at"]),
            scoping=ScopingRecord.from_dict(data.get("scoping", {})),
            risks=tuple(RiskEntry.from_dict(r) for r in data.get("risks", [])),
            stage=Stage(data.get("stage", Stage.PRELIMINARY_ANALYSIS.value)),
            checklists=checklists,
            stage_log=tuple(
                StageTransitionRecord.from_dict(t) for t in data.get("stage_log", [])
            ),
            precautionary_flags=tuple(
                PrecautionaryFlag.from_dict(f) for f in data.get("precautionary_flags", [])
            ),
        )


def new_assessment(metadata: Metadata | dict, created_at: datetime | None = None) -> Assessment:
    """Create an empty assessment at the preliminary-analysis stage."""
    if isinstance(metadata, dict):
        try:
            metadata = Metadata.from_dict(metadata)
        except KeyError as exc:
            raise InvalidMetadata(f"metadata missing field {exc}") from None
    if not metadata.title or not metadata.title.strip():
        raise InvalidMetadata("assessment title must be non-empty")
    return Assessment(metadata=metadata, created_at=created_at or utcnow())


def update_scoping(assessment: Assessment, scoping: ScopingRecord) -> Assessment:
    """Replace the scoping record, validating question keys."""
    if assessment.finalized:
        raise AssessmentFinalized("cannot edit scoping after finalisation")
    _check_question_keys(scoping.human_rights_context, CONTEXT_QUESTIONS, "human_rights_context")
    _check_question_keys(scoping.controls_in_place, CONTROLS_QUESTIONS, "controls_in_place")
    return replace(assessment, scoping=scoping)


def add_risk(
    assessment: Assessment,
    risk_id: str,
    right_key: str,
    description: str,
    initial: RiskRatings | None,
    catalog: RightsCatalog,
    guiding_answers: dict[str, str] | None = None,
    precautionary_rationale: str | None = None,
    recommended_measures: tuple[str, ...] = (),
) -> Assessment:
    """Add one envisaged risk to the register.

    Risks normally arrive rated; a risk may instead be created without
    ratings when flagged precautionary at birth (rationale required).
    """
    if assessment.finalized:
        raise AssessmentFinalized("cannot add risks after finalisation")
    if not _RISK_ID_RE.match(risk_id or ""):
        raise InvalidKey(f"risk id {risk_id!r} is not a plain ascii token")
    if any(r.id == risk_id for r in assessment.risks):
        raise DuplicateRiskId(f"risk id {risk_id!r} already in the register")
    catalog.lookup(right_key)
    if initial is None and not precautionary_rationale:
        raise RiskNotRated(
            f"risk {risk_id!r} needs initial ratings unless flagged precautionary"
        )
    risk = RiskEntry(
        id=risk_id,
        right_key=right_key,
        description=description,
        guiding_answers=dict(guiding_answers or {}),
        initial=initial,
    )
    assessment = replace(assessment, risks=assessment.risks + (risk,))
    if precautionary_rationale:
        assessment = flag_precautionary(
            assessment, risk_id, precautionary_rationale, recommended_measures
        )
    return assessment


def rate_risk(
    assessment: Assessment,
    risk_id: str,
    ratings: RiskRatings,
    rationale: str | None = None,
) -> Assessment:
    """Set or revise a risk's initial ratings.

    Resolving a precautionary flag this way requires a rationale; the risk
    then re-enters the score tables. Ratings freeze once rounds exist.
    """
    if assessment.finalized:
        raise AssessmentFinalized("cannot rate risks after finalisation")
    risk = assessment.risk(risk_id)
    if risk.rounds:
        raise DomainError(
            f"risk {risk_id!r} already has re-assessment rounds; initial ratings are frozen"
        )
    resolving = risk.precautionary
    if resolving and not rationale:
        raise RiskNotRated(
            f"risk {risk_id!r} is flagged precautionary; rating it requires a rationale"
        )
    risks = tuple(
        replace(r, initial=ratings, precautionary=False) if r.id == risk_id else r
        for r in assessment.risks
    )
    assessment = replace(assessment, risks=risks)
    if resolving:
        assessment = _close_flag(assessment, risk_id, FlagStatus.RESOLVED, rationale)
    return assessment


def escalations(baseline: RiskRatings, residual: RiskRatings) -> tuple[str, ...]:
    """Names of rating dimensions where the residual exceeds the baseline."""
    worsened = []
    for dim in ("probability", "exposure", "gravity", "effort"):
        if getattr(residual, dim) > getattr(baseline, dim):
            worsened.append(dim)
    return tuple(worsened)


def _improvements(baseline: RiskRatings, residual: RiskRatings) -> bool:
    return any(
        getattr(residual, dim) < getattr(baseline, dim)
        for dim in ("probability", "exposure", "gravity", "effort")
    )


def round_baseline(risk: RiskEntry, upto: int | None = None) -> RiskRatings:
    """Ratings a round is assessed against: the previous residual, else initial."""
    rounds = risk.rounds if upto is None else risk.rounds[:upto]
    for previous in reversed(rounds):
        if not previous.is_excluded:
            return previous.residual  # type: ignore[return-value]
    if risk.initial is None:
        raise RiskNotRated(f"risk {risk.id!r} has no initial ratings")
    return risk.initial


def apply_round(assessment: Assessment, risk_id: str, round_: Round) -> Assessment:
    """Append one re-assessment round to a risk.

    The round index must continue the sequence. A residual that worsens any
    dimension is legal (re-assessment may discover worse exposure) and is
    surfaced as a warning in report views; a residual that improves any
    dimension requires a rationale for auditability.
    """
    if assessment.finalized:
        raise AssessmentFinalized("cannot apply rounds after finalisation")
    risk = assessment.risk(risk_id)
    if risk.precautionary:
        raise RiskNotRated(
            f"risk {risk_id!r} is flagged precautionary and outside the scoring flow"
        )
    if risk.initial is None:
        raise RiskNotRated(f"risk {risk_id!r} has no initial ratings")
    expected = len(risk.rounds) + 1
    if round_.index != expected:
        raise NonMonotoneIndex(
            f"round index {round_.index} does not continue the sequence (expected {expected})"
        )
    if risk.rounds and risk.rounds[-1].is_excluded:
        raise InvariantViolation(
            f"risks[{risk_id}].rounds",
            "cannot apply a round after an excluding round removed the risk from scoring",
        )
    if round_.is_excluded:
        if not round_.excluding_factors:
            raise InvariantViolation(
                f"risks[{risk_id}].rounds[{round_.index - 1}].excluding_factors",
                "an excluded residual requires at least one excluding factor",
            )
        for i, ef in enumerate(round_.excluding_factors):
            if not ef.legal_basis.strip():
                raise InvariantViolation(
                    f"risks[{risk_id}].rounds[{round_.index - 1}].excluding_factors[{i}].legal_basis",
                    "an excluding factor requires a recorded legal basis",
                )
    else:
        baseline = round_baseline(risk)
        if _improvements(baseline, round_.residual) and not round_.rationale.strip():
            raise InvariantViolation(
                f"risks[{risk_id}].rounds[{round_.index - 1}].rationale",
                "a residual below its baseline requires a rationale",
            )
        worsened = escalations(baseline, round_.residual)
        if worsened:
            logger.warning(
                "risk %s round %d residual exceeds baseline on: %s",
                risk_id,
                round_.index,
                ", ".join(worsened),
            )
    risks = tuple(
        replace(r, rounds=r.rounds + (round_,)) if r.id == risk_id else r
        for r in assessment.risks
    )
    return replace(assessment, risks=risks)


# --- report views -------------------------------------------------------------

@dataclass(frozen=True)
class ResidualScores:
    rl_score: int
    rl: Level
    rs_score: int
    rs: Level
    final: Level


@dataclass(frozen=True)
class EscalationWarning:
    risk_id: str
    round_index: int
    dimensions: tuple[str, ...]


@dataclass(frozen=True)
class ReportRow:
    risk_id: str
    right_key: str
    description: str
    initial: ScoreBreakdown
    efs: tuple[str, ...]
    mms: tuple[str, ...]
    residual: ResidualScores | None
    excluded: bool

    @property
    def final_level(self) -> Level | None:
        """Level this row contributes to the after-aggregate (None when excluded)."""
        if self.excluded:
            return None
        if self.residual is not None:
            return self.residual.final
        return self.initial.overall


@dataclass(frozen=True)
class RiskReport:
    rows: tuple[ReportRow, ...]
    aggregate_before: ImpactBand | None
    aggregate_after: ImpactBand | None
    warnings: tuple[EscalationWarning, ...]
    precautionary: tuple[PrecautionaryFlag, ...]


def initial_scores(risk: RiskEntry) -> ScoreBreakdown:
    if risk.initial is None:
        raise RiskNotRated(f"risk {risk.id!r} has no initial ratings")
    return score_ratings(risk.initial)


def latest_overall(risk: RiskEntry) -> Level | None:
    """The risk's current overall level, or None when it carries no score
    (precautionary, unrated, or removed by an excluding factor)."""
    if risk.precautionary or risk.initial is None:
        return None
    if risk.rounds:
        last = risk.rounds[-1]
        if last.is_excluded:
            return None
        return score_ratings(last.residual).overall  # type: ignore[arg-type]
    return score_ratings(risk.initial).overall


def scorable_risks(assessment: Assessment) -> tuple[RiskEntry, ...]:
    """Risks that appear in score tables: rated and not precautionary."""
    return tuple(
        r for r in assessment.risks if not r.precautionary and r.initial is not None
    )


def risk_warnings(risk: RiskEntry) -> tuple[EscalationWarning, ...]:
    warnings = []
    for i, round_ in enumerate(risk.rounds):
        if round_.is_excluded:
            continue
        baseline = round_baseline(risk, upto=i)
        worsened = escalations(baseline, round_.residual)  # type: ignore[arg-type]
        if worsened:
            warnings.append(
                EscalationWarning(
                    risk_id=risk.id, round_index=round_.index, dimensions=worsened
                )
            )
    return tuple(warnings)


def comparative_table(assessment: Assessment) -> RiskReport:
    """Build the before/after comparison: one row per scorable risk plus
    aggregate bands over the overall columns.

    Rows removed by an excluding factor render as excluded and are omitted
    from the after-aggregate; rows without rounds carry their initial overall
    level forward. Precautionary risks never appear as rows; they are listed
    in the report's own section.
    """
    if not assessment.risks:
        raise EmptyRegister("the risk register is empty")
    risks = scorable_risks(assessment)

    rows = []
    warnings: list[EscalationWarning] = []
    for risk in risks:
        breakdown = initial_scores(risk)
        efs = tuple(
            ef.description for round_ in risk.rounds for ef in round_.excluding_factors
        )
        mms = tuple(
            mm.description for round_ in risk.rounds for mm in round_.mitigation_measures
        )
        excluded = bool(risk.rounds) and risk.rounds[-1].is_excluded
        residual = None
        if risk.rounds and not excluded:
            last = risk.rounds[-1]
            scores = score_ratings(last.residual)  # type: ignore[arg-type]
            residual = ResidualScores(
                rl_score=scores.l_score,
                rl=scores.likelihood,
                rs_score=scores.s_score,
                rs=scores.severity,
                final=scores.overall,
            )
        rows.append(
            ReportRow(
                risk_id=risk.id,
                right_key=risk.right_key,
                description=risk.description,
                initial=breakdown,
                efs=efs,
                mms=mms,
                residual=residual,
                excluded=excluded,
            )
        )
        warnings.extend(risk_warnings(risk))

    before_levels = [row.initial.overall for row in rows]
    aggregate_before = aggregate_band(before_levels) if before_levels else None
    after_levels = [row.final_level for row in rows if row.final_level is not None]
    aggregate_after = aggregate_band(after_levels) if after_levels else None
    return RiskReport(
        rows=tuple(rows),
        aggregate_before=aggregate_before,
        aggregate_after=aggregate_after,
        warnings=tuple(warnings),
        precautionary=tuple(
            f for f in assessment.precautionary_flags if f.status is not FlagStatus.RESOLVED
        ),
    )
