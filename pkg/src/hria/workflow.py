"""Stage state machine, precautionary gate, and multi-component integration.

Single assessments move through six stages. Transitions are forward-only,
one step at a time, with two sanctioned loops: mitigation back to analysis
(iterative re-assessment rounds) and further-implementation back to analysis
(periodic review). Advancing into the final stage finalises the assessment
and is blocked while any precautionary flag is unresolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import TYPE_CHECKING, Sequence

from .catalog import RightsCatalog
from .errors import (
    CatalogMismatch,
    ChecklistIncomplete,
    EmptyInput,
    IllegalTransition,
    OutOfRange,
    PrecautionaryUnresolved,
    UnknownRisk,
)
from .scoring import Level
from .timefmt import format_ts, parse_ts, utcnow

if TYPE_CHECKING:
    from .assessment import Assessment


class Stage(str, Enum):
    PRELIMINARY_ANALYSIS = "preliminary_analysis"
    SCOPING = "scoping"
    FIELDWORK = "fieldwork"
    ANALYSIS_ASSESSMENT = "analysis_assessment"
    MITIGATION = "mitigation"
    FURTHER_IMPLEMENTATION = "further_implementation"


STAGE_ORDER: tuple[Stage, ...] = (
    Stage.PRELIMINARY_ANALYSIS,
    Stage.SCOPING,
    Stage.FIELDWORK,
    Stage.ANALYSIS_ASSESSMENT,
    Stage.MITIGATION,
    Stage.FURTHER_IMPLEMENTATION,
)

# Adjacent forward steps plus the two documented loops. Anything else is
# illegal; in particular no sequence can reach mitigation without passing
# through analysis_assessment.
TRANSITIONS: frozenset[tuple[Stage, Stage]] = frozenset(
    list(zip(STAGE_ORDER, STAGE_ORDER[1:]))
    + [
        (Stage.MITIGATION, Stage.ANALYSIS_ASSESSMENT),
        (Stage.FURTHER_IMPLEMENTATION, Stage.ANALYSIS_ASSESSMENT),
    ]
)

# Builtin checklist task texts per stage.
STAGE_TASKS: dict[Stage, tuple[str, ...]] = {
    Stage.PRELIMINARY_ANALYSIS: (
        "Collection of information on the project, parties involved "
        "(including supply-chain), potential stakeholders, and territorial "
        "target area (country, region).",
        "Human rights reference framework: review of applicable binding and "
        "non-binding instruments, gap analysis.",
    ),
    Stage.SCOPING: (
        "Identification of main issues related to human rights to be examined.",
        "Drafting of a questionnaire for HRIA interviews and main indicators.",
    ),
    Stage.FIELDWORK: (
        "Interviews with internal and external project stakeholders and data "
        "collection.",
        "Understanding of contextual issues (political, economic, regulatory, "
        "and social).",
    ),
    Stage.ANALYSIS_ASSESSMENT: (
        "Data verification and validation, comparing and combining fieldwork "
        "results and desk analysis.",
        "Further interviews and analysis, if necessary.",
        "Impact analysis for each project branch and impacted rights and "
        "freedoms.",
        "Integrated impact assessment report.",
    ),
    Stage.MITIGATION: (
        "Recommendations.",
        "Prioritisation of mitigation goals.",
    ),
    Stage.FURTHER_IMPLEMENTATION: (
        "Post-assessment monitoring.",
        "Grievance mechanisms.",
        "Ongoing stakeholder engagement.",
    ),
}


@dataclass(frozen=True)
class ChecklistItem:
    task: str
    done: bool = False

    def to_dict(self) -> dict:
        return {"done": self.done, "task": self.task}


@dataclass(frozen=True)
class StageChecklist:
    stage: Stage
    items: tuple[ChecklistItem, ...]

    @property
    def complete(self) -> bool:
        return all(item.done for item in self.items)


def default_checklists() -> dict[Stage, StageChecklist]:
    return {
        stage: StageChecklist(
            stage=stage, items=tuple(ChecklistItem(task=t) for t in tasks)
        )
        for stage, tasks in STAGE_TASKS.items()
    }


@dataclass(frozen=True)
class StageTransitionRecord:
    from_stage: Stage
    to_stage: Stage
    at: datetime
    rationale: str | None = None

    def to_dict(self) -> dict:
        return {
            "at": format_ts(self.at),
            "from": self.from_stage.value,
            "rationale": self.rationale,
            "to": self.to_stage.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StageTransitionRecord":
        return cls(
            from_stage=Stage(data["from"]),
            to_stage=Stage(data["to"]),
            at=parse_ts(data["at"]),
            rationale=data.get("rationale"),
        )


class FlagStatus(str, Enum):
    OPEN = "open"
    ACCEPTED = "accepted"
    RESOLVED = "resolved"


@dataclass(frozen=True)
class PrecautionaryFlag:
    """Marks a risk whose impact cannot be meaningfully quantified yet.

    A flagged risk is kept out of every score table and chart and blocks
    finalisation until it is resolved (rated, with rationale) or explicitly
    accepted with rationale.
    """

    risk_id: str
    uncertainty_rationale: str
    recommended_measures: tuple[str, ...] = ()
    status: FlagStatus = FlagStatus.OPEN
    resolution: str | None = None

    def to_dict(self) -> dict:
        return {
            "recommended_measures": list(self.recommended_measures),
            "resolution": self.resolution,
            "risk_id": self.risk_id,
            "status": self.status.value,
            "uncertainty_rationale": self.uncertainty_rationale,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PrecautionaryFlag":
        return cls(
            risk_id=data["risk_id"],
            uncertainty_rationale=data["uncertainty_rationale"],
            recommended_measures=tuple(data.get("recommended_measures", [])),
            status=FlagStatus(data.get("status", "open")),
            resolution=data.get("resolution"),
        )


def open_flags(assessment: "Assessment") -> tuple[PrecautionaryFlag, ...]:
    return tuple(
        f for f in assessment.precautionary_flags if f.status is FlagStatus.OPEN
    )


def advance(
    assessment: "Assessment",
    to: Stage,
    rationale: str | None = None,
    now: datetime | None = None,
) -> "Assessment":
    """Move the assessment to another stage.

    The current stage's checklist must be complete unless an override
    rationale is supplied. Leaving scoping additionally requires a non-empty
    product description, and entering the final stage requires every
    precautionary flag to be resolved or accepted; neither gate can be
    overridden by rationale.
    """
    current = assessment.stage
    if (current, to) not in TRANSITIONS:
        raise IllegalTransition(f"illegal transition {current.value} -> {to.value}")
    checklist = assessment.checklists[current]
    if not checklist.complete and not rationale:
        raise ChecklistIncomplete(
            f"stage {current.value} checklist incomplete and no override rationale given"
        )
    if current is Stage.SCOPING and not assessment.scoping.product_description:
        raise ChecklistIncomplete(
            "cannot leave scoping without a product description"
        )
    if to is Stage.FURTHER_IMPLEMENTATION:
        unresolved = open_flags(assessment)
        if unresolved:
            ids = ", ".join(f.risk_id for f in unresolved)
            raise PrecautionaryUnresolved(
                f"cannot finalise with unresolved precautionary flags: {ids}"
            )
    record = StageTransitionRecord(
        from_stage=current,
        to_stage=to,
        at=now or utcnow(),
        rationale=rationale,
    )
    return replace(assessment, stage=to, stage_log=assessment.stage_log + (record,))


def mark_task(
    assessment: "Assessment", stage: Stage, index: int, done: bool = True
) -> "Assessment":
    """Tick (or untick) one checklist item, zero-indexed."""
    checklist = assessment.checklists[stage]
    if not 0 <= index < len(checklist.items):
        raise OutOfRange(
            f"stage {stage.value} has {len(checklist.items)} tasks; index {index} invalid"
        )
    items = tuple(
        replace(item, done=done) if i == index else item
        for i, item in enumerate(checklist.items)
    )
    checklists = dict(assessment.checklists)
    checklists[stage] = StageChecklist(stage=stage, items=items)
    return replace(assessment, checklists=checklists)


def complete_stage(assessment: "Assessment", stage: Stage | None = None) -> "Assessment":
    """Tick every item of a stage checklist (default: the current stage)."""
    stage = stage or assessment.stage
    for index in range(len(assessment.checklists[stage].items)):
        assessment = mark_task(assessment, stage, index, done=True)
    return assessment


def flag_precautionary(
    assessment: "Assessment",
    risk_id: str,
    rationale: str,
    recommended_measures: Sequence[str] = (),
) -> "Assessment":
    """Mark a risk as precautionary, removing it from every score table."""
    if not rationale:
        raise PrecautionaryUnresolved("a precautionary flag requires an uncertainty rationale")
    risks = []
    found = False
    for risk in assessment.risks:
        if risk.id == risk_id:
            found = True
            risk = replace(risk, precautionary=True)
        risks.append(risk)
    if not found:
        raise UnknownRisk(f"no risk with id {risk_id!r}")
    for flag in assessment.precautionary_flags:
        if flag.risk_id == risk_id and flag.status is FlagStatus.OPEN:
            raise PrecautionaryUnresolved(f"risk {risk_id!r} already carries an open flag")
    flag = PrecautionaryFlag(
        risk_id=risk_id,
        uncertainty_rationale=rationale,
        recommended_measures=tuple(recommended_measures),
    )
    return replace(
        assessment,
        risks=tuple(risks),
        precautionary_flags=assessment.precautionary_flags + (flag,),
    )


def accept_precautionary(
    assessment: "Assessment", risk_id: str, rationale: str
) -> "Assessment":
    """Accept an open flag with rationale: the risk stays out of score tables
    but no longer blocks finalisation."""
    if not rationale:
        raise PrecautionaryUnresolved("accepting a precautionary flag requires rationale")
    return _close_flag(assessment, risk_id, FlagStatus.ACCEPTED, rationale)


def _close_flag(
    assessment: "Assessment", risk_id: str, status: FlagStatus, rationale: str
) -> "Assessment":
    flags = []
    found = False
    for flag in assessment.precautionary_flags:
        if flag.risk_id == risk_id and flag.status is FlagStatus.OPEN:
            found = True
            flag = replace(flag, status=status, resolution=rationale)
        flags.append(flag)
    if not found:
        raise UnknownRisk(f"no open precautionary flag for risk {risk_id!r}")
    return replace(assessment, precautionary_flags=tuple(flags))


# --- multi-factor integration ------------------------------------------------

@dataclass(frozen=True)
class RightIntegration:
    max_level: Level
    contributing: int
    escalated: bool
    integrated_level: Level

    def to_dict(self) -> dict:
        return {
            "contributing": self.contributing,
            "escalated": self.escalated,
            "integrated_level": self.integrated_level.token,
            "max_level": self.max_level.token,
        }


@dataclass(frozen=True)
class IntegratedAssessment:
    """Cross-component aggregation for a multi-factor scenario.

    Per right, ``max_level`` is the sum-of-parts baseline (the strongest
    single-component impact). When at least ``escalation_threshold``
    components each reach medium or worse on the same right, the integrated
    level is raised one step (capped at very high) to reflect cumulative
    impact beyond the strongest component.
    """

    component_refs: tuple[str, ...]
    per_right: dict[str, RightIntegration] = field(default_factory=dict)
    escalation_threshold: int | float = 2

    def to_dict(self) -> dict:
        threshold = (
            None if math.isinf(self.escalation_threshold) else self.escalation_threshold
        )
        return {
            "component_refs": list(self.component_refs),
            "escalation_threshold": threshold,
            "per_right": {k: v.to_dict() for k, v in sorted(self.per_right.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IntegratedAssessment":
        raw_threshold = data.get("escalation_threshold")
        threshold = math.inf if raw_threshold is None else raw_threshold
        per_right = {
            key: RightIntegration(
                max_level=Level.from_token(value["max_level"]),
                contributing=value["contributing"],
                escalated=value["escalated"],
                integrated_level=Level.from_token(value["integrated_level"]),
            )
            for key, value in data.get("per_right", {}).items()
        }
        return cls(
            component_refs=tuple(data.get("component_refs", [])),
            per_right=per_right,
            escalation_threshold=threshold,
        )


def integrate(
    assessments: Sequence["Assessment"],
    catalog: RightsCatalog,
    threshold: int | float = 2,
    refs: Sequence[str] | None = None,
) -> IntegratedAssessment:
    """Aggregate several component assessments into one per-right view.

    Uses each component's latest overall level per right (initial overall
    when no rounds exist; risks excluded by an EF or flagged precautionary do
    not contribute). With threshold=inf the result degenerates to the
    per-right maximum.
    """
    from .assessment import latest_overall

    if not assessments:
        raise EmptyInput("integrate needs at least one component assessment")
    if not math.isinf(threshold) and (not isinstance(threshold, int) or threshold < 1):
        raise EmptyInput(f"escalation threshold must be a positive integer or inf, got {threshold!r}")
    if refs is None:
        refs = [a.metadata.title for a in assessments]

    component_levels: list[dict[str, Level]] = []
    for i, assessment in enumerate(assessments):
        levels: dict[str, Level] = {}
        for risk in assessment.risks:
            if risk.right_key not in catalog:
                raise CatalogMismatch(
                    f"component {refs[i]!r} risk {risk.id!r} references right "
                    f"{risk.right_key!r} absent from the shared catalog"
                )
            level = latest_overall(risk)
            if level is None:
                continue
            existing = levels.get(risk.right_key)
            levels[risk.right_key] = max(existing, level) if existing else level
        component_levels.append(levels)

    right_order: list[str] = []
    for levels in component_levels:
        for key in levels:
            if key not in right_order:
                right_order.append(key)

    per_right: dict[str, RightIntegration] = {}
    for key in right_order:
        contributions = [levels[key] for levels in component_levels if key in levels]
        max_level = max(contributions)
        medium_or_worse = sum(1 for level in contributions if level >= Level.MEDIUM)
        if medium_or_worse >= threshold:
            integrated = Level(min(int(max_level) + 1, int(Level.VERY_HIGH)))
        else:
            integrated = max_level
        per_right[key] = RightIntegration(
            max_level=max_level,
            contributing=len(contributions),
            escalated=integrated > max_level,
            integrated_level=integrated,
        )

    return IntegratedAssessment(
        component_refs=tuple(refs),
        per_right=per_right,
        escalation_threshold=threshold,
    )
