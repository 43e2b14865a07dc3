"""Deterministic rendering: radial impact charts and full reports.

Every number in a chart or report is recomputed from the assessment at
render time through the scoring module; nothing is cached. Rendering the
same value twice yields identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .assessment import Assessment, RiskReport, comparative_table, scorable_risks
from .catalog import RightsCatalog
from .errors import NoRisks, StageTooEarly
from .scoring import (
    LIKELIHOOD_BINS,
    LIKELIHOOD_MATRIX,
    SEVERITY_BINS,
    SEVERITY_MATRIX,
    Level,
    overall_impact,
)
from .workflow import STAGE_ORDER, IntegratedAssessment, Stage

Reportable = Union[Assessment, IntegratedAssessment]

# Chart geometry and styling.
VIEWPORT = 800
CENTER = VIEWPORT / 2
RADIUS = 300.0
SCALE_MAX = 4
INITIAL_COLOR = "#1f77b4"
FINAL_COLOR = "#ff7f0e"
FILL_OPACITY = "0.15"
GRID_COLOR = "#cccccc"
AXIS_COLOR = "#999999"

METHODOLOGY_NOTES = (
    "Levels are recomputed from stored ratings on every render; reports and "
    "charts carry no independent state.",
    "The overall impact of a likelihood/severity pair is the ceiling of the "
    "mean of their ordinals; the full 4x4 matrix is printed for audit. The "
    "source methodology's published lookup table for this step is internally "
    "inconsistent with its own worked example, so this engine follows the "
    "worked example.",
    "Bin thresholds over the raw matrix scores are engine constants chosen "
    "as the contiguous monotone binning consistent with every narrated "
    "anchor in the source methodology; they are deliberately not "
    "configurable, keeping assessments comparable.",
    "Aggregate impact over all areas is the arithmetic mean of overall "
    "ordinals, rendered as the two adjacent levels nearest-first (exact .5 "
    "ties render the lower level first). The average treats every impacted "
    "area as equally important and is an imprecise synthesis; the radial "
    "chart is the primary representation.",
    "Numeric ring labels (1-4) on radial charts are an addition of this "
    "tool; the source methodology's charts carry none.",
    "Risks removed by an excluding factor and precautionary-flagged risks "
    "are omitted from radial axes and listed in their own report sections; "
    "plotting them at zero would visually understate legally distinct "
    "statuses.",
)


@dataclass(frozen=True)
class RadialChartSpec:
    """Axes and series for one chart: the data, independent of markup."""

    axes: tuple[tuple[str, str], ...]  # (right_key, label)
    series: tuple[tuple[int, ...], ...]  # 1 or 2 rows of ordinals
    series_roles: tuple[str, ...]  # "initial" / "final"


def chart_spec(
    assessment: Assessment,
    include_final: bool = True,
    catalog: RightsCatalog | None = None,
) -> RadialChartSpec:
    """Collect chart axes and ordinals: one axis per scorable, non-excluded
    risk in insertion order, plotting overall-impact ordinals."""
    risks = [
        risk
        for risk in scorable_risks(assessment)
        if not (risk.rounds and risk.rounds[-1].is_excluded)
    ]
    if not risks:
        raise NoRisks("no scorable, non-excluded risks to chart")

    labels = []
    for risk in risks:
        label = risk.right_key
        if catalog is not None and risk.right_key in catalog:
            label = catalog.lookup(risk.right_key).title
        labels.append(label)
    counts: dict[str, int] = {}
    for i, label in enumerate(labels):
        counts[label] = counts.get(label, 0) + 1
    if any(n > 1 for n in counts.values()):
        labels = [
            f"{label} ({risk.id})" if counts[label] > 1 else label
            for label, risk in zip(labels, risks)
        ]

    report_by_id = {row.risk_id: row for row in comparative_table(assessment).rows}
    initial = tuple(int(report_by_id[r.id].initial.overall) for r in risks)
    series: tuple[tuple[int, ...], ...] = (initial,)
    roles: tuple[str, ...] = ("initial",)
    if include_final and any(r.rounds for r in risks):
        final = tuple(int(report_by_id[r.id].final_level) for r in risks)
        series = (initial, final)
        roles = ("initial", "final")
    return RadialChartSpec(
        axes=tuple((risk.right_key, label) for risk, label in zip(risks, labels)),
        series=series,
        series_roles=roles,
    )


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _polar(index: int, count: int, radius: float) -> tuple[float, float]:
    # 12 o'clock start, clockwise.
    angle = 2.0 * math.pi * index / count
    return CENTER + radius * math.sin(angle), CENTER - radius * math.cos(angle)


def radial_chart(
    assessment: Assessment,
    include_final: bool = True,
    catalog: RightsCatalog | None = None,
) -> str:
    """Render the impact chart as standalone SVG markup.

    Radial with three or more axes; fewer risks fall back to grouped bars (a
    two-axis radial is geometrically degenerate). Output is byte-identical
    for identical input.
    """
    spec = chart_spec(assessment, include_final=include_final, catalog=catalog)
    if len(spec.axes) >= 3:
        return _render_radial(spec)
    return _render_bars(spec)


def _svg_open() -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEWPORT}" '
        f'height="{VIEWPORT}" viewBox="0 0 {VIEWPORT} {VIEWPORT}">',
    ]


def _legend(parts: list[str], roles: tuple[str, ...]) -> None:
    colors = {"initial": INITIAL_COLOR, "final": FINAL_COLOR}
    names = {"initial": "original impact", "final": "final impact"}
    for i, role in enumerate(roles):
        y = 24 + 22 * i
        parts.append(
            f'<rect x="16" y="{y - 11}" width="14" height="14" fill="{colors[role]}"/>'
        )
        parts.append(
            f'<text x="36" y="{y}" font-family="sans-serif" font-size="14" '
            f'fill="#333333">{names[role]}</text>'
        )


def _render_radial(spec: RadialChartSpec) -> str:
    count = len(spec.axes)
    parts = _svg_open()
    # ring gridlines at ordinals 1..4 with numeric labels along the top axis
    for ordinal in range(1, SCALE_MAX + 1):
        radius = RADIUS * ordinal / SCALE_MAX
        parts.append(
            f'<circle cx="{_fmt(CENTER)}" cy="{_fmt(CENTER)}" r="{_fmt(radius)}" '
            f'fill="none" stroke="{GRID_COLOR}" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(CENTER + 6)}" y="{_fmt(CENTER - radius + 14)}" '
            f'font-family="sans-serif" font-size="12" fill="{AXIS_COLOR}">{ordinal}</text>'
        )
    # axes and labels
    for i, (_, label) in enumerate(spec.axes):
        x, y = _polar(i, count, RADIUS)
        parts.append(
            f'<line x1="{_fmt(CENTER)}" y1="{_fmt(CENTER)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(y)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
        )
        lx, ly = _polar(i, count, RADIUS + 28)
        anchor = "middle"
        if lx > CENTER + 1:
            anchor = "start"
        elif lx < CENTER - 1:
            anchor = "end"
        parts.append(
            f'<text x="{_fmt(lx)}" y="{_fmt(ly + 4)}" text-anchor="{anchor}" '
            f'font-family="sans-serif" font-size="14" fill="#333333">{_escape(label)}</text>'
        )
    # series polygons
    colors = {"initial": INITIAL_COLOR, "final": FINAL_COLOR}
    for role, values in zip(spec.series_roles, spec.series):
        points = []
        for i, ordinal in enumerate(values):
            x, y = _polar(i, count, RADIUS * ordinal / SCALE_MAX)
            points.append(f"{_fmt(x)},{_fmt(y)}")
        parts.append(
            f'<polygon points="{" ".join(points)}" fill="{colors[role]}" '
            f'fill-opacity="{FILL_OPACITY}" stroke="{colors[role]}" stroke-width="2"/>'
        )
    _legend(parts, spec.series_roles)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_bars(spec: RadialChartSpec) -> str:
    # Fallback for 1-2 risks: grouped vertical bars on the same 0-4 scale.
    parts = _svg_open()
    left, right, top, bottom = 80.0, 40.0, 60.0, 120.0
    plot_w = VIEWPORT - left - right
    plot_h = VIEWPORT - top - bottom
    baseline = VIEWPORT - bottom
    for ordinal in range(0, SCALE_MAX + 1):
        y = baseline - plot_h * ordinal / SCALE_MAX
        parts.append(
            f'<line x1="{_fmt(left)}" y1="{_fmt(y)}" x2="{_fmt(left + plot_w)}" '
            f'y2="{_fmt(y)}" stroke="{GRID_COLOR}" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(left - 10)}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12" fill="{AXIS_COLOR}">{ordinal}</text>'
        )
    groups = len(spec.axes)
    colors = {"initial": INITIAL_COLOR, "final": FINAL_COLOR}
    group_w = plot_w / groups
    bar_w = min(60.0, group_w / (len(spec.series) + 1))
    for g, (_, label) in enumerate(spec.axes):
        cx = left + group_w * (g + 0.5)
        offset = -bar_w * (len(spec.series) - 1) / 2
        for role, values in zip(spec.series_roles, spec.series):
            height = plot_h * values[g] / SCALE_MAX
            x = cx + offset - bar_w / 2
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(baseline - height)}" '
                f'width="{_fmt(bar_w)}" height="{_fmt(height)}" '
                f'fill="{colors[role]}" fill-opacity="0.8"/>'
            )
            offset += bar_w
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(baseline + 24)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14" fill="#333333">{_escape(label)}</text>'
        )
    _legend(parts, spec.series_roles)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


# --- reports -------------------------------------------------------------------

def _level_cell(level: Level | None) -> str | None:
    return level.code if level is not None else None


def _methodology() -> dict:
    return {
        "band_rule": (
            "mean of overall ordinals; non-integral means render the two "
            "adjacent levels nearest-first, exact .5 ties lower-first"
        ),
        "likelihood_bins": [
            {"from": lo, "to": hi, "level": level.token} for lo, hi, level in LIKELIHOOD_BINS
        ],
        "likelihood_matrix": [list(row) for row in LIKELIHOOD_MATRIX],
        "notes": list(METHODOLOGY_NOTES),
        "overall_matrix": [
            [overall_impact(l, s).code for s in Level] for l in Level
        ],
        "severity_bins": [
            {"from": lo, "to": hi, "level": level.token} for lo, hi, level in SEVERITY_BINS
        ],
        "severity_matrix": [list(row) for row in SEVERITY_MATRIX],
    }


def report_data(value: Reportable) -> dict:
    """The report as one plain dict; both output formats render from it."""
    if isinstance(value, IntegratedAssessment):
        return _integrated_data(value)
    return _assessment_data(value)


def _assessment_data(assessment: Assessment) -> dict:
    if STAGE_ORDER.index(assessment.stage) <= STAGE_ORDER.index(Stage.SCOPING):
        raise StageTooEarly(
            f"reports require an assessment past scoping (stage is {assessment.stage.value})"
        )
    report = comparative_table(assessment)
    rows = []
    for row in report.rows:
        rows.append(
            {
                "description": row.description,
                "efs": list(row.efs),
                "excluded": row.excluded,
                "final": "excluded" if row.excluded else _level_cell(
                    row.residual.final if row.residual else None
                ),
                "l": row.initial.likelihood.code,
                "l_score": row.initial.l_score,
                "mms": list(row.mms),
                "overall": row.initial.overall.code,
                "right_key": row.right_key,
                "risk_id": row.risk_id,
                "rl": "excluded" if row.excluded else _level_cell(
                    row.residual.rl if row.residual else None
                ),
                "rl_score": row.residual.rl_score if row.residual else None,
                "rs": "excluded" if row.excluded else _level_cell(
                    row.residual.rs if row.residual else None
                ),
                "rs_score": row.residual.rs_score if row.residual else None,
                "s": row.initial.severity.code,
                "s_score": row.initial.s_score,
            }
        )
    return {
        "comparative": {
            "aggregate_after": report.aggregate_after.render() if report.aggregate_after else None,
            "aggregate_before": report.aggregate_before.render() if report.aggregate_before else None,
            "columns": ["L", "S", "Overall impact", "EFs", "MMs", "rL", "rS", "Final Impact"],
            "rows": rows,
        },
        "envisaged_risks": [
            {
                "description": row["description"],
                "l": row["l"],
                "overall": row["overall"],
                "risk_id": row["risk_id"],
                "s": row["s"],
            }
            for row in rows
        ],
        "kind": "assessment_report",
        "methodology": _methodology(),
        "precautionary": [flag.to_dict() for flag in report.precautionary],
        "scoping": assessment.scoping.to_dict(),
        "stage": assessment.stage.value,
        "title": assessment.metadata.title,
        "warnings": [
            {
                "dimensions": list(w.dimensions),
                "risk_id": w.risk_id,
                "round_index": w.round_index,
            }
            for w in report.warnings
        ],
    }


def _integrated_data(integrated: IntegratedAssessment) -> dict:
    threshold = integrated.escalation_threshold
    return {
        "component_refs": list(integrated.component_refs),
        "escalation_threshold": None if math.isinf(threshold) else threshold,
        "kind": "integrated_report",
        "methodology": _methodology(),
        "per_right": {
            key: {
                "contributing": ri.contributing,
                "escalated": ri.escalated,
                "integrated_level": ri.integrated_level.code,
                "max_level": ri.max_level.code,
            }
            for key, ri in sorted(integrated.per_right.items())
        },
    }


def render_report(value: Reportable, format: str = "markdown") -> str:
    """Render a full report in markdown or canonical JSON."""
    from .persistence import canonical_json

    data = report_data(value)
    if format in ("json",):
        return canonical_json(data)
    if format in ("markdown", "md"):
        if data["kind"] == "integrated_report":
            return _integrated_markdown(data)
        return _assessment_markdown(data)
    raise ValueError(f"unknown report format {format!r}; use markdown or json")


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("|" + "|".join([" --- "] * len(header)) + "|")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def _cell(value) -> str:
    if value is None:
        return ""
    return str(value)


def _assessment_markdown(data: dict) -> str:
    lines: list[str] = [f"# HRIA report: {data['title']}", ""]
    lines.append(f"Stage: `{data['stage']}`")
    lines.append("")

    scoping = data["scoping"]
    lines.append("## Scoping summary")
    lines.append("")
    lines.append(f"**Product/service.** {scoping['product_description'] or '(not yet described)'}")
    lines.append("")
    for label, key in (
        ("Target countries", "target_countries"),
        ("Rights-holders", "rights_holders"),
        ("Data categories", "data_categories"),
        ("Processing purposes", "processing_purposes"),
        ("Duty-bearers", "duty_bearers"),
    ):
        values = scoping[key]
        if values:
            lines.append(f"- **{label}:** " + "; ".join(values))
    for label, key in (
        ("Human rights context", "human_rights_context"),
        ("Controls in place", "controls_in_place"),
    ):
        answers = scoping[key]
        if answers:
            lines.append(f"- **{label}:**")
            for question_key in sorted(answers):
                lines.append(f"  - {question_key}: {answers[question_key]}")
    if scoping["stakeholders"]:
        lines.append("- **Stakeholders:**")
        for s in scoping["stakeholders"]:
            engaged = "engaged" if s["engaged"] else "not engaged"
            note = f" {s['notes']}" if s["notes"] else ""
            lines.append(f"  - {s['name']} ({s['category']}, {engaged}).{note}")
    lines.append("")

    lines.append("## Envisaged risks")
    lines.append("")
    lines += _table(
        ["Risk", "L", "S", "Overall impact"],
        [
            [row["description"], row["l"], row["s"], row["overall"]]
            for row in data["envisaged_risks"]
        ],
    )
    lines.append("")

    comparative = data["comparative"]
    lines.append("## Comparative risk impact")
    lines.append("")
    table_rows = []
    for row in comparative["rows"]:
        table_rows.append(
            [
                row["description"],
                row["l"],
                row["s"],
                row["overall"],
                "; ".join(row["efs"]),
                "; ".join(row["mms"]),
                "excluded (EF)" if row["excluded"] else _cell(row["rl"]),
                "excluded (EF)" if row["excluded"] else _cell(row["rs"]),
                "excluded (EF)" if row["excluded"] else _cell(row["final"]),
            ]
        )
    table_rows.append(
        [
            "Overall impact (all impacted areas)",
            "",
            "",
            _cell(comparative["aggregate_before"]),
            "",
            "",
            "",
            "",
            _cell(comparative["aggregate_after"]),
        ]
    )
    lines += _table(["Risk"] + comparative["columns"], table_rows)
    lines.append("")

    if data["warnings"]:
        lines.append("## Escalation warnings")
        lines.append("")
        for w in data["warnings"]:
            dims = ", ".join(w["dimensions"])
            lines.append(
                f"- Risk `{w['risk_id']}`, round {w['round_index']}: residual "
                f"exceeds baseline on {dims}."
            )
        lines.append("")

    if data["precautionary"]:
        lines.append("## Precautionary items")
        lines.append("")
        for flag in data["precautionary"]:
            lines.append(f"- **{flag['risk_id']}** ({flag['status']}): {flag['uncertainty_rationale']}")
            if flag["recommended_measures"]:
                lines.append(f"  - Recommended measures: {'; '.join(flag['recommended_measures'])}")
            if flag["resolution"]:
                lines.append(f"  - Resolution: {flag['resolution']}")
        lines.append("")

    lines += _methodology_markdown(data["methodology"])
    return "\n".join(lines) + "\n"


def _integrated_markdown(data: dict) -> str:
    lines = ["# Integrated HRIA report", ""]
    lines.append("Components: " + ", ".join(data["component_refs"]))
    threshold = data["escalation_threshold"]
    lines.append(
        "Escalation threshold: "
        + ("unbounded (per-right maximum)" if threshold is None else str(threshold))
    )
    lines.append("")
    lines.append("## Per-right escalation")
    lines.append("")
    lines += _table(
        ["Right", "Max component level", "Contributing components", "Integrated level", "Escalated"],
        [
            [
                key,
                ri["max_level"],
                str(ri["contributing"]),
                ri["integrated_level"],
                "yes" if ri["escalated"] else "no",
            ]
            for key, ri in data["per_right"].items()
        ],
    )
    lines.append("")
    lines += _methodology_markdown(data["methodology"])
    return "\n".join(lines) + "\n"


def _methodology_markdown(methodology: dict) -> list[str]:
    lines = ["## Methodology appendix", ""]
    lines.append("Likelihood matrix (rows exposure 1-4, columns probability 1-4):")
    lines.append("")
    lines += _table(
        ["exposure \\ probability", "1", "2", "3", "4"],
        [
            [str(i + 1)] + [str(v) for v in row]
            for i, row in enumerate(methodology["likelihood_matrix"])
        ],
    )
    lines.append("")
    lines.append("Severity matrix (rows effort 1-4, columns gravity 1-4):")
    lines.append("")
    lines += _table(
        ["effort \\ gravity", "1", "2", "3", "4"],
        [
            [str(i + 1)] + [str(v) for v in row]
            for i, row in enumerate(methodology["severity_matrix"])
        ],
    )
    lines.append("")
    for name, key in (("Likelihood bins", "likelihood_bins"), ("Severity bins", "severity_bins")):
        spans = ", ".join(
            f"{b['from']}-{b['to']} {Level.from_token(b['level']).code}"
            for b in methodology[key]
        )
        lines.append(f"- {name}: {spans}")
    lines.append("")
    lines.append("Overall impact (rows likelihood, columns severity):")
    lines.append("")
    lines += _table(
        ["L \\ S", "L", "M", "H", "VH"],
        [
            [Level(i + 1).code] + row
            for i, row in enumerate(methodology["overall_matrix"])
        ],
    )
    lines.append("")
    lines.append(f"- Aggregate band: {methodology['band_rule']}.")
    lines.append("")
    for note in methodology["notes"]:
        lines.append(f"- {note}")
    return lines
