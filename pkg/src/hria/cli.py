"""Command-line front door. Every verb is a thin wrapper over one library
operation chain on an assessment file; the CLI adds no semantics of its own.

Exit codes: 0 success, 1 domain error, 2 usage error. Results go to stdout,
diagnostics to stderr. Set HRIA_CATALOG to a catalog file to resolve
project-specific rights; otherwise a catalog.hria.json next to the
assessment file is used when present, else the builtin catalog.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from . import fixtures
from .assessment import (
    Assessment,
    ExcludingFactor,
    Metadata,
    MitigationMeasure,
    Round,
    ScopingRecord,
    Stakeholder,
    add_risk,
    apply_round,
    new_assessment,
    rate_risk,
    update_scoping,
)
from .assessment import EXCLUDED
from .catalog import RightsCatalog, builtin_catalog
from .errors import HriaError, UnknownLevel
from .persistence import load, save
from .reporting import radial_chart, render_report
from .scoring import Level, RiskRatings
from .timefmt import utcnow
from .workflow import (
    Stage,
    accept_precautionary,
    advance,
    flag_precautionary,
    mark_task,
)

CATALOG_ENV = "HRIA_CATALOG"
SIBLING_CATALOG = "catalog.hria.json"


def _resolve_catalog(assessment_path: str | None) -> RightsCatalog:
    env_path = os.environ.get(CATALOG_ENV)
    if env_path:
        value = load(env_path)
        if not isinstance(value, RightsCatalog):
            raise HriaError(f"{CATALOG_ENV} file {env_path!r} is not a catalog")
        return value
    if assessment_path:
        sibling = Path(assessment_path).parent / SIBLING_CATALOG
        if sibling.exists():
            value = load(sibling)
            if isinstance(value, RightsCatalog):
                return value
    return builtin_catalog()


def _load_assessment(path: str) -> tuple[Assessment, RightsCatalog]:
    catalog = _resolve_catalog(path)
    value = load(path, catalog=catalog)
    if not isinstance(value, Assessment):
        raise HriaError(f"{path} is not an assessment file")
    return value, catalog


def _level(token: str) -> Level:
    try:
        return Level.from_token(token)
    except UnknownLevel as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _stage(token: str) -> Stage:
    try:
        return Stage(token)
    except ValueError:
        options = ", ".join(s.value for s in Stage)
        raise argparse.ArgumentTypeError(
            f"unknown stage {token!r}; expected one of: {options}"
        ) from None


def _kv(option: str, value: str) -> tuple[str, str]:
    if "=" not in value:
        raise argparse.ArgumentTypeError(f"{option} expects KEY=VALUE, got {value!r}")
    key, _, answer = value.partition("=")
    return key.strip(), answer.strip()


def _maybe_ratings(args) -> RiskRatings | None:
    given = [args.probability, args.exposure, args.gravity, args.effort]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        raise HriaError(
            "ratings need all four of --probability --exposure --gravity --effort"
        )
    return RiskRatings(
        probability=args.probability,
        exposure=args.exposure,
        gravity=args.gravity,
        effort=args.effort,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hria",
        description="Human-rights impact assessment engine for AI products and services.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_init = sub.add_parser("init", help="create a new assessment file")
    p_init.add_argument("path")
    p_init.add_argument("--title", required=False)
    p_init.add_argument("--description", default="")
    p_init.add_argument("--assessor", default="")
    p_init.add_argument(
        "--demo",
        action="store_true",
        help="write the worked connected-doll demo (plus its catalog alongside)",
    )

    p_scope = sub.add_parser("scope", help="scoping record operations")
    scope_sub = p_scope.add_subparsers(dest="scope_verb", required=True)
    p_scope_set = scope_sub.add_parser("set", help="set scoping fields")
    p_scope_set.add_argument("path")
    p_scope_set.add_argument("--product-description")
    p_scope_set.add_argument("--target-country", action="append", default=None)
    p_scope_set.add_argument("--rights-holder", action="append", default=None)
    p_scope_set.add_argument("--data-category", action="append", default=None)
    p_scope_set.add_argument("--processing-purpose", action="append", default=None)
    p_scope_set.add_argument("--duty-bearer", action="append", default=None)
    p_scope_set.add_argument(
        "--context", action="append", default=[], metavar="KEY=ANSWER",
        help="human-rights-context answer (canonical key or x- extension)",
    )
    p_scope_set.add_argument(
        "--control", action="append", default=[], metavar="KEY=ANSWER",
        help="controls-in-place answer (canonical key or x- extension)",
    )
    p_scope_set.add_argument(
        "--stakeholder", action="append", default=[],
        metavar="NAME;CATEGORY[;engaged][;NOTES]",
    )

    p_risk = sub.add_parser("risk", help="risk register operations")
    risk_sub = p_risk.add_subparsers(dest="risk_verb", required=True)

    p_risk_add = risk_sub.add_parser("add", help="add an envisaged risk")
    p_risk_add.add_argument("path")
    p_risk_add.add_argument("--id", required=True, dest="risk_id")
    p_risk_add.add_argument("--right", required=True, dest="right_key")
    p_risk_add.add_argument("--description", required=True)
    for dim in ("probability", "exposure", "gravity", "effort"):
        p_risk_add.add_argument(f"--{dim}", type=_level, default=None)
    p_risk_add.add_argument("--answer", action="append", default=[], metavar="QUESTION=ANSWER")
    p_risk_add.add_argument(
        "--precautionary-rationale",
        help="create the risk unrated under a precautionary flag",
    )
    p_risk_add.add_argument("--measure", action="append", default=[],
                            help="recommended precautionary measure")

    p_risk_rate = risk_sub.add_parser("rate", help="set or revise initial ratings")
    p_risk_rate.add_argument("path")
    p_risk_rate.add_argument("--risk", required=True, dest="risk_id")
    for dim in ("probability", "exposure", "gravity", "effort"):
        p_risk_rate.add_argument(f"--{dim}", type=_level, required=True)
    p_risk_rate.add_argument("--rationale")

    p_risk_flag = risk_sub.add_parser(
        "flag-precautionary", help="flag a risk precautionary, or accept an open flag"
    )
    p_risk_flag.add_argument("path")
    p_risk_flag.add_argument("--risk", required=True, dest="risk_id")
    p_risk_flag.add_argument("--rationale", required=True)
    p_risk_flag.add_argument("--measure", action="append", default=[])
    p_risk_flag.add_argument(
        "--accept", action="store_true",
        help="accept the open flag instead of raising a new one",
    )

    p_round = sub.add_parser("round", help="re-assessment rounds")
    round_sub = p_round.add_subparsers(dest="round_verb", required=True)
    p_round_apply = round_sub.add_parser("apply", help="apply one round to a risk")
    p_round_apply.add_argument("path")
    p_round_apply.add_argument("--risk", required=True, dest="risk_id")
    for dim in ("probability", "exposure", "gravity", "effort"):
        p_round_apply.add_argument(f"--{dim}", type=_level, default=None)
    p_round_apply.add_argument(
        "--exclude", action="store_true",
        help="mark the risk legally excluded (requires --ef)",
    )
    p_round_apply.add_argument(
        "--ef", action="append", default=[], metavar="DESCRIPTION::LEGAL_BASIS",
    )
    p_round_apply.add_argument(
        "--mm", action="append", default=[], metavar="DESCRIPTION[::CATEGORY]",
    )
    p_round_apply.add_argument("--rationale", default="")

    p_stage = sub.add_parser("stage", help="workflow stage operations")
    stage_sub = p_stage.add_subparsers(dest="stage_verb", required=True)
    p_stage_advance = stage_sub.add_parser("advance", help="move to another stage")
    p_stage_advance.add_argument("path")
    p_stage_advance.add_argument("--to", required=True, type=_stage)
    p_stage_advance.add_argument("--rationale")
    p_stage_tick = stage_sub.add_parser("tick", help="tick a checklist item")
    p_stage_tick.add_argument("path")
    p_stage_tick.add_argument("--item", required=True, type=int)
    p_stage_tick.add_argument("--stage", type=_stage, default=None)
    p_stage_tick.add_argument("--undone", action="store_true")

    p_report = sub.add_parser("report", help="render a report or chart")
    p_report.add_argument("path")
    p_report.add_argument("--format", choices=["md", "json", "svg"], default="md")
    p_report.add_argument(
        "--initial-only", action="store_true",
        help="omit the final series from svg output",
    )

    p_integrate = sub.add_parser("integrate", help="integrate component assessments")
    p_integrate.add_argument("paths", nargs="+")
    p_integrate.add_argument(
        "--threshold", default="2",
        help="escalation threshold (positive integer, or 'inf' for the per-right maximum)",
    )
    p_integrate.add_argument("--out", help="write the integrated result to a file")
    p_integrate.add_argument("--format", choices=["md", "json"], default="md")

    p_validate = sub.add_parser("validate", help="verify an assessment file")
    p_validate.add_argument("path")

    p_serve = sub.add_parser("serve", help="run the local HTTP service")
    p_serve.add_argument("--root", default=".")
    p_serve.add_argument("--port", type=int, default=8660)
    p_serve.add_argument("--host", default="127.0.0.1")

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except HriaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _run(args) -> int:
    if args.verb == "init":
        return _cmd_init(args)
    if args.verb == "scope":
        return _cmd_scope_set(args)
    if args.verb == "risk":
        return {"add": _cmd_risk_add, "rate": _cmd_risk_rate,
                "flag-precautionary": _cmd_risk_flag}[args.risk_verb](args)
    if args.verb == "round":
        return _cmd_round_apply(args)
    if args.verb == "stage":
        return {"advance": _cmd_stage_advance, "tick": _cmd_stage_tick}[args.stage_verb](args)
    if args.verb == "report":
        return _cmd_report(args)
    if args.verb == "integrate":
        return _cmd_integrate(args)
    if args.verb == "validate":
        return _cmd_validate(args)
    if args.verb == "serve":
        return _cmd_serve(args)
    raise AssertionError(f"unhandled verb {args.verb!r}")


def _cmd_init(args) -> int:
    if args.demo:
        save(fixtures.fixture_assessment(), args.path)
        catalog_path = Path(args.path).parent / SIBLING_CATALOG
        save(fixtures.fixture_catalog(), catalog_path)
        print(f"wrote demo assessment to {args.path}")
        print(f"wrote demo catalog to {catalog_path}")
        return 0
    if not args.title:
        raise HriaError("init requires --title (or --demo)")
    assessment = new_assessment(
        Metadata(title=args.title, description=args.description, assessor=args.assessor),
        created_at=utcnow(),
    )
    save(assessment, args.path)
    print(f"initialised assessment {args.title!r} at {args.path}")
    return 0


def _cmd_scope_set(args) -> int:
    assessment, _ = _load_assessment(args.path)
    current = assessment.scoping
    stakeholders = list(current.stakeholders)
    for raw in args.stakeholder:
        parts = [p.strip() for p in raw.split(";")]
        if len(parts) < 2:
            raise HriaError(f"--stakeholder expects NAME;CATEGORY[;engaged][;NOTES], got {raw!r}")
        engaged = len(parts) > 2 and parts[2].lower() in ("engaged", "yes", "true")
        notes = parts[3] if len(parts) > 3 else ""
        stakeholders.append(
            Stakeholder(name=parts[0], category=parts[1], engaged=engaged, notes=notes)
        )
    scoping = ScopingRecord(
        product_description=(
            args.product_description
            if args.product_description is not None
            else current.product_description
        ),
        target_countries=tuple(args.target_country) if args.target_country is not None else current.target_countries,
        rights_holders=tuple(args.rights_holder) if args.rights_holder is not None else current.rights_holders,
        data_categories=tuple(args.data_category) if args.data_category is not None else current.data_categories,
        processing_purposes=tuple(args.processing_purpose) if args.processing_purpose is not None else current.processing_purposes,
        duty_bearers=tuple(args.duty_bearer) if args.duty_bearer is not None else current.duty_bearers,
        human_rights_context={
            **current.human_rights_context,
            **dict(_kv("--context", v) for v in args.context),
        },
        controls_in_place={
            **current.controls_in_place,
            **dict(_kv("--control", v) for v in args.control),
        },
        stakeholders=tuple(stakeholders),
    )
    assessment = update_scoping(assessment, scoping)
    save(assessment, args.path)
    print(f"scoping updated in {args.path}")
    return 0


def _cmd_risk_add(args) -> int:
    assessment, catalog = _load_assessment(args.path)
    assessment = add_risk(
        assessment,
        risk_id=args.risk_id,
        right_key=args.right_key,
        description=args.description,
        initial=_maybe_ratings(args),
        catalog=catalog,
        guiding_answers=dict(_kv("--answer", v) for v in args.answer),
        precautionary_rationale=args.precautionary_rationale,
        recommended_measures=tuple(args.measure),
    )
    save(assessment, args.path)
    risk = assessment.risk(args.risk_id)
    if risk.initial is not None:
        from .scoring import score_ratings

        breakdown = score_ratings(risk.initial)
        print(
            f"added risk {args.risk_id!r}: L={breakdown.likelihood.code} "
            f"S={breakdown.severity.code} overall={breakdown.overall.code}"
        )
    else:
        print(f"added precautionary risk {args.risk_id!r} (unrated)")
    return 0


def _cmd_risk_rate(args) -> int:
    assessment, _ = _load_assessment(args.path)
    ratings = RiskRatings(
        probability=args.probability,
        exposure=args.exposure,
        gravity=args.gravity,
        effort=args.effort,
    )
    assessment = rate_risk(assessment, args.risk_id, ratings, rationale=args.rationale)
    save(assessment, args.path)
    print(f"rated risk {args.risk_id!r}")
    return 0


def _cmd_risk_flag(args) -> int:
    assessment, _ = _load_assessment(args.path)
    if args.accept:
        assessment = accept_precautionary(assessment, args.risk_id, args.rationale)
        print(f"accepted precautionary flag on {args.risk_id!r}")
    else:
        assessment = flag_precautionary(
            assessment, args.risk_id, args.rationale, tuple(args.measure)
        )
        print(f"flagged risk {args.risk_id!r} precautionary")
    save(assessment, args.path)
    return 0


def _cmd_round_apply(args) -> int:
    assessment, _ = _load_assessment(args.path)
    risk = assessment.risk(args.risk_id)
    efs = []
    for raw in args.ef:
        description, sep, basis = raw.partition("::")
        if not sep:
            raise HriaError(f"--ef expects DESCRIPTION::LEGAL_BASIS, got {raw!r}")
        efs.append(ExcludingFactor(description=description.strip(), legal_basis=basis.strip()))
    mms = []
    for raw in args.mm:
        description, _, category = raw.partition("::")
        mms.append(MitigationMeasure(description=description.strip(), category=category.strip()))
    if args.exclude:
        residual = EXCLUDED
    else:
        ratings = _maybe_ratings(args)
        if ratings is None:
            raise HriaError("round apply needs the four residual ratings or --exclude")
        residual = ratings
    round_ = Round(
        index=len(risk.rounds) + 1,
        excluding_factors=tuple(efs),
        mitigation_measures=tuple(mms),
        residual=residual,
        rationale=args.rationale,
        created_at=utcnow(),
    )
    assessment = apply_round(assessment, args.risk_id, round_)
    save(assessment, args.path)
    if args.exclude:
        print(f"risk {args.risk_id!r} excluded (EF) in round {round_.index}")
    else:
        from .scoring import score_ratings

        breakdown = score_ratings(residual)
        print(
            f"round {round_.index} applied to {args.risk_id!r}: "
            f"rL={breakdown.likelihood.code} rS={breakdown.severity.code} "
            f"final={breakdown.overall.code}"
        )
    return 0


def _cmd_stage_advance(args) -> int:
    assessment, _ = _load_assessment(args.path)
    assessment = advance(assessment, args.to, rationale=args.rationale)
    save(assessment, args.path)
    print(f"stage is now {assessment.stage.value}")
    return 0


def _cmd_stage_tick(args) -> int:
    assessment, _ = _load_assessment(args.path)
    stage = args.stage or assessment.stage
    assessment = mark_task(assessment, stage, args.item, done=not args.undone)
    save(assessment, args.path)
    state = "unticked" if args.undone else "ticked"
    print(f"{state} item {args.item} of {stage.value}")
    return 0


def _cmd_report(args) -> int:
    assessment, catalog = _load_assessment(args.path)
    if args.format == "svg":
        print(radial_chart(assessment, include_final=not args.initial_only, catalog=catalog), end="")
    elif args.format == "json":
        print(render_report(assessment, "json"), end="")
    else:
        print(render_report(assessment, "markdown"), end="")
    return 0


def _cmd_integrate(args) -> int:
    from .workflow import integrate

    if args.threshold == "inf":
        threshold: int | float = math.inf
    else:
        try:
            threshold = int(args.threshold)
        except ValueError:
            raise HriaError(f"--threshold must be a positive integer or 'inf', got {args.threshold!r}")
    catalog = _resolve_catalog(args.paths[0])
    assessments = []
    refs = []
    for path in args.paths:
        value = load(path, catalog=catalog)
        if not isinstance(value, Assessment):
            raise HriaError(f"{path} is not an assessment file")
        assessments.append(value)
        refs.append(Path(path).name.removesuffix(".hria.json"))
    integrated = integrate(assessments, catalog, threshold=threshold, refs=refs)
    if args.out:
        save(integrated, args.out)
        print(f"wrote integrated assessment to {args.out}", file=sys.stderr)
    print(render_report(integrated, "json" if args.format == "json" else "markdown"), end="")
    return 0


def _cmd_validate(args) -> int:
    _load_assessment(args.path)
    print(f"{args.path}: valid")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.root)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
