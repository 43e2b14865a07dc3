"""Local HTTP+JSON facade over a directory of assessment files.

Loopback tool for the assessor console and scripts: one writer at a time per
assessment, enforced by revision-based optimistic concurrency (If-Match).
Every successful mutation is saved to disk before it is acknowledged, so a
process restart serves the mutated state. GET bodies are canonical JSON and
therefore byte-identical at a fixed revision.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .assessment import (
    Assessment,
    ExcludingFactor,
    MitigationMeasure,
    Round,
    RiskRatings,
    ScopingRecord,
    add_risk,
    apply_round,
    rate_risk,
    update_scoping,
)
from .assessment import EXCLUDED
from .catalog import RightsCatalog, builtin_catalog
from .errors import (
    DomainError,
    HriaError,
    InvariantViolation,
    UnknownAssessment,
    UnknownLevel,
    UnknownRight,
    UnknownRisk,
)
from .persistence import FILE_SUFFIX, canonical_json, load, save
from .reporting import radial_chart, render_report
from .scoring import Level, score_ratings
from .timefmt import utcnow
from .workflow import (
    Stage,
    accept_precautionary,
    advance,
    complete_stage,
    flag_precautionary,
    integrate,
)

CONSOLE_ENV = "HRIA_CONSOLE_DIR"
CATALOG_FILENAME = "catalog.hria.json"


@dataclass
class StoreEntry:
    path: Path
    value: Assessment
    revision: int = 1
    lock: threading.Lock = field(default_factory=threading.Lock)


class AssessmentStore:
    """Open assessments of one root directory, keyed by file stem."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.catalog = self._load_catalog()
        self.entries: dict[str, StoreEntry] = {}
        self.refresh()

    def _load_catalog(self) -> RightsCatalog:
        candidate = self.root / CATALOG_FILENAME
        if candidate.exists():
            value = load(candidate)
            if isinstance(value, RightsCatalog):
                return value
        return builtin_catalog()

    def refresh(self) -> None:
        for path in sorted(self.root.glob(f"*{FILE_SUFFIX}")):
            if path.name == CATALOG_FILENAME:
                continue
            assessment_id = path.name[: -len(FILE_SUFFIX)]
            if assessment_id in self.entries:
                continue
            value = load(path, catalog=self.catalog)
            if isinstance(value, Assessment):
                self.entries[assessment_id] = StoreEntry(path=path, value=value)

    def get(self, assessment_id: str) -> StoreEntry:
        entry = self.entries.get(assessment_id)
        if entry is None:
            raise UnknownAssessment(f"no assessment {assessment_id!r}")
        return entry


def _error_response(status: int, exc: Exception) -> JSONResponse:
    if isinstance(exc, InvariantViolation):
        detail = [{"message": str(exc), "path": exc.path}]
    else:
        detail = str(exc)
    return JSONResponse(status_code=status, content={"detail": detail})


def _canonical(data, status: int = 200, headers: dict | None = None) -> Response:
    return Response(
        content=canonical_json(data),
        status_code=status,
        media_type="application/json",
        headers=headers or {},
    )


def create_app(root: str | Path) -> FastAPI:
    store = AssessmentStore(root)
    app = FastAPI(title="hria", version="0.1.0")
    app.state.store = store

    @app.exception_handler(HriaError)
    async def domain_error_handler(request: Request, exc: HriaError):
        if isinstance(exc, (UnknownAssessment, UnknownRisk, UnknownRight)):
            return _error_response(404, exc)
        return _error_response(400, exc)

    def mutate(assessment_id: str, if_match: int | None, operation):
        """Run one write under the assessment's lock with revision check."""
        entry = store.get(assessment_id)
        if if_match is None:
            return JSONResponse(
                status_code=428,
                content={"detail": "If-Match header with the current revision is required"},
            )
        with entry.lock:
            if if_match != entry.revision:
                return JSONResponse(
                    status_code=409,
                    content={
                        "detail": f"revision conflict: expected {entry.revision}, got {if_match}",
                        "revision": entry.revision,
                    },
                )
            new_value = operation(entry.value)
            save(new_value, entry.path)
            entry.value = new_value
            entry.revision += 1
            return _canonical(
                {
                    "id": assessment_id,
                    "revision": entry.revision,
                    "stage": new_value.stage.value,
                },
                headers={"ETag": str(entry.revision)},
            )

    @app.get("/assessments")
    def list_assessments():
        store.refresh()
        items = [
            {
                "id": assessment_id,
                "revision": entry.revision,
                "stage": entry.value.stage.value,
                "title": entry.value.metadata.title,
            }
            for assessment_id, entry in sorted(store.entries.items())
        ]
        return _canonical(items)

    @app.get("/assessments/{assessment_id}")
    def get_assessment(assessment_id: str):
        entry = store.get(assessment_id)
        return _canonical(
            {
                "assessment": entry.value.to_dict(),
                "id": assessment_id,
                "revision": entry.revision,
            },
            headers={"ETag": str(entry.revision)},
        )

    @app.put("/assessments/{assessment_id}/scoping")
    def put_scoping(
        assessment_id: str,
        body: dict,
        if_match: int | None = Header(default=None, alias="If-Match"),
    ):
        def operation(value: Assessment) -> Assessment:
            return update_scoping(value, ScopingRecord.from_dict(body))

        return mutate(assessment_id, if_match, operation)

    @app.post("/assessments/{assessment_id}/risks")
    def post_risk(
        assessment_id: str,
        body: dict,
        if_match: int | None = Header(default=None, alias="If-Match"),
    ):
        def operation(value: Assessment) -> Assessment:
            initial = body.get("initial")
            return add_risk(
                value,
                risk_id=body.get("id", ""),
                right_key=body.get("right_key", ""),
                description=body.get("description", ""),
                initial=RiskRatings.from_dict(initial) if initial else None,
                catalog=store.catalog,
                guiding_answers=body.get("guiding_answers"),
                precautionary_rationale=body.get("precautionary_rationale"),
                recommended_measures=tuple(body.get("recommended_measures", [])),
            )

        return mutate(assessment_id, if_match, operation)

    @app.put("/assessments/{assessment_id}/risks/{risk_id}/ratings")
    def put_ratings(
        assessment_id: str,
        risk_id: str,
        body: dict,
        if_match: int | None = Header(default=None, alias="If-Match"),
    ):
        def operation(value: Assessment) -> Assessment:
            return rate_risk(
                value,
                risk_id,
                RiskRatings.from_dict(body.get("ratings", body)),
                rationale=body.get("rationale"),
            )

        return mutate(assessment_id, if_match, operation)

    @app.post("/assessments/{assessment_id}/risks/{risk_id}/rounds")
    def post_round(
        assessment_id: str,
        risk_id: str,
        body: dict,
        if_match: int | None = Header(default=None, alias="If-Match"),
    ):
        def operation(value: Assessment) -> Assessment:
            raw_residual = body.get("residual")
            if raw_residual == "excluded":
                residual = EXCLUDED
            elif raw_residual:
                residual = RiskRatings.from_dict(raw_residual)
            else:
                raise DomainError("a round requires residual ratings or \"excluded\"")
            risk = value.risk(risk_id)
            round_ = Round(
                index=len(risk.rounds) + 1,
                excluding_factors=tuple(
                    ExcludingFactor(
                        description=ef.get("description", ""),
                        legal_basis=ef.get("legal_basis", ""),
                    )
                    for ef in body.get("excluding_factors", [])
                ),
                mitigation_measures=tuple(
                    MitigationMeasure(
                        description=mm.get("description", ""),
                        category=mm.get("category", ""),
                    )
                    for mm in body.get("mitigation_measures", [])
                ),
                residual=residual,
                rationale=body.get("rationale", ""),
                created_at=utcnow(),
            )
            return apply_round(value, risk_id, round_)

        return mutate(assessment_id, if_match, operation)

    @app.post("/assessments/{assessment_id}/flags")
    def post_flag(
        assessment_id: str,
        body: dict,
        if_match: int | None = Header(default=None, alias="If-Match"),
    ):
        def operation(value: Assessment) -> Assessment:
            if body.get("accept"):
                return accept_precautionary(
                    value, body.get("risk_id", ""), body.get("rationale", "")
                )
            return flag_precautionary(
                value,
                body.get("risk_id", ""),
                body.get("rationale", ""),
                tuple(body.get("recommended_measures", [])),
            )

        return mutate(assessment_id, if_match, operation)

    @app.post("/assessments/{assessment_id}/stage")
    def post_stage(
        assessment_id: str,
        body: dict,
        if_match: int | None = Header(default=None, alias="If-Match"),
    ):
        def operation(value: Assessment) -> Assessment:
            try:
                to = Stage(body.get("to", ""))
            except ValueError:
                raise DomainError(f"unknown stage {body.get('to')!r}")
            if body.get("mark_current_done"):
                value = complete_stage(value)
            return advance(value, to, rationale=body.get("rationale"))

        return mutate(assessment_id, if_match, operation)

    @app.put("/assessments/{assessment_id}/checklist")
    def put_checklist(
        assessment_id: str,
        body: dict,
        if_match: int | None = Header(default=None, alias="If-Match"),
    ):
        from .workflow import mark_task

        def operation(value: Assessment) -> Assessment:
            stage = Stage(body["stage"]) if body.get("stage") else value.stage
            return mark_task(
                value, stage, int(body.get("item", -1)), done=bool(body.get("done", True))
            )

        return mutate(assessment_id, if_match, operation)

    @app.get("/assessments/{assessment_id}/report")
    def get_report(assessment_id: str, format: str = Query(default="json")):
        entry = store.get(assessment_id)
        if format in ("md", "markdown"):
            return Response(
                content=render_report(entry.value, "markdown"),
                media_type="text/markdown; charset=utf-8",
                headers={"ETag": str(entry.revision)},
            )
        return Response(
            content=render_report(entry.value, "json"),
            media_type="application/json",
            headers={"ETag": str(entry.revision)},
        )

    @app.get("/assessments/{assessment_id}/chart.svg")
    def get_chart(assessment_id: str, include_final: bool = Query(default=True)):
        entry = store.get(assessment_id)
        svg = radial_chart(entry.value, include_final=include_final, catalog=store.catalog)
        return Response(
            content=svg,
            media_type="image/svg+xml",
            headers={"ETag": str(entry.revision)},
        )

    @app.get("/whatif")
    def whatif(probability: str, exposure: str, gravity: str, effort: str):
        try:
            ratings = RiskRatings(
                probability=Level.from_token(probability),
                exposure=Level.from_token(exposure),
                gravity=Level.from_token(gravity),
                effort=Level.from_token(effort),
            )
        except UnknownLevel as exc:
            return _error_response(400, exc)
        return _canonical(score_ratings(ratings).to_dict())

    @app.get("/rights")
    def rights():
        return _canonical(store.catalog.to_dict())

    @app.post("/integrate")
    def post_integrate(body: dict):
        ids = body.get("ids", [])
        if not ids:
            raise DomainError("integrate requires a nonempty list of assessment ids")
        raw_threshold = body.get("threshold", 2)
        threshold = math.inf if raw_threshold is None else raw_threshold
        snapshots = [store.get(assessment_id).value for assessment_id in ids]
        integrated = integrate(snapshots, store.catalog, threshold=threshold, refs=ids)
        return _canonical(integrated.to_dict())

    console_dir = _console_dir(Path(root))
    if console_dir is not None:
        app.mount("/", StaticFiles(directory=console_dir, html=True), name="console")

    return app


def _console_dir(root: Path) -> Path | None:
    env = os.environ.get(CONSOLE_ENV)
    candidates = [Path(env)] if env else []
    candidates += [
        root / "console",
        Path("frontend") / "dist",
        # editable/checkout installs: <repo>/frontend/dist next to src/
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
    ]
    for candidate in candidates:
        if candidate.is_dir() and (candidate / "index.html").exists():
            return candidate
    return None
