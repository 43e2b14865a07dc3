"""File persistence: canonical JSON envelopes with checksums and migrations.

Assessments are audit artifacts meant for version control, so the on-disk
form is byte-stable: UTF-8, lexicographically sorted keys, two-space indent,
LF line endings, one trailing newline. The envelope carries a schema version
and a SHA-256 checksum of the canonical payload bytes; writes are atomic
(temp file then rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Union

from .assessment import Assessment
from .catalog import RightsCatalog, builtin_catalog, catalog_from_dict, _KEY_RE
from .errors import ChecksumMismatch, InvariantViolation, IoError, UnknownSchema
from .scoring import Level
from .timefmt import parse_ts
from .workflow import STAGE_TASKS, IntegratedAssessment, Stage

SCHEMA_VERSION = 2
FILE_SUFFIX = ".hria.json"

KIND_ASSESSMENT = "assessment"
KIND_CATALOG = "catalog"
KIND_INTEGRATED = "integrated"

Persistable = Union[Assessment, RightsCatalog, IntegratedAssessment]

_RATING_DIMS = ("probability", "exposure", "gravity", "effort")
_LEVEL_TOKENS = {level.token for level in Level}


def canonical_json(value) -> str:
    return json.dumps(value, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def canonical_bytes(value) -> bytes:
    return canonical_json(value).encode("utf-8")


def checksum(payload) -> str:
    return hashlib.sha256(canonical_bytes(payload)).hexdigest()


def _kind_of(value: Persistable) -> str:
    if isinstance(value, Assessment):
        return KIND_ASSESSMENT
    if isinstance(value, RightsCatalog):
        return KIND_CATALOG
    if isinstance(value, IntegratedAssessment):
        return KIND_INTEGRATED
    raise UnknownSchema(f"cannot persist values of type {type(value).__name__}")


def envelope(value: Persistable) -> dict:
    payload = value.to_dict()
    return {
        "checksum": checksum(payload),
        "kind": _kind_of(value),
        "payload": payload,
        "schema_version": SCHEMA_VERSION,
    }


def save(value: Persistable, path: str | Path) -> None:
    """Write the canonical envelope atomically (temp file + rename)."""
    path = Path(path)
    data = canonical_bytes(envelope(value))
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load(path: str | Path, catalog: RightsCatalog | None = None) -> Persistable:
    """Read, verify, migrate and validate one envelope file.

    ``catalog`` resolves risk right-keys for assessment files; it defaults to
    the builtin catalog.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvariantViolation("$", f"not a JSON envelope: {exc}") from exc
    return from_envelope(data, catalog=catalog)


def from_envelope(data: dict, catalog: RightsCatalog | None = None) -> Persistable:
    if not isinstance(data, dict):
        raise InvariantViolation("$", "envelope must be a JSON object")
    for field in ("checksum", "kind", "payload", "schema_version"):
        if field not in data:
            raise InvariantViolation(field, "missing envelope field")
    version = data["schema_version"]
    if not isinstance(version, int) or version < 1 or version > SCHEMA_VERSION:
        raise UnknownSchema(
            f"schema_version {version!r} not supported (engine speaks 1..{SCHEMA_VERSION})"
        )
    kind = data["kind"]
    if kind not in (KIND_ASSESSMENT, KIND_CATALOG, KIND_INTEGRATED):
        raise UnknownSchema(f"unknown envelope kind {kind!r}")
    payload = data["payload"]
    if checksum(payload) != data["checksum"]:
        raise ChecksumMismatch("payload bytes do not match the recorded checksum")
    payload = migrate(kind, payload, version)
    if kind == KIND_ASSESSMENT:
        validate_assessment_payload(payload, catalog or builtin_catalog())
        return Assessment.from_dict(payload)
    if kind == KIND_CATALOG:
        validate_catalog_payload(payload)
        return catalog_from_dict(payload)
    validate_integrated_payload(payload)
    return IntegratedAssessment.from_dict(payload)


def migrate(kind: str, payload: dict, version: int) -> dict:
    """Bring an older payload up to the current schema, deterministically."""
    if version == 1 and kind == KIND_ASSESSMENT:
        # Version 1 predates precautionary flags and per-risk guiding answers.
        payload = dict(payload)
        payload.setdefault("precautionary_flags", [])
        payload["risks"] = [
            {**risk, "precautionary": risk.get("precautionary", False),
             "guiding_answers": risk.get("guiding_answers", {})}
            for risk in payload.get("risks", [])
        ]
    return payload


# --- validation ---------------------------------------------------------------

def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise InvariantViolation(path, message)


def _check_ts(value, path: str) -> None:
    _require(isinstance(value, str), path, "timestamp must be a string")
    try:
        parse_ts(value)
    except ValueError:
        raise InvariantViolation(path, f"not an ISO-8601 UTC timestamp: {value!r}") from None


def _check_ratings(value, path: str) -> None:
    _require(isinstance(value, dict), path, "ratings must be an object")
    for dim in _RATING_DIMS:
        _require(dim in value, f"{path}.{dim}", "missing rating dimension")
        _require(
            value[dim] in _LEVEL_TOKENS,
            f"{path}.{dim}",
            f"unknown level token {value[dim]!r}",
        )


def _ordinal(token: str) -> int:
    return int(Level.from_token(token))


def validate_assessment_payload(payload: dict, catalog: RightsCatalog) -> None:
    """Enforce every model invariant on a raw assessment payload.

    Raises InvariantViolation with the path of the offending field.
    """
    _require(isinstance(payload, dict), "$", "payload must be an object")
    metadata = payload.get("metadata")
    _require(isinstance(metadata, dict), "metadata", "missing metadata object")
    title = metadata.get("title", "")
    _require(bool(title and title.strip()), "metadata.title", "title must be non-empty")
    _check_ts(payload.get("created_at"), "created_at")

    stage = payload.get("stage")
    stage_tokens = {s.value for s in Stage}
    _require(stage in stage_tokens, "stage", f"unknown stage {stage!r}")

    for stage_token, items in payload.get("checklists", {}).items():
        _require(
            stage_token in stage_tokens,
            f"checklists.{stage_token}",
            f"unknown stage {stage_token!r}",
        )
        expected = STAGE_TASKS[Stage(stage_token)]
        tasks = tuple(item.get("task") for item in items)
        _require(
            tasks == expected,
            f"checklists.{stage_token}",
            "builtin checklist task texts were altered",
        )

    for i, record in enumerate(payload.get("stage_log", [])):
        _require(record.get("from") in stage_tokens, f"stage_log[{i}].from", "unknown stage")
        _require(record.get("to") in stage_tokens, f"stage_log[{i}].to", "unknown stage")
        _check_ts(record.get("at"), f"stage_log[{i}].at")

    scoping = payload.get("scoping", {})
    from .assessment import CONTEXT_QUESTIONS, CONTROLS_QUESTIONS, EXTENSION_PREFIX

    for key in scoping.get("human_rights_context", {}):
        _require(
            key in CONTEXT_QUESTIONS or key.startswith(EXTENSION_PREFIX),
            f"scoping.human_rights_context.{key}",
            "not a canonical question key nor a flagged extension",
        )
    for key in scoping.get("controls_in_place", {}):
        _require(
            key in CONTROLS_QUESTIONS or key.startswith(EXTENSION_PREFIX),
            f"scoping.controls_in_place.{key}",
            "not a canonical question key nor a flagged extension",
        )

    seen_ids = set()
    for i, risk in enumerate(payload.get("risks", [])):
        where = f"risks[{i}]"
        risk_id = risk.get("id")
        _require(bool(risk_id), f"{where}.id", "missing risk id")
        _require(risk_id not in seen_ids, f"{where}.id", f"duplicate risk id {risk_id!r}")
        seen_ids.add(risk_id)
        right_key = risk.get("right_key")
        _require(
            right_key in catalog,
            f"{where}.right_key",
            f"right {right_key!r} does not resolve in the active catalog",
        )
        precautionary = bool(risk.get("precautionary", False))
        initial = risk.get("initial")
        if initial is None:
            _require(
                precautionary,
                f"{where}.initial",
                "only precautionary risks may lack initial ratings",
            )
        else:
            _check_ratings(initial, f"{where}.initial")

        rounds = risk.get("rounds", [])
        if rounds:
            _require(
                initial is not None,
                f"{where}.rounds",
                "rounds require initial ratings",
            )
        baseline = initial
        excluded_seen = False
        for j, round_ in enumerate(rounds):
            rwhere = f"{where}.rounds[{j}]"
            _require(
                round_.get("index") == j + 1,
                f"{rwhere}.index",
                f"round indices must be 1..n in order (got {round_.get('index')!r})",
            )
            _require(
                not excluded_seen,
                rwhere,
                "no rounds may follow an excluding round",
            )
            _check_ts(round_.get("created_at"), f"{rwhere}.created_at")
            residual = round_.get("residual")
            if residual == "excluded":
                excluded_seen = True
                efs = round_.get("excluding_factors", [])
                _require(
                    len(efs) > 0,
                    f"{rwhere}.excluding_factors",
                    "an excluded residual requires at least one excluding factor",
                )
                for k, ef in enumerate(efs):
                    _require(
                        bool(ef.get("legal_basis", "").strip()),
                        f"{rwhere}.excluding_factors[{k}].legal_basis",
                        "an excluding factor requires a recorded legal basis",
                    )
            else:
                _check_ratings(residual, f"{rwhere}.residual")
                improved = any(
                    _ordinal(residual[dim]) < _ordinal(baseline[dim])
                    for dim in _RATING_DIMS
                )
                _require(
                    not improved or bool(round_.get("rationale", "").strip()),
                    f"{rwhere}.rationale",
                    "a residual below its baseline requires a rationale",
                )
                baseline = residual

    for i, flag in enumerate(payload.get("precautionary_flags", [])):
        where = f"precautionary_flags[{i}]"
        risk_id = flag.get("risk_id")
        _require(
            risk_id in seen_ids,
            f"{where}.risk_id",
            f"flag references missing risk {risk_id!r}",
        )
        _require(
            bool(flag.get("uncertainty_rationale", "").strip()),
            f"{where}.uncertainty_rationale",
            "a precautionary flag requires an uncertainty rationale",
        )
        _require(
            flag.get("status", "open") in ("open", "accepted", "resolved"),
            f"{where}.status",
            f"unknown flag status {flag.get('status')!r}",
        )


def validate_catalog_payload(payload: dict) -> None:
    _require(isinstance(payload, dict), "$", "payload must be an object")
    builtin = {entry.key: entry for entry in builtin_catalog().entries}
    seen = set()
    for i, raw in enumerate(payload.get("entries", [])):
        where = f"entries[{i}]"
        key = raw.get("key", "")
        _require(bool(_KEY_RE.match(key or "")), f"{where}.key", f"key {key!r} is not kebab-case")
        _require(key not in seen, f"{where}.key", f"duplicate key {key!r}")
        seen.add(key)
        _require(bool(raw.get("title")), f"{where}.title", "title must be non-empty")
        if raw.get("builtin"):
            _require(
                key in builtin,
                f"{where}.key",
                f"{key!r} claims builtin status but is not a builtin right",
            )
            _require(
                raw.get("title") == builtin[key].title,
                f"{where}.title",
                "builtin entries are immutable",
            )


def validate_integrated_payload(payload: dict) -> None:
    _require(isinstance(payload, dict), "$", "payload must be an object")
    refs = payload.get("component_refs", [])
    _require(len(refs) > 0, "component_refs", "at least one component required")
    threshold = payload.get("escalation_threshold")
    if threshold is not None:
        _require(
            isinstance(threshold, int) and threshold >= 1,
            "escalation_threshold",
            "threshold must be a positive integer or null (unbounded)",
        )
    for key, value in payload.get("per_right", {}).items():
        where = f"per_right.{key}"
        for field in ("max_level", "integrated_level"):
            _require(
                value.get(field) in _LEVEL_TOKENS,
                f"{where}.{field}",
                f"unknown level token {value.get(field)!r}",
            )
        max_level = _ordinal(value["max_level"])
        integrated = _ordinal(value["integrated_level"])
        _require(
            integrated >= max_level,
            f"{where}.integrated_level",
            "integrated level may not undercut the component maximum",
        )
        _require(
            bool(value.get("escalated")) == (integrated > max_level),
            f"{where}.escalated",
            "escalated must mirror integrated_level > max_level",
        )
        _require(
            isinstance(value.get("contributing"), int) and value["contributing"] >= 1,
            f"{where}.contributing",
            "contributing component count must be a positive integer",
        )
