"""CLI behaviour: verbs, exit codes, file effects."""

import json

import pytest

from hria.cli import dispatch
from hria.persistence import load
from hria.fixtures import fixture_catalog


@pytest.fixture()
def demo(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("HRIA_CATALOG", raising=False)
    path = tmp_path / "doll.hria.json"
    assert dispatch(["init", str(path), "--demo"]) == 0
    return path


def run(capsys, argv):
    code = dispatch(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestInit:
    def test_init_creates_file(self, tmp_path, capsys):
        path = tmp_path / "a.hria.json"
        code, out, _ = run(capsys, ["init", str(path), "--title", "My product"])
        assert code == 0
        assert path.exists()
        value = load(path)
        assert value.metadata.title == "My product"

    def test_init_without_title_fails(self, tmp_path, capsys):
        code, _, err = run(capsys, ["init", str(tmp_path / "a.hria.json")])
        assert code == 1
        assert "title" in err

    def test_demo_writes_assessment_and_catalog(self, demo, tmp_path):
        assert demo.exists()
        assert (tmp_path / "catalog.hria.json").exists()
        value = load(demo, catalog=fixture_catalog())
        assert value.metadata.title == "Hello Barbie"


class TestReport:
    def test_json_report(self, demo, capsys):
        code, out, _ = run(capsys, ["report", str(demo), "--format", "json"])
        assert code == 0
        data = json.loads(out)
        assert data["comparative"]["aggregate_before"] == "M/H"
        assert data["comparative"]["aggregate_after"] == "M/L"

    def test_markdown_report_default(self, demo, capsys):
        code, out, _ = run(capsys, ["report", str(demo)])
        assert code == 0
        assert out.startswith("# HRIA report: Hello Barbie")

    def test_svg_report(self, demo, capsys):
        code, out, _ = run(capsys, ["report", str(demo), "--format", "svg"])
        assert code == 0
        assert out.startswith("<svg ")
        assert "#ff7f0e" in out


class TestRoundApply:
    def test_round_then_report_shows_final_m(self, tmp_path, capsys, monkeypatch):
        # Build the initial-only demo, then apply the privacy round by hand.
        monkeypatch.chdir(tmp_path)
        from hria.fixtures import fixture_assessment, fixture_catalog
        from hria.persistence import save

        path = tmp_path / "initial.hria.json"
        save(fixture_assessment(with_rounds=False), path)
        save(fixture_catalog(), tmp_path / "catalog.hria.json")
        code, out, _ = run(
            capsys,
            [
                "round", "apply", str(path),
                "--risk", "privacy",
                "--probability", "low", "--exposure", "low",
                "--gravity", "medium", "--effort", "medium",
                "--mm", "Closed sentence set::content",
                "--mm", "Default-off processing::data-protection-by-default",
                "--mm", "No routine human review::organisational",
                "--mm", "Encrypted communications::security",
                "--rationale", "measures reduce dialogue and retention risks",
            ],
        )
        assert code == 0
        assert "final=M" in out
        code, out, _ = run(capsys, ["report", str(path), "--format", "json"])
        assert code == 0
        data = json.loads(out)
        privacy = next(r for r in data["comparative"]["rows"] if r["risk_id"] == "privacy")
        assert privacy["final"] == "M"

    def test_exclude_requires_ef(self, demo, capsys):
        code, _, err = run(
            capsys,
            ["round", "apply", str(demo), "--risk", "privacy", "--exclude"],
        )
        assert code == 1


class TestStage:
    def test_illegal_transition_exits_1(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        path = tmp_path / "a.hria.json"
        run(capsys, ["init", str(path), "--title", "T"])
        code, _, err = run(capsys, ["stage", "advance", str(path), "--to", "mitigation"])
        assert code == 1
        assert "illegal transition" in err

    def test_advance_with_ticks(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        path = tmp_path / "a.hria.json"
        run(capsys, ["init", str(path), "--title", "T"])
        run(capsys, ["stage", "tick", str(path), "--item", "0"])
        run(capsys, ["stage", "tick", str(path), "--item", "1"])
        code, out, _ = run(capsys, ["stage", "advance", str(path), "--to", "scoping"])
        assert code == 0
        assert "scoping" in out

    def test_unknown_stage_usage_error(self, demo):
        with pytest.raises(SystemExit) as exc:
            dispatch(["stage", "advance", str(demo), "--to", "nowhere"])
        assert exc.value.code == 2


class TestRiskVerbs:
    def test_add_rate_flag_cycle(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        path = tmp_path / "a.hria.json"
        run(capsys, ["init", str(path), "--title", "T"])
        code, out, _ = run(
            capsys,
            [
                "risk", "add", str(path),
                "--id", "r1", "--right", "privacy-data-protection",
                "--description", "privacy risk",
                "--probability", "high", "--exposure", "very_high",
                "--gravity", "high", "--effort", "medium",
                "--answer", "Does the device collect personal information?=yes",
            ],
        )
        assert code == 0
        assert "L=VH" in out and "S=M" in out and "overall=H" in out

        code, out, _ = run(
            capsys,
            ["risk", "flag-precautionary", str(path), "--risk", "r1",
             "--rationale", "too uncertain", "--measure", "restriction"],
        )
        assert code == 0
        code, out, _ = run(
            capsys,
            ["risk", "rate", str(path), "--risk", "r1",
             "--probability", "medium", "--exposure", "medium",
             "--gravity", "medium", "--effort", "medium",
             "--rationale", "pilot data resolves the uncertainty"],
        )
        assert code == 0
        value = load(path)
        assert not value.risk("r1").precautionary

    def test_duplicate_risk_exits_1(self, demo, capsys):
        code, _, err = run(
            capsys,
            ["risk", "add", str(demo), "--id", "privacy",
             "--right", "privacy-data-protection", "--description", "dup",
             "--probability", "low", "--exposure", "low",
             "--gravity", "low", "--effort", "low"],
        )
        assert code == 1
        assert "privacy" in err


class TestScope:
    def test_scope_set_merges(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        path = tmp_path / "a.hria.json"
        run(capsys, ["init", str(path), "--title", "T"])
        code, _, _ = run(
            capsys,
            ["scope", "set", str(path),
             "--product-description", "a described thing",
             "--target-country", "Utopia",
             "--context", "affected-rights=privacy",
             "--stakeholder", "Parents;affected groups;engaged;main concern privacy"],
        )
        assert code == 0
        code, _, _ = run(capsys, ["scope", "set", str(path), "--control", "x-audits=annual"])
        assert code == 0
        value = load(path)
        assert value.scoping.product_description == "a described thing"
        assert value.scoping.target_countries == ("Utopia",)
        assert value.scoping.controls_in_place == {"x-audits": "annual"}
        assert value.scoping.stakeholders[0].engaged

    def test_bad_context_key_exits_1(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        path = tmp_path / "a.hria.json"
        run(capsys, ["init", str(path), "--title", "T"])
        code, _, err = run(capsys, ["scope", "set", str(path), "--context", "freeform=answer"])
        assert code == 1


class TestValidate:
    def test_valid_file(self, demo, capsys):
        code, out, _ = run(capsys, ["validate", str(demo)])
        assert code == 0
        assert "valid" in out

    def test_tampered_file(self, demo, capsys):
        doc = json.loads(demo.read_text())
        doc["payload"]["metadata"]["title"] = "tampered"
        demo.write_text(json.dumps(doc, indent=2, sort_keys=True))
        code, _, err = run(capsys, ["validate", str(demo)])
        assert code == 1
        assert "checksum" in err.lower()

    def test_invariant_violation_exit(self, demo, capsys, tmp_path):
        from hria.persistence import checksum

        doc = json.loads(demo.read_text())
        doc["payload"]["risks"][0]["right_key"] = "unresolvable"
        doc["checksum"] = checksum(doc["payload"])
        demo.write_text(json.dumps(doc, indent=2, sort_keys=True))
        code, _, err = run(capsys, ["validate", str(demo)])
        assert code == 1
        assert "right_key" in err


class TestIntegrate:
    def test_integrate_two_files(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        from hria.fixtures import fixture_assessment, fixture_catalog
        from hria.persistence import save

        save(fixture_catalog(), tmp_path / "catalog.hria.json")
        a_path = tmp_path / "a.hria.json"
        b_path = tmp_path / "b.hria.json"
        save(fixture_assessment(), a_path)
        save(fixture_assessment(), b_path)
        out_path = tmp_path / "integrated.hria.json"
        code, out, _ = run(
            capsys,
            ["integrate", str(a_path), str(b_path), "--out", str(out_path), "--format", "json"],
        )
        assert code == 0
        data = json.loads(out)
        assert data["per_right"]["privacy-data-protection"]["escalated"] is True
        saved = load(out_path)
        assert saved.component_refs == ("a", "b")

    def test_bad_threshold(self, demo, capsys):
        code, _, err = run(capsys, ["integrate", str(demo), "--threshold", "soon"])
        assert code == 1


class TestUsageErrors:
    def test_unknown_verb(self):
        with pytest.raises(SystemExit) as exc:
            dispatch(["frobnicate"])
        assert exc.value.code == 2

    def test_bad_level_token(self, demo):
        with pytest.raises(SystemExit) as exc:
            dispatch(
                ["risk", "rate", str(demo), "--risk", "privacy",
                 "--probability", "extreme", "--exposure", "low",
                 "--gravity", "low", "--effort", "low"]
            )
        assert exc.value.code == 2


class TestCatalogEnv:
    def test_hria_catalog_env_used(self, tmp_path, capsys, monkeypatch):
        from hria.fixtures import fixture_catalog
        from hria.persistence import save

        catalog_path = tmp_path / "custom-cat.hria.json"
        save(fixture_catalog(), catalog_path)
        monkeypatch.setenv("HRIA_CATALOG", str(catalog_path))
        path = tmp_path / "a.hria.json"
        run(capsys, ["init", str(path), "--title", "T"])
        code, out, _ = run(
            capsys,
            ["risk", "add", str(path), "--id", "r1",
             "--right", "freedom-of-thought", "--description", "custom axis",
             "--probability", "medium", "--exposure", "medium",
             "--gravity", "low", "--effort", "low"],
        )
        assert code == 0
