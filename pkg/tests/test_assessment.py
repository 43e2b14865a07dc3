"""Assessment model: register, rounds, residuals, comparative views."""

from datetime import datetime, timezone

import pytest

from hria.assessment import (
    EXCLUDED,
    ExcludingFactor,
    Metadata,
    MitigationMeasure,
    Round,
    ScopingRecord,
    add_risk,
    apply_round,
    comparative_table,
    initial_scores,
    latest_overall,
    new_assessment,
    rate_risk,
    risk_warnings,
    update_scoping,
)
from hria.catalog import builtin_catalog
from hria.errors import (
    AssessmentFinalized,
    DomainError,
    DuplicateRiskId,
    EmptyRegister,
    InvalidKey,
    InvalidMetadata,
    InvariantViolation,
    NonMonotoneIndex,
    RiskNotRated,
    UnknownRight,
    UnknownRisk,
)
from hria.fixtures import excluded_risk_round, fixture_assessment, fixture_catalog
from hria.scoring import Level, RiskRatings
from hria.workflow import Stage

L, M, H, VH = Level.LOW, Level.MEDIUM, Level.HIGH, Level.VERY_HIGH
T0 = datetime(2024, 1, 1, tzinfo=timezone.utc)
CATALOG = builtin_catalog()


def ratings(p, e, g, f):
    return RiskRatings(probability=p, exposure=e, gravity=g, effort=f)


def base_assessment():
    return new_assessment(Metadata(title="Test product"), created_at=T0)


def make_round(index, residual, rationale="improved by the listed measures", efs=(), mms=()):
    return Round(
        index=index,
        excluding_factors=efs,
        mitigation_measures=mms,
        residual=residual,
        rationale=rationale,
        created_at=T0,
    )


class TestNewAssessment:
    def test_fresh_assessment(self):
        a = new_assessment({"title": "Hello Barbie"})
        assert a.metadata.title == "Hello Barbie"
        assert a.risks == ()
        assert a.stage is Stage.PRELIMINARY_ANALYSIS

    def test_empty_title_rejected(self):
        with pytest.raises(InvalidMetadata):
            new_assessment({"title": ""})
        with pytest.raises(InvalidMetadata):
            new_assessment(Metadata(title="   "))

    def test_serialization_round_trips(self):
        from hria.assessment import Assessment

        a = base_assessment()
        assert Assessment.from_dict(a.to_dict()) == a


class TestScoping:
    def test_update_scoping(self):
        a = update_scoping(
            base_assessment(),
            ScopingRecord(
                product_description="A thing",
                human_rights_context={"affected-rights": "privacy"},
                controls_in_place={"existing-policies": "none yet"},
            ),
        )
        assert a.scoping.product_description == "A thing"

    def test_extension_keys_need_prefix(self):
        with pytest.raises(InvalidKey):
            update_scoping(
                base_assessment(),
                ScopingRecord(human_rights_context={"my-own-question": "answer"}),
            )

    def test_prefixed_extension_accepted(self):
        a = update_scoping(
            base_assessment(),
            ScopingRecord(controls_in_place={"x-red-team": "quarterly"}),
        )
        assert a.scoping.controls_in_place["x-red-team"] == "quarterly"


class TestAddRisk:
    # Initial golden rows: ratings -> (L, S, overall).
    @pytest.mark.parametrize(
        "given,expected",
        [
            (ratings(H, VH, H, M), (VH, M, H)),
            (ratings(M, M, L, L), (M, L, M)),
            (ratings(M, L, M, M), (L, M, M)),
        ],
    )
    def test_initial_row_matches_scoring(self, given, expected):
        a = add_risk(base_assessment(), "r1", "privacy-data-protection", "risk", given, CATALOG)
        breakdown = initial_scores(a.risk("r1"))
        assert (breakdown.likelihood, breakdown.severity, breakdown.overall) == expected

    def test_unknown_right(self):
        with pytest.raises(UnknownRight):
            add_risk(base_assessment(), "r1", "nope", "x", ratings(L, L, L, L), CATALOG)

    def test_duplicate_id(self):
        a = add_risk(base_assessment(), "r1", "human-dignity", "x", ratings(L, L, L, L), CATALOG)
        with pytest.raises(DuplicateRiskId):
            add_risk(a, "r1", "human-dignity", "y", ratings(L, L, L, L), CATALOG)

    def test_invalid_id(self):
        with pytest.raises(InvalidKey):
            add_risk(base_assessment(), "bad id", "human-dignity", "x", ratings(L, L, L, L), CATALOG)

    def test_unrated_requires_precautionary_rationale(self):
        with pytest.raises(RiskNotRated):
            add_risk(base_assessment(), "r1", "human-dignity", "x", None, CATALOG)

    def test_unrated_precautionary_risk(self):
        a = add_risk(
            base_assessment(),
            "r1",
            "human-dignity",
            "facial recognition add-on",
            None,
            CATALOG,
            precautionary_rationale="consequences cannot be quantified in advance",
        )
        assert a.risk("r1").precautionary
        assert len(a.precautionary_flags) == 1


class TestRateRisk:
    def test_rerate_before_rounds(self):
        a = add_risk(base_assessment(), "r1", "human-dignity", "x", ratings(L, L, L, L), CATALOG)
        a = rate_risk(a, "r1", ratings(M, M, M, M))
        assert a.risk("r1").initial == ratings(M, M, M, M)

    def test_ratings_frozen_after_rounds(self):
        a = add_risk(base_assessment(), "r1", "human-dignity", "x", ratings(M, M, M, M), CATALOG)
        a = apply_round(a, "r1", make_round(1, ratings(L, L, L, L)))
        with pytest.raises(DomainError):
            rate_risk(a, "r1", ratings(L, L, L, L))

    def test_unknown_risk(self):
        with pytest.raises(UnknownRisk):
            rate_risk(base_assessment(), "ghost", ratings(L, L, L, L))


class TestApplyRound:
    def _rated(self, initial=None):
        return add_risk(
            base_assessment(),
            "r1",
            "privacy-data-protection",
            "privacy risk",
            initial or ratings(H, VH, H, M),
            CATALOG,
        )

    def test_privacy_residual_recomputed_from_ratings(self):
        # Residual ratings (low, low, medium, medium) recompute to rL=L
        # (score 1) and rS=M (score 3); see the fixture note on the published
        # table's rL cell.
        a = self._rated()
        a = apply_round(a, "r1", make_round(1, ratings(L, L, M, M)))
        report = comparative_table(a)
        row = report.rows[0]
        assert row.residual.rl is L
        assert row.residual.rl_score == 1
        assert row.residual.rs is M
        assert row.residual.rs_score == 3
        assert row.residual.final is M

    def test_round_index_must_continue_sequence(self):
        a = self._rated()
        with pytest.raises(NonMonotoneIndex):
            apply_round(a, "r1", make_round(2, ratings(L, L, M, M)))

    def test_unknown_risk(self):
        a = self._rated()
        with pytest.raises(UnknownRisk):
            apply_round(a, "ghost", make_round(1, ratings(L, L, M, M)))

    def test_round_chaining_uses_previous_residual_as_baseline(self):
        a = self._rated()
        a = apply_round(a, "r1", make_round(1, ratings(M, M, M, M)))
        # Second round worsens relative to round 1 (M->H), not to initial (H).
        a = apply_round(a, "r1", make_round(2, ratings(H, M, M, M), rationale=""))
        warnings = risk_warnings(a.risk("r1"))
        assert len(warnings) == 1
        assert warnings[0].round_index == 2
        assert warnings[0].dimensions == ("probability",)

    def test_improvement_requires_rationale(self):
        a = self._rated()
        with pytest.raises(InvariantViolation) as err:
            apply_round(a, "r1", make_round(1, ratings(L, L, M, M), rationale="   "))
        assert "rationale" in str(err.value)

    def test_escalation_is_warning_not_error(self):
        a = self._rated(ratings(L, L, L, L))
        a = apply_round(a, "r1", make_round(1, ratings(M, L, L, L), rationale=""))
        assert len(risk_warnings(a.risk("r1"))) == 1

    def test_no_warning_when_nothing_worsens(self):
        a = self._rated()
        a = apply_round(a, "r1", make_round(1, ratings(L, L, M, M)))
        assert risk_warnings(a.risk("r1")) == ()

    def test_excluded_round_needs_excluding_factor(self):
        a = self._rated()
        with pytest.raises(InvariantViolation):
            apply_round(a, "r1", make_round(1, EXCLUDED))

    def test_excluding_factor_needs_legal_basis(self):
        a = self._rated()
        efs = (ExcludingFactor(description="mandated feature", legal_basis="  "),)
        with pytest.raises(InvariantViolation) as err:
            apply_round(a, "r1", make_round(1, EXCLUDED, efs=efs))
        assert "legal_basis" in str(err.value)

    def test_no_rounds_after_exclusion(self):
        a = self._rated()
        a = apply_round(a, "r1", excluded_risk_round())
        with pytest.raises(InvariantViolation):
            apply_round(a, "r1", make_round(2, ratings(L, L, L, L)))

    def test_round_on_precautionary_risk_rejected(self):
        a = add_risk(
            base_assessment(), "r1", "human-dignity", "x", None, CATALOG,
            precautionary_rationale="cannot quantify",
        )
        with pytest.raises(RiskNotRated):
            apply_round(a, "r1", make_round(1, ratings(L, L, L, L)))


class TestComparativeTable:
    def test_golden_fixture_bands(self):
        report = comparative_table(fixture_assessment())
        assert report.aggregate_before.render() == "M/H"
        assert report.aggregate_after.render() == "M/L"

    def test_no_rounds_after_equals_before(self):
        a = add_risk(base_assessment(), "r1", "human-dignity", "x", ratings(H, VH, H, M), CATALOG)
        report = comparative_table(a)
        assert report.rows[0].residual is None
        assert report.aggregate_after == report.aggregate_before

    def test_empty_register(self):
        with pytest.raises(EmptyRegister):
            comparative_table(base_assessment())

    def test_excluded_rows_leave_after_aggregate(self):
        # Hand computation: initial overalls H, M, M -> before 7/3 "M/H".
        # Risk a is excluded by an EF; b's round lands final L; c has no
        # rounds and carries its initial M. After = mean(L, M) = 3/2 -> "L/M".
        a = base_assessment()
        a = add_risk(a, "a", "privacy-data-protection", "a", ratings(H, VH, H, M), CATALOG)
        a = add_risk(a, "b", "human-dignity", "b", ratings(M, M, L, L), CATALOG)
        a = add_risk(a, "c", "non-discrimination", "c", ratings(M, L, M, M), CATALOG)
        a = apply_round(a, "a", excluded_risk_round())
        a = apply_round(a, "b", make_round(1, ratings(L, M, L, L)))
        report = comparative_table(a)
        assert report.aggregate_before.render() == "M/H"
        assert report.aggregate_after.render() == "L/M"
        row_a = report.rows[0]
        assert row_a.excluded
        assert row_a.final_level is None
        assert row_a.efs == ("Feature is mandated for this market and the competing interest prevails",)

    def test_rows_are_recomputed_not_cached(self):
        report1 = comparative_table(fixture_assessment())
        report2 = comparative_table(fixture_assessment())
        assert report1 == report2

    def test_warning_per_worsened_round(self):
        a = add_risk(base_assessment(), "r1", "human-dignity", "x", ratings(L, L, L, L), CATALOG)
        a = apply_round(a, "r1", make_round(1, ratings(M, M, L, L), rationale=""))
        a = apply_round(a, "r1", make_round(2, ratings(M, M, L, L), rationale=""))
        report = comparative_table(a)
        assert len(report.warnings) == 1
        assert report.warnings[0].dimensions == ("probability", "exposure")


class TestLatestOverall:
    def test_latest_overall_progression(self):
        a = add_risk(base_assessment(), "r1", "human-dignity", "x", ratings(H, VH, H, M), CATALOG)
        assert latest_overall(a.risk("r1")) is H
        a = apply_round(a, "r1", make_round(1, ratings(L, L, M, M)))
        assert latest_overall(a.risk("r1")) is M
        a2 = apply_round(a, "r1", excluded_risk_round(index=2))
        assert latest_overall(a2.risk("r1")) is None


class TestFinalizedGuard:
    def test_mutations_blocked_after_finalization(self):
        from dataclasses import replace

        a = add_risk(base_assessment(), "r1", "human-dignity", "x", ratings(L, L, L, L), CATALOG)
        a = replace(a, stage=Stage.FURTHER_IMPLEMENTATION)
        with pytest.raises(AssessmentFinalized):
            add_risk(a, "r2", "human-dignity", "y", ratings(L, L, L, L), CATALOG)
        with pytest.raises(AssessmentFinalized):
            apply_round(a, "r1", make_round(1, ratings(L, L, L, L)))
        with pytest.raises(AssessmentFinalized):
            update_scoping(a, ScopingRecord(product_description="z"))


class TestFixtureSerialization:
    def test_fixture_round_trips(self):
        from hria.assessment import Assessment

        a = fixture_assessment()
        rebuilt = Assessment.from_dict(a.to_dict())
        assert rebuilt == a

    def test_fixture_catalog_has_case_specific_axes(self):
        catalog = fixture_catalog()
        assert "freedom-of-thought" in catalog
        assert "psychological-physical-safety" in catalog
        assert len(catalog.entries) == 11
