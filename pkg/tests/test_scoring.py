"""Scoring core: matrix constants, bins, overall impact, aggregate bands."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hria.errors import EmptyInput, OutOfRange, UnknownLevel
from hria.scoring import (
    LIKELIHOOD_BINS,
    LIKELIHOOD_MATRIX,
    SEVERITY_BINS,
    SEVERITY_MATRIX,
    Level,
    aggregate_band,
    combine_likelihood,
    combine_severity,
    likelihood_bin,
    overall_impact,
    score_ratings,
    severity_bin,
)
from hria.scoring import RiskRatings

L, M, H, VH = Level.LOW, Level.MEDIUM, Level.HIGH, Level.VERY_HIGH

levels = st.sampled_from(list(Level))


class TestLevel:
    def test_exactly_four_totally_ordered_values(self):
        assert [level.value for level in Level] == [1, 2, 3, 4]
        assert L < M < H < VH

    def test_tokens_round_trip(self):
        for level in Level:
            assert Level.from_token(level.token) is level
        assert Level.from_token("very_high") is VH

    def test_codes(self):
        assert [level.code for level in Level] == ["L", "M", "H", "VH"]

    def test_unknown_token_rejected(self):
        with pytest.raises(UnknownLevel):
            Level.from_token("critical")


class TestCombinationMatrices:
    def test_likelihood_matrix_constants(self):
        assert LIKELIHOOD_MATRIX == (
            (1, 2, 3, 4),
            (2, 3, 5, 9),
            (3, 5, 9, 12),
            (4, 7, 12, 15),
        )

    def test_severity_matrix_constants(self):
        assert SEVERITY_MATRIX == (
            (1, 2, 4, 6),
            (2, 3, 5, 8),
            (3, 5, 8, 10),
            (5, 8, 10, 12),
        )

    @pytest.mark.parametrize("matrix", [LIKELIHOOD_MATRIX, SEVERITY_MATRIX])
    def test_rows_and_columns_nondecreasing(self, matrix):
        for row in matrix:
            assert list(row) == sorted(row)
        for col in zip(*matrix):
            assert list(col) == sorted(col)

    def test_likelihood_is_not_symmetric(self):
        assert combine_likelihood(VH, M).score == 9
        assert combine_likelihood(M, VH).score == 7

    @pytest.mark.parametrize(
        "probability,exposure,score,level",
        [
            (H, VH, 12, VH),
            (M, M, 3, M),
            (M, L, 2, L),
            (L, L, 1, L),
        ],
    )
    def test_likelihood_anchors(self, probability, exposure, score, level):
        combined = combine_likelihood(probability, exposure)
        assert combined.score == score
        assert combined.level is level

    @pytest.mark.parametrize(
        "gravity,effort,score,level",
        [
            (H, M, 5, M),
            (M, M, 3, M),
            (L, L, 1, L),
        ],
    )
    def test_severity_anchors(self, gravity, effort, score, level):
        combined = combine_severity(gravity, effort)
        assert combined.score == score
        assert combined.level is level

    @given(levels, levels, levels, levels)
    def test_combinations_monotone_in_each_argument(self, p1, p2, e1, e2):
        if p1 <= p2 and e1 <= e2:
            a = combine_likelihood(p1, e1)
            b = combine_likelihood(p2, e2)
            assert a.score <= b.score
            assert a.level <= b.level
            c = combine_severity(p1, e1)
            d = combine_severity(p2, e2)
            assert c.score <= d.score
            assert c.level <= d.level


class TestBins:
    # Narrated anchors: likelihood 1->L, 2->L, 3->M, 12->VH; severity 1->L, 3->M, 5->M.
    LIKELIHOOD_ANCHORS = {1: L, 2: L, 3: M, 12: VH}
    SEVERITY_ANCHORS = {1: L, 3: M, 5: M}

    def test_likelihood_anchor_scores(self):
        for score, level in self.LIKELIHOOD_ANCHORS.items():
            assert likelihood_bin(score) is level

    def test_severity_anchor_scores(self):
        for score, level in self.SEVERITY_ANCHORS.items():
            assert severity_bin(score) is level

    def test_derived_thresholds(self):
        assert likelihood_bin(7) is H
        assert severity_bin(10) is VH

    @pytest.mark.parametrize(
        "bins,lo,hi",
        [(LIKELIHOOD_BINS, 1, 15), (SEVERITY_BINS, 1, 12)],
    )
    def test_bins_total_contiguous_monotone(self, bins, lo, hi):
        # Brute-force oracle: walk the whole score range and check the bin
        # table partitions it with nondecreasing levels.
        expected_start = lo
        last_level = 0
        for b_lo, b_hi, level in bins:
            assert b_lo == expected_start
            assert b_lo <= b_hi
            assert level > last_level
            expected_start = b_hi + 1
            last_level = level
        assert expected_start == hi + 1

    def test_every_matrix_value_bins_to_exactly_one_level(self):
        for row in LIKELIHOOD_MATRIX:
            for score in row:
                assert likelihood_bin(score) in Level
        for row in SEVERITY_MATRIX:
            for score in row:
                assert severity_bin(score) in Level

    @pytest.mark.parametrize("score", [0, 16, -1, 100])
    def test_likelihood_out_of_range(self, score):
        with pytest.raises(OutOfRange):
            likelihood_bin(score)

    @pytest.mark.parametrize("score", [0, 13, -3])
    def test_severity_out_of_range(self, score):
        with pytest.raises(OutOfRange):
            severity_bin(score)


class TestOverallImpact:
    # The five narrated anchor points.
    @pytest.mark.parametrize(
        "likelihood,severity,expected",
        [(VH, M, H), (M, L, M), (L, M, M), (L, L, L), (M, M, M)],
    )
    def test_anchors(self, likelihood, severity, expected):
        assert overall_impact(likelihood, severity) is expected

    def test_full_matrix(self):
        expected = {
            L: [L, M, M, H],
            M: [M, M, H, H],
            H: [M, H, H, VH],
            VH: [H, H, VH, VH],
        }
        for likelihood, row in expected.items():
            for severity, value in zip(Level, row):
                assert overall_impact(likelihood, severity) is value

    def test_diagonal_identity(self):
        for level in Level:
            assert overall_impact(level, level) is level

    @given(levels, levels, levels, levels)
    def test_monotone(self, l1, l2, s1, s2):
        if l1 <= l2 and s1 <= s2:
            assert overall_impact(l1, s1) <= overall_impact(l2, s2)


class TestScoreRatings:
    def test_full_breakdown_matches_components(self):
        ratings = RiskRatings(probability=H, exposure=VH, gravity=H, effort=M)
        breakdown = score_ratings(ratings)
        assert breakdown.l_score == 12
        assert breakdown.likelihood is VH
        assert breakdown.s_score == 5
        assert breakdown.severity is M
        assert breakdown.overall is H

    def test_to_dict_uses_tokens(self):
        ratings = RiskRatings(probability=M, exposure=M, gravity=L, effort=L)
        assert score_ratings(ratings).to_dict() == {
            "l_score": 3,
            "likelihood": "medium",
            "s_score": 1,
            "severity": "low",
            "overall": "medium",
        }

    @given(levels, levels, levels, levels)
    def test_pure(self, p, e, g, f):
        ratings = RiskRatings(probability=p, exposure=e, gravity=g, effort=f)
        assert score_ratings(ratings) == score_ratings(ratings)


class TestAggregateBand:
    def test_before_band(self):
        band = aggregate_band([H, M, M])
        assert band.mean == Fraction(7, 3)
        assert band.render() == "M/H"

    def test_after_band(self):
        band = aggregate_band([M, L, M])
        assert band.mean == Fraction(5, 3)
        assert band.render() == "M/L"

    def test_constant_list_has_no_band(self):
        band = aggregate_band([H, H, H])
        assert band.primary_level is H
        assert band.secondary_level is None
        assert band.render() == "H"

    def test_singleton(self):
        band = aggregate_band([VH])
        assert band.primary_level is VH
        assert band.secondary_level is None

    def test_exact_half_tie_renders_lower_first(self):
        band = aggregate_band([L, M])
        assert band.mean == Fraction(3, 2)
        assert band.render() == "L/M"

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            aggregate_band([])

    @given(st.lists(levels, min_size=1, max_size=12))
    def test_band_brackets_mean(self, values):
        # Oracle: recompute the mean independently and check the band holds it.
        mean = sum(int(v) for v in values) / len(values)
        band = aggregate_band(values)
        assert band.mean == Fraction(sum(int(v) for v in values), len(values))
        if band.secondary_level is None:
            assert band.primary_level == mean
        else:
            lo, hi = sorted((band.primary_level, band.secondary_level))
            assert hi - lo == 1
            assert lo < mean < hi
            # nearest-first ordering, lower on a tie
            nearest = min(
                (lo, hi),
                key=lambda level: (abs(mean - level), level),
            )
            assert band.primary_level is nearest
            assert math.isfinite(mean)
