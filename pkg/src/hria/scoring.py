"""Pure scoring core: ordinal levels, combination matrices, bins, and bands.

Every rating dimension (probability, exposure, gravity, effort) and every
computed result uses the same four-step ordinal scale. Two fixed cardinal
matrices combine the rating pairs:

    Likelihood (rows = exposure, cols = probability):
        1   2   3   4
        2   3   5   9
        3   5   9  12
        4   7  12  15

    Severity (rows = effort, cols = gravity):
        1   2   4   6
        2   3   5   8
        3   5   8  10
        5   8  10  12

Raw scores are binned back onto the four-step scale (likelihood 1-2/3-6/7-11/
12-15, severity 1-2/3-5/6-9/10-12) and the overall impact of a likelihood,
severity pair is ceil((L+S)/2). Scores are kept alongside levels so that
within-level improvements across mitigation rounds stay visible in reports.

All functions here are pure and total on their documented domains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Sequence

from .errors import EmptyInput, OutOfRange, UnknownLevel


class Level(IntEnum):
    """Four-step ordinal scale; the integer value is the ordinal."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3
    VERY_HIGH = 4

    @property
    def token(self) -> str:
        """Serialization token: "low", "medium", "high", "very_high"."""
        return self.name.lower()

    @property
    def code(self) -> str:
        """Single-letter report code: L, M, H, VH."""
        return _CODES[self]

    @classmethod
    def from_token(cls, token: str) -> "Level":
        try:
            return _TOKENS[token]
        except KeyError:
            raise UnknownLevel(
                f"unknown level {token!r}; expected one of {sorted(_TOKENS)}"
            ) from None


_CODES = {Level.LOW: "L", Level.MEDIUM: "M", Level.HIGH: "H", Level.VERY_HIGH: "VH"}
_TOKENS = {level.token: level for level in Level}

# Cardinal combination matrices, indexed [row - 1][col - 1].
LIKELIHOOD_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 2, 3, 4),
    (2, 3, 5, 9),
    (3, 5, 9, 12),
    (4, 7, 12, 15),
)
SEVERITY_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 2, 4, 6),
    (2, 3, 5, 8),
    (3, 5, 8, 10),
    (5, 8, 10, 12),
)

# Contiguous monotone bins over the attainable score ranges. Engine constants,
# not user-configurable: assessments must stay comparable across projects.
LIKELIHOOD_BINS: tuple[tuple[int, int, Level], ...] = (
    (1, 2, Level.LOW),
    (3, 6, Level.MEDIUM),
    (7, 11, Level.HIGH),
    (12, 15, Level.VERY_HIGH),
)
SEVERITY_BINS: tuple[tuple[int, int, Level], ...] = (
    (1, 2, Level.LOW),
    (3, 5, Level.MEDIUM),
    (6, 9, Level.HIGH),
    (10, 12, Level.VERY_HIGH),
)


@dataclass(frozen=True)
class RiskRatings:
    """The four assessor-supplied ratings for one risk."""

    probability: Level
    exposure: Level
    gravity: Level
    effort: Level

    def to_dict(self) -> dict:
        return {
            "probability": self.probability.token,
            "exposure": self.exposure.token,
            "gravity": self.gravity.token,
            "effort": self.effort.token,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RiskRatings":
        return cls(
            probability=Level.from_token(data["probability"]),
            exposure=Level.from_token(data["exposure"]),
            gravity=Level.from_token(data["gravity"]),
            effort=Level.from_token(data["effort"]),
        )


@dataclass(frozen=True)
class CombinedScore:
    """A raw matrix score together with its binned level."""

    score: int
    level: Level


@dataclass(frozen=True)
class ScoreBreakdown:
    """Full scoring of one ratings quadruple (the what-if preview shape)."""

    l_score: int
    likelihood: Level
    s_score: int
    severity: Level
    overall: Level

    def to_dict(self) -> dict:
        return {
            "l_score": self.l_score,
            "likelihood": self.likelihood.token,
            "s_score": self.s_score,
            "severity": self.severity.token,
            "overall": self.overall.token,
        }


@dataclass(frozen=True)
class ImpactBand:
    """Aggregate of several levels: exact mean plus the level(s) bracketing it.

    ``secondary_level`` is absent when the mean lands exactly on an ordinal;
    otherwise the two adjacent levels appear nearest-first (ties: lower first).
    """

    mean: Fraction
    primary_level: Level
    secondary_level: Level | None

    def render(self) -> str:
        if self.secondary_level is None:
            return self.primary_level.code
        return f"{self.primary_level.code}/{self.secondary_level.code}"


def combine_likelihood(probability: Level, exposure: Level) -> CombinedScore:
    """Combine probability and exposure into the likelihood score and level.

    The matrix is not symmetric: (probability=4, exposure=2) gives 9 while
    (probability=2, exposure=4) gives 7.
    """
    score = LIKELIHOOD_MATRIX[exposure - 1][probability - 1]
    return CombinedScore(score=score, level=likelihood_bin(score))


def combine_severity(gravity: Level, effort: Level) -> CombinedScore:
    """Combine gravity and effort into the severity score and level."""
    score = SEVERITY_MATRIX[effort - 1][gravity - 1]
    return CombinedScore(score=score, level=severity_bin(score))


def likelihood_bin(score: int) -> Level:
    """Bin a likelihood score (1-15) onto the four-step scale."""
    return _bin(score, LIKELIHOOD_BINS, "likelihood")


def severity_bin(score: int) -> Level:
    """Bin a severity score (1-12) onto the four-step scale."""
    return _bin(score, SEVERITY_BINS, "severity")


def _bin(score: int, bins: tuple[tuple[int, int, Level], ...], name: str) -> Level:
    for lo, hi, level in bins:
        if lo <= score <= hi:
            return level
    raise OutOfRange(f"{name} score {score} outside {bins[0][0]}-{bins[-1][1]}")


def overall_impact(likelihood: Level, severity: Level) -> Level:
    """Overall impact of a likelihood/severity pair: ceil of the ordinal mean.

    Full matrix (rows likelihood, cols severity):
        L  -> L M M H
        M  -> M M H H
        H  -> M H H VH
        VH -> H H VH VH
    """
    return Level((likelihood + severity + 1) // 2)


def score_ratings(ratings: RiskRatings) -> ScoreBreakdown:
    """Score a full ratings quadruple through both matrices and the overall rule."""
    likelihood = combine_likelihood(ratings.probability, ratings.exposure)
    severity = combine_severity(ratings.gravity, ratings.effort)
    return ScoreBreakdown(
        l_score=likelihood.score,
        likelihood=likelihood.level,
        s_score=severity.score,
        severity=severity.level,
        overall=overall_impact(likelihood.level, severity.level),
    )


def aggregate_band(levels: Sequence[Level]) -> ImpactBand:
    """Average a nonempty list of levels into an ImpactBand.

    The mean over ordinals is kept exact. A non-integral mean is rendered as
    the two adjacent levels with the nearest one first; an exact .5 tie puts
    the lower level first.
    """
    if not levels:
        raise EmptyInput("cannot aggregate an empty list of levels")
    mean = Fraction(sum(int(level) for level in levels), len(levels))
    if mean.denominator == 1:
        return ImpactBand(mean=mean, primary_level=Level(int(mean)), secondary_level=None)
    lower = Level(math.floor(mean))
    upper = Level(math.ceil(mean))
    if mean - lower > Fraction(1, 2):
        return ImpactBand(mean=mean, primary_level=upper, secondary_level=lower)
    return ImpactBand(mean=mean, primary_level=lower, secondary_level=upper)
