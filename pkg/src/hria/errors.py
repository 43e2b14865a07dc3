"""Exception hierarchy shared by every engine module."""

from __future__ import annotations


class HriaError(Exception):
    """Base class for all engine errors."""


class DomainError(HriaError):
    """A request that is well-formed but violates a domain rule (CLI exit 1)."""


# --- rights catalog ---------------------------------------------------------

class DuplicateKey(DomainError):
    pass


class InvalidKey(DomainError):
    pass


class UnknownRight(DomainError):
    pass


# --- scoring ----------------------------------------------------------------

class OutOfRange(DomainError):
    pass


class UnknownLevel(DomainError):
    pass


class EmptyInput(DomainError):
    pass


# --- assessment -------------------------------------------------------------

class InvalidMetadata(DomainError):
    pass


class DuplicateRiskId(DomainError):
    pass


class UnknownRisk(DomainError):
    pass


class UnknownAssessment(DomainError):
    pass


class NonMonotoneIndex(DomainError):
    pass


class RiskNotRated(DomainError):
    pass


class EmptyRegister(DomainError):
    pass


class AssessmentFinalized(DomainError):
    pass


# --- workflow ---------------------------------------------------------------

class IllegalTransition(DomainError):
    pass


class ChecklistIncomplete(DomainError):
    pass


class PrecautionaryUnresolved(ChecklistIncomplete):
    """Finalisation is blocked while a precautionary flag is neither resolved nor accepted."""


class CatalogMismatch(DomainError):
    pass


# --- reporting --------------------------------------------------------------

class StageTooEarly(DomainError):
    pass


class NoRisks(DomainError):
    pass


# --- persistence ------------------------------------------------------------

class PersistenceError(HriaError):
    pass


class IoError(PersistenceError):
    pass


class ChecksumMismatch(PersistenceError):
    pass


class UnknownSchema(PersistenceError):
    pass


class InvariantViolation(PersistenceError):
    """A stored or submitted value breaks a model invariant.

    ``path`` points at the offending field, e.g. ``risks[2].rounds[0].residual``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
