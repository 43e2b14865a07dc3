"""Registry of impacted rights and freedoms.

Ships nine builtin entries and supports case-specific registration (for
example splitting a freedom-of-thought axis out of the broader expression
category for a child-facing product). Builtin entries are immutable; a
catalog is a value and registration returns a new catalog.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DuplicateKey, InvalidKey, UnknownRight

_KEY_RE = re.compile(r"^[a-z0-9]+(-[a-z0-9]+)*$")


@dataclass(frozen=True)
class RightEntry:
    key: str
    title: str
    description: str
    context_notes: str | None = None
    builtin: bool = False

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "title": self.title,
            "description": self.description,
            "context_notes": self.context_notes,
            "builtin": self.builtin,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RightEntry":
        return cls(
            key=data["key"],
            title=data["title"],
            description=data["description"],
            context_notes=data.get("context_notes"),
            builtin=bool(data.get("builtin", False)),
        )


@dataclass(frozen=True)
class RightsCatalog:
    """Ordered, immutable collection of RightEntry values."""

    entries: tuple[RightEntry, ...]

    def lookup(self, key: str) -> RightEntry:
        for entry in self.entries:
            if entry.key == key:
                return entry
        raise UnknownRight(f"no right registered under key {key!r}")

    def __contains__(self, key: str) -> bool:
        return any(entry.key == key for entry in self.entries)

    def keys(self) -> tuple[str, ...]:
        return tuple(entry.key for entry in self.entries)

    def register(self, entry: RightEntry) -> "RightsCatalog":
        """Return a new catalog extended with a non-builtin entry."""
        if not entry.key or not _KEY_RE.match(entry.key):
            raise InvalidKey(f"key {entry.key!r} is not kebab-case ascii")
        if not entry.title:
            raise InvalidKey(f"entry {entry.key!r} has an empty title")
        if entry.key in self:
            raise DuplicateKey(f"key {entry.key!r} already registered")
        if entry.builtin:
            entry = RightEntry(
                key=entry.key,
                title=entry.title,
                description=entry.description,
                context_notes=entry.context_notes,
                builtin=False,
            )
        return RightsCatalog(entries=self.entries + (entry,))

    def to_dict(self) -> dict:
        return {"entries": [entry.to_dict() for entry in self.entries]}


def register(catalog: RightsCatalog, entry: RightEntry) -> RightsCatalog:
    """Functional alias for RightsCatalog.register."""
    return catalog.register(entry)


_BUILTIN: tuple[RightEntry, ...] = (
    RightEntry(
        key="human-dignity",
        title="Respect for human dignity",
        description=(
            "Protection against data practices that treat people as mere objects "
            "of observation or inference, denying the inherent worth of the "
            "person. Grounds all the other entries in this catalog."
        ),
        context_notes=(
            "Typical processing contexts: continuous or invasive monitoring "
            "(video surveillance, workplace tracking, mobility tracking), "
            "monitoring in high privacy-expectation environments, invasive "
            "requests for sensitive information."
        ),
        builtin=True,
    ),
    RightEntry(
        key="non-discrimination",
        title="Freedom from discrimination",
        description=(
            "Protection against unjustified differential treatment of people "
            "or groups produced or amplified by data use, whether through "
            "biased inputs, proxies for protected attributes, or skewed "
            "outcomes."
        ),
        context_notes=(
            "Typical processing contexts: profiling and scoring, automated "
            "decision-making in hiring, credit, housing or welfare, biometric "
            "categorisation."
        ),
        builtin=True,
    ),
    RightEntry(
        key="personal-identity",
        title="Physical, psychological, and social identity",
        description=(
            "Protection of the person's identity as presented to and "
            "constructed by others, against misrepresentation, identity theft "
            "and unwanted profiling that fixes people into inferred categories."
        ),
        context_notes=(
            "Typical processing contexts: identity fraud, aggregation of "
            "profiles across services, inference of traits from behavioural "
            "data."
        ),
        builtin=True,
    ),
    RightEntry(
        key="personal-integrity",
        title="Physical, psychological and moral integrity",
        description=(
            "Protection of bodily and mental well-being and of the intimate "
            "sphere against harms mediated by data use, including exposure of "
            "intimate facts and processing that enables physical or "
            "psychological attack."
        ),
        context_notes=(
            "Typical processing contexts: monitoring of intimate spaces, "
            "health and body-related data, devices open to hostile takeover."
        ),
        builtin=True,
    ),
    RightEntry(
        key="self-determination",
        title="Self-determination and personal autonomy",
        description=(
            "Protection of the person's capacity to make free choices about "
            "their own life and data against covert influence, manipulation, "
            "lock-in and processing arrangements that remove meaningful "
            "control."
        ),
        context_notes=(
            "Typical processing contexts: behavioural nudging, dark patterns, "
            "take-it-or-leave-it consent, secondary uses beyond the collection "
            "purpose."
        ),
        builtin=True,
    ),
    RightEntry(
        key="freedom-expression-thought",
        title="Freedom of expression and freedom of thought, conscience and religion",
        description=(
            "Protection of the formation and expression of opinions, beliefs "
            "and convictions against chilling effects, value-laden content "
            "selection and inference of convictions from data."
        ),
        context_notes=(
            "Typical processing contexts: content moderation and curation, "
            "surveillance that deters speech, inference of religious or "
            "political orientation."
        ),
        builtin=True,
    ),
    RightEntry(
        key="assembly-association",
        title="Freedom of assembly and association",
        description=(
            "Protection of gathering, organising and affiliating with others "
            "against monitoring that deters participation or reveals "
            "membership."
        ),
        context_notes=(
            "Typical processing contexts: surveillance of demonstrations and "
            "meeting places, tracking of group membership, monitoring of "
            "union activity."
        ),
        builtin=True,
    ),
    RightEntry(
        key="confidentiality-communications",
        title="The right to the confidentiality of communications",
        description=(
            "Protection of private correspondence and communications, personal "
            "as well as professional, against interception, retention and "
            "employer or provider access beyond what the communication "
            "requires."
        ),
        context_notes=(
            "Typical processing contexts: monitoring of e-mail and messaging, "
            "traffic-data retention, workplace inspection of correspondence."
        ),
        builtin=True,
    ),
    RightEntry(
        key="privacy-data-protection",
        title="Data protection and the right to privacy",
        description=(
            "Protection of private life and of personal data as such: "
            "lawfulness, fairness and minimisation of processing, security of "
            "the data, and the person's rights over information about them."
        ),
        context_notes=(
            "Typical processing contexts: any collection or reuse of personal "
            "data, especially sensitive categories, children's data and "
            "large-scale or cross-border processing."
        ),
        builtin=True,
    ),
)


def builtin_catalog() -> RightsCatalog:
    """The nine builtin rights, stable keys and order."""
    return RightsCatalog(entries=_BUILTIN)


def catalog_from_dict(data: dict) -> RightsCatalog:
    """Rebuild a catalog from its serialized form.

    Builtin entries in the input are ignored in favour of the engine's own
    constants (they are immutable); non-builtin entries are re-registered in
    file order.
    """
    catalog = builtin_catalog()
    for raw in data.get("entries", []):
        entry = RightEntry.from_dict(raw)
        if entry.builtin:
            continue
        catalog = catalog.register(entry)
    return catalog
