"""Shared domain vocabulary: ordinal ranks, rights catalog, rightsholder groups, ratings.

Every risk variable is rated on one fixed four-level ordinal scale. Ranks are
labels with an order, not numbers: they support comparison, matrix lookup and
stepping down a level, and nothing arithmetic. The only place a rank is ever
turned into a number is the display-only radial chart projection in the
reporting module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, Optional


class FriaError(Exception):
    """Domain error with a stable machine-readable code.

    ``paths`` points at the offending locations in a document, when known.
    """

    def __init__(self, code: str, message: str, paths: Iterable[str] = ()):
        super().__init__(message)
        self.code = code
        self.message = message
        self.paths = tuple(paths)

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "paths": list(self.paths)}


@dataclass(frozen=True)
class Finding:
    """One validation finding; ``severity`` is ``error`` or ``warning``."""

    severity: str
    code: str
    message: str
    path: str = ""

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "path": self.path,
        }


@dataclass
class ValidationReport:
    """Accumulates findings; a report is ok when it holds no errors."""

    findings: list[Finding] = field(default_factory=list)

    def error(self, code: str, message: str, path: str = "") -> None:
        self.findings.append(Finding("error", code, message, path))

    def warning(self, code: str, message: str, path: str = "") -> None:
        self.findings.append(Finding("warning", code, message, path))

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for f in other.findings:
            path = f"{prefix}{f.path}" if prefix else f.path
            self.findings.append(Finding(f.severity, f.code, f.message, path))

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {"ok": self.ok, "findings": [f.to_dict() for f in self.findings]}


# ---------------------------------------------------------------------------
# Ordinal ranks
# ---------------------------------------------------------------------------


class OrdinalRank(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    VERY_HIGH = "very-high"

    # str would give lexicographic comparison ("high" < "medium"), which is
    # wrong here, so ordering is defined by scale position instead.
    def __lt__(self, other: object) -> bool:
        if isinstance(other, OrdinalRank):
            return _RANK_POSITION[self] < _RANK_POSITION[other]
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if isinstance(other, OrdinalRank):
            return _RANK_POSITION[self] <= _RANK_POSITION[other]
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, OrdinalRank):
            return _RANK_POSITION[self] > _RANK_POSITION[other]
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, OrdinalRank):
            return _RANK_POSITION[self] >= _RANK_POSITION[other]
        return NotImplemented


RANK_ORDER: tuple[OrdinalRank, ...] = (
    OrdinalRank.LOW,
    OrdinalRank.MEDIUM,
    OrdinalRank.HIGH,
    OrdinalRank.VERY_HIGH,
)
_RANK_POSITION = {rank: i for i, rank in enumerate(RANK_ORDER)}
RANK_VALUES: tuple[str, ...] = tuple(r.value for r in RANK_ORDER)

_RANK_DISPLAY = {
    OrdinalRank.LOW: "Low",
    OrdinalRank.MEDIUM: "Medium",
    OrdinalRank.HIGH: "High",
    OrdinalRank.VERY_HIGH: "Very high",
}


def parse_rank(text: str) -> OrdinalRank:
    """Parse a rank token, folding case only. Anything off-vocabulary is rejected."""
    if not isinstance(text, str):
        raise FriaError("unknown-rank", f"rank must be a string, got {type(text).__name__}")
    token = text.strip().lower()
    for rank in RANK_ORDER:
        if token == rank.value:
            return rank
    raise FriaError(
        "unknown-rank",
        f"unknown rank {text!r}; expected one of {', '.join(RANK_VALUES)}",
    )


def format_rank(rank: OrdinalRank) -> str:
    return rank.value


def rank_display(rank: OrdinalRank) -> str:
    return _RANK_DISPLAY[rank]


def rank_compare(a: OrdinalRank, b: OrdinalRank) -> str:
    """Three-way ordinal comparison: ``less``, ``equal`` or ``greater``."""
    if a < b:
        return "less"
    if a > b:
        return "greater"
    return "equal"


def step_down(rank: OrdinalRank, steps: int) -> OrdinalRank:
    """Move ``steps`` levels down the scale, never past the bottom.

    There is no zero level below ``low``: residual risk floors there.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    return RANK_ORDER[max(0, _RANK_POSITION[rank] - steps)]


def rank_steps_between(before: OrdinalRank, after: OrdinalRank) -> int:
    """Step distance between two ranks (positive when ``after`` is lower).

    Display-only convenience for delta reporting; never feeds back into
    any risk computation.
    """
    return _RANK_POSITION[before] - _RANK_POSITION[after]


# ---------------------------------------------------------------------------
# Rating variables and confidence
# ---------------------------------------------------------------------------


class RatingVariable(str, Enum):
    PROBABILITY = "probability"
    EXPOSURE = "exposure"
    GRAVITY = "gravity"
    EFFORT = "effort"


LIKELIHOOD_VARIABLES = (RatingVariable.PROBABILITY, RatingVariable.EXPOSURE)
SEVERITY_VARIABLES = (RatingVariable.GRAVITY, RatingVariable.EFFORT)
ALL_VARIABLES = tuple(RatingVariable)


def parse_variable(text: str) -> RatingVariable:
    try:
        return RatingVariable(text.strip().lower())
    except (AttributeError, ValueError):
        raise FriaError(
            "malformed-document",
            f"unknown rating variable {text!r}; expected one of "
            f"{', '.join(v.value for v in RatingVariable)}",
        ) from None


class EvidenceQuality(str, Enum):
    ANECDOTAL = "anecdotal"
    DOCUMENTED = "documented"
    SYSTEMATIC = "systematic"


class ExpertAgreement(str, Enum):
    SINGLE_EXPERT = "single-expert"
    MAJORITY = "majority"
    CONSENSUS = "consensus"


def _parse_enum(enum_cls, text, what: str):
    try:
        return enum_cls(text)
    except ValueError:
        raise FriaError(
            "malformed-document",
            f"unknown {what} {text!r}; expected one of "
            f"{', '.join(m.value for m in enum_cls)}",
        ) from None


@dataclass(frozen=True)
class ConfidenceRecord:
    """How much weight the recorded rating deserves."""

    evidence_quality: EvidenceQuality
    evidence_currency: str
    expert_agreement: ExpertAgreement
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "evidence_quality": self.evidence_quality.value,
            "evidence_currency": self.evidence_currency,
            "expert_agreement": self.expert_agreement.value,
            "notes": self.notes,
        }

    @staticmethod
    def from_dict(d: dict) -> "ConfidenceRecord":
        _require_mapping(d, "confidence record")
        return ConfidenceRecord(
            evidence_quality=_parse_enum(
                EvidenceQuality, d.get("evidence_quality"), "evidence quality"
            ),
            evidence_currency=str(d.get("evidence_currency", "")),
            expert_agreement=_parse_enum(
                ExpertAgreement, d.get("expert_agreement"), "expert agreement"
            ),
            notes=str(d.get("notes", "")),
        )


@dataclass(frozen=True)
class GravityComponents:
    """Qualitative notes behind a gravity rating: how bad, how far, how long."""

    intensity: str
    consequences: str
    duration: str

    def to_dict(self) -> dict:
        return {
            "intensity": self.intensity,
            "consequences": self.consequences,
            "duration": self.duration,
        }

    @staticmethod
    def from_dict(d: dict) -> "GravityComponents":
        _require_mapping(d, "gravity components")
        return GravityComponents(
            intensity=str(d.get("intensity", "")),
            consequences=str(d.get("consequences", "")),
            duration=str(d.get("duration", "")),
        )


@dataclass(frozen=True)
class VariableRating:
    """One expert judgement: a rank for one variable plus its justification."""

    variable: RatingVariable
    rank: OrdinalRank
    rationale: str
    confidence: ConfidenceRecord
    gravity_components: Optional[GravityComponents] = None

    def to_dict(self) -> dict:
        d = {
            "variable": self.variable.value,
            "rank": self.rank.value,
            "rationale": self.rationale,
            "confidence": self.confidence.to_dict(),
        }
        if self.gravity_components is not None:
            d["gravity_components"] = self.gravity_components.to_dict()
        return d

    @staticmethod
    def from_dict(d: dict) -> "VariableRating":
        _require_mapping(d, "variable rating")
        components = d.get("gravity_components")
        return VariableRating(
            variable=parse_variable(d.get("variable")),
            rank=parse_rank(d.get("rank")),
            rationale=str(d.get("rationale", "")),
            confidence=ConfidenceRecord.from_dict(d.get("confidence", {})),
            gravity_components=(
                GravityComponents.from_dict(components) if components is not None else None
            ),
        )


def validate_rating(rating: VariableRating, path: str = "") -> ValidationReport:
    report = ValidationReport()
    if not rating.rationale.strip():
        report.error(
            "justification-required",
            f"rating for {rating.variable.value} has no rationale",
            f"{path}.rationale" if path else "rationale",
        )
    has_components = rating.gravity_components is not None
    if rating.variable is RatingVariable.GRAVITY and not has_components:
        report.error(
            "malformed-document",
            "gravity rating must break down intensity, consequences and duration",
            f"{path}.gravity_components" if path else "gravity_components",
        )
    if rating.variable is not RatingVariable.GRAVITY and has_components:
        report.error(
            "malformed-document",
            f"gravity components are only meaningful on a gravity rating, "
            f"not on {rating.variable.value}",
            f"{path}.gravity_components" if path else "gravity_components",
        )
    return report


# ---------------------------------------------------------------------------
# Rights catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FundamentalRight:
    id: str
    title: str
    source: str
    context_tags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "source": self.source,
            "context_tags": list(self.context_tags),
        }

    @staticmethod
    def from_dict(d: dict) -> "FundamentalRight":
        _require_mapping(d, "right")
        rid = d.get("id")
        title = d.get("title")
        if not rid or not isinstance(rid, str):
            raise FriaError("malformed-document", "right entry is missing a string id")
        if not title or not isinstance(title, str):
            raise FriaError("malformed-document", f"right {rid!r} is missing a title")
        tags = d.get("context_tags", [])
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise FriaError("malformed-document", f"right {rid!r} has malformed context_tags")
        return FundamentalRight(
            id=rid,
            title=title,
            source=str(d.get("source", "")),
            context_tags=tuple(tags),
        )


@dataclass(frozen=True)
class RightsCatalog:
    catalog_version: str
    rights: tuple[FundamentalRight, ...]

    def by_id(self) -> dict[str, FundamentalRight]:
        return {r.id: r for r in self.rights}

    def get(self, right_id: str) -> Optional[FundamentalRight]:
        return self.by_id().get(right_id)

    def to_dict(self) -> dict:
        return {
            "catalog_version": self.catalog_version,
            "rights": [r.to_dict() for r in self.rights],
        }


def load_rights_catalog(doc: dict) -> RightsCatalog:
    """Build a catalog from a parsed document, rejecting duplicates and junk."""
    _require_mapping(doc, "rights catalog")
    version = doc.get("catalog_version")
    if not isinstance(version, str) or not version:
        raise FriaError("malformed-document", "catalog is missing catalog_version")
    raw_rights = doc.get("rights")
    if not isinstance(raw_rights, list):
        raise FriaError("malformed-document", "catalog is missing a rights list")
    rights = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_rights):
        right = FundamentalRight.from_dict(raw)
        if right.id in seen:
            raise FriaError(
                "duplicate-id",
                f"right id {right.id!r} appears more than once in the catalog",
                [f"rights[{i}]"],
            )
        seen.add(right.id)
        rights.append(right)
    return RightsCatalog(catalog_version=version, rights=tuple(rights))


def default_rights_catalog() -> RightsCatalog:
    """Catalog of EU Charter rights shipped with the package."""
    text = resources.files("fria.data").joinpath("eu_charter_rights.json").read_text("utf-8")
    return load_rights_catalog(json.loads(text))


# ---------------------------------------------------------------------------
# Rightsholder groups
# ---------------------------------------------------------------------------

# Phrases that suggest the deployer never worked out who is actually exposed.
_POPULATION_WIDE_PHRASES = (
    "entire population",
    "whole population",
    "general public",
    "general population",
    "all citizens",
    "everyone",
    "everybody",
)


@dataclass(frozen=True)
class RightsholderGroup:
    """A concrete group of affected persons, scoped by how they come into contact
    with the system (the exposure basis), never 'the public at large'."""

    id: str
    description: str
    basis: str
    vulnerability_flags: tuple[str, ...] = ()
    estimated_share_of_group_affected: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "basis": self.basis,
            "vulnerability_flags": list(self.vulnerability_flags),
            "estimated_share_of_group_affected": self.estimated_share_of_group_affected,
        }

    @staticmethod
    def from_dict(d: dict) -> "RightsholderGroup":
        _require_mapping(d, "rightsholder group")
        flags = d.get("vulnerability_flags", [])
        if not isinstance(flags, list):
            raise FriaError("malformed-document", "vulnerability_flags must be a list")
        return RightsholderGroup(
            id=str(d.get("id", "")),
            description=str(d.get("description", "")),
            basis=str(d.get("basis", "")),
            vulnerability_flags=tuple(str(f) for f in flags),
            estimated_share_of_group_affected=str(d.get("estimated_share_of_group_affected", "")),
        )


def validate_rightsholder_group(group: RightsholderGroup, path: str = "") -> ValidationReport:
    report = ValidationReport()
    prefix = path or f"group[{group.id}]"
    if not group.id.strip():
        report.error("malformed-document", "rightsholder group has an empty id", prefix)
    if not group.description.strip():
        report.error(
            "malformed-document", "rightsholder group has no description", f"{prefix}.description"
        )
    if not group.basis.strip():
        report.error(
            "exposure-basis-missing",
            f"group {group.id!r} does not state what brings its members into "
            "contact with the system",
            f"{prefix}.basis",
        )
    lowered = group.description.lower()
    if any(phrase in lowered for phrase in _POPULATION_WIDE_PHRASES):
        report.warning(
            "population-wide-group",
            f"group {group.id!r} reads as population-wide; groups should be "
            "narrowed to the persons actually exposed",
            f"{prefix}.description",
        )
    return report


def _require_mapping(value, what: str) -> None:
    if not isinstance(value, dict):
        raise FriaError("malformed-document", f"{what} must be an object, got {type(value).__name__}")
