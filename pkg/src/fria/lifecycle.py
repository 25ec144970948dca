"""Per-right assessment rounds, mitigation, acceptability gating and case lifecycle.

A right is assessed on its own: its rounds are a pure function of its own
ratings, measures, exclusion factors and the case's matrix set. Nothing here
ever folds two rights together, and nothing here does arithmetic on risk:
mitigation moves ordinal ranks down in steps, matrices do the rest.

Mitigation only ever targets probability and exposure. Gravity and effort
describe how bad the impact would be if it happens; a measure cannot talk
the harm itself down, so severity inputs are frozen after the first rating.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .core import (
    ALL_VARIABLES,
    FriaError,
    LIKELIHOOD_VARIABLES,
    OrdinalRank,
    RatingVariable,
    ValidationReport,
    VariableRating,
    _require_mapping,
    parse_rank,
    parse_variable,
    rank_steps_between,
    step_down,
    validate_rating,
)
from .ledger import Ledger
from .matrix import (
    CellOutcome,
    MatrixSet,
    compute_likelihood,
    compute_risk_index,
    compute_severity,
    require_valid_matrix_set,
    validate_matrix_set,
)
from .scoping import ScopingRecord, SystemProfile, validate_scoping

CASE_SCHEMA_VERSION = "fria-case/1"


def current_timestamp(clock: Optional[Callable[[], _dt.datetime]] = None) -> str:
    """ISO-8601 UTC timestamp, second precision. Tests inject the clock."""
    moment = clock() if clock else _dt.datetime.now(_dt.timezone.utc)
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=_dt.timezone.utc)
    return moment.astimezone(_dt.timezone.utc).replace(microsecond=0).isoformat().replace(
        "+00:00", "Z"
    )


# ---------------------------------------------------------------------------
# Mitigation measures
# ---------------------------------------------------------------------------


class MeasureStatus(str, Enum):
    PROPOSED = "proposed"
    IMPLEMENTED = "implemented"


@dataclass(frozen=True)
class MitigationMeasure:
    """A measure that lowers how often or how widely harm occurs, never how bad it is."""

    id: str
    description: str
    targets: tuple[RatingVariable, ...]
    rank_reduction: int
    justification: str = ""
    status: MeasureStatus = MeasureStatus.PROPOSED
    effectiveness_evidence: str = ""

    def __post_init__(self):
        if not self.targets:
            raise FriaError(
                "malformed-document", f"measure {self.id!r} must target at least one variable"
            )
        for target in self.targets:
            if target not in LIKELIHOOD_VARIABLES:
                raise FriaError(
                    "severity-target-forbidden",
                    f"measure {self.id!r} targets {target.value}; measures may only "
                    "reduce probability or exposure, never gravity or effort",
                )
        if not isinstance(self.rank_reduction, int) or isinstance(self.rank_reduction, bool):
            raise FriaError(
                "malformed-document", f"measure {self.id!r} rank_reduction must be an integer"
            )
        if self.rank_reduction < 1:
            raise FriaError(
                "malformed-document",
                f"measure {self.id!r} rank_reduction must be at least 1",
            )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "targets": [t.value for t in self.targets],
            "rank_reduction": self.rank_reduction,
            "justification": self.justification,
            "status": self.status.value,
            "effectiveness_evidence": self.effectiveness_evidence,
        }

    @staticmethod
    def from_dict(d: dict) -> "MitigationMeasure":
        _require_mapping(d, "mitigation measure")
        raw_targets = d.get("targets")
        if not isinstance(raw_targets, list) or not raw_targets:
            raise FriaError(
                "malformed-document",
                f"measure {d.get('id')!r} must list at least one target variable",
            )
        status_raw = d.get("status", "proposed")
        try:
            status = MeasureStatus(status_raw)
        except ValueError:
            raise FriaError(
                "malformed-document",
                f"measure status must be 'proposed' or 'implemented', got {status_raw!r}",
            ) from None
        reduction = d.get("rank_reduction")
        if not isinstance(reduction, int) or isinstance(reduction, bool):
            raise FriaError(
                "malformed-document",
                f"measure {d.get('id')!r} rank_reduction must be an integer",
            )
        return MitigationMeasure(
            id=str(d.get("id", "")),
            description=str(d.get("description", "")),
            targets=tuple(parse_variable(t) for t in raw_targets),
            rank_reduction=reduction,
            justification=str(d.get("justification", "")),
            status=status,
            effectiveness_evidence=str(d.get("effectiveness_evidence", "")),
        )


# ---------------------------------------------------------------------------
# Exclusion factors
# ---------------------------------------------------------------------------


class ExclusionKind(str, Enum):
    LEGAL_MANDATE = "legal-mandate"
    BALANCING_TEST = "balancing-test"


@dataclass(frozen=True)
class ExclusionFactor:
    """A reason a high risk may stand: a legal mandate or a prevailing interest.

    Exclusions gate acceptability only. The computed risk index is never
    touched: the report still shows the high risk, together with why it was
    accepted.
    """

    kind: ExclusionKind
    justification: str
    competing_interest: str = ""
    accepted_by: str = ""
    date: str = ""

    def is_valid(self) -> bool:
        if not self.justification.strip():
            return False
        if self.kind is ExclusionKind.BALANCING_TEST and not self.competing_interest.strip():
            return False
        return True

    def describe(self) -> str:
        who = self.accepted_by.strip() or "unrecorded reviewer"
        if self.kind is ExclusionKind.BALANCING_TEST:
            return (
                f"balancing-test (prevailing interest: {self.competing_interest.strip()}), "
                f"accepted by {who}"
            )
        return f"legal-mandate, accepted by {who}"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "justification": self.justification,
            "competing_interest": self.competing_interest,
            "accepted_by": self.accepted_by,
            "date": self.date,
        }

    @staticmethod
    def from_dict(d: dict) -> "ExclusionFactor":
        _require_mapping(d, "exclusion factor")
        raw_kind = d.get("kind")
        try:
            kind = ExclusionKind(raw_kind)
        except ValueError:
            raise FriaError(
                "malformed-document",
                f"exclusion kind must be 'legal-mandate' or 'balancing-test', got {raw_kind!r}",
            ) from None
        return ExclusionFactor(
            kind=kind,
            justification=str(d.get("justification", "")),
            competing_interest=str(d.get("competing_interest", "")),
            accepted_by=str(d.get("accepted_by", "")),
            date=str(d.get("date", "")),
        )


class Acceptability(str, Enum):
    ACCEPTABLE = "acceptable"
    ACCEPTABLE_WITH_EXCLUSION = "acceptable-with-exclusion"
    BLOCKED = "blocked"


def acceptability_gate(
    risk: OrdinalRank, exclusions: list[ExclusionFactor]
) -> tuple[Acceptability, Optional[ExclusionFactor]]:
    """Low and medium pass; high and very-high pass only over a valid exclusion.

    The threshold is fixed: it is not configuration, so it cannot be weakened.
    Returns the gate result and the exclusion that carried it, if any.
    """
    if risk in (OrdinalRank.LOW, OrdinalRank.MEDIUM):
        return Acceptability.ACCEPTABLE, None
    for exclusion in exclusions:
        if exclusion.is_valid():
            return Acceptability.ACCEPTABLE_WITH_EXCLUSION, exclusion
    return Acceptability.BLOCKED, None


# ---------------------------------------------------------------------------
# Rounds and right assessments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RoundResult:
    round_number: int
    effective_ratings: dict[RatingVariable, OrdinalRank]
    likelihood: CellOutcome
    severity: CellOutcome
    risk: CellOutcome
    acceptability: Acceptability
    applied_measure_ids: tuple[str, ...] = ()
    exclusion_applied: Optional[str] = None
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "round_number": self.round_number,
            "effective_ratings": {v.value: r.value for v, r in sorted(
                self.effective_ratings.items(), key=lambda item: item[0].value
            )},
            "likelihood": self.likelihood.to_dict(),
            "severity": self.severity.to_dict(),
            "risk": self.risk.to_dict(),
            "acceptability": self.acceptability.value,
            "applied_measure_ids": list(self.applied_measure_ids),
            "exclusion_applied": self.exclusion_applied,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_dict(d: dict) -> "RoundResult":
        _require_mapping(d, "round result")
        raw_ratings = d.get("effective_ratings")
        _require_mapping(raw_ratings, "effective ratings")
        effective = {parse_variable(k): parse_rank(v) for k, v in raw_ratings.items()}
        raw_acceptability = d.get("acceptability")
        try:
            acceptability = Acceptability(raw_acceptability)
        except ValueError:
            raise FriaError(
                "malformed-document", f"unknown acceptability {raw_acceptability!r}"
            ) from None
        return RoundResult(
            round_number=int(d.get("round_number", 0)),
            effective_ratings=effective,
            likelihood=CellOutcome.from_dict(d.get("likelihood", {})),
            severity=CellOutcome.from_dict(d.get("severity", {})),
            risk=CellOutcome.from_dict(d.get("risk", {})),
            acceptability=acceptability,
            applied_measure_ids=tuple(d.get("applied_measure_ids", [])),
            exclusion_applied=d.get("exclusion_applied"),
            timestamp=str(d.get("timestamp", "")),
        )


@dataclass
class RightAssessment:
    right_id: str
    title: str = ""
    rightsholder_groups: list[str] = field(default_factory=list)
    ratings: dict[RatingVariable, VariableRating] = field(default_factory=dict)
    mitigations: list[MitigationMeasure] = field(default_factory=list)
    exclusion_factors: list[ExclusionFactor] = field(default_factory=list)
    rounds: list[RoundResult] = field(default_factory=list)

    def measure(self, measure_id: str) -> Optional[MitigationMeasure]:
        for m in self.mitigations:
            if m.id == measure_id:
                return m
        return None

    def current_round(self) -> Optional[RoundResult]:
        return self.rounds[-1] if self.rounds else None

    def initial_ratings(self) -> dict[RatingVariable, OrdinalRank]:
        missing = [v.value for v in ALL_VARIABLES if v not in self.ratings]
        if missing:
            raise FriaError(
                "missing-rating",
                f"right {self.right_id!r} has no rating for: {', '.join(missing)}",
                missing,
            )
        return {v: self.ratings[v].rank for v in ALL_VARIABLES}

    def to_dict(self) -> dict:
        return {
            "right_id": self.right_id,
            "title": self.title,
            "rightsholder_groups": list(self.rightsholder_groups),
            "ratings": {v.value: r.to_dict() for v, r in sorted(
                self.ratings.items(), key=lambda item: item[0].value
            )},
            "mitigations": [m.to_dict() for m in self.mitigations],
            "exclusion_factors": [e.to_dict() for e in self.exclusion_factors],
            "rounds": [r.to_dict() for r in self.rounds],
        }

    @staticmethod
    def from_dict(d: dict) -> "RightAssessment":
        _require_mapping(d, "right assessment")
        right_id = d.get("right_id")
        if not right_id or not isinstance(right_id, str):
            raise FriaError("malformed-document", "right assessment is missing right_id")
        raw_ratings = d.get("ratings", {})
        _require_mapping(raw_ratings, f"ratings of {right_id}")
        ratings: dict[RatingVariable, VariableRating] = {}
        for key, raw in raw_ratings.items():
            variable = parse_variable(key)
            rating = VariableRating.from_dict(raw)
            if rating.variable is not variable:
                raise FriaError(
                    "malformed-document",
                    f"rating under key {key!r} declares variable {rating.variable.value!r}",
                )
            ratings[variable] = rating
        raw_groups = d.get("rightsholder_groups", [])
        raw_measures = d.get("mitigations", [])
        raw_exclusions = d.get("exclusion_factors", [])
        raw_rounds = d.get("rounds", [])
        for name, raw in (("rightsholder_groups", raw_groups), ("mitigations", raw_measures),
                          ("exclusion_factors", raw_exclusions), ("rounds", raw_rounds)):
            if not isinstance(raw, list):
                raise FriaError("malformed-document", f"{right_id}: {name} must be a list")
        return RightAssessment(
            right_id=right_id,
            title=str(d.get("title", "")),
            rightsholder_groups=[str(g) for g in raw_groups],
            ratings=ratings,
            mitigations=[MitigationMeasure.from_dict(m) for m in raw_measures],
            exclusion_factors=[ExclusionFactor.from_dict(e) for e in raw_exclusions],
            rounds=[RoundResult.from_dict(r) for r in raw_rounds],
        )


# ---------------------------------------------------------------------------
# Case-level records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConsultationRecord:
    """Stakeholder participation is encouraged, not required; records live here."""

    stakeholder: str
    role: str = ""
    date: str = ""
    input_summary: str = ""
    influence_on_assessment: str = ""

    def to_dict(self) -> dict:
        return {
            "stakeholder": self.stakeholder,
            "role": self.role,
            "date": self.date,
            "input_summary": self.input_summary,
            "influence_on_assessment": self.influence_on_assessment,
        }

    @staticmethod
    def from_dict(d: dict) -> "ConsultationRecord":
        _require_mapping(d, "consultation record")
        return ConsultationRecord(
            stakeholder=str(d.get("stakeholder", "")),
            role=str(d.get("role", "")),
            date=str(d.get("date", "")),
            input_summary=str(d.get("input_summary", "")),
            influence_on_assessment=str(d.get("influence_on_assessment", "")),
        )


@dataclass(frozen=True)
class Article27Measures:
    """Oversight and for-when-it-goes-wrong arrangements (Article 27(1)(e) and (f))."""

    human_oversight: str = ""
    governance_arrangements: str = ""
    complaint_mechanism: str = ""

    def to_dict(self) -> dict:
        return {
            "human_oversight": self.human_oversight,
            "governance_arrangements": self.governance_arrangements,
            "complaint_mechanism": self.complaint_mechanism,
        }

    @staticmethod
    def from_dict(d: dict) -> "Article27Measures":
        _require_mapping(d, "article 27 measures")
        return Article27Measures(
            human_oversight=str(d.get("human_oversight", "")),
            governance_arrangements=str(d.get("governance_arrangements", "")),
            complaint_mechanism=str(d.get("complaint_mechanism", "")),
        )


@dataclass(frozen=True)
class PriorAssessmentLink:
    ref: str
    similarity_note: str

    def to_dict(self) -> dict:
        return {"ref": self.ref, "similarity_note": self.similarity_note}

    @staticmethod
    def from_dict(d: dict) -> "PriorAssessmentLink":
        _require_mapping(d, "prior assessment link")
        return PriorAssessmentLink(
            ref=str(d.get("ref", "")), similarity_note=str(d.get("similarity_note", ""))
        )


class CaseStatus(str, Enum):
    DRAFT = "draft"
    ASSESSED = "assessed"
    UPDATE_REQUIRED = "update-required"
    CLOSED = "closed"


# Allowed status transitions. Closing from draft or update-required happens
# only through a closing review that decides against the AI path.
_TRANSITIONS = {
    (CaseStatus.DRAFT, CaseStatus.ASSESSED),
    (CaseStatus.ASSESSED, CaseStatus.UPDATE_REQUIRED),
    (CaseStatus.UPDATE_REQUIRED, CaseStatus.ASSESSED),
    (CaseStatus.ASSESSED, CaseStatus.CLOSED),
}
_REVIEW_ONLY_TRANSITIONS = {
    (CaseStatus.DRAFT, CaseStatus.CLOSED),
    (CaseStatus.UPDATE_REQUIRED, CaseStatus.CLOSED),
}


@dataclass
class AssessmentCase:
    case_id: str
    matrix_set: MatrixSet
    title: str = ""
    version: int = 1
    status: CaseStatus = CaseStatus.DRAFT
    scoping: ScopingRecord = field(default_factory=ScopingRecord)
    right_assessments: list[RightAssessment] = field(default_factory=list)
    article27_measures: Article27Measures = field(default_factory=Article27Measures)
    consultations: list[ConsultationRecord] = field(default_factory=list)
    prior_assessment_ref: Optional[PriorAssessmentLink] = None
    ledger_ref: str = ""

    def __post_init__(self):
        if not self.ledger_ref:
            self.ledger_ref = f"{self.case_id}.ledger.jsonl"

    @property
    def system_profile(self) -> SystemProfile:
        return self.scoping.system_profile

    def right(self, right_id: str) -> Optional[RightAssessment]:
        for ra in self.right_assessments:
            if ra.right_id == right_id:
                return ra
        return None

    def measure_owner(self, measure_id: str) -> Optional[RightAssessment]:
        for ra in self.right_assessments:
            if ra.measure(measure_id) is not None:
                return ra
        return None

    def blocked_rights(self) -> list[str]:
        blocked = []
        for ra in self.right_assessments:
            current = ra.current_round()
            if current is not None and current.acceptability is Acceptability.BLOCKED:
                blocked.append(ra.right_id)
        return blocked

    def to_dict(self) -> dict:
        d = {
            "schema_version": CASE_SCHEMA_VERSION,
            "case_id": self.case_id,
            "title": self.title,
            "version": self.version,
            "status": self.status.value,
            "scoping": self.scoping.to_dict(),
            "matrix_set": self.matrix_set.to_dict(),
            "right_assessments": [ra.to_dict() for ra in self.right_assessments],
            "article27_measures": self.article27_measures.to_dict(),
            "consultations": [c.to_dict() for c in self.consultations],
            "ledger_ref": self.ledger_ref,
        }
        if self.prior_assessment_ref is not None:
            d["prior_assessment_ref"] = self.prior_assessment_ref.to_dict()
        return d

    @staticmethod
    def from_dict(d: dict) -> "AssessmentCase":
        _require_mapping(d, "assessment case")
        schema = d.get("schema_version")
        if schema != CASE_SCHEMA_VERSION:
            raise FriaError(
                "malformed-document",
                f"unsupported case schema_version {schema!r}; expected {CASE_SCHEMA_VERSION!r}",
            )
        case_id = d.get("case_id")
        if not case_id or not isinstance(case_id, str):
            raise FriaError("malformed-document", "case is missing case_id")
        raw_status = d.get("status", "draft")
        try:
            status = CaseStatus(raw_status)
        except ValueError:
            raise FriaError("malformed-document", f"unknown case status {raw_status!r}") from None
        version = d.get("version", 1)
        if not isinstance(version, int) or isinstance(version, bool):
            raise FriaError("malformed-document", "case version must be an integer")
        raw_rights = d.get("right_assessments", [])
        raw_consultations = d.get("consultations", [])
        if not isinstance(raw_rights, list) or not isinstance(raw_consultations, list):
            raise FriaError("malformed-document", "case lists must be lists")
        rights = [RightAssessment.from_dict(r) for r in raw_rights]
        seen: set[str] = set()
        for ra in rights:
            if ra.right_id in seen:
                raise FriaError(
                    "duplicate-id",
                    f"right {ra.right_id!r} is assessed more than once in the case",
                )
            seen.add(ra.right_id)
        prior = d.get("prior_assessment_ref")
        if "matrix_set" not in d:
            raise FriaError("malformed-document", "case is missing its matrix_set")
        return AssessmentCase(
            case_id=case_id,
            title=str(d.get("title", "")),
            version=version,
            status=status,
            scoping=ScopingRecord.from_dict(d.get("scoping", {})),
            matrix_set=MatrixSet.from_dict(d["matrix_set"]),
            right_assessments=rights,
            article27_measures=Article27Measures.from_dict(d.get("article27_measures", {})),
            consultations=[ConsultationRecord.from_dict(c) for c in raw_consultations],
            prior_assessment_ref=PriorAssessmentLink.from_dict(prior) if prior else None,
            ledger_ref=str(d.get("ledger_ref", "")),
        )


# ---------------------------------------------------------------------------
# Case validation
# ---------------------------------------------------------------------------


def validate_case(case: AssessmentCase) -> ValidationReport:
    """Aggregate semantic validation: scoping, matrices, rights, round sanity."""
    report = ValidationReport()
    report.extend(validate_scoping(case.scoping))
    report.extend(validate_matrix_set(case.matrix_set), prefix="matrix_set.")

    if not case.right_assessments:
        report.warning(
            "no-rights-identified",
            "the case assesses zero rights; an assessment cannot cover zero rights",
            "right_assessments",
        )

    known_groups = case.scoping.group_ids()
    for i, ra in enumerate(case.right_assessments):
        prefix = f"right_assessments[{ra.right_id}]"
        if not ra.rightsholder_groups:
            report.error(
                "rightsholder-groups-missing",
                f"right {ra.right_id!r} names no affected rightsholder group",
                f"{prefix}.rightsholder_groups",
            )
        for group_id in ra.rightsholder_groups:
            if group_id not in known_groups:
                report.error(
                    "unresolvable-reference",
                    f"right {ra.right_id!r} references unknown group {group_id!r}",
                    f"{prefix}.rightsholder_groups",
                )
        for variable in ALL_VARIABLES:
            if variable not in ra.ratings:
                report.error(
                    "missing-rating",
                    f"right {ra.right_id!r} has no {variable.value} rating",
                    f"{prefix}.ratings.{variable.value}",
                )
        for variable, rating in ra.ratings.items():
            report.extend(validate_rating(rating, f"{prefix}.ratings.{variable.value}"))
        seen_measures: set[str] = set()
        for m in ra.mitigations:
            if m.id in seen_measures:
                report.error(
                    "duplicate-id",
                    f"measure id {m.id!r} appears more than once on right {ra.right_id!r}",
                    f"{prefix}.mitigations",
                )
            seen_measures.add(m.id)
            if not m.justification.strip():
                report.warning(
                    "justification-required",
                    f"measure {m.id!r} does not justify why its reduction is credible",
                    f"{prefix}.mitigations[{m.id}].justification",
                )
        for j, exclusion in enumerate(ra.exclusion_factors):
            if not exclusion.is_valid():
                report.error(
                    "exclusion-invalid",
                    f"exclusion factor {j} on right {ra.right_id!r} is invalid: "
                    "it needs a justification"
                    + (
                        " and a named competing interest"
                        if exclusion.kind is ExclusionKind.BALANCING_TEST
                        else ""
                    ),
                    f"{prefix}.exclusion_factors[{j}]",
                )
        report.extend(_validate_rounds(ra), prefix="")

    if case.status in (CaseStatus.ASSESSED, CaseStatus.CLOSED):
        unassessed = [ra.right_id for ra in case.right_assessments if not ra.rounds]
        if unassessed or not case.right_assessments:
            report.error(
                "status-inconsistent",
                f"case status is {case.status.value!r} but rounds are missing",
                "status",
            )
        blocked = case.blocked_rights()
        if blocked:
            report.error(
                "status-inconsistent",
                f"case status is {case.status.value!r} while rights are blocked: "
                f"{', '.join(blocked)}",
                "status",
            )
    if case.status is CaseStatus.CLOSED and case.scoping.alternatives.closing_review is None:
        report.error(
            "status-inconsistent",
            "case is closed without a closing alternatives review",
            "scoping.alternatives.closing_review",
        )
    return report


def _validate_rounds(ra: RightAssessment) -> ValidationReport:
    """Sanity of persisted rounds: dense numbering, frozen severity inputs,
    non-increasing likelihood inputs. Defends against hand-edited files."""
    report = ValidationReport()
    prefix = f"right_assessments[{ra.right_id}].rounds"
    previous: Optional[RoundResult] = None
    for i, rnd in enumerate(ra.rounds):
        if rnd.round_number != i:
            report.error(
                "round-inconsistent",
                f"right {ra.right_id!r}: round at position {i} is numbered {rnd.round_number}",
                f"{prefix}[{i}]",
            )
        missing = [v.value for v in ALL_VARIABLES if v not in rnd.effective_ratings]
        if missing:
            report.error(
                "round-inconsistent",
                f"right {ra.right_id!r}: round {i} lacks effective ratings for "
                f"{', '.join(missing)}",
                f"{prefix}[{i}]",
            )
            previous = rnd
            continue
        if previous is not None and all(
            v in previous.effective_ratings for v in ALL_VARIABLES
        ):
            for variable in (RatingVariable.GRAVITY, RatingVariable.EFFORT):
                if rnd.effective_ratings[variable] != previous.effective_ratings[variable]:
                    report.error(
                        "round-inconsistent",
                        f"right {ra.right_id!r}: {variable.value} changed between rounds "
                        f"{i - 1} and {i}; severity inputs are frozen",
                        f"{prefix}[{i}]",
                    )
            for variable in LIKELIHOOD_VARIABLES:
                if rnd.effective_ratings[variable] > previous.effective_ratings[variable]:
                    report.error(
                        "round-inconsistent",
                        f"right {ra.right_id!r}: {variable.value} increased between rounds "
                        f"{i - 1} and {i}",
                        f"{prefix}[{i}]",
                    )
        previous = rnd
    return report


def require_valid_for_assessment(case: AssessmentCase) -> None:
    """Round computation may not start from an invalid scoping record or matrix set."""
    scoping_report = validate_scoping(case.scoping)
    if not scoping_report.ok:
        first = scoping_report.errors[0]
        raise FriaError(
            "scoping-invalid",
            f"scoping does not support assessment yet: {first.message}",
            [f.path for f in scoping_report.errors],
        )
    require_valid_matrix_set(case.matrix_set)


# ---------------------------------------------------------------------------
# Round computation
# ---------------------------------------------------------------------------


def _evaluate(
    effective: dict[RatingVariable, OrdinalRank],
    exclusions: list[ExclusionFactor],
    matrix_set: MatrixSet,
) -> tuple[CellOutcome, CellOutcome, CellOutcome, Acceptability, Optional[ExclusionFactor]]:
    likelihood = compute_likelihood(
        effective[RatingVariable.PROBABILITY], effective[RatingVariable.EXPOSURE], matrix_set
    )
    severity = compute_severity(
        effective[RatingVariable.GRAVITY], effective[RatingVariable.EFFORT], matrix_set
    )
    risk = compute_risk_index(likelihood.rank, severity.rank, matrix_set)
    acceptability, exclusion = acceptability_gate(risk.rank, exclusions)
    return likelihood, severity, risk, acceptability, exclusion


def assess_right(
    ra: RightAssessment,
    matrix_set: MatrixSet,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> RoundResult:
    """Round 0: raw ratings through the three matrices, then the gate."""
    if ra.rounds:
        raise FriaError(
            "round-exists",
            f"right {ra.right_id!r} already has {len(ra.rounds)} round(s); "
            "apply measures or reevaluate instead",
        )
    require_valid_matrix_set(matrix_set)
    effective = ra.initial_ratings()
    likelihood, severity, risk, acceptability, exclusion = _evaluate(
        effective, ra.exclusion_factors, matrix_set
    )
    timestamp = now or current_timestamp()
    result = RoundResult(
        round_number=0,
        effective_ratings=effective,
        likelihood=likelihood,
        severity=severity,
        risk=risk,
        acceptability=acceptability,
        applied_measure_ids=(),
        exclusion_applied=exclusion.describe() if exclusion else None,
        timestamp=timestamp,
    )
    ra.rounds.append(result)
    if ledger is not None:
        ledger.record(
            "round-computed",
            actor,
            f"round 0 computed for {ra.right_id}: risk {risk.rank.value}, "
            f"{acceptability.value}",
            {"right_id": ra.right_id, "round": result.to_dict()},
            timestamp,
        )
    return result


def apply_mitigations(
    ra: RightAssessment,
    measure_ids: list[str],
    matrix_set: MatrixSet,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
    allow_proposed: bool = False,
) -> RoundResult:
    """Apply named measures as the next round.

    Each measure steps its target ranks down by its rank_reduction, floored
    at low. Committed rounds demand implemented measures; what-if exploration
    passes allow_proposed to compare designs before building them.
    """
    if not ra.rounds:
        raise FriaError(
            "not-yet-assessed",
            f"right {ra.right_id!r} has no round 0; assess before applying measures",
        )
    require_valid_matrix_set(matrix_set)
    if not measure_ids:
        raise FriaError("unknown-measure", "no measure ids given")
    measures = []
    for measure_id in measure_ids:
        measure = ra.measure(measure_id)
        if measure is None:
            raise FriaError(
                "unknown-measure",
                f"right {ra.right_id!r} has no measure {measure_id!r}",
            )
        if measure.status is not MeasureStatus.IMPLEMENTED and not allow_proposed:
            raise FriaError(
                "measure-not-implemented",
                f"measure {measure_id!r} is only proposed; implement it before "
                "committing a round with it",
            )
        measures.append(measure)

    previous = ra.rounds[-1]
    effective = dict(previous.effective_ratings)
    before = {v: effective[v] for v in LIKELIHOOD_VARIABLES}
    for measure in measures:
        for target in measure.targets:
            if target not in LIKELIHOOD_VARIABLES:
                # unreachable through parsing; guards hand-built objects
                raise FriaError(
                    "severity-target-forbidden",
                    f"measure {measure.id!r} targets {target.value}",
                )
            effective[target] = step_down(effective[target], measure.rank_reduction)

    likelihood, severity, risk, acceptability, exclusion = _evaluate(
        effective, ra.exclusion_factors, matrix_set
    )
    timestamp = now or current_timestamp()
    result = RoundResult(
        round_number=previous.round_number + 1,
        effective_ratings=effective,
        likelihood=likelihood,
        severity=severity,
        risk=risk,
        acceptability=acceptability,
        applied_measure_ids=tuple(measure_ids),
        exclusion_applied=exclusion.describe() if exclusion else None,
        timestamp=timestamp,
    )
    ra.rounds.append(result)
    if ledger is not None:
        ledger.record(
            "measure-applied",
            actor,
            f"measures {', '.join(measure_ids)} applied to {ra.right_id}: "
            f"risk {previous.risk.rank.value} -> {risk.rank.value}",
            {
                "right_id": ra.right_id,
                "measure_ids": list(measure_ids),
                "before": {v.value: r.value for v, r in sorted(before.items(), key=lambda i: i[0].value)},
                "after": {
                    v.value: effective[v].value
                    for v in LIKELIHOOD_VARIABLES
                },
                "round": result.to_dict(),
            },
            timestamp,
        )
    return result


def reevaluate_right(
    ra: RightAssessment,
    matrix_set: MatrixSet,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> RoundResult:
    """New round from unchanged effective ratings; picks up new exclusion factors."""
    if not ra.rounds:
        raise FriaError(
            "not-yet-assessed", f"right {ra.right_id!r} has no round 0 to reevaluate"
        )
    require_valid_matrix_set(matrix_set)
    previous = ra.rounds[-1]
    effective = dict(previous.effective_ratings)
    likelihood, severity, risk, acceptability, exclusion = _evaluate(
        effective, ra.exclusion_factors, matrix_set
    )
    timestamp = now or current_timestamp()
    result = RoundResult(
        round_number=previous.round_number + 1,
        effective_ratings=effective,
        likelihood=likelihood,
        severity=severity,
        risk=risk,
        acceptability=acceptability,
        applied_measure_ids=(),
        exclusion_applied=exclusion.describe() if exclusion else None,
        timestamp=timestamp,
    )
    ra.rounds.append(result)
    if ledger is not None:
        ledger.record(
            "round-computed",
            actor,
            f"round {result.round_number} reevaluated for {ra.right_id}: "
            f"{acceptability.value}",
            {"right_id": ra.right_id, "round": result.to_dict()},
            timestamp,
        )
    return result


def compute_case_round(
    case: AssessmentCase,
    *,
    measure_ids: Optional[list[str]] = None,
    reevaluate: bool = False,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> dict:
    """Assess every right independently; collect per-right errors, never aggregate risk.

    Rights without rounds get round 0. Named measures are applied to the
    rights that own them. With reevaluate, every already-assessed right gets
    a fresh round from unchanged effective ratings.
    """
    if not case.right_assessments:
        raise FriaError("no-rights-identified", "the case assesses zero rights")
    require_valid_for_assessment(case)
    timestamp = now or current_timestamp()

    measure_ids = list(measure_ids or [])
    by_right: dict[str, list[str]] = {}
    for measure_id in measure_ids:
        owner = case.measure_owner(measure_id)
        if owner is None:
            raise FriaError(
                "unknown-measure", f"no right in the case owns measure {measure_id!r}"
            )
        by_right.setdefault(owner.right_id, []).append(measure_id)

    if ledger is not None and not any(e.action == "matrix-choice" for e in ledger.entries):
        provenance = "default matrix set" if case.matrix_set.is_default else "custom matrix set"
        ledger.record(
            "matrix-choice",
            actor,
            f"assessing with {provenance} {case.matrix_set.set_id!r}",
            {
                "case_id": case.case_id,
                "set_id": case.matrix_set.set_id,
                "provenance": provenance,
            },
            timestamp,
        )

    errors: list[dict] = []
    for ra in case.right_assessments:
        try:
            if not ra.rounds:
                assess_right(ra, case.matrix_set, ledger=ledger, actor=actor, now=timestamp)
            elif reevaluate and ra.right_id not in by_right:
                reevaluate_right(ra, case.matrix_set, ledger=ledger, actor=actor, now=timestamp)
            ids = by_right.get(ra.right_id)
            if ids:
                apply_mitigations(
                    ra, ids, case.matrix_set, ledger=ledger, actor=actor, now=timestamp
                )
        except FriaError as exc:
            errors.append({"right_id": ra.right_id, "code": exc.code, "message": exc.message})

    summary = case_summary(case)
    summary["errors"] = errors
    return summary


def case_summary(case: AssessmentCase) -> dict:
    """Current per-right state. Deliberately rowwise: no case-level risk exists."""
    rows = []
    for ra in case.right_assessments:
        current = ra.current_round()
        if current is None:
            rows.append({"right_id": ra.right_id, "title": ra.title, "assessed": False})
            continue
        rows.append(
            {
                "right_id": ra.right_id,
                "title": ra.title,
                "assessed": True,
                "round_number": current.round_number,
                "likelihood": current.likelihood.to_dict(),
                "severity": current.severity.to_dict(),
                "risk": current.risk.to_dict(),
                "acceptability": current.acceptability.value,
                "exclusion_applied": current.exclusion_applied,
            }
        )
    return {
        "case_id": case.case_id,
        "status": case.status.value,
        "rights": rows,
        "blocked_rights": case.blocked_rights(),
    }


# ---------------------------------------------------------------------------
# Ratings and exclusions on a live case
# ---------------------------------------------------------------------------


def set_rating(
    case: AssessmentCase,
    right_id: str,
    rating: VariableRating,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> None:
    """Replace one rating; discards that right's rounds, they no longer reflect it.

    Other rights keep their rounds untouched.
    """
    ra = case.right(right_id)
    if ra is None:
        raise FriaError("unresolvable-reference", f"case has no right {right_id!r}")
    report = validate_rating(rating)
    if not report.ok:
        raise FriaError("justification-required", report.errors[0].message)
    # Re-rating any variable, severity included, is legitimate expert revision;
    # only mitigation is barred from touching gravity and effort.
    ra.ratings[rating.variable] = rating
    dropped = len(ra.rounds)
    ra.rounds.clear()
    if case.status is CaseStatus.ASSESSED:
        case.status = CaseStatus.UPDATE_REQUIRED
    if ledger is not None:
        ledger.record(
            "rating-set",
            actor,
            f"{rating.variable.value} of {right_id} rated {rating.rank.value}"
            + (f"; {dropped} stale round(s) discarded" if dropped else ""),
            {
                "right_id": right_id,
                "variable": rating.variable.value,
                "rank": rating.rank.value,
                "rounds_discarded": dropped,
            },
            now or current_timestamp(),
        )


def record_exclusion(
    case: AssessmentCase,
    right_id: str,
    exclusion: ExclusionFactor,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> None:
    """Attach an accepted exclusion factor; takes effect at the next computed round."""
    ra = case.right(right_id)
    if ra is None:
        raise FriaError("unresolvable-reference", f"case has no right {right_id!r}")
    if not exclusion.is_valid():
        raise FriaError(
            "justification-required",
            "exclusion factors need a justification"
            + (
                " and a named competing interest"
                if exclusion.kind is ExclusionKind.BALANCING_TEST
                else ""
            ),
        )
    ra.exclusion_factors.append(exclusion)
    if ledger is not None:
        ledger.record(
            "exclusion-accepted",
            actor,
            f"{exclusion.kind.value} exclusion accepted for {right_id}",
            {"right_id": right_id, "exclusion": exclusion.to_dict()},
            now or current_timestamp(),
        )


# ---------------------------------------------------------------------------
# What-if simulation
# ---------------------------------------------------------------------------


def simulate_whatif(
    case: AssessmentCase,
    *,
    measure_ids: Optional[list[str]] = None,
    reductions: Optional[dict[str, dict[str, int]]] = None,
    rating_overrides: Optional[dict[str, dict[str, str]]] = None,
) -> dict:
    """Current vs hypothetical outcome per right; the case is never mutated.

    Three override channels, applied to each right's current effective ratings:
    existing measures by id (proposed ones allowed, that is the point of
    comparing designs), ad-hoc step reductions (probability/exposure only,
    like a sketched measure), and full re-ratings (any variable, an expert
    revisiting a judgement, not a mitigation).

    The output carries no timestamps, so identical inputs give identical bytes.
    """
    measure_ids = list(measure_ids or [])
    reductions = reductions or {}
    rating_overrides = rating_overrides or {}
    if not measure_ids and not reductions and not rating_overrides:
        raise FriaError(
            "malformed-document", "what-if needs measures, reductions or rating overrides"
        )

    by_right: dict[str, list[str]] = {}
    for measure_id in measure_ids:
        owner = case.measure_owner(measure_id)
        if owner is None:
            raise FriaError(
                "unknown-measure", f"no right in the case owns measure {measure_id!r}"
            )
        by_right.setdefault(owner.right_id, []).append(measure_id)

    for source, name in ((reductions, "reduction"), (rating_overrides, "rating override")):
        for right_id in source:
            if case.right(right_id) is None:
                raise FriaError(
                    "unresolvable-reference",
                    f"{name} references unknown right {right_id!r}",
                )

    rows = []
    for ra in case.right_assessments:
        current_round = ra.current_round()
        if current_round is not None:
            current_effective = dict(current_round.effective_ratings)
        else:
            current_effective = ra.initial_ratings()
        cur_l, cur_s, cur_r, cur_acc, _ = _evaluate(
            current_effective, ra.exclusion_factors, case.matrix_set
        )

        effective = dict(current_effective)
        for measure_id in by_right.get(ra.right_id, []):
            measure = ra.measure(measure_id)
            for target in measure.targets:
                effective[target] = step_down(effective[target], measure.rank_reduction)
        for raw_variable, steps in reductions.get(ra.right_id, {}).items():
            variable = parse_variable(raw_variable)
            if variable not in LIKELIHOOD_VARIABLES:
                raise FriaError(
                    "severity-override-forbidden",
                    f"cannot reduce {variable.value}: measures may only lower "
                    "probability or exposure; use a rating override to re-rate severity",
                )
            if not isinstance(steps, int) or isinstance(steps, bool) or steps < 1:
                raise FriaError(
                    "malformed-document", f"reduction steps must be a positive integer, got {steps!r}"
                )
            effective[variable] = step_down(effective[variable], steps)
        for raw_variable, raw_rank in rating_overrides.get(ra.right_id, {}).items():
            variable = parse_variable(raw_variable)
            effective[variable] = parse_rank(raw_rank)

        hyp_l, hyp_s, hyp_r, hyp_acc, _ = _evaluate(
            effective, ra.exclusion_factors, case.matrix_set
        )
        rows.append(
            {
                "right_id": ra.right_id,
                "title": ra.title,
                "current": {
                    "effective_ratings": {
                        v.value: r.value
                        for v, r in sorted(current_effective.items(), key=lambda i: i[0].value)
                    },
                    "likelihood": cur_l.to_dict(),
                    "severity": cur_s.to_dict(),
                    "risk": cur_r.to_dict(),
                    "acceptability": cur_acc.value,
                },
                "hypothetical": {
                    "effective_ratings": {
                        v.value: r.value
                        for v, r in sorted(effective.items(), key=lambda i: i[0].value)
                    },
                    "likelihood": hyp_l.to_dict(),
                    "severity": hyp_s.to_dict(),
                    "risk": hyp_r.to_dict(),
                    "acceptability": hyp_acc.value,
                },
                "risk_delta_steps": rank_steps_between(cur_r.rank, hyp_r.rank),
                "changed": effective != current_effective,
            }
        )
    return {
        "case_id": case.case_id,
        "based_on_version": case.version,
        "overrides": {
            "measure_ids": measure_ids,
            "reductions": reductions,
            "rating_overrides": rating_overrides,
        },
        "rights": rows,
    }


# ---------------------------------------------------------------------------
# Status transitions
# ---------------------------------------------------------------------------


def _transition(case: AssessmentCase, new_status: CaseStatus, via_review: bool = False) -> None:
    pair = (case.status, new_status)
    if pair in _TRANSITIONS or (via_review and pair in _REVIEW_ONLY_TRANSITIONS):
        case.status = new_status
        return
    raise FriaError(
        "status-transition-forbidden",
        f"cannot move case from {case.status.value!r} to {new_status.value!r}",
    )


def mark_assessed(
    case: AssessmentCase,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> None:
    """Draft or update-required becomes assessed: every right rounded, none blocked."""
    if not case.right_assessments:
        raise FriaError("no-rights-identified", "the case assesses zero rights")
    unassessed = [ra.right_id for ra in case.right_assessments if not ra.rounds]
    if unassessed:
        raise FriaError(
            "assessment-incomplete",
            f"rights not yet assessed: {', '.join(unassessed)}",
            unassessed,
        )
    blocked = case.blocked_rights()
    if blocked:
        raise FriaError(
            "blocked-rights-present",
            f"rights still blocked: {', '.join(blocked)}; mitigate further or record "
            "an exclusion factor",
            blocked,
        )
    _transition(case, CaseStatus.ASSESSED)
    if ledger is not None:
        ledger.record(
            "status-change",
            actor,
            "case marked assessed",
            {"case_id": case.case_id, "status": CaseStatus.ASSESSED.value},
            now or current_timestamp(),
        )


def mark_update_required(
    case: AssessmentCase,
    reason: str,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> None:
    _transition(case, CaseStatus.UPDATE_REQUIRED)
    if ledger is not None:
        ledger.record(
            "status-change",
            actor,
            f"update required: {reason}",
            {"case_id": case.case_id, "status": CaseStatus.UPDATE_REQUIRED.value, "reason": reason},
            now or current_timestamp(),
        )


def close_case(
    case: AssessmentCase,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> None:
    """Close an assessed case; impossible without the closing alternatives review."""
    if case.scoping.alternatives.closing_review is None:
        raise FriaError(
            "closing-review-required",
            "the alternatives question must be re-answered before the case can close",
        )
    _transition(case, CaseStatus.CLOSED)
    if ledger is not None:
        ledger.record(
            "status-change",
            actor,
            "case closed",
            {"case_id": case.case_id, "status": CaseStatus.CLOSED.value},
            now or current_timestamp(),
        )


# ---------------------------------------------------------------------------
# Residual risk
# ---------------------------------------------------------------------------


def residual_risk_report(case: AssessmentCase) -> dict:
    """Initial vs current risk per right, measures, exclusions, who still blocks."""
    unassessed = [ra.right_id for ra in case.right_assessments if not ra.rounds]
    if unassessed or not case.right_assessments:
        raise FriaError(
            "not-yet-assessed",
            "residual risk needs at least one round per right; missing: "
            + (", ".join(unassessed) or "all rights"),
            unassessed,
        )
    rows = []
    for ra in case.right_assessments:
        initial = ra.rounds[0]
        current = ra.rounds[-1]
        applied: list[str] = []
        for rnd in ra.rounds:
            applied.extend(rnd.applied_measure_ids)
        rows.append(
            {
                "right_id": ra.right_id,
                "title": ra.title,
                "initial_risk": initial.risk.to_dict(),
                "current_risk": current.risk.to_dict(),
                "delta_steps": rank_steps_between(initial.risk.rank, current.risk.rank),
                "applied_measures": applied,
                "exclusions": [e.describe() for e in ra.exclusion_factors if e.is_valid()],
                "acceptability": current.acceptability.value,
                "needs_further_round": current.acceptability is Acceptability.BLOCKED,
            }
        )
    return {
        "case_id": case.case_id,
        "rights": rows,
        "eligible_for_assessed": all(not r["needs_further_round"] for r in rows),
    }


# ---------------------------------------------------------------------------
# Prior-assessment reuse
# ---------------------------------------------------------------------------


def link_prior_assessment(
    case: AssessmentCase,
    prior_ref: str,
    similarity_note: str,
    *,
    resolver: Optional[Callable[[str], bool]] = None,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> None:
    """Record reuse of an earlier assessment. Nothing is copied: only the link
    and the stated similarity, so reliance stays a human judgement."""
    if not similarity_note.strip():
        raise FriaError(
            "justification-required",
            "a reuse link must explain how the prior assessment is similar",
        )
    if prior_ref == case.case_id:
        raise FriaError("self-link-forbidden", "a case cannot rely on itself")
    if resolver is not None:
        resolvable = resolver(prior_ref)
    else:
        from pathlib import Path

        resolvable = Path(prior_ref).exists()
    if not resolvable:
        raise FriaError(
            "unresolvable-reference",
            f"prior assessment {prior_ref!r} is neither a readable file nor a known case id",
        )
    case.prior_assessment_ref = PriorAssessmentLink(ref=prior_ref, similarity_note=similarity_note)
    if ledger is not None:
        ledger.record(
            "reuse-linked",
            actor,
            f"prior assessment linked: {prior_ref}",
            {"case_id": case.case_id, "ref": prior_ref, "similarity_note": similarity_note},
            now or current_timestamp(),
        )


# ---------------------------------------------------------------------------
# Diffing for the update duty
# ---------------------------------------------------------------------------

# Inputs whose change triggers the update duty. Everything else still shows
# up in the change list, it just does not flip the verdict.
_MATERIAL_PATTERNS: tuple[tuple[str, ...], ...] = (
    ("scoping", "system_profile"),
    ("scoping", "deployer_process_description"),
    ("scoping", "period_and_frequency_of_use"),
    ("scoping", "affected_groups"),
    ("matrix_set",),
    ("right_assessments", "*", "rightsholder_groups"),
    ("right_assessments", "*", "ratings"),
    ("right_assessments", "*", "exclusion_factors"),
    ("right_assessments", "*", "mitigations", "*", "status"),
)

# Derived or administrative state; never part of the input diff.
_DIFF_IGNORED_KEYS = {"version", "status", "schema_version", "ledger_ref"}


def _diff_view(case: AssessmentCase) -> dict:
    doc = case.to_dict()
    for key in _DIFF_IGNORED_KEYS:
        doc.pop(key, None)
    for right in doc.get("right_assessments", []):
        right.pop("rounds", None)
    return doc


_KEY_FIELDS = ("id", "right_id")


def _flatten(value, path: tuple[str, ...], out: dict) -> None:
    if isinstance(value, dict):
        if not value:
            out[path] = {}
            return
        for key, sub in value.items():
            _flatten(sub, path + (str(key),), out)
        return
    if isinstance(value, list):
        keys = _list_keys(value)
        if keys is not None:
            for key, item in zip(keys, value):
                _flatten(item, path + (key,), out)
            return
        out[path] = value
        return
    out[path] = value


def _list_keys(items: list) -> Optional[list[str]]:
    """Stable keys for a list of keyed objects, else None (treated atomically)."""
    if not items or not all(isinstance(i, dict) for i in items):
        return None
    for field_name in _KEY_FIELDS:
        if all(isinstance(i.get(field_name), str) and i.get(field_name) for i in items):
            keys = [i[field_name] for i in items]
            if len(set(keys)) == len(keys):
                return keys
    return [str(n) for n in range(len(items))]


def _render_path(path: tuple[str, ...]) -> str:
    return ".".join(path)


def _is_material(path: tuple[str, ...]) -> bool:
    for pattern in _MATERIAL_PATTERNS:
        overlap = min(len(pattern), len(path))
        if all(pattern[i] in ("*", path[i]) for i in range(overlap)):
            return True
    return False


def diff_assessments(
    old: AssessmentCase,
    new: AssessmentCase,
    *,
    ledger: Optional[Ledger] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> dict:
    """Compare two snapshots of the same case and decide the update duty.

    Compares assessment inputs, not derived state: rounds, status and storage
    metadata are excluded. Material changes flip update_required; cosmetic
    edits are listed but do not.
    """
    if old.case_id != new.case_id:
        raise FriaError(
            "lineage-mismatch",
            f"cases {old.case_id!r} and {new.case_id!r} are not the same assessment lineage",
        )
    flat_old: dict = {}
    flat_new: dict = {}
    _flatten(_diff_view(old), (), flat_old)
    _flatten(_diff_view(new), (), flat_new)

    changes = []
    for path in sorted(set(flat_old) | set(flat_new)):
        if path in flat_old and path not in flat_new:
            kind = "removed"
        elif path not in flat_old and path in flat_new:
            kind = "added"
        elif flat_old[path] != flat_new[path]:
            kind = "changed"
        else:
            continue
        changes.append(
            {"path": _render_path(path), "kind": kind, "material": _is_material(path)}
        )

    update_required = any(c["material"] for c in changes)
    report = {
        "case_id": new.case_id,
        "old_version": old.version,
        "new_version": new.version,
        "update_required": update_required,
        "changes": changes,
        "material_paths": [c["path"] for c in changes if c["material"]],
    }
    if ledger is not None:
        ledger.record(
            "diff-run",
            actor,
            f"diff run: {len(changes)} change(s), update "
            + ("required" if update_required else "not required"),
            report,
            now or current_timestamp(),
        )
    return report
