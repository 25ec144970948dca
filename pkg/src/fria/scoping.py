"""Planning and scoping: who deploys what, on whom, and why not something else.

Scoping captures the deployer-side facts an assessment is anchored to: the
deployment process and period of use, the concrete groups exposed to the
system, candidate rights worth assessing, and the alternatives analysis that
is answered up front and revisited when the assessment ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional

from .core import (
    FriaError,
    FundamentalRight,
    RightsCatalog,
    RightsholderGroup,
    ValidationReport,
    _require_mapping,
    validate_rightsholder_group,
)

if TYPE_CHECKING:  # pragma: no cover - typing only, avoids an import cycle
    from .ledger import Ledger
    from .lifecycle import AssessmentCase


@dataclass(frozen=True)
class SystemProfile:
    """What the AI system is and what part it plays in the deployer's process."""

    name: str = ""
    purpose: str = ""
    ai_role: str = ""
    data_flows_summary: str = ""
    known_performance_limits: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "purpose": self.purpose,
            "ai_role": self.ai_role,
            "data_flows_summary": self.data_flows_summary,
            "known_performance_limits": self.known_performance_limits,
        }

    @staticmethod
    def from_dict(d: dict) -> "SystemProfile":
        _require_mapping(d, "system profile")
        return SystemProfile(
            name=str(d.get("name", "")),
            purpose=str(d.get("purpose", "")),
            ai_role=str(d.get("ai_role", "")),
            data_flows_summary=str(d.get("data_flows_summary", "")),
            known_performance_limits=str(d.get("known_performance_limits", "")),
        )


@dataclass(frozen=True)
class ContextOfUse:
    """The concrete setting the system lands in, not the system in isolation."""

    setting: str = ""
    socio_technical_interactions: str = ""
    existing_legal_safeguards: str = ""

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "socio_technical_interactions": self.socio_technical_interactions,
            "existing_legal_safeguards": self.existing_legal_safeguards,
        }

    @staticmethod
    def from_dict(d: dict) -> "ContextOfUse":
        _require_mapping(d, "context of use")
        return ContextOfUse(
            setting=str(d.get("setting", "")),
            socio_technical_interactions=str(d.get("socio_technical_interactions", "")),
            existing_legal_safeguards=str(d.get("existing_legal_safeguards", "")),
        )


@dataclass(frozen=True)
class InherentDimension:
    """The needs the deployment answers, separate from the context it runs in."""

    needs_addressed: str = ""
    ai_relevance: str = ""
    ai_role_in_needs: str = ""

    def to_dict(self) -> dict:
        return {
            "needs_addressed": self.needs_addressed,
            "ai_relevance": self.ai_relevance,
            "ai_role_in_needs": self.ai_role_in_needs,
        }

    @staticmethod
    def from_dict(d: dict) -> "InherentDimension":
        _require_mapping(d, "inherent dimension")
        return InherentDimension(
            needs_addressed=str(d.get("needs_addressed", "")),
            ai_relevance=str(d.get("ai_relevance", "")),
            ai_role_in_needs=str(d.get("ai_role_in_needs", "")),
        )


@dataclass(frozen=True)
class CandidateRight:
    right_id: str
    rationale: str = ""

    def to_dict(self) -> dict:
        return {"right_id": self.right_id, "rationale": self.rationale}

    @staticmethod
    def from_dict(d: dict) -> "CandidateRight":
        _require_mapping(d, "candidate right")
        return CandidateRight(right_id=str(d.get("right_id", "")), rationale=str(d.get("rationale", "")))


@dataclass(frozen=True)
class AlternativeOption:
    name: str
    description: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "description": self.description}

    @staticmethod
    def from_dict(d: dict) -> "AlternativeOption":
        _require_mapping(d, "alternative option")
        return AlternativeOption(name=str(d.get("name", "")), description=str(d.get("description", "")))


@dataclass(frozen=True)
class Swot:
    """Optional strengths/weaknesses/opportunities/threats notes on the choice of AI."""

    strengths: str = ""
    weaknesses: str = ""
    opportunities: str = ""
    threats: str = ""

    def to_dict(self) -> dict:
        return {
            "strengths": self.strengths,
            "weaknesses": self.weaknesses,
            "opportunities": self.opportunities,
            "threats": self.threats,
        }

    @staticmethod
    def from_dict(d: dict) -> "Swot":
        _require_mapping(d, "swot")
        return Swot(
            strengths=str(d.get("strengths", "")),
            weaknesses=str(d.get("weaknesses", "")),
            opportunities=str(d.get("opportunities", "")),
            threats=str(d.get("threats", "")),
        )


class ReviewDecision(str, Enum):
    PROCEED = "proceed"
    SWITCH_ALTERNATIVE = "switch-alternative"
    ABANDON = "abandon"


@dataclass(frozen=True)
class ClosingReview:
    """The alternatives question asked again at the end, now with results in hand."""

    re_answer: str
    comparison: str
    decision: ReviewDecision

    def to_dict(self) -> dict:
        return {
            "re_answer": self.re_answer,
            "comparison": self.comparison,
            "decision": self.decision.value,
        }

    @staticmethod
    def from_dict(d: dict) -> "ClosingReview":
        _require_mapping(d, "closing review")
        raw = d.get("decision")
        try:
            decision = ReviewDecision(raw)
        except ValueError:
            raise FriaError(
                "malformed-document",
                f"closing review decision must be one of "
                f"{', '.join(m.value for m in ReviewDecision)}, got {raw!r}",
            ) from None
        return ClosingReview(
            re_answer=str(d.get("re_answer", "")),
            comparison=str(d.get("comparison", "")),
            decision=decision,
        )


@dataclass
class AlternativesAnalysis:
    """Why AI at all: answered before assessing, revisited after."""

    non_ai_alternatives_considered: list[AlternativeOption] = field(default_factory=list)
    why_ai_preferred: str = ""
    consequence_of_not_using: str = ""
    swot: Optional[Swot] = None
    closing_review: Optional[ClosingReview] = None

    def initial_answers_complete(self) -> bool:
        return bool(
            self.non_ai_alternatives_considered
            and self.why_ai_preferred.strip()
            and self.consequence_of_not_using.strip()
        )

    def to_dict(self) -> dict:
        d = {
            "non_ai_alternatives_considered": [
                a.to_dict() for a in self.non_ai_alternatives_considered
            ],
            "why_ai_preferred": self.why_ai_preferred,
            "consequence_of_not_using": self.consequence_of_not_using,
        }
        if self.swot is not None:
            d["swot"] = self.swot.to_dict()
        if self.closing_review is not None:
            d["closing_review"] = self.closing_review.to_dict()
        return d

    @staticmethod
    def from_dict(d: dict) -> "AlternativesAnalysis":
        _require_mapping(d, "alternatives analysis")
        raw_options = d.get("non_ai_alternatives_considered", [])
        if not isinstance(raw_options, list):
            raise FriaError("malformed-document", "non_ai_alternatives_considered must be a list")
        swot = d.get("swot")
        review = d.get("closing_review")
        return AlternativesAnalysis(
            non_ai_alternatives_considered=[AlternativeOption.from_dict(o) for o in raw_options],
            why_ai_preferred=str(d.get("why_ai_preferred", "")),
            consequence_of_not_using=str(d.get("consequence_of_not_using", "")),
            swot=Swot.from_dict(swot) if swot is not None else None,
            closing_review=ClosingReview.from_dict(review) if review is not None else None,
        )


@dataclass
class ScopingRecord:
    system_profile: SystemProfile = field(default_factory=SystemProfile)
    deployer_process_description: str = ""
    period_and_frequency_of_use: str = ""
    context_of_use: ContextOfUse = field(default_factory=ContextOfUse)
    inherent_dimension: InherentDimension = field(default_factory=InherentDimension)
    affected_groups: list[RightsholderGroup] = field(default_factory=list)
    candidate_rights: list[CandidateRight] = field(default_factory=list)
    alternatives: AlternativesAnalysis = field(default_factory=AlternativesAnalysis)

    def group_ids(self) -> set[str]:
        return {g.id for g in self.affected_groups}

    def to_dict(self) -> dict:
        return {
            "system_profile": self.system_profile.to_dict(),
            "deployer_process_description": self.deployer_process_description,
            "period_and_frequency_of_use": self.period_and_frequency_of_use,
            "context_of_use": self.context_of_use.to_dict(),
            "inherent_dimension": self.inherent_dimension.to_dict(),
            "affected_groups": [g.to_dict() for g in self.affected_groups],
            "candidate_rights": [c.to_dict() for c in self.candidate_rights],
            "alternatives": self.alternatives.to_dict(),
        }

    @staticmethod
    def from_dict(d: dict) -> "ScopingRecord":
        _require_mapping(d, "scoping record")
        raw_groups = d.get("affected_groups", [])
        raw_candidates = d.get("candidate_rights", [])
        if not isinstance(raw_groups, list) or not isinstance(raw_candidates, list):
            raise FriaError("malformed-document", "scoping lists must be lists")
        return ScopingRecord(
            system_profile=SystemProfile.from_dict(d.get("system_profile", {})),
            deployer_process_description=str(d.get("deployer_process_description", "")),
            period_and_frequency_of_use=str(d.get("period_and_frequency_of_use", "")),
            context_of_use=ContextOfUse.from_dict(d.get("context_of_use", {})),
            inherent_dimension=InherentDimension.from_dict(d.get("inherent_dimension", {})),
            affected_groups=[RightsholderGroup.from_dict(g) for g in raw_groups],
            candidate_rights=[CandidateRight.from_dict(c) for c in raw_candidates],
            alternatives=AlternativesAnalysis.from_dict(d.get("alternatives", {})),
        )


def validate_scoping(scoping: ScopingRecord) -> ValidationReport:
    """Errors block assessment; warnings flag thin but workable scoping."""
    report = ValidationReport()
    if not scoping.deployer_process_description.strip():
        report.error(
            "malformed-document",
            "deployer process description is required (Article 27(1)(a))",
            "scoping.deployer_process_description",
        )
    if not scoping.period_and_frequency_of_use.strip():
        report.error(
            "malformed-document",
            "period and frequency of use is required (Article 27(1)(b))",
            "scoping.period_and_frequency_of_use",
        )
    if not scoping.affected_groups:
        report.error(
            "malformed-document",
            "at least one affected rightsholder group is required (Article 27(1)(c))",
            "scoping.affected_groups",
        )
    if not scoping.alternatives.initial_answers_complete():
        report.error(
            "alternatives-gate-incomplete",
            "the alternatives analysis must answer, before assessment: which non-AI "
            "alternatives were considered, why AI is preferred, and what not using "
            "the system would mean",
            "scoping.alternatives",
        )

    seen_groups: set[str] = set()
    for i, group in enumerate(scoping.affected_groups):
        if group.id in seen_groups:
            report.error(
                "duplicate-id",
                f"rightsholder group id {group.id!r} appears more than once",
                f"scoping.affected_groups[{i}]",
            )
        seen_groups.add(group.id)
        # Paths are already anchored by the validator, so no extra prefix.
        report.extend(validate_rightsholder_group(group, f"scoping.affected_groups[{i}]"))

    if not scoping.candidate_rights:
        report.warning(
            "no-candidate-rights",
            "no candidate rights were identified during scoping",
            "scoping.candidate_rights",
        )
    if not scoping.system_profile.name.strip() or not scoping.system_profile.purpose.strip():
        report.warning(
            "thin-system-profile",
            "system profile should name the system and state its purpose",
            "scoping.system_profile",
        )
    if not scoping.context_of_use.socio_technical_interactions.strip():
        report.warning(
            "context-not-described",
            "contextual use should describe how people and process interact with "
            "the system, not just the technology",
            "scoping.context_of_use.socio_technical_interactions",
        )
    return report


def candidate_rights_checklist(
    context_tags: list[str] | tuple[str, ...], catalog: RightsCatalog
) -> list[FundamentalRight]:
    """Rights whose tags overlap the deployment context, sorted by id.

    A starting checklist, not an answer: assessors prune and extend it.
    """
    wanted = {t.strip().lower() for t in context_tags if t.strip()}
    hits = [
        right
        for right in catalog.rights
        if wanted.intersection(t.lower() for t in right.context_tags)
    ]
    return sorted(hits, key=lambda r: r.id)


def record_alternatives_closing_review(
    case: "AssessmentCase",
    review: ClosingReview,
    *,
    ledger: Optional["Ledger"] = None,
    actor: str = "assessor",
    now: Optional[str] = None,
) -> None:
    """Attach the end-of-assessment alternatives review and ledger it.

    Requires every assessed right to have at least one computed round: the
    review compares the AI path against alternatives in light of results.
    A switch-alternative or abandon decision closes the case on the spot.
    """
    from .lifecycle import CaseStatus, current_timestamp  # local import, avoids a cycle

    unassessed = [ra.right_id for ra in case.right_assessments if not ra.rounds]
    if unassessed:
        raise FriaError(
            "assessment-incomplete",
            "the closing alternatives review needs every right assessed first; "
            f"missing rounds for: {', '.join(unassessed)}",
            unassessed,
        )
    if not review.re_answer.strip() or not review.comparison.strip():
        raise FriaError(
            "justification-required",
            "the closing review must re-answer the alternatives question and compare outcomes",
        )
    case.scoping.alternatives.closing_review = review
    timestamp = now or current_timestamp()
    if review.decision is not ReviewDecision.PROCEED:
        case.status = CaseStatus.CLOSED
    if ledger is not None:
        ledger.record(
            "review-recorded",
            actor,
            f"closing alternatives review recorded with decision {review.decision.value}",
            {"case_id": case.case_id, "review": review.to_dict()},
            timestamp,
        )
        if review.decision is not ReviewDecision.PROCEED:
            ledger.record(
                "status-change",
                actor,
                f"case closed by closing review decision {review.decision.value}",
                {"case_id": case.case_id, "status": CaseStatus.CLOSED.value},
                timestamp,
            )
