"""Shared fixtures: a deterministic two-right case and matrix helpers.

The fixture deployment: a municipal agency scores applications for a
supplementary family aid programme. Non-discrimination starts blocked and is
mitigated into acceptability; data protection is acceptable from round 0.
All engine calls in tests pin their timestamps.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from fria.core import (
    ConfidenceRecord,
    EvidenceQuality,
    ExpertAgreement,
    GravityComponents,
    OrdinalRank,
    RatingVariable,
    RightsholderGroup,
    VariableRating,
)
from fria.lifecycle import (
    Article27Measures,
    AssessmentCase,
    MeasureStatus,
    MitigationMeasure,
    RightAssessment,
)
from fria.matrix import default_matrix_set
from fria.scoping import (
    AlternativeOption,
    AlternativesAnalysis,
    CandidateRight,
    ContextOfUse,
    InherentDimension,
    ScopingRecord,
    SystemProfile,
)

DATA_DIR = Path(__file__).parent / "data"

T0 = "2026-08-14T09:00:00Z"
T1 = "2026-08-14T10:00:00Z"
T2 = "2026-08-14T11:00:00Z"

# Verdict lines collected by the acceptance tests; echoed after the run so
# they survive output capture.
ACCEPTANCE_VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)


def make_rating(
    variable: RatingVariable,
    rank: OrdinalRank,
    rationale: str,
    *,
    quality: EvidenceQuality = EvidenceQuality.DOCUMENTED,
    agreement: ExpertAgreement = ExpertAgreement.MAJORITY,
    currency: str = "2026-05-12",
    components: GravityComponents | None = None,
) -> VariableRating:
    if variable is RatingVariable.GRAVITY and components is None:
        components = GravityComponents(
            intensity="material hardship through delayed or wrongly reduced aid",
            consequences="missed payments ripple into rent and food budgets",
            duration="one application cycle; reversible on appeal",
        )
    return VariableRating(
        variable=variable,
        rank=rank,
        rationale=rationale,
        confidence=ConfidenceRecord(
            evidence_quality=quality,
            evidence_currency=currency,
            expert_agreement=agreement,
            notes="",
        ),
        gravity_components=components,
    )


def make_scoping() -> ScopingRecord:
    return ScopingRecord(
        system_profile=SystemProfile(
            name="AidRank",
            purpose="Prioritise caseworker review of supplementary family aid applications",
            ai_role="Scores incoming applications; caseworkers take every final decision",
            data_flows_summary="Application form data and household registry extracts; "
            "no external enrichment",
            known_performance_limits="Lower precision for households with sparse "
            "documentation history",
        ),
        deployer_process_description="Applications for the supplementary family aid "
        "programme are scored on arrival; the score steers the order and depth of "
        "caseworker review. Award decisions remain with caseworkers.",
        period_and_frequency_of_use="Continuous during the application window "
        "(January to March), nightly rescoring; about 40,000 applications per cycle.",
        context_of_use=ContextOfUse(
            setting="Municipal social services back office",
            socio_technical_interactions="Caseworkers see the score next to the file; "
            "workload pressure makes silent deference to the score likely",
            existing_legal_safeguards="Administrative appeal within 30 days; GDPR "
            "access and rectification already operational",
        ),
        inherent_dimension=InherentDimension(
            needs_addressed="Triage of a seasonal application backlog",
            ai_relevance="Volume and deadline make manual-only review infeasible",
            ai_role_in_needs="Ordering and flagging only; no automated awards",
        ),
        affected_groups=[
            RightsholderGroup(
                id="applicant-families",
                description="Families applying for the supplementary aid, predominantly "
                "households with three or more children",
                basis="Only households that file an application are scored; programme "
                "eligibility is limited to families with three or more children",
                vulnerability_flags=("children", "low-income"),
                estimated_share_of_group_affected="all applicants are scored",
            ),
            RightsholderGroup(
                id="rural-applicants",
                description="Applicant families in rural districts with thin digital "
                "documentation",
                basis="Subset of applicants; sparse records lower score confidence and "
                "raise deprioritisation odds",
                vulnerability_flags=("low-income",),
                estimated_share_of_group_affected="about a fifth of applicants",
            ),
        ],
        candidate_rights=[
            CandidateRight(
                right_id="eu-charter:art-21",
                rationale="Scoring reproduces historic award disparities across "
                "districts and family sizes",
            ),
            CandidateRight(
                right_id="eu-charter:art-8",
                rationale="Household registry data is processed beyond what the "
                "application itself requires",
            ),
        ],
        alternatives=AlternativesAnalysis(
            non_ai_alternatives_considered=[
                AlternativeOption(
                    name="Randomised manual review",
                    description="First-come-first-served with random audit sampling",
                ),
                AlternativeOption(
                    name="Rule-based checklist",
                    description="Hand-written prioritisation rules maintained by the agency",
                ),
            ],
            why_ai_preferred="Rules missed compound need patterns and aged badly; "
            "scoring reduced median waiting time in the pilot",
            consequence_of_not_using="Backlog pushes decisions past the school-year "
            "deadline for several thousand families",
        ),
    )


def make_case(case_id: str = "fria-2026-0042") -> AssessmentCase:
    art21 = RightAssessment(
        right_id="eu-charter:art-21",
        title="Non-discrimination",
        rightsholder_groups=["applicant-families", "rural-applicants"],
        ratings={
            RatingVariable.PROBABILITY: make_rating(
                RatingVariable.PROBABILITY,
                OrdinalRank.HIGH,
                "Historic award data shows district and family-size disparities the "
                "model can reproduce",
            ),
            RatingVariable.EXPOSURE: make_rating(
                RatingVariable.EXPOSURE,
                OrdinalRank.MEDIUM,
                "All applicants are scored; adverse effect concentrates where "
                "documentation is thin",
            ),
            RatingVariable.GRAVITY: make_rating(
                RatingVariable.GRAVITY,
                OrdinalRank.MEDIUM,
                "Wrongly deprioritised review delays aid within the cycle",
            ),
            RatingVariable.EFFORT: make_rating(
                RatingVariable.EFFORT,
                OrdinalRank.MEDIUM,
                "Appeal and manual re-review exist but are slow and fall on the applicant",
            ),
        },
        mitigations=[
            MitigationMeasure(
                id="m-audit",
                description="Quarterly disparity audit with retraining on reweighted data",
                targets=(RatingVariable.PROBABILITY,),
                rank_reduction=1,
                justification="Pilot audit cut district-level score gaps by half",
                status=MeasureStatus.IMPLEMENTED,
                effectiveness_evidence="Pilot report AR-7, March cycle",
            ),
            MitigationMeasure(
                id="m-review",
                description="Mandatory human second review of every deprioritised application",
                targets=(RatingVariable.EXPOSURE,),
                rank_reduction=1,
                justification="Removes unreviewed adverse outcomes entirely",
                status=MeasureStatus.PROPOSED,
            ),
        ],
    )
    art8 = RightAssessment(
        right_id="eu-charter:art-8",
        title="Protection of personal data",
        rightsholder_groups=["applicant-families"],
        ratings={
            RatingVariable.PROBABILITY: make_rating(
                RatingVariable.PROBABILITY,
                OrdinalRank.MEDIUM,
                "Broad household attributes are processed; minimisation only partially applied",
            ),
            RatingVariable.EXPOSURE: make_rating(
                RatingVariable.EXPOSURE,
                OrdinalRank.LOW,
                "Only data already filed with the application is processed; no external "
                "enrichment",
            ),
            RatingVariable.GRAVITY: make_rating(
                RatingVariable.GRAVITY,
                OrdinalRank.MEDIUM,
                "Leak or misuse would expose family finances and composition",
            ),
            RatingVariable.EFFORT: make_rating(
                RatingVariable.EFFORT,
                OrdinalRank.LOW,
                "Standard GDPR remedies apply; correction is quick once flagged",
            ),
        },
        mitigations=[
            MitigationMeasure(
                id="m-minimise",
                description="Drop registry fields with no score contribution",
                targets=(RatingVariable.PROBABILITY,),
                rank_reduction=1,
                justification="Feature ablation showed no accuracy loss",
                status=MeasureStatus.IMPLEMENTED,
            ),
        ],
    )
    return AssessmentCase(
        case_id=case_id,
        title="Family aid application scoring",
        matrix_set=default_matrix_set(),
        scoping=make_scoping(),
        right_assessments=[art21, art8],
        article27_measures=Article27Measures(
            human_oversight="Caseworkers decide every award; scores carry a confidence "
            "band and a mandatory-review flag",
            governance_arrangements="Quarterly review board with the data protection "
            "officer and a caseworker representative",
            complaint_mechanism="Existing administrative appeal extended with a "
            "score-specific re-review request",
        ),
    )


@pytest.fixture()
def case() -> AssessmentCase:
    return make_case()


@pytest.fixture()
def matrix_set():
    return default_matrix_set()


@pytest.fixture()
def case_path(tmp_path) -> Path:
    """The committed fixture file copied somewhere safe to mutate."""
    source = DATA_DIR / "case_family_aid.json"
    target = tmp_path / "case_family_aid.json"
    target.write_bytes(source.read_bytes())
    return target


def load_json(path: Path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)
