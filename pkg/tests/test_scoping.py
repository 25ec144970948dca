"""Scoping gate: required Article 27 fields, groups, alternatives lifecycle."""

import pytest

from fria.core import FriaError, RightsholderGroup, default_rights_catalog
from fria.ledger import Ledger
from fria.lifecycle import CaseStatus, compute_case_round
from fria.scoping import (
    ClosingReview,
    ReviewDecision,
    ScopingRecord,
    candidate_rights_checklist,
    record_alternatives_closing_review,
    validate_scoping,
)

from conftest import T0, T1, make_case, make_scoping


def codes(report):
    return [f.code for f in report.errors]


class TestValidateScoping:
    def test_fixture_scoping_passes(self):
        report = validate_scoping(make_scoping())
        assert report.ok, [f.to_dict() for f in report.errors]

    def test_missing_process_description(self):
        s = make_scoping()
        s.deployer_process_description = "  "
        report = validate_scoping(s)
        assert not report.ok
        assert any("Article 27(1)(a)" in f.message for f in report.errors)

    def test_missing_period(self):
        s = make_scoping()
        s.period_and_frequency_of_use = ""
        report = validate_scoping(s)
        assert any("Article 27(1)(b)" in f.message for f in report.errors)

    def test_no_groups(self):
        s = make_scoping()
        s.affected_groups = []
        report = validate_scoping(s)
        assert any("Article 27(1)(c)" in f.message for f in report.errors)

    def test_group_without_basis_blocks(self):
        s = make_scoping()
        s.affected_groups.append(
            RightsholderGroup(id="extras", description="others", basis="")
        )
        report = validate_scoping(s)
        assert "exposure-basis-missing" in codes(report)

    def test_duplicate_group_id(self):
        s = make_scoping()
        s.affected_groups.append(s.affected_groups[0])
        report = validate_scoping(s)
        assert "duplicate-id" in codes(report)

    def test_alternatives_gate(self):
        s = make_scoping()
        s.alternatives.why_ai_preferred = ""
        report = validate_scoping(s)
        assert "alternatives-gate-incomplete" in codes(report)

        s2 = make_scoping()
        s2.alternatives.non_ai_alternatives_considered = []
        assert "alternatives-gate-incomplete" in codes(validate_scoping(s2))

    def test_population_wide_group_warns_only(self):
        s = make_scoping()
        s.affected_groups[0] = RightsholderGroup(
            id="applicant-families",
            description="everyone",
            basis="the system affects the general public",
        )
        report = validate_scoping(s)
        assert report.ok
        assert any(f.code == "population-wide-group" for f in report.warnings)

    def test_thin_profile_warns(self):
        import dataclasses

        s = make_scoping()
        s.system_profile = dataclasses.replace(s.system_profile, name="")
        report = validate_scoping(s)
        assert any(f.code == "thin-system-profile" for f in report.warnings)

    def test_round_trip(self):
        s = make_scoping()
        assert ScopingRecord.from_dict(s.to_dict()).to_dict() == s.to_dict()


class TestChecklist:
    def test_credit_scoring_context(self):
        hits = candidate_rights_checklist(["credit-scoring"], default_rights_catalog())
        ids = [r.id for r in hits]
        assert "eu-charter:art-21" in ids
        assert "eu-charter:art-8" in ids
        assert ids == sorted(ids)

    def test_unknown_tag_matches_nothing(self):
        assert candidate_rights_checklist(["spelunking"], default_rights_catalog()) == []

    def test_advisory_not_binding(self):
        # The checklist result never ends up on the case by itself.
        case = make_case()
        hits = candidate_rights_checklist(["social-benefits"], default_rights_catalog())
        assert hits
        assert {ra.right_id for ra in case.right_assessments} != {r.id for r in hits}


class TestClosingReview:
    def review(self, decision=ReviewDecision.PROCEED) -> ClosingReview:
        return ClosingReview(
            re_answer="Scoring still beats the checklist on compound need detection",
            comparison="Residual risks after mitigation are at or below the manual baseline",
            decision=decision,
        )

    def assessed_case(self):
        case = make_case()
        ledger = Ledger()
        compute_case_round(case, ledger=ledger, actor="assessor", now=T0)
        return case, ledger

    def test_requires_rounds(self):
        case = make_case()
        with pytest.raises(FriaError) as ei:
            record_alternatives_closing_review(case, self.review(), now=T0)
        assert ei.value.code == "assessment-incomplete"

    def test_requires_substance(self):
        case, ledger = self.assessed_case()
        empty = ClosingReview(re_answer="", comparison="", decision=ReviewDecision.PROCEED)
        with pytest.raises(FriaError) as ei:
            record_alternatives_closing_review(case, empty, ledger=ledger, now=T1)
        assert ei.value.code == "justification-required"

    def test_proceed_keeps_status(self):
        case, ledger = self.assessed_case()
        before = case.status
        record_alternatives_closing_review(case, self.review(), ledger=ledger, now=T1)
        assert case.status is before
        assert case.scoping.alternatives.closing_review is not None
        assert ledger.entries[-1].action == "review-recorded"

    def test_abandon_closes_case(self):
        case, ledger = self.assessed_case()
        record_alternatives_closing_review(
            case, self.review(ReviewDecision.ABANDON), ledger=ledger, now=T1
        )
        assert case.status is CaseStatus.CLOSED
        assert [e.action for e in ledger.entries[-2:]] == [
            "review-recorded",
            "status-change",
        ]

    def test_switch_alternative_closes_case(self):
        case, ledger = self.assessed_case()
        record_alternatives_closing_review(
            case, self.review(ReviewDecision.SWITCH_ALTERNATIVE), ledger=ledger, now=T1
        )
        assert case.status is CaseStatus.CLOSED
