"""Article 27-shaped documents: the assessment report, the notification export,
radial-graph data and mitigation effectiveness summaries.

Everything here is a pure function of a case snapshot (plus, for the report,
an optional ledger digest): identical input, identical bytes. The radial
projection is the single place in the package where a rank becomes a number,
and the output says so.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

from .core import FriaError, OrdinalRank, rank_steps_between
from .ledger import Ledger, canonical_json
from .lifecycle import AssessmentCase, CaseStatus, RightAssessment
from .matrix import CombinationMatrix

NOTIFICATION_SCHEMA_VERSION = "fria-notification/1"

# Display-only projection; nothing computes with these numbers.
RADIAL_PROJECTION = {
    OrdinalRank.LOW: 0,
    OrdinalRank.MEDIUM: 1,
    OrdinalRank.HIGH: 2,
    OrdinalRank.VERY_HIGH: 3,
}


def _require_rounds(case: AssessmentCase) -> None:
    missing = [ra.right_id for ra in case.right_assessments if not ra.rounds]
    if missing or not case.right_assessments:
        raise FriaError(
            "not-yet-assessed",
            "every right needs at least one computed round; missing: "
            + (", ".join(missing) or "all rights"),
            missing,
        )


# ---------------------------------------------------------------------------
# Effectiveness
# ---------------------------------------------------------------------------


def effectiveness_summary(case: AssessmentCase) -> dict:
    """Initial vs current risk per right, as display-only step deltas."""
    _require_rounds(case)
    rows = []
    for ra in case.right_assessments:
        initial = ra.rounds[0]
        current = ra.rounds[-1]
        applied: list[str] = []
        for rnd in ra.rounds:
            applied.extend(rnd.applied_measure_ids)
        delta = rank_steps_between(initial.risk.rank, current.risk.rank)
        flag = "ineffective-measures" if applied and delta == 0 else None
        rows.append(
            {
                "right_id": ra.right_id,
                "title": ra.title,
                "initial_risk": initial.risk.to_dict(),
                "current_risk": current.risk.to_dict(),
                "delta_steps": delta,
                "improved": delta > 0,
                "applied_measures": applied,
                "flag": flag,
            }
        )
    return {"case_id": case.case_id, "rights": rows}


# ---------------------------------------------------------------------------
# Radial graph data
# ---------------------------------------------------------------------------


def radial_graph_data(case: AssessmentCase, rounds: Optional[Sequence[int]] = None) -> dict:
    """One axis per assessed right, one series per selected round.

    Levels are the display projection of risk ranks (low=0 .. very-high=3).
    With no selection, rounds present for every right are used.
    """
    _require_rounds(case)
    per_right = {ra.right_id: {r.round_number: r for r in ra.rounds} for ra in case.right_assessments}
    if rounds is None:
        common = set.intersection(*(set(m.keys()) for m in per_right.values()))
        selected = sorted(common)
    else:
        selected = list(rounds)
        for round_number in selected:
            missing = [rid for rid, m in per_right.items() if round_number not in m]
            if missing:
                raise FriaError(
                    "round-missing",
                    f"round {round_number} does not exist for: {', '.join(missing)}",
                    missing,
                )
    axes = [
        {"right_id": ra.right_id, "title": ra.title} for ra in case.right_assessments
    ]
    series = []
    for round_number in selected:
        levels = []
        for ra in case.right_assessments:
            rnd = per_right[ra.right_id][round_number]
            levels.append(
                {
                    "right_id": ra.right_id,
                    "level": RADIAL_PROJECTION[rnd.risk.rank],
                    "rank": rnd.risk.rank.value,
                    "label": rnd.risk.label,
                    "acceptability": rnd.acceptability.value,
                }
            )
        series.append({"round_number": round_number, "levels": levels})
    return {
        "case_id": case.case_id,
        "projection": "display-only: low=0, medium=1, high=2, very-high=3",
        "axes": axes,
        "series": series,
    }


# ---------------------------------------------------------------------------
# Notification export
# ---------------------------------------------------------------------------


def notification_export(case: AssessmentCase) -> dict:
    """Compact Article 27(3) summary for the market surveillance authority.

    Refused outright while any right is blocked; there is no override.
    Ledger hashes stay internal.
    """
    if case.status is not CaseStatus.ASSESSED:
        raise FriaError(
            "case-not-assessed",
            f"notification requires status 'assessed', case is {case.status.value!r}",
        )
    blocked = case.blocked_rights()
    if blocked:
        raise FriaError(
            "blocked-rights-present",
            f"cannot notify while rights are blocked: {', '.join(blocked)}",
            blocked,
        )
    _require_rounds(case)
    scoping = case.scoping
    rights = []
    for ra in case.right_assessments:
        current = ra.rounds[-1]
        rights.append(
            {
                "right_id": ra.right_id,
                "title": ra.title,
                "rightsholder_groups": list(ra.rightsholder_groups),
                "risk": current.risk.to_dict(),
                "acceptability": current.acceptability.value,
                "exclusion_applied": current.exclusion_applied,
                "measures_applied": sorted(
                    {mid for rnd in ra.rounds for mid in rnd.applied_measure_ids}
                ),
                "round_count": len(ra.rounds),
            }
        )
    return {
        "notification_schema_version": NOTIFICATION_SCHEMA_VERSION,
        "case_id": case.case_id,
        "title": case.title,
        "status": case.status.value,
        "system": {
            "name": scoping.system_profile.name,
            "purpose": scoping.system_profile.purpose,
        },
        "deployer_process_description": scoping.deployer_process_description,
        "period_and_frequency_of_use": scoping.period_and_frequency_of_use,
        "affected_groups": [
            {
                "id": g.id,
                "description": g.description,
                "vulnerability_flags": list(g.vulnerability_flags),
            }
            for g in scoping.affected_groups
        ],
        "rights": rights,
        "human_oversight": case.article27_measures.human_oversight,
        "governance_arrangements": case.article27_measures.governance_arrangements,
        "complaint_mechanism": case.article27_measures.complaint_mechanism,
        "consultations_recorded": len(case.consultations),
        "prior_assessment_ref": (
            case.prior_assessment_ref.to_dict() if case.prior_assessment_ref else None
        ),
        "matrix_set": {
            "set_id": case.matrix_set.set_id,
            "default": case.matrix_set.is_default,
        },
    }


def notification_json(case: AssessmentCase) -> str:
    return canonical_json(notification_export(case))


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------


def render_report(
    case: AssessmentCase, fmt: str = "markdown", ledger: Optional[Ledger] = None,
    question_packs: Sequence[dict] = (),
) -> str:
    """Deterministic Article 27-shaped document, markdown or JSON."""
    if fmt not in ("markdown", "json"):
        raise FriaError("malformed-document", f"unknown report format {fmt!r}")
    _require_rounds(case)
    if fmt == "json":
        return json.dumps(
            _report_document(case, ledger, question_packs),
            indent=2,
            sort_keys=True,
            ensure_ascii=False,
        ) + "\n"
    return _render_markdown(case, ledger, question_packs)


def _report_document(
    case: AssessmentCase, ledger: Optional[Ledger], question_packs: Sequence[dict]
) -> dict:
    effectiveness = effectiveness_summary(case)
    return {
        "case_id": case.case_id,
        "title": case.title,
        "status": case.status.value,
        "version": case.version,
        "scoping": case.scoping.to_dict(),
        "rights": [ra.to_dict() for ra in case.right_assessments],
        "article27_measures": case.article27_measures.to_dict(),
        "effectiveness": effectiveness["rights"],
        "consultations": [c.to_dict() for c in case.consultations],
        "prior_assessment_ref": (
            case.prior_assessment_ref.to_dict() if case.prior_assessment_ref else None
        ),
        "matrix_set_provenance": {
            "set_id": case.matrix_set.set_id,
            "default": case.matrix_set.is_default,
            "rationale": case.matrix_set.rationale,
        },
        "ledger_digest": _ledger_digest(ledger),
        "question_packs": list(question_packs),
    }


def _ledger_digest(ledger: Optional[Ledger]) -> dict:
    if ledger is None:
        return {"entries": 0, "head_hash": None}
    return {"entries": len(ledger), "head_hash": ledger.head_hash}


def _outcome_cell(outcome) -> str:
    return f"{outcome.label} ({outcome.rank.value})"


def _right_section(ra: RightAssessment) -> list[str]:
    current = ra.rounds[-1]
    lines = [f"### {ra.title or ra.right_id} (`{ra.right_id}`)", ""]
    lines.append(f"Affected groups: {', '.join(ra.rightsholder_groups) or 'none recorded'}")
    lines.append("")
    lines.append("| variable | rank | rationale |")
    lines.append("| --- | --- | --- |")
    for variable, rating in sorted(ra.ratings.items(), key=lambda item: item[0].value):
        lines.append(
            f"| {variable.value} | {rating.rank.value} | {_trim(rating.rationale)} |"
        )
    lines.append("")
    lines.append("| round | likelihood | severity | risk | acceptability | measures |")
    lines.append("| --- | --- | --- | --- | --- | --- |")
    for rnd in ra.rounds:
        lines.append(
            f"| {rnd.round_number} | {_outcome_cell(rnd.likelihood)} | "
            f"{_outcome_cell(rnd.severity)} | {_outcome_cell(rnd.risk)} | "
            f"{rnd.acceptability.value} | {', '.join(rnd.applied_measure_ids) or '-'} |"
        )
    lines.append("")
    if current.exclusion_applied:
        lines.append(f"Accepted under exclusion: {current.exclusion_applied}.")
        lines.append("")
    valid_exclusions = [e for e in ra.exclusion_factors if e.is_valid()]
    if valid_exclusions:
        lines.append("Exclusion factors on record:")
        lines.append("")
        for e in valid_exclusions:
            lines.append(f"- {e.describe()}: {_trim(e.justification)}")
        lines.append("")
    if ra.mitigations:
        lines.append("Mitigation measures:")
        lines.append("")
        for m in ra.mitigations:
            targets = ", ".join(t.value for t in m.targets)
            lines.append(
                f"- `{m.id}` ({m.status.value}): {_trim(m.description)}; reduces "
                f"{targets} by {m.rank_reduction} step(s)"
            )
        lines.append("")
    return lines


def _trim(text: str, limit: int = 160) -> str:
    flat = " ".join(text.split())
    return flat if len(flat) <= limit else flat[: limit - 3] + "..."


def _render_markdown(
    case: AssessmentCase, ledger: Optional[Ledger], question_packs: Sequence[dict]
) -> str:
    scoping = case.scoping
    lines: list[str] = []
    lines.append(f"# Fundamental Rights Impact Assessment: {case.title or case.case_id}")
    lines.append("")
    lines.append(f"- Case: `{case.case_id}` (version {case.version}, status {case.status.value})")
    lines.append(f"- System: {scoping.system_profile.name or 'unnamed'}. Purpose: "
                 f"{scoping.system_profile.purpose or 'purpose not recorded'}")
    lines.append("")

    lines.append("## 1. Deployer process (Article 27(1)(a))")
    lines.append("")
    lines.append(scoping.deployer_process_description or "Not recorded.")
    lines.append("")
    if scoping.system_profile.ai_role:
        lines.append(f"Role of the AI system: {scoping.system_profile.ai_role}")
        lines.append("")

    lines.append("## 2. Period and frequency of use (Article 27(1)(b))")
    lines.append("")
    lines.append(scoping.period_and_frequency_of_use or "Not recorded.")
    lines.append("")

    lines.append("## 3. Affected persons and groups (Article 27(1)(c))")
    lines.append("")
    lines.append("| group | description | exposure basis | vulnerability flags |")
    lines.append("| --- | --- | --- | --- |")
    for g in scoping.affected_groups:
        flags = ", ".join(g.vulnerability_flags) or "-"
        lines.append(
            f"| `{g.id}` | {_trim(g.description)} | {_trim(g.basis)} | {flags} |"
        )
    lines.append("")

    lines.append("## 4. Risks of harm per fundamental right (Article 27(1)(d))")
    lines.append("")
    for ra in case.right_assessments:
        lines.extend(_right_section(ra))

    lines.append("## 5. Human oversight (Article 27(1)(e))")
    lines.append("")
    lines.append(case.article27_measures.human_oversight or "Not recorded.")
    lines.append("")

    lines.append("## 6. Measures upon materialisation of risks (Article 27(1)(f))")
    lines.append("")
    lines.append(
        f"Governance arrangements: {case.article27_measures.governance_arrangements or 'Not recorded.'}"
    )
    lines.append("")
    lines.append(
        f"Complaint mechanism: {case.article27_measures.complaint_mechanism or 'Not recorded.'}"
    )
    lines.append("")

    lines.append("## 7. Mitigation effectiveness")
    lines.append("")
    lines.append("| right | initial risk | current risk | delta (steps) | note |")
    lines.append("| --- | --- | --- | --- | --- |")
    for row in effectiveness_summary(case)["rights"]:
        note = row["flag"] or ("improved" if row["improved"] else "unchanged")
        lines.append(
            f"| `{row['right_id']}` | {row['initial_risk']['label']} "
            f"({row['initial_risk']['rank']}) | {row['current_risk']['label']} "
            f"({row['current_risk']['rank']}) | {row['delta_steps']} | {note} |"
        )
    lines.append("")

    lines.append("## 8. Stakeholder consultation")
    lines.append("")
    if case.consultations:
        for c in case.consultations:
            lines.append(
                f"- {c.stakeholder} ({c.role or 'role not recorded'}, {c.date or 'undated'}): "
                f"{_trim(c.input_summary)} (influence: {_trim(c.influence_on_assessment) or 'none recorded'})"
            )
    else:
        lines.append(
            "No stakeholder consultation was recorded for this assessment. Participation "
            "is encouraged but not required; its absence is documented here."
        )
    lines.append("")

    lines.append("## 9. Reuse of prior assessments")
    lines.append("")
    if case.prior_assessment_ref:
        lines.append(
            f"Relies on `{case.prior_assessment_ref.ref}`: "
            f"{_trim(case.prior_assessment_ref.similarity_note)}"
        )
    else:
        lines.append("No prior assessment was relied upon.")
    lines.append("")

    lines.append("## 10. Alternatives analysis")
    lines.append("")
    alt = scoping.alternatives
    if alt.non_ai_alternatives_considered:
        lines.append("Non-AI alternatives considered:")
        lines.append("")
        for option in alt.non_ai_alternatives_considered:
            lines.append(f"- {option.name}: {_trim(option.description)}")
        lines.append("")
    if alt.why_ai_preferred:
        lines.append(f"Why AI was preferred: {_trim(alt.why_ai_preferred, 300)}")
        lines.append("")
    if alt.consequence_of_not_using:
        lines.append(f"Consequence of not using the system: {_trim(alt.consequence_of_not_using, 300)}")
        lines.append("")
    if alt.closing_review:
        lines.append(
            f"Closing review decision: **{alt.closing_review.decision.value}**. "
            f"{_trim(alt.closing_review.comparison, 300)}"
        )
    else:
        lines.append("Closing review: not yet recorded.")
    lines.append("")

    lines.append("## 11. Matrix set provenance")
    lines.append("")
    if case.matrix_set.is_default:
        lines.append(
            f"This assessment uses the **default matrix set** (`{case.matrix_set.set_id}`). "
            "All combination tables ship with the tool; no custom matrix design was recorded."
        )
    else:
        lines.append(
            f"This assessment uses a custom matrix set (`{case.matrix_set.set_id}`). "
            f"Design rationale: {_trim(case.matrix_set.rationale, 300) or 'not recorded'}"
        )
    lines.append("")

    lines.append("## 12. Accountability ledger")
    lines.append("")
    digest = _ledger_digest(ledger)
    if digest["entries"]:
        lines.append(
            f"{digest['entries']} ledger entr{'y' if digest['entries'] == 1 else 'ies'}; "
            f"head hash `{digest['head_hash']}`."
        )
    else:
        lines.append("No ledger entries available to this renderer.")
    lines.append("")

    for pack in question_packs:
        lines.append(f"## Appendix: question pack `{pack.get('pack_id', 'unnamed')}`"
                     f" ({pack.get('sector', 'general')})")
        lines.append("")
        for prompt in pack.get("prompts", []):
            lines.append(f"- {prompt}")
        lines.append("")

    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Matrix rendering helper (used by the CLI to show live tables)
# ---------------------------------------------------------------------------


def matrix_table(matrix: CombinationMatrix) -> str:
    """Plain-text grid of a combination matrix, labels verbatim."""
    lookup = {(c.row, c.col): c for c in matrix.cells}
    header = [f"{matrix.row_variable} \\ {matrix.col_variable}"] + [
        str(c) for c in matrix.col_levels
    ]
    rows = [header]
    for row_level in matrix.row_levels:
        row = [str(row_level)]
        for col_level in matrix.col_levels:
            cell = lookup.get((row_level, col_level))
            row.append(cell.label if cell else "?")
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    out = []
    for i, row in enumerate(rows):
        out.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            out.append("  ".join("-" * widths[j] for j in range(len(widths))))
    return "\n".join(out)
