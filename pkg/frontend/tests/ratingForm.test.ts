import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import {
  draftProblems,
  emptyDraft,
  formatOutcome,
  toWireRating,
} from "../src/ratingForm.js";
import type { RatingDraft } from "../src/ratingForm.js";
import type { WireRating } from "../src/types.js";

// A case file produced by the backend CLI; its ratings are the shape the
// rounds endpoint accepts, so the form output is checked against it.
const CASE_FIXTURE = fileURLToPath(
  new URL("../../tests/data/case_family_aid.json", import.meta.url),
);

function fixtureRating(variable: string): WireRating {
  const doc = JSON.parse(readFileSync(CASE_FIXTURE, "utf-8")) as {
    right_assessments: { ratings: Record<string, WireRating> }[];
  };
  const rating = doc.right_assessments[0]?.ratings[variable];
  if (rating === undefined) throw new Error(`fixture lacks a ${variable} rating`);
  return rating;
}

describe("draftProblems", () => {
  it("lists every missing field on a blank draft", () => {
    const fields = draftProblems("probability", emptyDraft()).map((p) => p.field);
    expect(fields).toEqual(["rank", "rationale", "evidenceQuality", "expertAgreement"]);
  });

  it("demands all three gravity component notes", () => {
    const draft: RatingDraft = {
      ...emptyDraft(),
      rank: "medium",
      rationale: "Wrong review order delays aid",
      evidenceQuality: "documented",
      evidenceCurrency: "2026-05-12",
      expertAgreement: "majority",
      gravity: { intensity: "material hardship", consequences: "", duration: "" },
    };
    const problems = draftProblems("gravity", draft);
    expect(problems.map((p) => p.field)).toEqual(["gravity.consequences", "gravity.duration"]);
    expect(problems[0]?.message).toContain("consequences");
  });

  it("does not ask for gravity notes on other variables", () => {
    const draft: RatingDraft = {
      ...emptyDraft(),
      rank: "low",
      rationale: "Exposure is one application cycle",
      evidenceQuality: "anecdotal",
      expertAgreement: "single-expert",
    };
    expect(draftProblems("exposure", draft)).toEqual([]);
  });

  it("treats whitespace-only text as missing", () => {
    const draft = { ...emptyDraft(), rank: "low" as const, rationale: "   " };
    const fields = draftProblems("probability", draft).map((p) => p.field);
    expect(fields).toContain("rationale");
  });
});

describe("toWireRating", () => {
  it("reproduces a backend-written gravity rating field for field", () => {
    const expected = fixtureRating("gravity");
    const draft: RatingDraft = {
      rank: expected.rank,
      rationale: expected.rationale,
      evidenceQuality: expected.confidence.evidence_quality,
      evidenceCurrency: expected.confidence.evidence_currency,
      expertAgreement: expected.confidence.expert_agreement,
      confidenceNotes: expected.confidence.notes,
      gravity: { ...expected.gravity_components! },
    };
    expect(toWireRating("gravity", draft)).toEqual(expected);
  });

  it("omits gravity components for likelihood variables", () => {
    const draft: RatingDraft = {
      ...emptyDraft(),
      rank: "high",
      rationale: "Skewed training data makes misranking likely",
      evidenceQuality: "documented",
      evidenceCurrency: "2026-08-01",
      expertAgreement: "majority",
    };
    const rating = toWireRating("probability", draft);
    expect(rating.variable).toBe("probability");
    expect(rating).not.toHaveProperty("gravity_components");
  });

  it("refuses an incomplete draft instead of sending it", () => {
    expect(() => toWireRating("gravity", emptyDraft())).toThrow(/incomplete/);
  });
});

describe("formatOutcome", () => {
  it("shows the engine label verbatim, rank in parentheses", () => {
    expect(formatOutcome({ label: "High/M", rank: "high" })).toBe("High/M (high)");
  });

  it("keeps irregular institutional labels untouched", () => {
    expect(formatOutcome({ label: "Low/Medium", rank: "medium" })).toBe("Low/Medium (medium)");
  });
});
