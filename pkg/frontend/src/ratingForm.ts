import type {
  CellOutcome,
  EvidenceQuality,
  ExpertAgreement,
  GravityComponents,
  Rank,
  Variable,
  WireRating,
} from "./types.js";

/**
 * Draft state for one rating field group, as typed by the assessor. Empty
 * strings mean "not filled in yet"; nothing here is validated until the
 * form asks for problems.
 */
export interface RatingDraft {
  rank: Rank | "";
  rationale: string;
  evidenceQuality: EvidenceQuality | "";
  evidenceCurrency: string;
  expertAgreement: ExpertAgreement | "";
  confidenceNotes: string;
  gravity: GravityComponents;
}

/** One inline form error, anchored to the field that caused it. */
export interface FormProblem {
  field: string;
  message: string;
}

export const RANKS: readonly Rank[] = ["low", "medium", "high", "very-high"];

export const EVIDENCE_QUALITIES: readonly EvidenceQuality[] = [
  "anecdotal",
  "documented",
  "systematic",
];

export const EXPERT_AGREEMENTS: readonly ExpertAgreement[] = [
  "single-expert",
  "majority",
  "consensus",
];

export function emptyDraft(): RatingDraft {
  return {
    rank: "",
    rationale: "",
    evidenceQuality: "",
    evidenceCurrency: "",
    expertAgreement: "",
    confidenceNotes: "",
    gravity: { intensity: "", consequences: "", duration: "" },
  };
}

/**
 * Everything wrong with a draft, so the form can refuse submission locally
 * instead of bouncing off the server. Gravity ratings additionally need all
 * three component notes (intensity, consequences, duration).
 */
export function draftProblems(variable: Variable, draft: RatingDraft): FormProblem[] {
  const problems: FormProblem[] = [];
  if (!draft.rank) {
    problems.push({ field: "rank", message: "choose a rank" });
  }
  if (!draft.rationale.trim()) {
    problems.push({ field: "rationale", message: "a rationale is required" });
  }
  if (!draft.evidenceQuality) {
    problems.push({ field: "evidenceQuality", message: "choose an evidence quality" });
  }
  if (!draft.expertAgreement) {
    problems.push({ field: "expertAgreement", message: "choose an agreement level" });
  }
  if (variable === "gravity") {
    for (const component of ["intensity", "consequences", "duration"] as const) {
      if (!draft.gravity[component].trim()) {
        problems.push({
          field: `gravity.${component}`,
          message: `the ${component} note is required for gravity`,
        });
      }
    }
  }
  return problems;
}

/** Convert a completed draft into the shape the rounds endpoint accepts. */
export function toWireRating(variable: Variable, draft: RatingDraft): WireRating {
  const problems = draftProblems(variable, draft);
  if (problems.length > 0) {
    throw new Error(`draft is incomplete: ${problems.map((p) => p.field).join(", ")}`);
  }
  const rating: WireRating = {
    variable,
    rank: draft.rank as Rank,
    rationale: draft.rationale.trim(),
    confidence: {
      evidence_quality: draft.evidenceQuality as EvidenceQuality,
      evidence_currency: draft.evidenceCurrency.trim(),
      expert_agreement: draft.expertAgreement as ExpertAgreement,
      notes: draft.confidenceNotes.trim(),
    },
  };
  if (variable === "gravity") {
    rating.gravity_components = {
      intensity: draft.gravity.intensity.trim(),
      consequences: draft.gravity.consequences.trim(),
      duration: draft.gravity.duration.trim(),
    };
  }
  return rating;
}

/**
 * Display text for an engine outcome, label verbatim. This matches the CLI
 * table convention, e.g. "Low/Medium (medium)".
 */
export function formatOutcome(outcome: CellOutcome): string {
  return `${outcome.label} (${outcome.rank})`;
}
