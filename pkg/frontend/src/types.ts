/**
 * Types for the fria workbench wire protocol.
 *
 * Everything here mirrors what the backend serves, field for field. Ranks
 * are ordinal labels, never numbers; the UI must not do arithmetic on them.
 * Matrix cell labels (`CellOutcome.label`) are institutional text and are
 * rendered verbatim, including oddities like "Low/Medium".
 */

export type Rank = "low" | "medium" | "high" | "very-high";

export type Variable = "probability" | "exposure" | "gravity" | "effort";

export type Acceptability = "acceptable" | "acceptable-with-exclusion" | "blocked";

export type CaseStatus = "draft" | "assessed" | "update-required" | "closed";

export type EvidenceQuality = "anecdotal" | "documented" | "systematic";

export type ExpertAgreement = "single-expert" | "majority" | "consensus";

/** One matrix cell as combined by the engine: display label plus its rank. */
export interface CellOutcome {
  label: string;
  rank: Rank;
}

export interface ConfidenceRecord {
  evidence_quality: EvidenceQuality;
  evidence_currency: string;
  expert_agreement: ExpertAgreement;
  notes: string;
}

export interface GravityComponents {
  intensity: string;
  consequences: string;
  duration: string;
}

/** A rating as the rounds endpoint accepts it. */
export interface WireRating {
  variable: Variable;
  rank: Rank;
  rationale: string;
  confidence: ConfidenceRecord;
  gravity_components?: GravityComponents;
}

// --- GET /cases -------------------------------------------------------------

export interface CaseListing {
  cases: CaseSummary[];
}

export interface CaseSummary {
  case_id: string;
  title: string;
  status: CaseStatus;
  version: number;
  rights: string[];
  file: string;
}

// --- GET /cases/{id} --------------------------------------------------------

/**
 * The full case document. The workbench only reads a handful of fields and
 * round-trips the rest untouched, so everything beyond those stays loose.
 */
export interface CaseDocument {
  case_id: string;
  title: string;
  status: CaseStatus;
  version: number;
  right_assessments: RightAssessment[];
  [key: string]: unknown;
}

export interface RightAssessment {
  right_id: string;
  title: string;
  ratings: Record<string, WireRating>;
  mitigations: MitigationMeasure[];
  rounds: AssessmentRound[];
  [key: string]: unknown;
}

export interface MitigationMeasure {
  id: string;
  description: string;
  targets: Variable[];
  rank_reduction: number;
  status: string;
  [key: string]: unknown;
}

export interface AssessmentRound {
  round_number: number;
  effective_ratings: Record<Variable, Rank>;
  likelihood: CellOutcome;
  severity: CellOutcome;
  risk: CellOutcome;
  acceptability: Acceptability;
  [key: string]: unknown;
}

// --- POST /cases/{id}/validate ----------------------------------------------

export interface ValidationFinding {
  severity: "error" | "warning";
  code: string;
  message: string;
  path: string;
}

export interface ValidationReport {
  ok: boolean;
  findings: ValidationFinding[];
}

// --- POST /cases/{id}/rounds ------------------------------------------------

export interface RoundsRequest {
  actor?: string;
  now?: string;
  expected_version?: number;
  ratings?: Record<string, Record<string, WireRating>>;
  measure_ids?: string[];
  reevaluate?: boolean;
  finalize?: boolean;
}

export interface RightRow {
  right_id: string;
  title: string;
  assessed: boolean;
  round_number?: number;
  likelihood?: CellOutcome;
  severity?: CellOutcome;
  risk?: CellOutcome;
  acceptability?: Acceptability;
  exclusion_applied?: string | null;
}

export interface RoundsResponse {
  case_id: string;
  status: CaseStatus;
  rights: RightRow[];
  blocked_rights: string[];
  errors: { right_id: string; code: string; message: string }[];
  version: number;
}

// --- POST /cases/{id}/whatif ------------------------------------------------

export interface WhatifRequest {
  measure_ids?: string[];
  reductions?: Record<string, Variable[]>;
  rating_overrides?: Record<string, Partial<Record<Variable, Rank>>>;
}

/** Per-right snapshot inside a what-if answer; both sides share the shape. */
export interface WhatifSide {
  acceptability: Acceptability;
  effective_ratings: Record<Variable, Rank>;
  likelihood: CellOutcome;
  severity: CellOutcome;
  risk: CellOutcome;
}

export interface WhatifRight {
  right_id: string;
  title: string;
  changed: boolean;
  current: WhatifSide;
  hypothetical: WhatifSide;
  /** Positive means the hypothetical risk is that many ordinal steps lower. */
  risk_delta_steps: number;
}

export interface WhatifResponse {
  case_id: string;
  based_on_version: number;
  overrides: {
    measure_ids: string[];
    rating_overrides: Record<string, unknown>;
    reductions: Record<string, unknown>;
  };
  rights: WhatifRight[];
}

// --- GET /cases/{id}/radial -------------------------------------------------

export interface RadialAxis {
  right_id: string;
  title: string;
}

export interface RadialLevel {
  right_id: string;
  /** Display-only projection of the rank: low=0 up to very-high=3. */
  level: number;
  rank: Rank;
  label: string;
  acceptability: Acceptability;
}

export interface RadialSeries {
  round_number: number;
  levels: RadialLevel[];
}

export interface RadialData {
  case_id: string;
  projection: string;
  axes: RadialAxis[];
  series: RadialSeries[];
}

// --- GET /cases/{id}/ledger/verify -------------------------------------------

export interface LedgerVerification {
  ok: boolean;
  length: number;
  head_hash?: string | null;
  first_break?: number;
  reason?: string;
}

// --- error envelope -----------------------------------------------------------

export interface ErrorEnvelope {
  code: string;
  message: string;
  paths: string[];
}
