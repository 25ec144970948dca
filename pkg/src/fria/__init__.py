"""Fundamental rights impact assessment workbench (EU AI Act, Article 27).

Deterministic engine over ordinal risk matrices: per-right risk indices,
iterative mitigation rounds with acceptability gating, Article 27-shaped
reports and notifications, and a hash-chained accountability ledger.
"""

from .core import (
    ConfidenceRecord,
    EvidenceQuality,
    ExpertAgreement,
    Finding,
    FriaError,
    FundamentalRight,
    GravityComponents,
    OrdinalRank,
    RatingVariable,
    RightsCatalog,
    RightsholderGroup,
    ValidationReport,
    VariableRating,
    default_rights_catalog,
    load_rights_catalog,
    parse_rank,
    rank_compare,
    step_down,
    validate_rightsholder_group,
)
from .ledger import FileBackedLedger, Ledger, LedgerEntry, canonical_json
from .lifecycle import (
    Acceptability,
    Article27Measures,
    AssessmentCase,
    CaseStatus,
    ConsultationRecord,
    ExclusionFactor,
    ExclusionKind,
    MeasureStatus,
    MitigationMeasure,
    PriorAssessmentLink,
    RightAssessment,
    RoundResult,
    acceptability_gate,
    apply_mitigations,
    assess_right,
    close_case,
    compute_case_round,
    diff_assessments,
    link_prior_assessment,
    mark_assessed,
    record_exclusion,
    residual_risk_report,
    set_rating,
    simulate_whatif,
    validate_case,
)
from .matrix import (
    CellOutcome,
    CombinationMatrix,
    MatrixProvenance,
    MatrixSet,
    combine_cell,
    compute_likelihood,
    compute_risk_index,
    compute_severity,
    default_matrix_set,
    validate_matrix,
    validate_matrix_set,
)
from .reporting import (
    effectiveness_summary,
    notification_export,
    radial_graph_data,
    render_report,
)
from .scoping import (
    AlternativesAnalysis,
    ClosingReview,
    ReviewDecision,
    ScopingRecord,
    SystemProfile,
    candidate_rights_checklist,
    record_alternatives_closing_review,
    validate_scoping,
)

__version__ = "0.1.0"
