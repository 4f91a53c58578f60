"""Validation of aspect-oriented requirements artefacts."""

from valfar.concerns import (
    DecompositionRule,
    apply_decomposition,
    classify_concern_type,
    default_rules,
    lint_decomposition,
    validate_concern_description,
)
from valfar.gates import (
    GateConfig,
    GateResult,
    Verdict,
    check_review_tracking,
    evaluate_aspect_checklist,
    evaluate_concern_checklist,
    validate_aspect_document,
    validate_nf_description,
)
from valfar.ingest import ParseError, import_arcade_xml, load_corpus, parse_corpus, serialize_corpus
from valfar.matrices import (
    RelationMatrix,
    build_aspect_dependency_matrix,
    build_crosscutting_matrix,
    check_reference_integrity,
)
from valfar.model import (
    Answer,
    AspectDocument,
    ChecklistKind,
    ChecklistResponse,
    Concern,
    ConcernType,
    Corpus,
    Diagnostic,
    NfDescription,
    RequirementItem,
    Severity,
    Stakeholder,
    ValfarError,
    check_structural_integrity,
)
from valfar.report import PipelineOptions, Report, render_report, run_pipeline, validate_corpus
from valfar.themes import (
    ActionLexicon,
    ActionView,
    emit_clipped_view,
    extract_action_view,
    identify_crosscutting,
)

__version__ = "0.1.0"
