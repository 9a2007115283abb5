"""tqamark: translation quality assessment from descriptive inline markup.

Mark translation mistakes inline with tags like
``<content_mistake weight='minor'>...</content_mistake>``, then parse,
score (Translation Quality Index), render, store, query, and serve them.
"""

from .config import AssessmentConfig, default_config, load_config, resolve_config
from .corpus import (
    Corpus,
    CorpusStats,
    Query,
    QueryHit,
    get_document,
    import_segments,
    init_corpus,
    list_documents,
    open_corpus,
    put_document,
    query,
    rebuild_manifest,
    stats,
)
from .dialect import (
    DiagnosticKind,
    ParseDiagnostic,
    canonicalize,
    export_dtd,
    parse,
    roundtrip_check,
    serialize,
)
from .document import (
    Annotation,
    DocumentMeta,
    MarkedDocument,
    Violation,
    add_annotation,
    annotation_forest,
    canonical_order,
    remove_annotation,
    spans_conflict,
    validate_document,
    word_count,
    word_tokens,
)
from .errors import (
    ENVIRONMENT_ERRORS,
    ConfigError,
    DocumentNotFound,
    EmptyText,
    InvalidDocument,
    InvalidSpan,
    IoFailure,
    MalformedSegmentFile,
    MarkupSyntaxError,
    MissingVariant,
    OverlapViolation,
    PathOccupied,
    SeverityNotAllowed,
    StaleVersion,
    TqaError,
    UnknownAnnotation,
    UnknownCategory,
    UnknownCategoryInQuery,
    UnknownRepresentation,
    UnknownRepresentationFields,
    UnknownRoundingMode,
    UnknownScale,
    ZeroWords,
)
from .rendering import (
    Color,
    Mode,
    Representation,
    Style,
    builtin_representations,
    default_stylesheet,
    render,
)
from .scoring import (
    GradeBand,
    GradeScale,
    RoundingMode,
    ScoreReport,
    WeightConfig,
    assign_grade,
    compute_tqi,
    decode_report,
    encode_report,
    error_points,
    score,
)
from .service import create_app
from .taxonomy import MistakeCategory, Severity, Taxonomy, default_taxonomy

__version__ = "0.1.0"
