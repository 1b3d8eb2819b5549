"""
Implementation of the GRASP framework for grading clinical predictive tools
"""

try:
    from ._version import __version__
except ModuleNotFoundError:
    pass
from .grade_codes import LADDER, UNGRADED, Direction, EvidenceClass, GradeCell
from .grasp_catalog import (
    Catalog,
    CatalogEntry,
    GraspCorpusError,
    GraspDuplicateSlugError,
    GraspRecordNotFoundError,
    QueryFilter,
    async_load_corpus,
    load_corpus,
    query_catalog,
)
from .grasp_direction import GraspNoEvidenceError, RawDirection, resolve_raw_direction
from .grasp_engine import (
    CellResolution,
    GradingResult,
    GraspInvalidRecordError,
    UpliftTarget,
    WhatIf,
    assign_cells,
    final_grade,
    minimal_uplift,
    resolve_cell,
    validate_overrides,
    whatif,
)
from .grasp_evidence import (
    EvidenceItem,
    GraspError,
    MatchingProfile,
    Measure,
    Override,
    QualityProfile,
    ToolProfile,
    ToolRecord,
    ValidationReport,
    validate_evidence_item,
    validate_tool_profile,
    validate_tool_record,
)
from .grasp_mixed_protocol import (
    GraspProtocolError,
    ResolvedDirection,
    classify_study,
    is_high_quality,
    is_matching,
    resolve_mixed,
)
from .grasp_record import (
    GraspParseError,
    GraspSchemaError,
    parse_record,
    record_digest,
    serialize_record,
)
from .grasp_report import (
    RenderedReport,
    ReportFormat,
    render_detailed_report,
    render_measures,
    render_summary,
)
from .measure_name import MeasureName
