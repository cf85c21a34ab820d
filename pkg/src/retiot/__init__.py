"""Scenario-driven IoT requirements documents as data.

The library parses a directory of sectioned text documents into one semantic
model and runs analyses over it: model validation, checklist inspection,
arrangement catalog completeness, traceability and change impact, stage
gates, version diffing, and a template coverage audit. The ``retiot``
command exposes the same operations.
"""

from .arrangements import (
    ArrangementRegistry,
    CatalogIssue,
    builtin_registry,
    check_catalog_completeness,
    default_registry,
    arrangements_for_scenario,
    scenarios_for_arrangement,
)
from .docformat import (
    ModelInvalidError,
    SourceDocument,
    build_documents,
    export_project,
    export_project_json,
    parse_project,
    save_project,
    serialize_project,
)
from .gates import (
    GateReport,
    StageData,
    StageDefinition,
    default_stage_data,
    process_status,
    stage_gate,
    template_completeness,
)
from .identifiers import Identifier, parse_identifier
from .inspection import (
    ChecklistQuestion,
    applicable_questions,
    close_discrimination,
    default_question_set,
    record_inspection,
)
from .model import (
    ModelIssue,
    Project,
    allocate_id,
    classify_requirement,
    normalize_project,
    validate_model,
)
from .reporting import (
    CoverageCell,
    TemplateFieldSet,
    coverage_audit,
    default_coverage_fixtures,
    render_coverage_matrix,
    render_document,
    render_inspection_record,
)
from .trace import (
    TraceGraph,
    analyze_change,
    build_trace_graph,
    impact_of_change,
    validate_links,
)
from .versioning import (
    ChangeSet,
    apply_changeset,
    diff_projects,
    diff_versions,
    render_changeset,
    snapshot_version,
)

__version__ = "0.1.0"

__all__ = [
    "ArrangementRegistry",
    "CatalogIssue",
    "ChangeSet",
    "ChecklistQuestion",
    "CoverageCell",
    "GateReport",
    "Identifier",
    "ModelInvalidError",
    "ModelIssue",
    "Project",
    "SourceDocument",
    "StageData",
    "StageDefinition",
    "TemplateFieldSet",
    "TraceGraph",
    "allocate_id",
    "analyze_change",
    "applicable_questions",
    "apply_changeset",
    "arrangements_for_scenario",
    "build_documents",
    "build_trace_graph",
    "builtin_registry",
    "check_catalog_completeness",
    "classify_requirement",
    "close_discrimination",
    "coverage_audit",
    "default_coverage_fixtures",
    "default_question_set",
    "default_registry",
    "default_stage_data",
    "diff_projects",
    "diff_versions",
    "export_project",
    "export_project_json",
    "impact_of_change",
    "normalize_project",
    "parse_identifier",
    "parse_project",
    "process_status",
    "record_inspection",
    "render_changeset",
    "render_coverage_matrix",
    "render_document",
    "render_inspection_record",
    "save_project",
    "scenarios_for_arrangement",
    "serialize_project",
    "snapshot_version",
    "stage_gate",
    "template_completeness",
    "validate_links",
    "validate_model",
]
