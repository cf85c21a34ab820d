"""Mapping between the on-disk document set and the semantic model.

A project directory holds one file per template plus a small manifest:

    project.retiot                              manifest (methodology, prototypes)
    iot-project-detail.retiot                   IoTProjectDetail
    iot-solution-proposal.retiot                IoTSolutionProposal
    iot-use-cases.retiot                        IoTUseCaseDescription
    canvas.retiot                               IoTCanvas
    feasibility.retiot                          FeasibilityAnalysis
    change-analysis-<id>.retiot                 ChangeAnalysisReport
    checklists/requirements-checklist.retiot    RequirementsChecklist
    checklists/diagram-use-cases-checklist.retiot  DiagramAndUseCasesChecklist
    checklists/inspection-<session>.retiot      InspectionRecord
    checklists/answers-<session>.retiot         VerificationChecklist (session input)
    versions/<label>/...                        one snapshot per label

Parsing is total and tolerant: unknown keys, columns, and sections yield
Warnings, malformed rows yield Errors that drop only the affected artifact.
Serialization refuses models that fail validation.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
from dataclasses import dataclass
from pathlib import Path

from . import sectext
from .datafiles import RESERVED_DATA_FILES
from .identifiers import (
    BR,
    CR,
    FR,
    IIA,
    NEED,
    NFR,
    SCENARIO,
    STK,
    USE_CASE,
    Identifier,
    parse_identifier,
    parse_identifier_list,
)
from .model import (
    ACTOR_CATEGORIES,
    AGREEMENT_METHODS,
    CHANGE_DECISIONS,
    CHANGE_KINDS,
    DEFECT_CATEGORIES,
    DEFECT_STATUSES,
    IOT_CHARACTERISTICS,
    CHARACTERISTIC_ALIASES,
    NEED_ORIGINS,
    ORDINALS,
    PRIORITIES,
    PROTOTYPE_KINDS,
    SITUATIONS,
    TEMPLATE_KINDS,
    VERDICTS,
    Actor,
    ActorRef,
    AgreementRecord,
    Answer,
    ArrangementCatalogInstance,
    BusinessRule,
    CanvasRecord,
    ChangeAnalysisReport,
    ChangeRequest,
    ChecklistItem,
    ChecklistRecord,
    Defect,
    FeasibilityRecord,
    ImpactEntry,
    InspectionReport,
    IoTScenario,
    IoTUseCase,
    ModelIssue,
    Need,
    PrototypeRecord,
    Project,
    Requirement,
    Stakeholder,
    VersionSnapshot,
    canon_characteristics,
    canon_enum,
    normalize_project,
    validate_model,
)

MANIFEST_KIND = "ProjectManifest"
DOCUMENT_VERSION = "1.0"

MANIFEST_FILE = "project.retiot"
DETAIL_FILE = "iot-project-detail.retiot"
PROPOSAL_FILE = "iot-solution-proposal.retiot"
USE_CASES_FILE = "iot-use-cases.retiot"
CANVAS_FILE = "canvas.retiot"
FEASIBILITY_FILE = "feasibility.retiot"
REQ_CHECKLIST_FILE = "checklists/requirements-checklist.retiot"
DIAGRAM_CHECKLIST_FILE = "checklists/diagram-use-cases-checklist.retiot"

_METHOD_ALIASES = {
    "email copy": "EmailCopy",
    "e-mail copy": "EmailCopy",
    "email": "EmailCopy",
}
_CATEGORY_ALIASES = {
    "software system": "SoftwareSystem",
    "software systems": "SoftwareSystem",
}
_VERDICT_ALIASES = {
    "na": "NotApplicable",
    "n/a": "NotApplicable",
    "not applicable": "NotApplicable",
}


class ModelInvalidError(ValueError):
    def __init__(self, issues: list[ModelIssue]):
        self.issues = issues
        summary = "; ".join(i.render() for i in issues[:5])
        if len(issues) > 5:
            summary += f"; and {len(issues) - 5} more"
        super().__init__(f"model fails validation: {summary}")


@dataclass
class SourceDocument:
    template_kind: str
    path: str
    version_label: str
    tree: sectext.SectionTree

    def render(self) -> str:
        return sectext.render_sections(self.tree.sections)


# --------------------------------------------------------------------------
# shared helpers


def _slug(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "unnamed"


def _bool_text(value: bool) -> str:
    return "Yes" if value else "No"


def _parse_bool(value: str) -> bool | None:
    lowered = value.strip().lower()
    if lowered in ("yes", "true", "y", "1"):
        return True
    if lowered in ("no", "false", "n", "0", ""):
        return False
    return None


def _render_ids(ids: tuple[Identifier, ...]) -> str:
    return ", ".join(i.render() for i in ids)


def _render_date(value: _dt.date | None) -> str:
    return value.isoformat() if value is not None else ""


class _TableReader:
    """Case-insensitive column access over one section table, with
    diagnostics for unknown columns."""

    def __init__(
        self,
        section: sectext.Section,
        source: str,
        diags: list[sectext.Diagnostic],
        known: tuple[str, ...],
    ):
        self.rows: list[tuple[dict[str, str], int]] = []
        if section.table is None:
            return
        header = [h.lower() for h in section.table.header]
        known_lower = tuple(k.lower() for k in known)
        for name in section.table.header:
            if name.lower() not in known_lower:
                diags.append(
                    sectext.warning(
                        source,
                        section.table.line,
                        f"unknown column {name!r} in section {section.name!r}",
                        "unknown-column",
                    )
                )
        for row, line in zip(section.table.rows, section.table.row_lines):
            cells = {header[i]: row[i] for i in range(len(header))}
            self.rows.append((cells, line))

    def __iter__(self):
        return iter(self.rows)


def _check_known_fields(
    section: sectext.Section,
    source: str,
    diags: list[sectext.Diagnostic],
    known: tuple[str, ...],
) -> None:
    known_lower = tuple(k.lower() for k in known)
    for field in section.fields:
        if field.key.lower() not in known_lower:
            diags.append(
                sectext.warning(
                    source,
                    field.line,
                    f"unknown key {field.key!r} in section {section.name!r}",
                    "unknown-key",
                )
            )


def _get(section: sectext.Section, key: str) -> str:
    lowered = key.lower()
    for field in section.fields:
        if field.key.lower() == lowered:
            return field.value
    return ""


def _id_list(
    text: str,
    source: str,
    line: int,
    diags: list[sectext.Diagnostic],
) -> tuple[Identifier, ...]:
    parsed, rejected = parse_identifier_list(text)
    for chunk in rejected:
        diags.append(
            sectext.error(source, line, f"malformed identifier {chunk!r}", "malformed-id")
        )
    return tuple(parsed)


def _one_id(
    text: str,
    source: str,
    line: int,
    diags: list[sectext.Diagnostic],
    what: str,
) -> Identifier | None:
    ident = parse_identifier(text)
    if ident is None:
        diags.append(
            sectext.error(source, line, f"malformed {what} {text.strip()!r}", "malformed-id")
        )
    return ident


def _parse_date(
    text: str,
    source: str,
    line: int,
    diags: list[sectext.Diagnostic],
    required: bool,
) -> tuple[_dt.date | None, bool]:
    """Returns (date, ok). A bad required date is an Error; a bad optional
    date degrades to None with a Warning."""
    stripped = text.strip()
    if not stripped:
        if required:
            diags.append(sectext.error(source, line, "missing date", "malformed-date"))
            return None, False
        return None, True
    try:
        return _dt.date.fromisoformat(stripped), True
    except ValueError:
        if required:
            diags.append(
                sectext.error(source, line, f"bad date {stripped!r} (expected YYYY-MM-DD)", "malformed-date")
            )
            return None, False
        diags.append(
            sectext.warning(source, line, f"bad date {stripped!r} ignored", "malformed-date")
        )
        return None, True


# --------------------------------------------------------------------------
# document builders (model -> section tree)


def _doc_header(kind: str) -> sectext.Section:
    return sectext.Section(
        "Document",
        fields=[sectext.Field("Template", kind), sectext.Field("Version", DOCUMENT_VERSION)],
    )


def _field_section(name: str, pairs: list[tuple[str, str]]) -> sectext.Section:
    fields = [sectext.Field(key, value) for key, value in pairs if value]
    return sectext.Section(name, fields=fields)


def _table_section(
    name: str,
    header: list[str],
    rows: list[list[str]],
    fields: list[tuple[str, str]] | None = None,
) -> sectext.Section:
    section = _field_section(name, fields or [])
    section.table = sectext.Table(header=header, rows=rows)
    return section


def _build_manifest(project: Project) -> sectext.SectionTree:
    sections: list[sectext.Section] = []
    pairs = [("Methodology", "Agile" if project.agile else "Plan-driven")]
    if project.versions:
        pairs.append(("Versions", ", ".join(v.label for v in project.versions)))
    sections.append(_field_section("Project", pairs))
    if project.prototypes:
        sections.append(
            _table_section(
                "Prototypes",
                ["Kind", "Reference", "Date"],
                [[p.kind, p.reference, _render_date(p.date)] for p in project.prototypes],
            )
        )
    # Agreements over the detail and use-case documents live in those files;
    # the manifest keeps the rest so no record is lost on save.
    stray = [
        [a.party, a.method, a.date.isoformat(), a.artifact_kind]
        for a in project.agreements
        if a.artifact_kind not in _DOC_HOSTED_AGREEMENTS
    ]
    if stray:
        sections.append(
            _table_section("Agreements", ["Party", "Method", "Date", "Artifact"], stray)
        )
    return sectext.SectionTree(MANIFEST_FILE, sections)


_DOC_HOSTED_AGREEMENTS = ("IoTProjectDetail", "IoTUseCaseDescription")


def _agreement_rows(project: Project, kind: str) -> list[list[str]]:
    return [
        [a.party, a.method, a.date.isoformat()]
        for a in project.agreements
        if a.artifact_kind == kind
    ]


def _build_detail(project: Project) -> sectext.SectionTree | None:
    agreement_rows = _agreement_rows(project, "IoTProjectDetail")
    has_content = any(
        (
            project.name,
            project.responsible,
            project.description,
            project.objective,
            project.problem_domain,
            project.glossary,
            project.stakeholders,
            project.needs,
            project.requirements,
            project.business_rules,
            agreement_rows,
        )
    )
    if not has_content:
        return None
    sections = [_doc_header("IoTProjectDetail")]
    sections.append(
        _field_section(
            "Project",
            [
                ("Name", project.name),
                ("Responsible", project.responsible),
                ("Description", project.description),
                ("Objective", project.objective),
                ("Problem domain", project.problem_domain),
            ],
        )
    )
    if project.glossary:
        sections.append(
            _table_section(
                "Glossary",
                ["Term", "Definition"],
                [[term, definition] for term, definition in sorted(project.glossary.items())],
            )
        )
    if project.stakeholders:
        sections.append(
            _table_section(
                "Stakeholders",
                ["ID", "Name", "Role", "Interest", "Influence"],
                [
                    [s.id.render(), s.name, s.role_description, s.interest, s.influence]
                    for s in project.stakeholders
                ],
            )
        )
    if project.needs:
        sections.append(
            _table_section(
                "Needs",
                ["ID", "Description", "Origin"],
                [[n.id.render(), n.description, n.origin] for n in project.needs],
            )
        )
    functional = [r for r in project.requirements if r.id.kind == FR]
    non_functional = [r for r in project.requirements if r.id.kind == NFR]
    if functional:
        sections.append(
            _table_section(
                "Functional Requirements",
                [
                    "ID", "Description", "Situation", "Priority", "IoT Characteristics",
                    "Cost", "Effort", "Reused", "Related Requirements", "Dependencies",
                    "Related Needs",
                ],
                [
                    [
                        r.id.render(), r.description, r.situation, r.priority,
                        ", ".join(r.iot_characteristics), r.cost, r.effort,
                        _bool_text(r.reused), _render_ids(r.related_requirement_ids),
                        _render_ids(r.dependencies), _render_ids(r.related_need_ids),
                    ]
                    for r in functional
                ],
            )
        )
    if non_functional:
        sections.append(
            _table_section(
                "Non-functional Requirements",
                [
                    "ID", "Description", "Situation", "Priority", "IoT Characteristics",
                    "Reused", "Related Requirements", "Related Needs",
                ],
                [
                    [
                        r.id.render(), r.description, r.situation, r.priority,
                        ", ".join(r.iot_characteristics), _bool_text(r.reused),
                        _render_ids(r.related_requirement_ids), _render_ids(r.related_need_ids),
                    ]
                    for r in non_functional
                ],
            )
        )
    if project.business_rules:
        sections.append(
            _table_section(
                "Business Rules",
                ["ID", "Description", "Situation", "Priority", "Related Needs"],
                [
                    [b.id.render(), b.description, b.situation, b.priority, _render_ids(b.related_need_ids)]
                    for b in project.business_rules
                ],
            )
        )
    if agreement_rows:
        sections.append(_table_section("Agreement", ["Party", "Method", "Date"], agreement_rows))
    return sectext.SectionTree(DETAIL_FILE, sections)


def _render_actor_ref(actor: ActorRef) -> str:
    if actor.category:
        return f"{actor.name} ({actor.category})"
    return actor.name


def _build_proposal(project: Project) -> sectext.SectionTree | None:
    if not project.scenarios and not project.catalog_instances:
        return None
    sections = [_doc_header("IoTSolutionProposal")]
    sections.append(
        _table_section(
            "IoT Scenarios",
            ["ID", "Title", "Functional Requirements"],
            [
                [s.id.render(), s.title, _render_ids(s.related_fr_ids)]
                for s in project.scenarios
            ],
        )
    )
    for scenario in project.scenarios:
        section = _field_section(
            f"Scenario {scenario.id.render()}",
            [
                ("Actors", ", ".join(_render_actor_ref(a) for a in scenario.actors)),
                ("Actions", ", ".join(scenario.actions)),
                ("Interaction Arrangements", _render_ids(scenario.arrangement_ids)),
                ("Precedencies", _render_ids(scenario.precedencies)),
                ("Dependencies", _render_ids(scenario.dependencies)),
                ("Collected data", scenario.collected_data),
                ("Actions performed", scenario.actions_performed),
            ],
        )
        if scenario.interaction_sequence:
            section.table = sectext.Table(
                header=["Step"], rows=[[step] for step in scenario.interaction_sequence]
            )
        sections.append(section)
    for seq, inst in enumerate(project.catalog_instances, start=1):
        section = _field_section(
            f"Arrangement Catalog {seq}",
            [
                ("Arrangement", inst.arrangement_id.render()),
                ("Scenarios", _render_ids(inst.scenario_ids)),
            ],
        )
        if inst.answers:
            section.table = sectext.Table(
                header=["Prompt", "Answer"],
                rows=[[prompt, answer] for prompt, answer in inst.answers.items()],
            )
        sections.append(section)
    return sectext.SectionTree(PROPOSAL_FILE, sections)


def _build_use_cases(project: Project) -> sectext.SectionTree | None:
    agreement_rows = _agreement_rows(project, "IoTUseCaseDescription")
    if not project.use_cases and not project.use_case_diagram and not agreement_rows:
        return None
    sections = [_doc_header("IoTUseCaseDescription")]
    sections.append(
        _table_section(
            "IoT Use Cases",
            ["ID", "Title", "IoT Requirements", "Interaction Arrangements", "IoT Scenarios"],
            [
                [
                    u.id.render(), u.title, _render_ids(u.requirement_ids),
                    _render_ids(u.arrangement_ids), _render_ids(u.scenario_ids),
                ]
                for u in project.use_cases
            ],
        )
    )
    if project.use_case_diagram:
        sections.append(_field_section("Use Case Diagram", [("Image", project.use_case_diagram)]))
    for case in project.use_cases:
        sections.append(
            _field_section(
                f"Use Case {case.id.render()}",
                [
                    ("Preconditions", case.preconditions),
                    ("Postconditions", case.postconditions),
                    ("Associated Use Cases", _render_ids(case.associated_use_cases)),
                    ("Business Rules", _render_ids(case.business_rule_ids)),
                ],
            )
        )
        if case.actors:
            sections.append(
                _table_section(
                    f"Use Case {case.id.render()} Actors",
                    ["Name", "Category", "Description"],
                    [[a.name, a.category, a.description] for a in case.actors],
                )
            )
        flow_rows: list[list[str]] = [["Base", step] for step in case.base_flow]
        for index, flow in enumerate(case.alternative_flows, start=1):
            flow_rows.extend([f"Alternative {index}", step] for step in flow)
        for index, flow in enumerate(case.exception_flows, start=1):
            flow_rows.extend([f"Exception {index}", step] for step in flow)
        if flow_rows:
            sections.append(
                _table_section(f"Use Case {case.id.render()} Flows", ["Flow", "Step"], flow_rows)
            )
    if agreement_rows:
        sections.append(_table_section("Agreement", ["Party", "Method", "Date"], agreement_rows))
    return sectext.SectionTree(USE_CASES_FILE, sections)


def _build_canvas(project: Project) -> sectext.SectionTree | None:
    if project.canvas is None:
        return None
    sections = [
        _doc_header("IoTCanvas"),
        _field_section(
            "Canvas", [("Image", project.canvas.image_ref), ("Notes", project.canvas.notes)]
        ),
    ]
    return sectext.SectionTree(CANVAS_FILE, sections)


def _build_feasibility(project: Project) -> sectext.SectionTree | None:
    record = project.feasibility
    if record is None:
        return None
    sections = [
        _doc_header("FeasibilityAnalysis"),
        _field_section("Market Demand", [("Analysis", record.market_demand)]),
        _field_section("Economic Feasibility", [("Analysis", record.economic_feasibility)]),
        _field_section("Impact and Risks", [("Analysis", record.impact_and_risks)]),
        _field_section("Technical Feasibility", [("Analysis", record.technical_feasibility)]),
    ]
    return sectext.SectionTree(FEASIBILITY_FILE, sections)


def _build_checklist(record: ChecklistRecord, path: str) -> sectext.SectionTree:
    section = _field_section(
        "Checklist",
        [("Completed by", record.completed_by), ("Date", _render_date(record.date))],
    )
    section.table = sectext.Table(
        header=["Item", "Verdict", "Note"],
        rows=[[item.text, item.verdict, item.note] for item in record.items],
    )
    return sectext.SectionTree(path, [_doc_header(record.kind), section])


def build_inspection_tree(report: InspectionReport, path: str = "") -> sectext.SectionTree:
    sections = [_doc_header("InspectionRecord")]
    sections.append(
        sectext.Section(
            "Session",
            fields=[
                sectext.Field("Label", report.session_label),
                sectext.Field("Inspector", report.inspector),
                sectext.Field("Meeting done", _bool_text(report.meeting_done)),
                sectext.Field("Defects", str(len(report.defects))),
            ],
        )
    )
    sections.append(
        _table_section(
            "Answers",
            ["Scenario", "Question", "Verdict", "Note"],
            [
                [a.scenario_id.render(), str(a.question_number), a.verdict, a.note]
                for a in report.answers
            ],
        )
    )
    sections.append(
        _table_section(
            "Defects",
            ["ID", "Scenario", "Question", "Category", "Status", "Description"],
            [
                [
                    str(d.id), d.scenario_id.render(), str(d.question_number),
                    d.category, d.status, d.description,
                ]
                for d in report.defects
            ],
        )
    )
    if report.omissions:
        sections.append(
            _table_section(
                "Omissions",
                ["Scenario", "Question"],
                [[sid.render(), str(number)] for sid, number in report.omissions],
            )
        )
    return sectext.SectionTree(path or "inspection.retiot", sections)


def build_change_tree(report: ChangeAnalysisReport, path: str = "") -> sectext.SectionTree:
    change = report.change
    sections = [_doc_header("ChangeAnalysisReport")]
    sections.append(
        _field_section(
            "Change Request",
            [
                ("ID", change.id.render()),
                ("Target", change.target_id.render()),
                ("Kind", change.kind),
                ("Description", change.description),
            ],
        )
    )
    impact = sectext.Section(
        "Impact",
        fields=[sectext.Field("Decision", report.decision or "Pending")],
    )
    impact.table = sectext.Table(
        header=["Artifact", "Reached Via", "Blocking"],
        rows=[
            [entry.artifact_id.render(), entry.via, _bool_text(entry.blocking)]
            for entry in report.impacted
        ],
    )
    sections.append(impact)
    return sectext.SectionTree(path or "change-analysis.retiot", sections)


def build_documents(project: Project) -> list[SourceDocument]:
    """Build every document the project state calls for (no validation)."""
    docs: list[SourceDocument] = []

    def add(kind: str, path: str, tree: sectext.SectionTree | None) -> None:
        if tree is not None:
            tree.source = path
            docs.append(SourceDocument(kind, path, DOCUMENT_VERSION, tree))

    add(MANIFEST_KIND, MANIFEST_FILE, _build_manifest(project))
    add("IoTProjectDetail", DETAIL_FILE, _build_detail(project))
    add("IoTSolutionProposal", PROPOSAL_FILE, _build_proposal(project))
    add("IoTUseCaseDescription", USE_CASES_FILE, _build_use_cases(project))
    add("IoTCanvas", CANVAS_FILE, _build_canvas(project))
    add("FeasibilityAnalysis", FEASIBILITY_FILE, _build_feasibility(project))
    for record in project.checklists:
        if record.kind == "RequirementsChecklist":
            add(record.kind, REQ_CHECKLIST_FILE, _build_checklist(record, REQ_CHECKLIST_FILE))
        elif record.kind == "DiagramAndUseCasesChecklist":
            add(record.kind, DIAGRAM_CHECKLIST_FILE, _build_checklist(record, DIAGRAM_CHECKLIST_FILE))

    used_paths = {d.path for d in docs}

    def fresh_path(base: str) -> str:
        path = base
        counter = 2
        while path in used_paths:
            stem, _, suffix = base.rpartition(".retiot")
            path = f"{stem}-{counter}.retiot"
            counter += 1
        used_paths.add(path)
        return path

    for report in project.inspection_reports:
        path = fresh_path(f"checklists/inspection-{_slug(report.session_label)}.retiot")
        add("InspectionRecord", path, build_inspection_tree(report, path))
    for change in project.change_reports:
        path = fresh_path(f"change-analysis-{_slug(change.change.id.render())}.retiot")
        add("ChangeAnalysisReport", path, build_change_tree(change, path))
    return docs


def serialize_project(project: Project) -> dict[str, str]:
    """Render the whole project, snapshots included, as {relative path: text}.

    Refuses models that fail validation so that no malformed document set is
    ever written.
    """
    issues = validate_model(project)
    if issues:
        raise ModelInvalidError(issues)
    rendered: dict[str, str] = {}
    for doc in build_documents(project):
        rendered[doc.path] = doc.render()
    for snapshot in project.versions:
        state = snapshot.state
        for doc in build_documents(state):
            rendered[f"versions/{snapshot.label}/{doc.path}"] = doc.render()
    return rendered


def save_project(project: Project, root: Path) -> list[Path]:
    root = Path(root)
    written: list[Path] = []
    for relative, text in serialize_project(project).items():
        path = root / relative
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written


# --------------------------------------------------------------------------
# document readers (section tree -> model)


def _read_manifest(tree: sectext.SectionTree, source: str, diags, project: Project) -> None:
    section = tree.section("Project")
    if section is not None:
        _check_known_fields(section, source, diags, ("Methodology", "Versions"))
        methodology = _get(section, "Methodology").strip().lower()
        project.agile = methodology == "agile"
    prototypes: list[PrototypeRecord] = []
    proto_section = tree.section("Prototypes")
    if proto_section is not None:
        for cells, line in _TableReader(proto_section, source, diags, ("Kind", "Reference", "Date")):
            kind = canon_enum(cells.get("kind", ""), PROTOTYPE_KINDS)
            reference = cells.get("reference", "").strip()
            if not reference:
                diags.append(sectext.error(source, line, "prototype row without a reference", "missing-cell"))
                continue
            date, _ = _parse_date(cells.get("date", ""), source, line, diags, required=False)
            prototypes.append(PrototypeRecord(kind, reference, date))
    project.prototypes = tuple(prototypes)
    agreements: list[AgreementRecord] = []
    agr_section = tree.section("Agreements")
    if agr_section is not None:
        for cells, line in _TableReader(
            agr_section, source, diags, ("Party", "Method", "Date", "Artifact")
        ):
            party = cells.get("party", "").strip()
            if not party:
                diags.append(sectext.error(source, line, "agreement row without a party", "missing-cell"))
                continue
            method = canon_enum(cells.get("method", ""), AGREEMENT_METHODS, _METHOD_ALIASES)
            date, ok = _parse_date(cells.get("date", ""), source, line, diags, required=True)
            if not ok:
                continue
            agreements.append(
                AgreementRecord(party, method, date, cells.get("artifact", "").strip())
            )
    project.agreements = tuple(agreements)
    for section in tree.sections:
        if section.name not in ("Document", "Project", "Prototypes", "Agreements"):
            diags.append(
                sectext.warning(source, section.line, f"unknown section {section.name!r}", "unknown-section")
            )


def _manifest_version_order(tree: sectext.SectionTree) -> list[str]:
    section = tree.section("Project")
    if section is None:
        return []
    return [label.strip() for label in _get(section, "Versions").split(",") if label.strip()]


def _read_agreements(
    tree: sectext.SectionTree, source: str, diags, kind: str
) -> list[AgreementRecord]:
    section = tree.section("Agreement")
    agreements: list[AgreementRecord] = []
    if section is None:
        return agreements
    for cells, line in _TableReader(section, source, diags, ("Party", "Method", "Date")):
        party = cells.get("party", "").strip()
        if not party:
            diags.append(sectext.error(source, line, "agreement row without a party", "missing-cell"))
            continue
        method = canon_enum(cells.get("method", ""), AGREEMENT_METHODS, _METHOD_ALIASES)
        date, ok = _parse_date(cells.get("date", ""), source, line, diags, required=True)
        if not ok:
            continue
        agreements.append(AgreementRecord(party, method, date, kind))
    return agreements


def _read_detail(tree: sectext.SectionTree, source: str, diags, project: Project) -> None:
    section = tree.section("Project")
    if section is not None:
        _check_known_fields(
            section, source, diags,
            ("Name", "Responsible", "Description", "Objective", "Problem domain"),
        )
        project.name = _get(section, "Name")
        project.responsible = _get(section, "Responsible")
        project.description = _get(section, "Description")
        project.objective = _get(section, "Objective")
        project.problem_domain = _get(section, "Problem domain")

    glossary_section = tree.section("Glossary")
    if glossary_section is not None:
        glossary: dict[str, str] = {}
        for cells, line in _TableReader(glossary_section, source, diags, ("Term", "Definition")):
            term = cells.get("term", "").strip()
            if not term:
                diags.append(sectext.error(source, line, "glossary row without a term", "missing-cell"))
                continue
            glossary[term] = cells.get("definition", "")
        project.glossary = glossary

    stakeholders: list[Stakeholder] = []
    section = tree.section("Stakeholders")
    if section is not None:
        for cells, line in _TableReader(
            section, source, diags, ("ID", "Name", "Role", "Interest", "Influence")
        ):
            ident = _one_id(cells.get("id", ""), source, line, diags, "stakeholder id")
            if ident is None:
                continue
            stakeholders.append(
                Stakeholder(
                    ident,
                    cells.get("name", ""),
                    cells.get("role", ""),
                    canon_enum(cells.get("interest", ""), ORDINALS),
                    canon_enum(cells.get("influence", ""), ORDINALS),
                )
            )
    project.stakeholders = tuple(stakeholders)

    needs: list[Need] = []
    section = tree.section("Needs")
    if section is not None:
        for cells, line in _TableReader(section, source, diags, ("ID", "Description", "Origin")):
            ident = _one_id(cells.get("id", ""), source, line, diags, "need id")
            if ident is None:
                continue
            needs.append(
                Need(
                    ident,
                    cells.get("description", ""),
                    canon_enum(cells.get("origin", ""), NEED_ORIGINS),
                )
            )
    project.needs = tuple(needs)

    requirements: list[Requirement] = []

    def read_requirement_rows(section: sectext.Section, columns: tuple[str, ...]) -> None:
        for cells, line in _TableReader(section, source, diags, columns):
            ident = _one_id(cells.get("id", ""), source, line, diags, "requirement id")
            if ident is None:
                continue
            reused = _parse_bool(cells.get("reused", ""))
            if reused is None:
                diags.append(
                    sectext.warning(source, line, f"bad Reused value {cells.get('reused', '')!r}", "malformed-bool")
                )
                reused = False
            characteristics = canon_characteristics(
                [c for c in cells.get("iot characteristics", "").split(",")]
            )
            requirements.append(
                Requirement(
                    id=ident,
                    description=cells.get("description", ""),
                    situation=canon_enum(cells.get("situation", ""), SITUATIONS),
                    priority=canon_enum(cells.get("priority", ""), PRIORITIES),
                    iot_characteristics=characteristics,
                    cost=canon_enum(cells.get("cost", ""), ORDINALS),
                    effort=canon_enum(cells.get("effort", ""), ORDINALS),
                    reused=reused,
                    related_requirement_ids=_id_list(
                        cells.get("related requirements", ""), source, line, diags
                    ),
                    dependencies=_id_list(cells.get("dependencies", ""), source, line, diags),
                    related_need_ids=_id_list(cells.get("related needs", ""), source, line, diags),
                )
            )

    section = tree.section("Functional Requirements")
    if section is not None:
        read_requirement_rows(
            section,
            ("ID", "Description", "Situation", "Priority", "IoT Characteristics", "Cost",
             "Effort", "Reused", "Related Requirements", "Dependencies", "Related Needs"),
        )
    section = tree.section("Non-functional Requirements")
    if section is not None:
        read_requirement_rows(
            section,
            ("ID", "Description", "Situation", "Priority", "IoT Characteristics",
             "Reused", "Related Requirements", "Related Needs"),
        )
    project.requirements = tuple(requirements)

    rules: list[BusinessRule] = []
    section = tree.section("Business Rules")
    if section is not None:
        for cells, line in _TableReader(
            section, source, diags, ("ID", "Description", "Situation", "Priority", "Related Needs")
        ):
            ident = _one_id(cells.get("id", ""), source, line, diags, "business rule id")
            if ident is None:
                continue
            rules.append(
                BusinessRule(
                    ident,
                    cells.get("description", ""),
                    canon_enum(cells.get("situation", ""), SITUATIONS),
                    canon_enum(cells.get("priority", ""), PRIORITIES),
                    _id_list(cells.get("related needs", ""), source, line, diags),
                )
            )
    project.business_rules = tuple(rules)

    known_sections = (
        "Document", "Project", "Glossary", "Stakeholders", "Needs",
        "Functional Requirements", "Non-functional Requirements", "Business Rules", "Agreement",
    )
    for section in tree.sections:
        if section.name not in known_sections:
            diags.append(
                sectext.warning(source, section.line, f"unknown section {section.name!r}", "unknown-section")
            )


_ACTOR_REF_RE = re.compile(r"(.*?)\s*\((.+)\)\s*$")


def _parse_actor_refs(text: str) -> tuple[ActorRef, ...]:
    actors: list[ActorRef] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        match = _ACTOR_REF_RE.fullmatch(chunk)
        if match:
            actors.append(
                ActorRef(match.group(1), canon_enum(match.group(2), ACTOR_CATEGORIES, _CATEGORY_ALIASES))
            )
        else:
            actors.append(ActorRef(chunk))
    return tuple(actors)


def _text_list(text: str) -> tuple[str, ...]:
    return tuple(chunk.strip() for chunk in text.split(",") if chunk.strip())


def _read_proposal(tree: sectext.SectionTree, source: str, diags, project: Project) -> None:
    scenarios: dict[Identifier, IoTScenario] = {}
    order: list[Identifier] = []
    summary = tree.section("IoT Scenarios")
    if summary is not None:
        for cells, line in _TableReader(
            summary, source, diags, ("ID", "Title", "Functional Requirements")
        ):
            ident = _one_id(cells.get("id", ""), source, line, diags, "scenario id")
            if ident is None:
                continue
            if ident in scenarios:
                diags.append(
                    sectext.error(source, line, f"scenario {ident.render()} declared twice", "duplicate-row")
                )
                continue
            scenarios[ident] = IoTScenario(
                id=ident,
                title=cells.get("title", ""),
                related_fr_ids=_id_list(cells.get("functional requirements", ""), source, line, diags),
            )
            order.append(ident)

    for section in tree.sections_prefixed("Scenario "):
        ident = parse_identifier(section.name[len("Scenario "):])
        if ident is None:
            diags.append(
                sectext.error(source, section.line, f"bad scenario section {section.name!r}", "malformed-id")
            )
            continue
        if ident not in scenarios:
            diags.append(
                sectext.warning(
                    source, section.line,
                    f"{section.name!r} has no row in the IoT Scenarios table", "undeclared-scenario",
                )
            )
            scenarios[ident] = IoTScenario(id=ident)
            order.append(ident)
        _check_known_fields(
            section, source, diags,
            ("Actors", "Actions", "Interaction Arrangements", "Precedencies",
             "Dependencies", "Collected data", "Actions performed"),
        )
        scenario = scenarios[ident]
        scenario.actors = _parse_actor_refs(_get(section, "Actors"))
        scenario.actions = _text_list(_get(section, "Actions"))
        scenario.arrangement_ids = _id_list(
            _get(section, "Interaction Arrangements"), source, section.field_line("Interaction Arrangements"), diags
        )
        scenario.precedencies = _id_list(
            _get(section, "Precedencies"), source, section.field_line("Precedencies"), diags
        )
        scenario.dependencies = _id_list(
            _get(section, "Dependencies"), source, section.field_line("Dependencies"), diags
        )
        scenario.collected_data = _get(section, "Collected data")
        scenario.actions_performed = _get(section, "Actions performed")
        if section.table is not None:
            if [h.lower() for h in section.table.header] != ["step"]:
                diags.append(
                    sectext.warning(source, section.table.line, "scenario table should have a single Step column", "unknown-column")
                )
            scenario.interaction_sequence = tuple(row[0] for row in section.table.rows if row and row[0])

    project.scenarios = tuple(scenarios[i] for i in order)

    instances: list[ArrangementCatalogInstance] = []
    per_arrangement: dict[Identifier, int] = {}
    for section in tree.sections_prefixed("Arrangement Catalog"):
        _check_known_fields(section, source, diags, ("Arrangement", "Scenarios"))
        arrangement = _one_id(
            _get(section, "Arrangement"), source, section.field_line("Arrangement"), diags, "arrangement id"
        )
        if arrangement is None:
            continue
        scenario_ids = _id_list(
            _get(section, "Scenarios"), source, section.field_line("Scenarios"), diags
        )
        answers: dict[str, str] = {}
        if section.table is not None:
            for cells, line in _TableReader(section, source, diags, ("Prompt", "Answer")):
                prompt = cells.get("prompt", "").strip()
                if not prompt:
                    diags.append(sectext.error(source, line, "catalog row without a prompt", "missing-cell"))
                    continue
                if prompt in answers:
                    diags.append(sectext.error(source, line, f"duplicate prompt {prompt!r}", "duplicate-row"))
                    continue
                answers[prompt] = cells.get("answer", "")
        per_arrangement[arrangement] = per_arrangement.get(arrangement, 0) + 1
        instances.append(
            ArrangementCatalogInstance(
                arrangement_id=arrangement,
                instance=per_arrangement[arrangement],
                scenario_ids=scenario_ids,
                answers=answers,
            )
        )
    project.catalog_instances = tuple(instances)

    for section in tree.sections:
        if section.name in ("Document", "IoT Scenarios"):
            continue
        if section.name.startswith("Scenario ") or section.name.startswith("Arrangement Catalog"):
            continue
        diags.append(
            sectext.warning(source, section.line, f"unknown section {section.name!r}", "unknown-section")
        )


_FLOW_RE = re.compile(r"(base)|(alternative)\s*(\d+)|(exception)\s*(\d+)", re.IGNORECASE)


def _read_use_cases(tree: sectext.SectionTree, source: str, diags, project: Project) -> None:
    cases: dict[Identifier, IoTUseCase] = {}
    order: list[Identifier] = []
    summary = tree.section("IoT Use Cases")
    if summary is not None:
        for cells, line in _TableReader(
            summary, source, diags,
            ("ID", "Title", "IoT Requirements", "Interaction Arrangements", "IoT Scenarios"),
        ):
            ident = _one_id(cells.get("id", ""), source, line, diags, "use case id")
            if ident is None:
                continue
            if ident in cases:
                diags.append(
                    sectext.error(source, line, f"use case {ident.render()} declared twice", "duplicate-row")
                )
                continue
            cases[ident] = IoTUseCase(
                id=ident,
                title=cells.get("title", ""),
                requirement_ids=_id_list(cells.get("iot requirements", ""), source, line, diags),
                arrangement_ids=_id_list(cells.get("interaction arrangements", ""), source, line, diags),
                scenario_ids=_id_list(cells.get("iot scenarios", ""), source, line, diags),
            )
            order.append(ident)

    diagram = tree.section("Use Case Diagram")
    if diagram is not None:
        _check_known_fields(diagram, source, diags, ("Image",))
        project.use_case_diagram = _get(diagram, "Image")

    for section in tree.sections_prefixed("Use Case "):
        if section.name == "Use Case Diagram":
            continue
        name = section.name[len("Use Case "):]
        if name.endswith(" Actors") or name.endswith(" Flows"):
            continue
        ident = parse_identifier(name)
        if ident is None:
            diags.append(
                sectext.error(source, section.line, f"bad use case section {section.name!r}", "malformed-id")
            )
            continue
        if ident not in cases:
            diags.append(
                sectext.warning(
                    source, section.line,
                    f"{section.name!r} has no row in the IoT Use Cases table", "undeclared-use-case",
                )
            )
            cases[ident] = IoTUseCase(id=ident)
            order.append(ident)
        _check_known_fields(
            section, source, diags,
            ("Preconditions", "Postconditions", "Associated Use Cases", "Business Rules"),
        )
        case = cases[ident]
        case.preconditions = _get(section, "Preconditions")
        case.postconditions = _get(section, "Postconditions")
        case.associated_use_cases = _id_list(
            _get(section, "Associated Use Cases"), source, section.field_line("Associated Use Cases"), diags
        )
        case.business_rule_ids = _id_list(
            _get(section, "Business Rules"), source, section.field_line("Business Rules"), diags
        )

        actors_section = tree.section(f"Use Case {ident.render()} Actors")
        if actors_section is not None:
            actors: list[Actor] = []
            for cells, line in _TableReader(
                actors_section, source, diags, ("Name", "Category", "Description")
            ):
                actor_name = cells.get("name", "").strip()
                if not actor_name:
                    diags.append(sectext.error(source, line, "actor row without a name", "missing-cell"))
                    continue
                actors.append(
                    Actor(
                        actor_name,
                        canon_enum(cells.get("category", ""), ACTOR_CATEGORIES, _CATEGORY_ALIASES),
                        cells.get("description", ""),
                    )
                )
            case.actors = tuple(actors)

        flows_section = tree.section(f"Use Case {ident.render()} Flows")
        if flows_section is not None:
            base: list[str] = []
            alternatives: dict[int, list[str]] = {}
            exceptions: dict[int, list[str]] = {}
            for cells, line in _TableReader(flows_section, source, diags, ("Flow", "Step")):
                label = cells.get("flow", "").strip()
                step = cells.get("step", "")
                match = _FLOW_RE.fullmatch(label)
                if match is None:
                    diags.append(
                        sectext.error(source, line, f"bad flow label {label!r}", "malformed-flow")
                    )
                    continue
                if match.group(1):
                    base.append(step)
                elif match.group(2):
                    alternatives.setdefault(int(match.group(3)), []).append(step)
                else:
                    exceptions.setdefault(int(match.group(5)), []).append(step)
            case.base_flow = tuple(base)
            case.alternative_flows = tuple(
                tuple(alternatives[k]) for k in sorted(alternatives)
            )
            case.exception_flows = tuple(tuple(exceptions[k]) for k in sorted(exceptions))

    project.use_cases = tuple(cases[i] for i in order)

    for section in tree.sections:
        if section.name in ("Document", "IoT Use Cases", "Use Case Diagram", "Agreement"):
            continue
        if section.name.startswith("Use Case "):
            continue
        diags.append(
            sectext.warning(source, section.line, f"unknown section {section.name!r}", "unknown-section")
        )


def _read_canvas(tree: sectext.SectionTree, source: str, diags, project: Project) -> None:
    section = tree.section("Canvas")
    if section is None:
        diags.append(sectext.warning(source, 1, "canvas document without a Canvas section", "missing-section"))
        project.canvas = CanvasRecord()
        return
    _check_known_fields(section, source, diags, ("Image", "Notes"))
    project.canvas = CanvasRecord(_get(section, "Image"), _get(section, "Notes"))


def _read_feasibility(tree: sectext.SectionTree, source: str, diags, project: Project) -> None:
    def analysis(name: str) -> str:
        section = tree.section(name)
        if section is None:
            return ""
        _check_known_fields(section, source, diags, ("Analysis",))
        return _get(section, "Analysis")

    project.feasibility = FeasibilityRecord(
        market_demand=analysis("Market Demand"),
        economic_feasibility=analysis("Economic Feasibility"),
        impact_and_risks=analysis("Impact and Risks"),
        technical_feasibility=analysis("Technical Feasibility"),
    )


def _read_checklist(
    tree: sectext.SectionTree, source: str, diags, kind: str
) -> ChecklistRecord | None:
    section = tree.section("Checklist")
    if section is None:
        diags.append(sectext.warning(source, 1, "checklist document without a Checklist section", "missing-section"))
        return ChecklistRecord(kind)
    _check_known_fields(section, source, diags, ("Completed by", "Date"))
    date, _ = _parse_date(_get(section, "Date"), source, section.field_line("Date"), diags, required=False)
    items: list[ChecklistItem] = []
    for cells, line in _TableReader(section, source, diags, ("Item", "Verdict", "Note")):
        text = cells.get("item", "").strip()
        if not text:
            diags.append(sectext.error(source, line, "checklist row without an item", "missing-cell"))
            continue
        items.append(
            ChecklistItem(
                text,
                canon_enum(cells.get("verdict", ""), VERDICTS, _VERDICT_ALIASES),
                cells.get("note", ""),
            )
        )
    return ChecklistRecord(kind, _get(section, "Completed by"), date, tuple(items))


def read_inspection_tree(
    tree: sectext.SectionTree, source: str, diags
) -> InspectionReport | None:
    session = tree.section("Session")
    if session is None:
        diags.append(sectext.error(source, 1, "inspection record without a Session section", "missing-section"))
        return None
    _check_known_fields(session, source, diags, ("Label", "Inspector", "Meeting done", "Defects"))
    meeting_done = _parse_bool(_get(session, "Meeting done"))
    if meeting_done is None:
        meeting_done = False

    answers: list[Answer] = []
    answers_section = tree.section("Answers")
    if answers_section is not None:
        for cells, line in _TableReader(
            answers_section, source, diags, ("Scenario", "Question", "Verdict", "Note")
        ):
            scenario = _one_id(cells.get("scenario", ""), source, line, diags, "scenario id")
            raw_question = cells.get("question", "").strip()
            if scenario is None:
                continue
            if not raw_question.isdigit():
                diags.append(sectext.error(source, line, f"bad question number {raw_question!r}", "malformed-number"))
                continue
            answers.append(
                Answer(
                    int(raw_question),
                    scenario,
                    canon_enum(cells.get("verdict", ""), VERDICTS, _VERDICT_ALIASES),
                    cells.get("note", ""),
                )
            )

    defects: list[Defect] = []
    defects_section = tree.section("Defects")
    if defects_section is not None:
        for cells, line in _TableReader(
            defects_section, source, diags,
            ("ID", "Scenario", "Question", "Category", "Status", "Description"),
        ):
            raw_id = cells.get("id", "").strip()
            raw_question = cells.get("question", "").strip()
            scenario = _one_id(cells.get("scenario", ""), source, line, diags, "scenario id")
            if scenario is None:
                continue
            if not raw_id.isdigit() or not raw_question.isdigit():
                diags.append(sectext.error(source, line, "defect row needs numeric id and question", "malformed-number"))
                continue
            defects.append(
                Defect(
                    int(raw_id),
                    scenario,
                    int(raw_question),
                    canon_enum(cells.get("category", ""), DEFECT_CATEGORIES),
                    cells.get("description", ""),
                    canon_enum(cells.get("status", ""), DEFECT_STATUSES),
                )
            )

    omissions: list[tuple[Identifier, int]] = []
    omissions_section = tree.section("Omissions")
    if omissions_section is not None:
        for cells, line in _TableReader(omissions_section, source, diags, ("Scenario", "Question")):
            scenario = _one_id(cells.get("scenario", ""), source, line, diags, "scenario id")
            raw_question = cells.get("question", "").strip()
            if scenario is None or not raw_question.isdigit():
                continue
            omissions.append((scenario, int(raw_question)))

    return InspectionReport(
        session_label=_get(session, "Label"),
        inspector=_get(session, "Inspector"),
        answers=tuple(answers),
        defects=tuple(defects),
        omissions=tuple(omissions),
        meeting_done=meeting_done,
    )


def read_change_tree(
    tree: sectext.SectionTree, source: str, diags
) -> ChangeAnalysisReport | None:
    request = tree.section("Change Request")
    if request is None:
        diags.append(sectext.error(source, 1, "change analysis without a Change Request section", "missing-section"))
        return None
    _check_known_fields(request, source, diags, ("ID", "Target", "Kind", "Description"))
    change_id = _one_id(_get(request, "ID"), source, request.field_line("ID"), diags, "change id")
    target = _one_id(_get(request, "Target"), source, request.field_line("Target"), diags, "target id")
    if change_id is None or target is None:
        return None
    kind = canon_enum(_get(request, "Kind"), CHANGE_KINDS)

    decision = ""
    entries: list[ImpactEntry] = []
    impact = tree.section("Impact")
    if impact is not None:
        _check_known_fields(impact, source, diags, ("Decision",))
        raw_decision = _get(impact, "Decision")
        if raw_decision.strip().lower() != "pending":
            decision = canon_enum(raw_decision, CHANGE_DECISIONS)
        for cells, line in _TableReader(impact, source, diags, ("Artifact", "Reached Via", "Blocking")):
            artifact = _one_id(cells.get("artifact", ""), source, line, diags, "artifact id")
            if artifact is None:
                continue
            via = cells.get("reached via", "").strip().lower()
            if via not in ("downstream", "upstream", "both"):
                diags.append(sectext.error(source, line, f"bad direction {via!r}", "malformed-direction"))
                continue
            blocking = _parse_bool(cells.get("blocking", ""))
            entries.append(ImpactEntry(artifact, via, bool(blocking)))

    return ChangeAnalysisReport(
        change=ChangeRequest(change_id, target, kind, _get(request, "Description")),
        impacted=tuple(entries),
        decision=decision,
    )


# --------------------------------------------------------------------------
# directory level parse


def _load_tree(
    path: Path, expected_kind: str | None, diags: list[sectext.Diagnostic]
) -> sectext.SectionTree | None:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        diags.append(sectext.error(str(path), 1, f"cannot read file: {exc}", "unreadable-file"))
        return None
    tree, parse_diags = sectext.parse_sections(text, str(path))
    diags.extend(parse_diags)
    document = tree.section("Document")
    if document is not None and expected_kind is not None:
        declared = _get(document, "Template")
        if declared and declared != expected_kind:
            diags.append(
                sectext.error(
                    str(path),
                    document.line,
                    f"file claims template {declared!r} but its name implies {expected_kind!r}",
                    "template-mismatch",
                )
            )
            return None
    elif document is None and expected_kind is not None:
        diags.append(
            sectext.warning(str(path), 1, "no Document section; template inferred from file name", "missing-document-section")
        )
    return tree


def parse_project(root: Path) -> tuple[Project, list[sectext.Diagnostic]]:
    """Read a project directory. Never raises on bad input: all problems come
    back as diagnostics and every loadable artifact is loaded."""
    root = Path(root)
    diags: list[sectext.Diagnostic] = []
    project = Project()
    if not root.is_dir():
        diags.append(sectext.error(str(root), 1, "project directory does not exist", "unreadable-file"))
        return project, diags

    consumed: set[Path] = set()

    def take(relative: str) -> Path | None:
        path = root / relative
        if path.is_file():
            consumed.add(path)
            return path
        return None

    manifest_order: list[str] = []
    path = take(MANIFEST_FILE)
    if path is not None:
        tree = _load_tree(path, None, diags)
        if tree is not None:
            _read_manifest(tree, str(path), diags, project)
            manifest_order = _manifest_version_order(tree)

    readers = (
        (DETAIL_FILE, "IoTProjectDetail", _read_detail),
        (PROPOSAL_FILE, "IoTSolutionProposal", _read_proposal),
        (USE_CASES_FILE, "IoTUseCaseDescription", _read_use_cases),
        (CANVAS_FILE, "IoTCanvas", _read_canvas),
        (FEASIBILITY_FILE, "FeasibilityAnalysis", _read_feasibility),
    )
    agreements: list[AgreementRecord] = list(project.agreements)
    for relative, kind, reader in readers:
        path = take(relative)
        if path is None:
            continue
        tree = _load_tree(path, kind, diags)
        if tree is None:
            continue
        reader(tree, str(path), diags, project)
        if kind in _DOC_HOSTED_AGREEMENTS:
            agreements.extend(_read_agreements(tree, str(path), diags, kind))
    project.agreements = tuple(agreements)

    checklists: list[ChecklistRecord] = []
    for relative, kind in (
        (REQ_CHECKLIST_FILE, "RequirementsChecklist"),
        (DIAGRAM_CHECKLIST_FILE, "DiagramAndUseCasesChecklist"),
    ):
        path = take(relative)
        if path is None:
            continue
        tree = _load_tree(path, kind, diags)
        if tree is None:
            continue
        record = _read_checklist(tree, str(path), diags, kind)
        if record is not None:
            checklists.append(record)
    project.checklists = tuple(checklists)

    reports: list[InspectionReport] = []
    checklist_dir = root / "checklists"
    if checklist_dir.is_dir():
        for path in sorted(checklist_dir.glob("*.retiot")):
            if path in consumed:
                continue
            if path.name.startswith("answers-"):
                # Answering sessions are inputs to `inspect`, not artifacts.
                consumed.add(path)
                continue
            if path.name.startswith("inspection-"):
                consumed.add(path)
                tree = _load_tree(path, "InspectionRecord", diags)
                if tree is None:
                    continue
                report = read_inspection_tree(tree, str(path), diags)
                if report is not None:
                    reports.append(report)
    project.inspection_reports = tuple(reports)

    changes: list[ChangeAnalysisReport] = []
    for path in sorted(root.glob("change-analysis-*.retiot")):
        consumed.add(path)
        tree = _load_tree(path, "ChangeAnalysisReport", diags)
        if tree is None:
            continue
        report = read_change_tree(tree, str(path), diags)
        if report is not None:
            changes.append(report)
    project.change_reports = tuple(changes)

    versions_dir = root / "versions"
    snapshots: dict[str, VersionSnapshot] = {}
    if versions_dir.is_dir():
        for sub in sorted(p for p in versions_dir.iterdir() if p.is_dir()):
            state, sub_diags = parse_project(sub)
            diags.extend(sub_diags)
            state.versions = []
            snapshots[sub.name] = VersionSnapshot(sub.name, state)
    ordered: list[VersionSnapshot] = []
    for label in manifest_order:
        if label in snapshots:
            ordered.append(snapshots.pop(label))
        else:
            diags.append(
                sectext.warning(str(root / MANIFEST_FILE), 1, f"version {label!r} listed but not found", "missing-version")
            )
    for label in sorted(snapshots):
        diags.append(
            sectext.warning(str(versions_dir / label), 1, f"version {label!r} not listed in the manifest", "unlisted-version")
        )
        ordered.append(snapshots[label])
    project.versions = ordered

    for path in sorted(root.glob("*.retiot")):
        if path in consumed or path.name in RESERVED_DATA_FILES:
            continue
        diags.append(
            sectext.error(str(path), 1, f"unknown template file {path.name!r}", "unknown-template")
        )
    if checklist_dir.is_dir():
        for path in sorted(checklist_dir.glob("*.retiot")):
            if path in consumed or path.name in RESERVED_DATA_FILES:
                continue
            diags.append(
                sectext.error(str(path), 1, f"unknown template file {path.name!r}", "unknown-template")
            )

    any_file = any(root.glob("*.retiot")) or (
        checklist_dir.is_dir() and any(checklist_dir.glob("*.retiot"))
    )
    if not any_file:
        diags.append(sectext.warning(str(root), 1, "no document files found", "no-artifacts"))

    return normalize_project(project), diags


# --------------------------------------------------------------------------
# JSON export (export only; the sectioned text files are the authoring format)


def _export_value(value):
    if isinstance(value, Identifier):
        return value.render()
    if isinstance(value, _dt.date):
        return value.isoformat()
    if isinstance(value, tuple) or isinstance(value, list):
        return [_export_value(v) for v in value]
    if isinstance(value, dict):
        return {k: _export_value(v) for k, v in value.items()}
    if hasattr(value, "__dataclass_fields__"):
        return {
            name: _export_value(getattr(value, name))
            for name in value.__dataclass_fields__
        }
    return value


def export_project(project: Project) -> dict:
    """The whole model as one JSON-ready dictionary; field names match the
    dataclass definitions."""
    return _export_value(project)


def export_project_json(project: Project) -> str:
    return json.dumps(export_project(project), indent=2, sort_keys=False)
