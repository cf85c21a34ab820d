"""Three-stage process gates: template presence, completeness, milestones.

Stage definitions live in ``stages.retiot`` (shipped, overridable per
project). The template sets, activity/task counts, and milestones are checked
exactly at load time; activity name lists are informational. Gates never
enforce ordering between stages, they only report readiness.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sectext
from .datafiles import STAGES_FILE, data_text
from .docformat import MANIFEST_KIND, SourceDocument, build_documents
from .model import TEMPLATE_KINDS, Project

MILESTONES = ("FeasibilityAnalysis", "LowLevelPrototype", "HighLevelPrototype")

# Normative shape of the three stages; the data file must restate it exactly.
_EXPECTED = {
    1: (("IoTCanvas", "FeasibilityAnalysis", "RequirementsChecklist"), 12, 27, "FeasibilityAnalysis"),
    2: (
        ("IoTProjectDetail", "IoTSolutionProposal", "ChangeAnalysisReport",
         "VerificationChecklist", "InspectionRecord"),
        12, 39, "LowLevelPrototype",
    ),
    3: (("IoTUseCaseDescription", "DiagramAndUseCasesChecklist"), 10, 24, "HighLevelPrototype"),
}


class StageDataError(ValueError):
    pass


@dataclass
class StageDefinition:
    number: int
    purpose: str
    required_templates: tuple[str, ...]
    milestone: str
    activities: tuple[tuple[str, bool], ...]
    activity_count: int
    task_count: int
    agile_exempt: tuple[str, ...] = ()


@dataclass
class StageData:
    stages: tuple[StageDefinition, ...]
    mandatory: dict[str, tuple[str, ...]]

    def stage(self, number: int) -> StageDefinition:
        for definition in self.stages:
            if definition.number == number:
                return definition
        raise ValueError(f"no stage {number}; stages are 1, 2, 3")


@dataclass
class GateReport:
    stage: int
    milestone: str
    required_templates: tuple[str, ...]
    missing_templates: tuple[str, ...]
    incomplete_templates: tuple[tuple[str, tuple[str, ...]], ...]
    milestone_evidence: str
    milestone_note: str
    notes: tuple[str, ...]
    ready: bool


def load_stage_definitions(text: str, source: str) -> StageData:
    tree, diags = sectext.parse_sections(text, source)
    errors = [d for d in diags if d.severity == sectext.ERROR]
    if errors:
        raise StageDataError(f"stage data unreadable: {errors[0].render()}")

    stages: list[StageDefinition] = []
    for number, (templates, activity_count, task_count, milestone) in _EXPECTED.items():
        section = tree.section(f"Stage {number}")
        if section is None:
            raise StageDataError(f"{source}: missing section 'Stage {number}'")

        declared_templates = tuple(
            sorted(t.strip() for t in section.get("Templates").split(",") if t.strip())
        )
        if declared_templates != tuple(sorted(templates)):
            raise StageDataError(
                f"{source}: Stage {number} templates {declared_templates} do not match "
                f"the required set {tuple(sorted(templates))}"
            )
        declared_milestone = section.get("Milestone").strip()
        if declared_milestone != milestone:
            raise StageDataError(
                f"{source}: Stage {number} milestone {declared_milestone!r} must be {milestone!r}"
            )
        try:
            declared_activities = int(section.get("Activities"))
            declared_tasks = int(section.get("Tasks"))
        except ValueError:
            raise StageDataError(f"{source}: Stage {number} needs integer Activities and Tasks")
        if (declared_activities, declared_tasks) != (activity_count, task_count):
            raise StageDataError(
                f"{source}: Stage {number} declares ({declared_activities}, {declared_tasks}) "
                f"activities/tasks; expected ({activity_count}, {task_count})"
            )

        exempt = tuple(
            t.strip() for t in section.get("Agile exempt").split(",") if t.strip()
        )
        for kind in exempt:
            if kind not in templates:
                raise StageDataError(
                    f"{source}: Stage {number} agile exemption {kind!r} is not one of its templates"
                )

        activities: list[tuple[str, bool]] = []
        if section.table is not None:
            header = [h.lower() for h in section.table.header]
            for row in section.table.rows:
                cells = dict(zip(header, row))
                name = cells.get("activity", "").strip()
                if name:
                    optional = cells.get("optional", "").strip().lower() in ("yes", "true")
                    activities.append((name, optional))

        stages.append(
            StageDefinition(
                number=number,
                purpose=section.get("Purpose"),
                required_templates=declared_templates,
                milestone=milestone,
                activities=tuple(activities),
                activity_count=declared_activities,
                task_count=declared_tasks,
                agile_exempt=exempt,
            )
        )

    mandatory: dict[str, tuple[str, ...]] = {}
    for section in tree.sections_prefixed("Mandatory Fields "):
        kind = section.name[len("Mandatory Fields "):].strip()
        if kind not in TEMPLATE_KINDS:
            raise StageDataError(f"{source}: unknown template kind in {section.name!r}")
        entries: list[str] = []
        if section.table is not None:
            for row in section.table.rows:
                if row and row[0].strip():
                    entries.append(row[0].strip())
        mandatory[kind] = tuple(entries)

    return StageData(stages=tuple(stages), mandatory=mandatory)


def default_stage_data(project_root=None) -> StageData:
    text, source = data_text(STAGES_FILE, project_root)
    return load_stage_definitions(text, source)


# --------------------------------------------------------------------------
# completeness


def _section_nonempty(section: sectext.Section) -> bool:
    if any(f.value.strip() for f in section.fields):
        return True
    return section.table is not None and bool(section.table.rows)


def _entry_satisfied(tree: sectext.SectionTree, entry: str) -> bool:
    if entry.endswith("*"):
        prefix = entry[:-1].rstrip()
        return any(
            _section_nonempty(s) for s in tree.sections if s.name.startswith(prefix)
        )
    if "/" in entry:
        section_name, _, fieldname = entry.partition("/")
        section = tree.section(section_name.strip())
        if section is None:
            return False
        if fieldname.strip() == "#":
            return section.table is not None and bool(section.table.rows)
        for f in section.fields:
            if f.key.lower() == fieldname.strip().lower():
                return bool(f.value.strip())
        return False
    section = tree.section(entry)
    return section is not None and _section_nonempty(section)


def template_completeness(
    doc: SourceDocument, kind: str, data: StageData | None = None
) -> tuple[float, list[str]]:
    """Share of the template's mandatory entries that are filled, plus the
    names of the missing ones. An entry is ``Section``, ``Section/Field``,
    ``Section/#`` (table has rows) or ``Prefix*`` (some such section exists)."""
    if doc.template_kind != kind:
        raise ValueError(
            f"document is {doc.template_kind!r}, completeness asked for {kind!r}"
        )
    if data is None:
        data = default_stage_data()
    entries = data.mandatory.get(kind, ())
    if not entries:
        return 1.0, []
    missing = [entry for entry in entries if not _entry_satisfied(doc.tree, entry)]
    ratio = (len(entries) - len(missing)) / len(entries)
    return ratio, missing


# --------------------------------------------------------------------------
# gates


def _present_documents(project: Project) -> dict[str, list[SourceDocument]]:
    present: dict[str, list[SourceDocument]] = {}
    for doc in build_documents(project):
        if doc.template_kind != MANIFEST_KIND:
            present.setdefault(doc.template_kind, []).append(doc)
    return present


def _milestone_evidence(project: Project, milestone: str) -> tuple[str, str]:
    """Returns (evidence reference, reason when absent)."""
    if milestone == "FeasibilityAnalysis":
        record = project.feasibility
        if record is None:
            return "", "no feasibility analysis recorded"
        if not record.complete():
            return "", "feasibility analysis incomplete (all four sections must be filled)"
        return "feasibility analysis with all four sections filled", ""
    kind = "Low-fidelity" if milestone == "LowLevelPrototype" else "Evolved"
    for proto in project.prototypes:
        if proto.kind == kind and proto.reference.strip():
            return f"{kind} prototype {proto.reference}", ""
    return "", f"no {kind} prototype recorded"


def stage_gate(
    project: Project,
    stage: int,
    data: StageData | None = None,
    agile: bool | None = None,
) -> GateReport:
    if data is None:
        data = default_stage_data()
    definition = data.stage(stage)
    if agile is None:
        agile = project.agile

    required = definition.required_templates
    notes: list[str] = []
    if agile and definition.agile_exempt:
        required = tuple(t for t in required if t not in definition.agile_exempt)
        notes.append(
            "agile mode: " + ", ".join(sorted(definition.agile_exempt)) + " not required"
        )

    present = _present_documents(project)
    if any(r.answers for r in project.inspection_reports):
        # The filled verification checklists are the answer sheets inside the
        # inspection sessions; they have no document of their own.
        present.setdefault("VerificationChecklist", [])

    missing = tuple(sorted(k for k in required if k not in present))
    incomplete: list[tuple[str, tuple[str, ...]]] = []
    for kind in sorted(required):
        if kind in missing or kind not in present:
            continue
        entries_missing: list[str] = []
        for doc in present[kind]:
            _, doc_missing = template_completeness(doc, kind, data)
            for entry in doc_missing:
                if entry not in entries_missing:
                    entries_missing.append(entry)
        if entries_missing:
            incomplete.append((kind, tuple(entries_missing)))

    evidence, reason = _milestone_evidence(project, definition.milestone)
    ready = not missing and not incomplete and bool(evidence)
    return GateReport(
        stage=stage,
        milestone=definition.milestone,
        required_templates=tuple(sorted(required)),
        missing_templates=missing,
        incomplete_templates=tuple(incomplete),
        milestone_evidence=evidence,
        milestone_note=reason,
        notes=tuple(notes),
        ready=ready,
    )


def process_status(
    project: Project, data: StageData | None = None, agile: bool | None = None
) -> list[GateReport]:
    if data is None:
        data = default_stage_data()
    return [stage_gate(project, stage, data, agile) for stage in (1, 2, 3)]


def current_stage(reports: list[GateReport]) -> int:
    """The highest stage whose gate is ready; 0 when none are."""
    ready = [r.stage for r in reports if r.ready]
    return max(ready) if ready else 0


def render_gate_report(report: GateReport) -> str:
    lines = [f"== Stage {report.stage} Gate =="]
    lines.append(f"Milestone: {report.milestone}")
    lines.append(f"Required: {', '.join(report.required_templates) or 'none'}")
    lines.append(f"Missing: {', '.join(report.missing_templates) or 'none'}")
    if report.incomplete_templates:
        parts = [
            f"{kind} ({'; '.join(entries)})" for kind, entries in report.incomplete_templates
        ]
        lines.append(f"Incomplete: {', '.join(parts)}")
    else:
        lines.append("Incomplete: none")
    if report.milestone_evidence:
        lines.append(f"Evidence: {report.milestone_evidence}")
    else:
        lines.append(f"Evidence: absent ({report.milestone_note})")
    for note in report.notes:
        lines.append(f"Note: {note}")
    lines.append(f"Ready: {'yes' if report.ready else 'no'}")
    return "\n".join(lines) + "\n"


def render_process_status(reports: list[GateReport]) -> str:
    blocks = [render_gate_report(report) for report in reports]
    if all(report.ready for report in reports):
        overall = "Overall: IoT requirements document complete"
    else:
        overall = f"Overall: current stage {current_stage(reports)} of 3"
    return "\n".join(blocks) + "\n" + overall + "\n"
