"""Semantic model of one IoT requirements document set.

Every value is a plain dataclass and is treated as immutable once built;
evolution happens by constructing a new project state (see versioning).
Invalid content is representable on purpose: enum-like fields are stored as
plain strings so that ``validate_model`` can report violations as data
instead of the parser crashing.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field, replace

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
)

SITUATIONS = ("Proposed", "Approved", "Canceled")
PRIORITIES = ("High", "Medium", "Low")
ORDINALS = ("High", "Medium", "Low")
IOT_CHARACTERISTICS = ("Identification", "Sensing", "Actuation", "Connectivity", "Processing")
# Accepted on input only; stored canonically.
CHARACTERISTIC_ALIASES = {"performance": "Actuation"}
NEED_ORIGINS = ("Business", "Stakeholder")
ACTOR_CATEGORIES = ("User", "Thing", "SoftwareSystem")
AGREEMENT_METHODS = ("Signature", "EmailCopy")
VERDICTS = ("Yes", "No", "NotApplicable")
DEFECT_CATEGORIES = ("ProjectInfo", "SystemicSolution", "NonFunctionalProperty")
DEFECT_STATUSES = ("Open", "Discussed", "Corrected")
QUESTION_PARTS = ("General", "Specific")
PROTOTYPE_KINDS = ("Low-fidelity", "Evolved")
CHANGE_KINDS = ("Modify", "Remove", "Add")
CHANGE_DECISIONS = ("Approved", "Rejected", "Deferred")

TEMPLATE_KINDS = (
    "IoTCanvas",
    "FeasibilityAnalysis",
    "RequirementsChecklist",
    "IoTProjectDetail",
    "IoTSolutionProposal",
    "ChangeAnalysisReport",
    "IoTUseCaseDescription",
    "DiagramAndUseCasesChecklist",
    "VerificationChecklist",
    "InspectionRecord",
)


def canon_enum(value: str, legal: tuple[str, ...], aliases: dict[str, str] | None = None) -> str:
    """Map case-insensitive input to its canonical literal; unknown input is
    returned verbatim so validation can flag it."""
    trimmed = value.strip()
    lowered = trimmed.lower()
    if aliases and lowered in aliases:
        return aliases[lowered]
    for literal in legal:
        if lowered == literal.lower():
            return literal
    return trimmed


def canon_characteristics(values: list[str] | tuple[str, ...]) -> tuple[str, ...]:
    """Deduplicate and order IoT characteristics canonically."""
    seen: list[str] = []
    for value in values:
        canon = canon_enum(value, IOT_CHARACTERISTICS, CHARACTERISTIC_ALIASES)
        if canon and canon not in seen:
            seen.append(canon)

    def rank(item: str) -> tuple[int, str]:
        if item in IOT_CHARACTERISTICS:
            return (IOT_CHARACTERISTICS.index(item), item)
        return (len(IOT_CHARACTERISTICS), item)

    return tuple(sorted(seen, key=rank))


@dataclass
class Stakeholder:
    id: Identifier
    name: str = ""
    role_description: str = ""
    interest: str = ""
    influence: str = ""


@dataclass
class Need:
    id: Identifier
    description: str = ""
    origin: str = "Business"


@dataclass
class Requirement:
    id: Identifier
    description: str = ""
    situation: str = "Proposed"
    priority: str = "Medium"
    iot_characteristics: tuple[str, ...] = ()
    cost: str = ""
    effort: str = ""
    reused: bool = False
    related_requirement_ids: tuple[Identifier, ...] = ()
    dependencies: tuple[Identifier, ...] = ()
    related_need_ids: tuple[Identifier, ...] = ()


@dataclass
class BusinessRule:
    id: Identifier
    description: str = ""
    situation: str = "Proposed"
    priority: str = "Medium"
    related_need_ids: tuple[Identifier, ...] = ()


@dataclass
class ActorRef:
    """Actor named by a scenario; the category is optional at this level."""

    name: str
    category: str = ""


@dataclass
class Actor:
    name: str
    category: str = "User"
    description: str = ""


@dataclass
class IoTScenario:
    id: Identifier
    title: str = ""
    actors: tuple[ActorRef, ...] = ()
    actions: tuple[str, ...] = ()
    arrangement_ids: tuple[Identifier, ...] = ()
    related_fr_ids: tuple[Identifier, ...] = ()
    precedencies: tuple[Identifier, ...] = ()
    dependencies: tuple[Identifier, ...] = ()
    collected_data: str = ""
    actions_performed: str = ""
    interaction_sequence: tuple[str, ...] = ()


@dataclass
class IoTUseCase:
    id: Identifier
    title: str = ""
    requirement_ids: tuple[Identifier, ...] = ()
    arrangement_ids: tuple[Identifier, ...] = ()
    scenario_ids: tuple[Identifier, ...] = ()
    preconditions: str = ""
    postconditions: str = ""
    associated_use_cases: tuple[Identifier, ...] = ()
    actors: tuple[Actor, ...] = ()
    base_flow: tuple[str, ...] = ()
    alternative_flows: tuple[tuple[str, ...], ...] = ()
    exception_flows: tuple[tuple[str, ...], ...] = ()
    business_rule_ids: tuple[Identifier, ...] = ()


@dataclass
class ArrangementCatalogInstance:
    """One filled catalog for an arrangement, shared by one or more scenarios."""

    arrangement_id: Identifier
    instance: int = 1
    scenario_ids: tuple[Identifier, ...] = ()
    answers: dict[str, str] = field(default_factory=dict)

    def label(self) -> str:
        return f"{self.arrangement_id.render()}#{self.instance}"


@dataclass
class AgreementRecord:
    party: str
    method: str
    date: _dt.date
    artifact_kind: str


@dataclass
class CanvasRecord:
    image_ref: str = ""
    notes: str = ""


@dataclass
class FeasibilityRecord:
    market_demand: str = ""
    economic_feasibility: str = ""
    impact_and_risks: str = ""
    technical_feasibility: str = ""

    def complete(self) -> bool:
        return all(
            part.strip()
            for part in (
                self.market_demand,
                self.economic_feasibility,
                self.impact_and_risks,
                self.technical_feasibility,
            )
        )


@dataclass
class PrototypeRecord:
    kind: str
    reference: str
    date: _dt.date | None = None


@dataclass
class ChecklistItem:
    text: str
    verdict: str = "Yes"
    note: str = ""


@dataclass
class ChecklistRecord:
    """A filled generic checklist; one per checklist template kind."""

    kind: str
    completed_by: str = ""
    date: _dt.date | None = None
    items: tuple[ChecklistItem, ...] = ()


@dataclass
class Answer:
    question_number: int
    scenario_id: Identifier
    verdict: str
    note: str = ""


@dataclass
class Defect:
    id: int
    scenario_id: Identifier
    question_number: int
    category: str
    description: str
    status: str = "Open"


@dataclass
class InspectionReport:
    session_label: str
    inspector: str
    answers: tuple[Answer, ...] = ()
    defects: tuple[Defect, ...] = ()
    omissions: tuple[tuple[Identifier, int], ...] = ()
    meeting_done: bool = False


@dataclass
class ChangeRequest:
    id: Identifier
    target_id: Identifier
    kind: str
    description: str = ""


@dataclass
class ImpactEntry:
    artifact_id: Identifier
    via: str
    blocking: bool = False


@dataclass
class ChangeAnalysisReport:
    change: ChangeRequest
    impacted: tuple[ImpactEntry, ...] = ()
    decision: str = ""


@dataclass
class VersionSnapshot:
    label: str
    state: "Project"


@dataclass
class Project:
    name: str = ""
    responsible: str = ""
    description: str = ""
    problem_domain: str = ""
    objective: str = ""
    glossary: dict[str, str] = field(default_factory=dict)
    agile: bool = False
    stakeholders: tuple[Stakeholder, ...] = ()
    needs: tuple[Need, ...] = ()
    requirements: tuple[Requirement, ...] = ()
    business_rules: tuple[BusinessRule, ...] = ()
    scenarios: tuple[IoTScenario, ...] = ()
    use_cases: tuple[IoTUseCase, ...] = ()
    use_case_diagram: str = ""
    catalog_instances: tuple[ArrangementCatalogInstance, ...] = ()
    canvas: CanvasRecord | None = None
    feasibility: FeasibilityRecord | None = None
    agreements: tuple[AgreementRecord, ...] = ()
    prototypes: tuple[PrototypeRecord, ...] = ()
    checklists: tuple[ChecklistRecord, ...] = ()
    inspection_reports: tuple[InspectionReport, ...] = ()
    change_reports: tuple[ChangeAnalysisReport, ...] = ()
    versions: list[VersionSnapshot] = field(default_factory=list)

    def requirement(self, ident: Identifier) -> Requirement | None:
        for r in self.requirements:
            if r.id == ident:
                return r
        return None

    def scenario(self, ident: Identifier) -> IoTScenario | None:
        for s in self.scenarios:
            if s.id == ident:
                return s
        return None

    def use_case(self, ident: Identifier) -> IoTUseCase | None:
        for u in self.use_cases:
            if u.id == ident:
                return u
        return None

    def owned_identifiers(self) -> list[Identifier]:
        ids: list[Identifier] = []
        ids.extend(s.id for s in self.stakeholders)
        ids.extend(n.id for n in self.needs)
        ids.extend(r.id for r in self.requirements)
        ids.extend(b.id for b in self.business_rules)
        ids.extend(s.id for s in self.scenarios)
        ids.extend(u.id for u in self.use_cases)
        ids.extend(c.change.id for c in self.change_reports)
        return ids


def normalize_project(project: Project) -> Project:
    """Return a copy with all collections in canonical order.

    Both the parser and programmatic builders funnel through this so that
    semantically equal projects compare equal as dataclasses.
    """
    return replace(
        project,
        glossary=dict(sorted(project.glossary.items())),
        stakeholders=tuple(sorted(project.stakeholders, key=lambda a: a.id)),
        needs=tuple(sorted(project.needs, key=lambda a: a.id)),
        requirements=tuple(sorted(project.requirements, key=lambda a: a.id)),
        business_rules=tuple(sorted(project.business_rules, key=lambda a: a.id)),
        scenarios=tuple(sorted(project.scenarios, key=lambda a: a.id)),
        use_cases=tuple(sorted(project.use_cases, key=lambda a: a.id)),
        catalog_instances=tuple(
            sorted(project.catalog_instances, key=lambda i: (i.arrangement_id, i.instance))
        ),
        agreements=tuple(
            sorted(project.agreements, key=lambda a: (a.artifact_kind, a.date.isoformat(), a.party))
        ),
        prototypes=tuple(
            sorted(project.prototypes, key=lambda p: (PROTOTYPE_KINDS.index(p.kind) if p.kind in PROTOTYPE_KINDS else 99, p.reference))
        ),
        checklists=tuple(sorted(project.checklists, key=lambda c: c.kind)),
        inspection_reports=tuple(sorted(project.inspection_reports, key=lambda r: r.session_label)),
        change_reports=tuple(sorted(project.change_reports, key=lambda c: c.change.id)),
    )


@dataclass
class ModelIssue:
    rule: str
    subject: str
    artifact_id: str
    field: str
    message: str

    def render(self) -> str:
        return f"{self.rule}({self.subject}): {self.message}"


def _issue(rule: str, subject: str, artifact_id: str, fieldname: str, message: str) -> ModelIssue:
    return ModelIssue(rule, subject, artifact_id, fieldname, message)


def classify_requirement(requirement: Requirement) -> str:
    """A requirement is an IoT requirement iff it claims IoT characteristics."""
    return "IoT" if requirement.iot_characteristics else "Conventional"


def allocate_id(project: Project, kind: str) -> Identifier:
    """Allocate the smallest free number for a kind, filling gaps first."""
    used = {i.number for i in project.owned_identifiers() if i.kind == kind}
    if kind == IIA:
        used |= {
            i.number
            for s in project.scenarios
            for i in s.arrangement_ids
            if i.kind == IIA
        }
    number = 1
    while number in used:
        number += 1
    return Identifier(kind, number)


def _check_enum(
    issues: list[ModelIssue],
    artifact_id: str,
    fieldname: str,
    value: str,
    legal: tuple[str, ...],
    allow_empty: bool = False,
) -> None:
    if allow_empty and value == "":
        return
    if value not in legal:
        issues.append(
            _issue(
                "invalid-enum",
                f"{artifact_id}.{fieldname}",
                artifact_id,
                fieldname,
                f"expected one of {', '.join(legal)}; got {value!r}",
            )
        )


def _check_refs(
    issues: list[ModelIssue],
    artifact_id: str,
    fieldname: str,
    refs: tuple[Identifier, ...],
    known: set[Identifier],
    kinds: tuple[str, ...],
) -> None:
    for ref in refs:
        if ref.kind not in kinds:
            issues.append(
                _issue(
                    "wrong-kind",
                    f"{artifact_id}.{fieldname} -> {ref.render()}",
                    artifact_id,
                    fieldname,
                    f"expected a reference of kind {', '.join(kinds)}",
                )
            )
        elif ref not in known:
            issues.append(
                _issue(
                    "dangling-ref",
                    f"{artifact_id} -> {ref.render()}",
                    artifact_id,
                    fieldname,
                    f"{fieldname} points at {ref.render()}, which does not exist",
                )
            )


def validate_model(project: Project) -> list[ModelIssue]:
    """Check every model invariant; returns issues sorted deterministically.

    The result is independent of collection order: shuffling artifact lists
    yields the same issue multiset.
    """
    issues: list[ModelIssue] = []

    known: set[Identifier] = set(project.owned_identifiers())
    # Arrangement kinds are a fixed catalog of nine.
    known |= {Identifier(IIA, n) for n in range(1, 10)}

    counts: dict[Identifier, int] = {}
    for ident in project.owned_identifiers():
        counts[ident] = counts.get(ident, 0) + 1
    for ident, count in counts.items():
        if count > 1:
            issues.append(
                _issue(
                    "duplicate-id",
                    ident.render(),
                    ident.render(),
                    "id",
                    f"identifier used {count} times",
                )
            )

    for stk in project.stakeholders:
        aid = stk.id.render()
        _check_enum(issues, aid, "interest", stk.interest, ORDINALS)
        _check_enum(issues, aid, "influence", stk.influence, ORDINALS)

    for need in project.needs:
        aid = need.id.render()
        _check_enum(issues, aid, "origin", need.origin, NEED_ORIGINS)

    for req in project.requirements:
        aid = req.id.render()
        _check_enum(issues, aid, "situation", req.situation, SITUATIONS)
        _check_enum(issues, aid, "priority", req.priority, PRIORITIES)
        for value in req.iot_characteristics:
            if value not in IOT_CHARACTERISTICS:
                issues.append(
                    _issue(
                        "invalid-enum",
                        f"{aid}.iot_characteristics",
                        aid,
                        "iot_characteristics",
                        f"expected one of {', '.join(IOT_CHARACTERISTICS)}; got {value!r}",
                    )
                )
        if req.id.kind == FR:
            _check_enum(issues, aid, "cost", req.cost, ORDINALS, allow_empty=True)
            _check_enum(issues, aid, "effort", req.effort, ORDINALS, allow_empty=True)
        else:
            for fieldname, value in (("cost", req.cost), ("effort", req.effort)):
                if value:
                    issues.append(
                        _issue(
                            "misplaced-field",
                            f"{aid}.{fieldname}",
                            aid,
                            fieldname,
                            "cost and effort apply to functional requirements only",
                        )
                    )
            if req.dependencies:
                issues.append(
                    _issue(
                        "misplaced-field",
                        f"{aid}.dependencies",
                        aid,
                        "dependencies",
                        "dependencies apply to functional requirements only",
                    )
                )
        _check_refs(issues, aid, "related_requirement_ids", req.related_requirement_ids, known, (FR, NFR))
        _check_refs(issues, aid, "dependencies", req.dependencies, known, (FR,))
        _check_refs(issues, aid, "related_need_ids", req.related_need_ids, known, (NEED,))

    for rule in project.business_rules:
        aid = rule.id.render()
        _check_enum(issues, aid, "situation", rule.situation, SITUATIONS)
        _check_enum(issues, aid, "priority", rule.priority, PRIORITIES)
        _check_refs(issues, aid, "related_need_ids", rule.related_need_ids, known, (NEED,))

    for scenario in project.scenarios:
        aid = scenario.id.render()
        if not scenario.arrangement_ids:
            issues.append(
                _issue("empty-list", f"{aid}.arrangement_ids", aid, "arrangement_ids",
                       "a scenario must use at least one interaction arrangement")
            )
        if not scenario.related_fr_ids:
            issues.append(
                _issue("empty-list", f"{aid}.related_fr_ids", aid, "related_fr_ids",
                       "a scenario must specify at least one functional requirement")
            )
        for actor in scenario.actors:
            if actor.category:
                _check_enum(issues, aid, "actors", actor.category, ACTOR_CATEGORIES)
        _check_refs(issues, aid, "related_fr_ids", scenario.related_fr_ids, known, (FR,))
        _check_refs(issues, aid, "arrangement_ids", scenario.arrangement_ids, known, (IIA,))
        _check_refs(issues, aid, "precedencies", scenario.precedencies, known, (SCENARIO,))
        _check_refs(issues, aid, "dependencies", scenario.dependencies, known, (SCENARIO,))
        for fieldname in ("precedencies", "dependencies"):
            if scenario.id in getattr(scenario, fieldname):
                issues.append(
                    _issue(
                        "self-reference",
                        f"{aid}.{fieldname}",
                        aid,
                        fieldname,
                        "a scenario cannot precede or depend on itself",
                    )
                )

    for case in project.use_cases:
        aid = case.id.render()
        if not case.requirement_ids:
            issues.append(
                _issue("empty-list", f"{aid}.requirement_ids", aid, "requirement_ids",
                       "a use case must trace to at least one requirement")
            )
        if not case.scenario_ids:
            issues.append(
                _issue("empty-list", f"{aid}.scenario_ids", aid, "scenario_ids",
                       "a use case must detail at least one scenario")
            )
        if not case.base_flow:
            issues.append(
                _issue("empty-list", f"{aid}.base_flow", aid, "base_flow",
                       "a use case needs a base flow with at least one step")
            )
        for actor in case.actors:
            _check_enum(issues, aid, "actors", actor.category, ACTOR_CATEGORIES)
        _check_refs(issues, aid, "requirement_ids", case.requirement_ids, known, (FR, NFR))
        _check_refs(issues, aid, "arrangement_ids", case.arrangement_ids, known, (IIA,))
        _check_refs(issues, aid, "scenario_ids", case.scenario_ids, known, (SCENARIO,))
        _check_refs(issues, aid, "associated_use_cases", case.associated_use_cases, known, (USE_CASE,))
        _check_refs(issues, aid, "business_rule_ids", case.business_rule_ids, known, (BR,))

    seen_instances: set[str] = set()
    for inst in project.catalog_instances:
        aid = inst.label()
        if aid in seen_instances:
            issues.append(
                _issue("duplicate-id", aid, aid, "instance", "catalog instance label reused")
            )
        seen_instances.add(aid)
        if not inst.scenario_ids:
            issues.append(
                _issue("empty-list", f"{aid}.scenario_ids", aid, "scenario_ids",
                       "a catalog instance must be tied to at least one scenario")
            )
        _check_refs(issues, aid, "scenario_ids", inst.scenario_ids, known, (SCENARIO,))
        if inst.arrangement_id.kind != IIA or not 1 <= inst.arrangement_id.number <= 9:
            issues.append(
                _issue("invalid-enum", f"{aid}.arrangement_id", aid, "arrangement_id",
                       "arrangements are IIA-01 through IIA-09")
            )
        for sid in inst.scenario_ids:
            scenario = project.scenario(sid)
            if scenario is not None and inst.arrangement_id not in scenario.arrangement_ids:
                issues.append(
                    _issue(
                        "undeclared-binding",
                        f"{aid} -> {sid.render()}",
                        aid,
                        "scenario_ids",
                        f"{sid.render()} does not list {inst.arrangement_id.render()} among its arrangements",
                    )
                )

    for agreement in project.agreements:
        subject = f"agreement({agreement.party})"
        _check_enum(issues, subject, "method", agreement.method, AGREEMENT_METHODS)
        if agreement.artifact_kind not in TEMPLATE_KINDS:
            issues.append(
                _issue("invalid-enum", f"{subject}.artifact_kind", subject, "artifact_kind",
                       f"expected a template kind; got {agreement.artifact_kind!r}")
            )

    for proto in project.prototypes:
        subject = f"prototype({proto.reference})"
        _check_enum(issues, subject, "kind", proto.kind, PROTOTYPE_KINDS)

    seen_checklists: set[str] = set()
    for record in project.checklists:
        subject = f"checklist({record.kind})"
        if record.kind not in ("RequirementsChecklist", "DiagramAndUseCasesChecklist"):
            issues.append(
                _issue("invalid-enum", f"{subject}.kind", subject, "kind",
                       "expected RequirementsChecklist or DiagramAndUseCasesChecklist")
            )
        if record.kind in seen_checklists:
            issues.append(_issue("duplicate-id", subject, subject, "kind", "one record per checklist kind"))
        seen_checklists.add(record.kind)
        for item in record.items:
            _check_enum(issues, subject, "items", item.verdict, VERDICTS)

    seen_sessions: set[str] = set()
    for report in project.inspection_reports:
        subject = f"inspection({report.session_label})"
        if report.session_label in seen_sessions:
            issues.append(_issue("duplicate-id", subject, subject, "session_label", "session label reused"))
        seen_sessions.add(report.session_label)
        for answer in report.answers:
            _check_enum(issues, subject, "answers", answer.verdict, VERDICTS)
            _check_refs(issues, subject, "answers", (answer.scenario_id,), known, (SCENARIO,))
        for defect in report.defects:
            _check_enum(issues, subject, "defects", defect.category, DEFECT_CATEGORIES)
            _check_enum(issues, subject, "defects", defect.status, DEFECT_STATUSES)

    for change in project.change_reports:
        aid = change.change.id.render()
        _check_enum(issues, aid, "kind", change.change.kind, CHANGE_KINDS)
        _check_enum(issues, aid, "decision", change.decision, CHANGE_DECISIONS, allow_empty=True)
        if change.change.kind in ("Modify", "Remove"):
            _check_refs(issues, aid, "target_id", (change.change.target_id,), known,
                        (FR, NFR, BR, NEED, STK, SCENARIO, USE_CASE, IIA))

    issues.sort(key=lambda i: (i.rule, i.subject, i.field, i.message))
    return issues
