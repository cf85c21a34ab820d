"""Typed traceability graph, link validation, and change impact analysis."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .identifiers import BR, FR, IIA, NEED, NFR, SCENARIO, USE_CASE, Identifier
from .model import ChangeAnalysisReport, ChangeRequest, ImpactEntry, Project

REALIZES = "realizes"
DEPENDENCY = "dependency"
RELATED = "related"
SPECIFIED_BY = "specified-by"
USES = "uses"
DETAILED_BY = "detailed-by"
CONSTRAINS = "constrains"

DOWNSTREAM = "Downstream"
UPSTREAM = "Upstream"
BOTH = "Both"


@dataclass(frozen=True)
class Edge:
    source: Identifier
    target: Identifier
    type: str


@dataclass
class TraceGraph:
    nodes: tuple[Identifier, ...] = ()
    edges: tuple[Edge, ...] = ()
    # Requirement situations, captured so link checks need no project handle.
    situations: dict[Identifier, str] = field(default_factory=dict)

    def forward(self) -> dict[Identifier, list[tuple[Identifier, str]]]:
        table: dict[Identifier, list[tuple[Identifier, str]]] = {n: [] for n in self.nodes}
        for edge in self.edges:
            table[edge.source].append((edge.target, edge.type))
        return table

    def backward(self) -> dict[Identifier, list[tuple[Identifier, str]]]:
        table: dict[Identifier, list[tuple[Identifier, str]]] = {n: [] for n in self.nodes}
        for edge in self.edges:
            table[edge.target].append((edge.source, edge.type))
        return table


def build_trace_graph(project: Project) -> TraceGraph:
    """Derive the typed graph from declared cross-references.

    Edges run in the direction change impact flows: a dependency edge points
    from the requirement depended on to the requirement that depends on it.
    References that do not resolve are skipped; validate_model reports them.
    """
    nodes: list[Identifier] = []
    for ident in project.owned_identifiers():
        if ident.kind != "CR" and ident not in nodes:
            nodes.append(ident)
    for scenario in project.scenarios:
        for arrangement in scenario.arrangement_ids:
            if arrangement not in nodes:
                nodes.append(arrangement)
    for case in project.use_cases:
        for arrangement in case.arrangement_ids:
            if arrangement not in nodes:
                nodes.append(arrangement)
    node_set = set(nodes)

    edges: list[Edge] = []

    def add(source: Identifier, target: Identifier, type_: str) -> None:
        if source in node_set and target in node_set:
            edge = Edge(source, target, type_)
            if edge not in edges:
                edges.append(edge)

    for req in project.requirements:
        for need in req.related_need_ids:
            add(need, req.id, REALIZES)
        for dep in req.dependencies:
            add(dep, req.id, DEPENDENCY)
        for related in req.related_requirement_ids:
            add(req.id, related, RELATED)
    for rule in project.business_rules:
        for need in rule.related_need_ids:
            add(need, rule.id, REALIZES)
    for scenario in project.scenarios:
        for fr in scenario.related_fr_ids:
            add(fr, scenario.id, SPECIFIED_BY)
        for arrangement in scenario.arrangement_ids:
            add(scenario.id, arrangement, USES)
    for case in project.use_cases:
        for sid in case.scenario_ids:
            add(sid, case.id, DETAILED_BY)
        for rule_id in case.business_rule_ids:
            add(rule_id, case.id, CONSTRAINS)

    situations = {r.id: r.situation for r in project.requirements}
    return TraceGraph(tuple(nodes), tuple(edges), situations)


@dataclass
class TraceIssue:
    rule: str
    subject: str
    message: str

    def render(self) -> str:
        return f"{self.rule}({self.subject}): {self.message}"


def validate_links(graph: TraceGraph) -> list[TraceIssue]:
    """Flag scenarios without a specifying requirement, use cases without a
    detailing scenario, and Approved functional requirements never carried
    into a scenario. Proposed and Canceled requirements are exempt."""
    issues: list[TraceIssue] = []
    incoming = graph.backward()
    outgoing = graph.forward()

    for node in graph.nodes:
        if node.kind == SCENARIO:
            if not any(t == SPECIFIED_BY for _, t in incoming[node]):
                issues.append(
                    TraceIssue(
                        "orphan-scenario",
                        node.render(),
                        "no functional requirement is specified by this scenario",
                    )
                )
        elif node.kind == USE_CASE:
            if not any(t == DETAILED_BY for _, t in incoming[node]):
                issues.append(
                    TraceIssue(
                        "orphan-use-case",
                        node.render(),
                        "no scenario is detailed by this use case",
                    )
                )
        elif node.kind == FR:
            if graph.situations.get(node) != "Approved":
                continue
            if not any(t == SPECIFIED_BY for _, t in outgoing[node]):
                issues.append(
                    TraceIssue(
                        "unspecified-requirement",
                        node.render(),
                        "approved requirement is not specified by any scenario",
                    )
                )
    issues.sort(key=lambda i: (i.rule, i.subject))
    return issues


def _closure(
    adjacency: dict[Identifier, list[tuple[Identifier, str]]], start: Identifier
) -> set[Identifier]:
    reached: set[Identifier] = set()
    queue: deque[Identifier] = deque([start])
    while queue:
        node = queue.popleft()
        for neighbor, _ in adjacency[node]:
            if neighbor not in reached and neighbor != start:
                reached.add(neighbor)
                queue.append(neighbor)
    return reached


def impact_of_change(
    graph: TraceGraph, target: Identifier, direction: str = BOTH
) -> set[Identifier]:
    """Transitive closure from the target, excluding the target itself."""
    if target not in set(graph.nodes):
        raise ValueError(f"unknown artifact {target.render()}")
    normalized = direction.strip().lower()
    if normalized not in ("downstream", "upstream", "both"):
        raise ValueError(f"direction must be Downstream, Upstream, or Both; got {direction!r}")
    result: set[Identifier] = set()
    if normalized in ("downstream", "both"):
        result |= _closure(graph.forward(), target)
    if normalized in ("upstream", "both"):
        result |= _closure(graph.backward(), target)
    return result


def analyze_change(project: Project, change: ChangeRequest) -> ChangeAnalysisReport:
    """Compute the impact set for a change request; the decision stays open.

    Add requests touch nothing yet, so their impact set is empty. Remove
    requests mark downstream dependents as blocking.
    """
    if change.kind == "Add":
        return ChangeAnalysisReport(change=change, impacted=(), decision="")
    graph = build_trace_graph(project)
    downstream = impact_of_change(graph, change.target_id, DOWNSTREAM)
    upstream = impact_of_change(graph, change.target_id, UPSTREAM)

    entries: list[ImpactEntry] = []
    for node in sorted(downstream | upstream):
        if node in downstream and node in upstream:
            via = "both"
        elif node in downstream:
            via = "downstream"
        else:
            via = "upstream"
        blocking = change.kind == "Remove" and node in downstream
        entries.append(ImpactEntry(node, via, blocking))
    return ChangeAnalysisReport(change=change, impacted=tuple(entries), decision="")
