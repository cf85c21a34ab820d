from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projgen import brute_force_closure, random_project, random_trace_project
from retiot.identifiers import BR, CR, FR, IIA, NEED, NFR, SCENARIO, USE_CASE, Identifier
from retiot.model import (
    BusinessRule,
    ChangeRequest,
    IoTScenario,
    IoTUseCase,
    Need,
    Project,
    Requirement,
    normalize_project,
)
from retiot.trace import (
    BOTH,
    DOWNSTREAM,
    UPSTREAM,
    Edge,
    TraceGraph,
    analyze_change,
    build_trace_graph,
    impact_of_change,
    validate_links,
)

ALLOWED_EDGE_KINDS = {
    ("realizes", NEED, FR),
    ("realizes", NEED, NFR),
    ("realizes", NEED, BR),
    ("dependency", FR, FR),
    ("related", FR, FR),
    ("related", FR, NFR),
    ("related", NFR, FR),
    ("related", NFR, NFR),
    ("specified-by", FR, SCENARIO),
    ("uses", SCENARIO, IIA),
    ("detailed-by", SCENARIO, USE_CASE),
    ("constrains", BR, USE_CASE),
}


def _pipeline_project() -> Project:
    project = Project()
    project.needs = (Need(Identifier(NEED, 1), "monitoring need", "Business"),)
    project.requirements = (
        Requirement(
            id=Identifier(FR, 1),
            description="collect readings",
            situation="Approved",
            priority="High",
            related_need_ids=(Identifier(NEED, 1),),
        ),
        Requirement(
            id=Identifier(FR, 2),
            description="show dashboard",
            situation="Approved",
            priority="High",
            dependencies=(Identifier(FR, 1),),
        ),
        Requirement(
            id=Identifier(NFR, 1),
            description="low latency",
            situation="Proposed",
            priority="Medium",
            related_requirement_ids=(Identifier(FR, 2),),
        ),
    )
    project.business_rules = (
        BusinessRule(Identifier(BR, 1), "retention", "Approved", "Low", (Identifier(NEED, 1),)),
    )
    project.scenarios = (
        IoTScenario(
            id=Identifier(SCENARIO, 1),
            title="collect",
            arrangement_ids=(Identifier(IIA, 1),),
            related_fr_ids=(Identifier(FR, 1), Identifier(FR, 2)),
        ),
    )
    project.use_cases = (
        IoTUseCase(
            id=Identifier(USE_CASE, 1),
            title="view",
            requirement_ids=(Identifier(FR, 2),),
            scenario_ids=(Identifier(SCENARIO, 1),),
            base_flow=("open dashboard",),
            business_rule_ids=(Identifier(BR, 1),),
        ),
    )
    return normalize_project(project)


def test_graph_edges_follow_declared_references():
    graph = build_trace_graph(_pipeline_project())
    edges = {(e.type, e.source.render(), e.target.render()) for e in graph.edges}
    assert edges == {
        ("realizes", "NEED01", "FR01"),
        ("realizes", "NEED01", "BR01"),
        ("dependency", "FR01", "FR02"),
        ("related", "NFR01", "FR02"),
        ("specified-by", "FR01", "IoT S01"),
        ("specified-by", "FR02", "IoT S01"),
        ("uses", "IoT S01", "IIA-01"),
        ("detailed-by", "IoT S01", "IoT UC01"),
        ("constrains", "BR01", "IoT UC01"),
    }


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_edges_only_between_allowed_kind_pairs(seed):
    graph = build_trace_graph(random_project(seed))
    for edge in graph.edges:
        assert (edge.type, edge.source.kind, edge.target.kind) in ALLOWED_EDGE_KINDS


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_build_trace_graph_is_pure(seed):
    project = random_project(seed)
    assert build_trace_graph(project) == build_trace_graph(random_project(seed))


def test_impact_excludes_target_and_follows_directions():
    graph = build_trace_graph(_pipeline_project())
    fr1 = Identifier(FR, 1)
    down = impact_of_change(graph, fr1, DOWNSTREAM)
    assert fr1 not in down
    assert down == {
        Identifier(FR, 2),
        Identifier(SCENARIO, 1),
        Identifier(IIA, 1),
        Identifier(USE_CASE, 1),
    }
    up = impact_of_change(graph, fr1, UPSTREAM)
    assert up == {Identifier(NEED, 1)}
    assert impact_of_change(graph, fr1, BOTH) == down | up
    assert impact_of_change(graph, fr1) == down | up


def test_impact_direction_is_case_insensitive():
    graph = build_trace_graph(_pipeline_project())
    fr1 = Identifier(FR, 1)
    assert impact_of_change(graph, fr1, "downstream") == impact_of_change(graph, fr1, DOWNSTREAM)


def test_impact_rejects_unknown_target_and_direction():
    graph = build_trace_graph(_pipeline_project())
    with pytest.raises(ValueError):
        impact_of_change(graph, Identifier(FR, 99))
    with pytest.raises(ValueError):
        impact_of_change(graph, Identifier(FR, 1), "sideways")


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_closure_matches_brute_force(seed):
    graph = build_trace_graph(random_trace_project(seed))
    for node in graph.nodes:
        for direction in (DOWNSTREAM, UPSTREAM, BOTH):
            assert impact_of_change(graph, node, direction) == brute_force_closure(
                graph.edges, node, direction
            )


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_downstream_upstream_duality(seed):
    graph = build_trace_graph(random_trace_project(seed))
    down = {n: impact_of_change(graph, n, DOWNSTREAM) for n in graph.nodes}
    up = {n: impact_of_change(graph, n, UPSTREAM) for n in graph.nodes}
    for u in graph.nodes:
        for v in graph.nodes:
            assert (v in down[u]) == (u in up[v])


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=999))
def test_impact_is_monotone_under_added_edges(seed, pick):
    import random as _random

    graph = build_trace_graph(random_trace_project(seed))
    if len(graph.nodes) < 2:
        return
    rng = _random.Random(pick)
    source, target = rng.sample(list(graph.nodes), 2)
    grown = TraceGraph(
        graph.nodes, graph.edges + (Edge(source, target, "related"),), graph.situations
    )
    for node in graph.nodes:
        for direction in (DOWNSTREAM, UPSTREAM, BOTH):
            assert impact_of_change(graph, node, direction) <= impact_of_change(
                grown, node, direction
            )


def test_impact_terminates_on_cycles():
    a, b = Identifier(FR, 1), Identifier(FR, 2)
    graph = TraceGraph((a, b), (Edge(a, b, "related"), Edge(b, a, "related")), {})
    assert impact_of_change(graph, a, DOWNSTREAM) == {b}
    assert impact_of_change(graph, a, BOTH) == {b}


def test_validate_links_flags_orphans_and_unspecified():
    project = Project()
    project.requirements = (
        Requirement(id=Identifier(FR, 1), description="x", situation="Approved", priority="Low"),
        Requirement(id=Identifier(FR, 2), description="y", situation="Proposed", priority="Low"),
    )
    project.scenarios = (
        IoTScenario(
            id=Identifier(SCENARIO, 1),
            title="has requirement",
            arrangement_ids=(Identifier(IIA, 1),),
            related_fr_ids=(Identifier(FR, 2),),
        ),
        IoTScenario(
            id=Identifier(SCENARIO, 2),
            title="orphan",
            arrangement_ids=(Identifier(IIA, 1),),
            related_fr_ids=(),
        ),
    )
    project.use_cases = (
        IoTUseCase(
            id=Identifier(USE_CASE, 1),
            title="floating",
            requirement_ids=(Identifier(FR, 1),),
            scenario_ids=(),
            base_flow=("step",),
        ),
    )
    issues = validate_links(build_trace_graph(project))
    rules = [(i.rule, i.subject) for i in issues]
    assert ("orphan-scenario", "IoT S02") in rules
    assert ("orphan-use-case", "IoT UC01") in rules
    assert ("unspecified-requirement", "FR01") in rules
    # Proposed FR02 is carried by a scenario and exempt anyway
    assert all(subject != "FR02" for _, subject in rules)


def test_validate_links_clean_pipeline():
    assert validate_links(build_trace_graph(_pipeline_project())) == []


def test_analyze_change_add_has_empty_impact():
    project = _pipeline_project()
    change = ChangeRequest(Identifier(CR, 1), Identifier(FR, 9), "Add", "new sensor")
    report = analyze_change(project, change)
    assert report.impacted == ()
    assert report.decision == ""


def test_analyze_change_remove_marks_downstream_blocking():
    project = _pipeline_project()
    change = ChangeRequest(Identifier(CR, 1), Identifier(FR, 1), "Remove", "drop")
    report = analyze_change(project, change)
    by_id = {e.artifact_id: e for e in report.impacted}
    assert by_id[Identifier(FR, 2)].blocking
    assert by_id[Identifier(FR, 2)].via == "downstream"
    assert not by_id[Identifier(NEED, 1)].blocking
    assert by_id[Identifier(NEED, 1)].via == "upstream"
    assert list(by_id) == sorted(by_id)


def test_analyze_change_modify_is_never_blocking():
    project = _pipeline_project()
    change = ChangeRequest(Identifier(CR, 1), Identifier(FR, 1), "Modify", "tune")
    report = analyze_change(project, change)
    assert report.impacted
    assert not any(e.blocking for e in report.impacted)


def test_analyze_change_via_both_when_reachable_both_ways():
    project = Project()
    project.needs = (Need(Identifier(NEED, 1), "n", "Business"),)
    project.requirements = (
        Requirement(
            id=Identifier(FR, 1),
            description="a",
            situation="Proposed",
            priority="Low",
            related_need_ids=(Identifier(NEED, 1),),
        ),
        Requirement(
            id=Identifier(FR, 2),
            description="b",
            situation="Proposed",
            priority="Low",
            dependencies=(Identifier(FR, 1),),
            related_requirement_ids=(Identifier(FR, 1),),
        ),
    )
    change = ChangeRequest(Identifier(CR, 1), Identifier(FR, 1), "Modify", "loop")
    report = analyze_change(normalize_project(project), change)
    entry = {e.artifact_id: e for e in report.impacted}[Identifier(FR, 2)]
    assert entry.via == "both"
