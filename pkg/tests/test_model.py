from __future__ import annotations

import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projgen import random_project
from retiot.identifiers import BR, CR, FR, IIA, NEED, NFR, SCENARIO, STK, USE_CASE, Identifier
from retiot.model import (
    ACTOR_CATEGORIES,
    AGREEMENT_METHODS,
    CHANGE_DECISIONS,
    CHANGE_KINDS,
    CHARACTERISTIC_ALIASES,
    DEFECT_CATEGORIES,
    DEFECT_STATUSES,
    IOT_CHARACTERISTICS,
    NEED_ORIGINS,
    ORDINALS,
    PRIORITIES,
    PROTOTYPE_KINDS,
    SITUATIONS,
    TEMPLATE_KINDS,
    VERDICTS,
    ArrangementCatalogInstance,
    ChangeAnalysisReport,
    ChangeRequest,
    ChecklistItem,
    ChecklistRecord,
    InspectionReport,
    IoTScenario,
    Need,
    Project,
    Requirement,
    allocate_id,
    canon_characteristics,
    canon_enum,
    classify_requirement,
    normalize_project,
    validate_model,
)

ALL_ENUMS = (
    SITUATIONS, PRIORITIES, ORDINALS, IOT_CHARACTERISTICS, NEED_ORIGINS,
    ACTOR_CATEGORIES, AGREEMENT_METHODS, VERDICTS, DEFECT_CATEGORIES,
    DEFECT_STATUSES, PROTOTYPE_KINDS, CHANGE_KINDS, CHANGE_DECISIONS,
    TEMPLATE_KINDS,
)


def test_every_enum_literal_round_trips_through_canon():
    for legal in ALL_ENUMS:
        for literal in legal:
            assert canon_enum(literal, legal) == literal
            assert canon_enum(literal.lower(), legal) == literal
            assert canon_enum(f"  {literal.upper()}  ", legal) == literal


def test_canon_enum_passes_unknown_text_through():
    assert canon_enum("Banana", SITUATIONS) == "Banana"


def test_characteristic_alias_folds():
    for alias, target in CHARACTERISTIC_ALIASES.items():
        assert canon_characteristics([alias]) == (target,)
    assert canon_characteristics(["performance", "Sensing"]) == ("Sensing", "Actuation")
    assert canon_characteristics(["sensing", "SENSING"]) == ("Sensing",)


@given(st.lists(st.sampled_from(IOT_CHARACTERISTICS), max_size=4))
def test_classify_requirement_iff_characteristics(chars):
    req = Requirement(
        id=Identifier(FR, 1),
        description="x",
        situation="Proposed",
        priority="Low",
        iot_characteristics=tuple(dict.fromkeys(chars)),
    )
    expected = "IoT" if req.iot_characteristics else "Conventional"
    assert classify_requirement(req) == expected


def _clean(seed: int) -> Project:
    project = random_project(seed)
    assert validate_model(project) == []
    return project


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_generated_projects_are_valid(seed):
    _clean(seed)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=999))
def test_validate_model_is_order_independent(seed, shuffle_seed):
    project = random_project(seed)
    baseline = [issue.render() for issue in validate_model(project)]

    rng = random.Random(shuffle_seed)
    shuffled = replace(project)
    for attr in (
        "stakeholders", "needs", "requirements", "business_rules", "scenarios",
        "use_cases", "catalog_instances", "agreements", "prototypes",
        "checklists", "inspection_reports", "change_reports",
    ):
        items = list(getattr(shuffled, attr))
        rng.shuffle(items)
        setattr(shuffled, attr, tuple(items))
    assert [issue.render() for issue in validate_model(shuffled)] == baseline


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_validate_model_is_idempotent(seed):
    project = random_project(seed)
    first = [issue.render() for issue in validate_model(project)]
    second = [issue.render() for issue in validate_model(project)]
    assert first == second


@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=0, max_value=10_000),
    st.sampled_from((FR, NFR, BR, NEED, STK, SCENARIO, USE_CASE, CR)),
)
def test_allocate_id_never_collides(seed, kind):
    project = random_project(seed)
    allocated = allocate_id(project, kind)
    assert allocated not in set(project.owned_identifiers())


def test_allocate_id_fills_gaps_first():
    project = Project()
    project.needs = (
        Need(Identifier(NEED, 1), "a", "Business"),
        Need(Identifier(NEED, 3), "b", "Business"),
    )
    assert allocate_id(project, NEED) == Identifier(NEED, 2)


def test_duplicate_identifier_is_reported():
    project = Project()
    project.needs = (
        Need(Identifier(NEED, 1), "a", "Business"),
        Need(Identifier(NEED, 1), "b", "Stakeholder"),
    )
    rules = [issue.rule for issue in validate_model(project)]
    assert "duplicate-id" in rules


def test_dangling_and_wrong_kind_references():
    project = Project()
    project.requirements = (
        Requirement(
            id=Identifier(FR, 1),
            description="x",
            situation="Proposed",
            priority="Low",
            related_need_ids=(Identifier(NEED, 9),),
            dependencies=(),
        ),
        Requirement(
            id=Identifier(FR, 2),
            description="y",
            situation="Proposed",
            priority="Low",
            related_need_ids=(Identifier(BR, 1),),
        ),
    )
    rules = {issue.rule for issue in validate_model(project)}
    assert "dangling-ref" in rules
    assert "wrong-kind" in rules


def test_nfr_with_cost_effort_or_dependencies_is_misplaced():
    project = Project()
    project.requirements = (
        Requirement(
            id=Identifier(FR, 1), description="x", situation="Proposed", priority="Low"
        ),
        Requirement(
            id=Identifier(NFR, 1),
            description="y",
            situation="Proposed",
            priority="Low",
            cost="High",
            effort="Low",
            dependencies=(Identifier(FR, 1),),
        ),
    )
    misplaced = [i for i in validate_model(project) if i.rule == "misplaced-field"]
    assert {i.field for i in misplaced} == {"cost", "effort", "dependencies"}


def test_scenario_needs_arrangement_and_requirement():
    project = Project()
    project.scenarios = (IoTScenario(id=Identifier(SCENARIO, 1), title="t"),)
    empty = [i for i in validate_model(project) if i.rule == "empty-list"]
    assert {i.field for i in empty} == {"arrangement_ids", "related_fr_ids"}


def test_scenario_self_reference_is_flagged():
    project = Project()
    project.requirements = (
        Requirement(id=Identifier(FR, 1), description="x", situation="Proposed", priority="Low"),
    )
    sid = Identifier(SCENARIO, 1)
    project.scenarios = (
        IoTScenario(
            id=sid,
            title="t",
            arrangement_ids=(Identifier(IIA, 1),),
            related_fr_ids=(Identifier(FR, 1),),
            precedencies=(sid,),
        ),
    )
    rules = [issue.rule for issue in validate_model(project)]
    assert "self-reference" in rules


def test_catalog_instance_binding_must_be_declared():
    project = Project()
    project.requirements = (
        Requirement(id=Identifier(FR, 1), description="x", situation="Proposed", priority="Low"),
    )
    project.scenarios = (
        IoTScenario(
            id=Identifier(SCENARIO, 1),
            title="t",
            arrangement_ids=(Identifier(IIA, 2),),
            related_fr_ids=(Identifier(FR, 1),),
        ),
    )
    project.catalog_instances = (
        ArrangementCatalogInstance(Identifier(IIA, 1), 1, (Identifier(SCENARIO, 1),), {}),
    )
    rules = [issue.rule for issue in validate_model(project)]
    assert "undeclared-binding" in rules


def test_one_checklist_record_per_kind():
    project = Project()
    record = ChecklistRecord("RequirementsChecklist", "Dana", None, (ChecklistItem("q?", "Yes", ""),))
    project.checklists = (record, record)
    rules = [issue.rule for issue in validate_model(project)]
    assert "duplicate-id" in rules


def test_inspection_session_labels_unique():
    project = Project()
    project.inspection_reports = (
        InspectionReport("s1", "Kim", (), (), (), False),
        InspectionReport("s1", "Lee", (), (), (), False),
    )
    rules = [issue.rule for issue in validate_model(project)]
    assert "duplicate-id" in rules


def test_change_target_checked_for_modify_and_remove():
    project = Project()
    change = ChangeAnalysisReport(
        change=ChangeRequest(Identifier(CR, 1), Identifier(FR, 9), "Modify", "d"),
        impacted=(),
        decision="",
    )
    project.change_reports = (change,)
    assert any(issue.rule == "dangling-ref" for issue in validate_model(project))

    add_only = ChangeAnalysisReport(
        change=ChangeRequest(Identifier(CR, 1), Identifier(FR, 9), "Add", "d"),
        impacted=(),
        decision="",
    )
    project.change_reports = (add_only,)
    assert validate_model(project) == []


def test_normalize_project_is_idempotent_and_sorts():
    project = random_project(17)
    once = normalize_project(project)
    assert normalize_project(once) == once
    assert list(once.requirements) == sorted(once.requirements, key=lambda r: r.id)
    assert list(once.glossary) == sorted(once.glossary)


def test_model_issue_render_shape():
    project = Project()
    project.needs = (Need(Identifier(NEED, 1), "a", "Nowhere"),)
    issue = validate_model(project)[0]
    assert issue.render() == f"{issue.rule}({issue.subject}): {issue.message}"


@pytest.mark.parametrize("verdict", VERDICTS)
def test_checklist_verdicts_accepted(verdict):
    project = Project()
    project.checklists = (
        ChecklistRecord("RequirementsChecklist", "Dana", None, (ChecklistItem("q?", verdict, ""),)),
    )
    assert validate_model(project) == []
