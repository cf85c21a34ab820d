#!/usr/bin/env python3
"""Regenerate the committed test fixtures and golden files.

Three fixture projects cover the stage-gate scenarios:

  datacenter-project  a monitoring system for a high-performance computing
                      room (rack temperature, air humidity, energy
                      consumption) with every template filled; passes all
                      three stage gates
  datacenter-stage1   the same project cut back to Stage 1 material only;
                      passes gate 1 and fails gates 2 and 3
  datacenter-agile    an agile-methodology variant that ships no use-case
                      documents; gate 3 passes only through the exemption

Golden files freeze the gate reports for those projects plus the coverage
audit matrix. Run from the repository root:

    python3 scripts/build_fixtures.py
"""
from __future__ import annotations

import datetime as dt
import shutil
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from retiot.cli import run  # noqa: E402
from retiot.docformat import save_project  # noqa: E402
from retiot.gates import default_stage_data, render_gate_report, stage_gate  # noqa: E402
from retiot.identifiers import (  # noqa: E402
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
from retiot.inspection import default_question_set, record_inspection  # noqa: E402
from retiot.model import (  # noqa: E402
    Actor,
    AgreementRecord,
    Answer,
    ArrangementCatalogInstance,
    BusinessRule,
    CanvasRecord,
    ChangeAnalysisReport,
    ChangeRequest,
    ChecklistItem,
    ChecklistRecord,
    FeasibilityRecord,
    IoTScenario,
    IoTUseCase,
    Need,
    Project,
    PrototypeRecord,
    Requirement,
    Stakeholder,
    normalize_project,
    validate_model,
)
from retiot.trace import analyze_change, build_trace_graph, validate_links  # noqa: E402

FIXTURES = REPO / "tests" / "fixtures"
GOLDEN = REPO / "tests" / "golden"

DAY = dt.date(2026, 3, 9)


def _base_project() -> Project:
    p = Project(
        name="HPC Room Monitor",
        responsible="Marta Oliveira",
        description=(
            "Monitors the environment of a high-performance computing room: "
            "rack temperature, air humidity, and energy consumption per rack "
            "row, with alerts when readings leave the safe band."
        ),
        problem_domain="data center facility operations",
        objective=(
            "Keep the HPC room inside safe environmental bounds and give the "
            "operations team early warning before hardware is at risk."
        ),
        glossary={
            "CRAC": "computer room air conditioner",
            "PDU": "power distribution unit",
            "Safe band": "the approved range for a monitored reading",
        },
        agile=False,
    )
    p.stakeholders = (
        Stakeholder(
            Identifier(STK, 1),
            "Ana Reyes",
            "operations manager for the HPC room",
            interest="High",
            influence="High",
        ),
        Stakeholder(
            Identifier(STK, 2),
            "Tom Alves",
            "facilities engineer responsible for cooling and power",
            interest="High",
            influence="Medium",
        ),
    )
    p.needs = (
        Need(
            Identifier(NEED, 1),
            "protect HPC hardware from heat and humidity damage",
            "Business",
        ),
        Need(
            Identifier(NEED, 2),
            "track energy consumption per rack row for capacity planning",
            "Stakeholder",
        ),
    )
    p.requirements = (
        Requirement(
            id=Identifier(FR, 1),
            description="collect rack inlet temperature once per minute",
            situation="Approved",
            priority="High",
            iot_characteristics=("Sensing", "Connectivity"),
            related_need_ids=(Identifier(NEED, 1),),
        ),
        Requirement(
            id=Identifier(FR, 2),
            description="collect room air humidity once per minute",
            situation="Approved",
            priority="High",
            iot_characteristics=("Sensing", "Connectivity"),
            related_need_ids=(Identifier(NEED, 1),),
        ),
        Requirement(
            id=Identifier(FR, 3),
            description="collect energy consumption per rack row from the PDUs",
            situation="Approved",
            priority="Medium",
            iot_characteristics=("Sensing", "Identification", "Connectivity"),
            related_need_ids=(Identifier(NEED, 2),),
        ),
        Requirement(
            id=Identifier(FR, 4),
            description="display current readings on the operations dashboard",
            situation="Approved",
            priority="High",
            iot_characteristics=("Processing",),
            dependencies=(Identifier(FR, 1), Identifier(FR, 2), Identifier(FR, 3)),
            related_need_ids=(Identifier(NEED, 1),),
        ),
        Requirement(
            id=Identifier(FR, 5),
            description="alert the operations team when a reading leaves the safe band",
            situation="Approved",
            priority="High",
            iot_characteristics=("Processing", "Actuation"),
            dependencies=(Identifier(FR, 4),),
            related_need_ids=(Identifier(NEED, 1),),
        ),
        Requirement(
            id=Identifier(NFR, 1),
            description="a new reading reaches the dashboard within 30 seconds",
            situation="Approved",
            priority="High",
            iot_characteristics=("Connectivity",),
        ),
        Requirement(
            id=Identifier(NFR, 2),
            description="readings are retained for twelve months",
            situation="Approved",
            priority="Medium",
        ),
    )
    p.business_rules = (
        BusinessRule(
            Identifier(BR, 1),
            "safe-band thresholds are set and changed only by the operations manager",
            situation="Approved",
            priority="High",
            related_need_ids=(Identifier(NEED, 1),),
        ),
    )
    p.scenarios = (
        IoTScenario(
            id=Identifier(SCENARIO, 1),
            title="Environment sensors report rack conditions",
            actors=(
                Actor("Rack sensor", "Thing", "temperature and humidity probe"),
                Actor("Gateway", "SoftwareSystem", "collects and forwards readings"),
            ),
            actions=(
                "sensor samples temperature and humidity",
                "gateway timestamps the reading",
                "gateway stores the reading in the time-series database",
            ),
            arrangement_ids=(Identifier(IIA, 1),),
            related_fr_ids=(Identifier(FR, 1), Identifier(FR, 2)),
            collected_data="rack inlet temperature, room air humidity",
            actions_performed="periodic sampling and storage",
            interaction_sequence="sensor to gateway to database",
        ),
        IoTScenario(
            id=Identifier(SCENARIO, 2),
            title="PDUs report energy consumption",
            actors=(
                Actor("PDU", "Thing", "metered power distribution unit"),
                Actor("Gateway", "SoftwareSystem", "collects and forwards readings"),
            ),
            actions=(
                "PDU reports consumption per rack row",
                "gateway stores the reading in the time-series database",
            ),
            arrangement_ids=(Identifier(IIA, 1),),
            related_fr_ids=(Identifier(FR, 3),),
            collected_data="energy consumption per rack row",
            actions_performed="periodic sampling and storage",
            interaction_sequence="PDU to gateway to database",
        ),
        IoTScenario(
            id=Identifier(SCENARIO, 3),
            title="Operator watches the dashboard and receives alerts",
            actors=(
                Actor("Operator", "User", "operations team member on shift"),
                Actor("Dashboard", "SoftwareSystem", "presents readings and alerts"),
            ),
            actions=(
                "dashboard refreshes the current readings",
                "dashboard raises an alert when a reading leaves the safe band",
                "operator acknowledges the alert",
            ),
            arrangement_ids=(Identifier(IIA, 1),),
            related_fr_ids=(Identifier(FR, 4), Identifier(FR, 5)),
            precedencies=(Identifier(SCENARIO, 1), Identifier(SCENARIO, 2)),
            collected_data="none; consumes stored readings",
            actions_performed="display and alerting",
            interaction_sequence="database to dashboard to operator",
        ),
    )
    p.catalog_instances = (
        ArrangementCatalogInstance(
            arrangement_id=Identifier(IIA, 1),
            instance=1,
            scenario_ids=(Identifier(SCENARIO, 1), Identifier(SCENARIO, 2)),
            answers={
                "Who collects data?": "rack sensors and metered PDUs",
                "What type of data is collected?": (
                    "temperature, humidity, energy consumption"
                ),
                "Source of data": "rack rows of the HPC room",
            },
        ),
        ArrangementCatalogInstance(
            arrangement_id=Identifier(IIA, 1),
            instance=2,
            scenario_ids=(Identifier(SCENARIO, 3),),
            answers={
                "Who collects data?": "the dashboard reads stored measurements",
                "What type of data is collected?": "aggregated environment readings",
                "Source of data": "time-series database",
            },
        ),
    )
    p.canvas = CanvasRecord(
        image_ref="diagrams/iot-canvas.png",
        notes="canvas agreed in the kickoff workshop",
    )
    p.feasibility = FeasibilityRecord(
        market_demand=(
            "every HPC room on site currently relies on manual walk-through checks"
        ),
        economic_feasibility=(
            "sensor and PDU hardware is already installed; only integration work remains"
        ),
        impact_and_risks=(
            "sensor drift and gateway outages could hide a real incident; "
            "calibration and heartbeat checks mitigate both"
        ),
        technical_feasibility=(
            "off-the-shelf probes, existing network, standard time-series stack"
        ),
    )
    p.prototypes = (
        PrototypeRecord(kind="Low-fidelity", reference="dashboard-sketch.pdf", date=DAY),
        PrototypeRecord(
            kind="Evolved",
            reference="bench-rig-v2",
            date=DAY + dt.timedelta(days=45),
        ),
    )
    p.agreements = (
        AgreementRecord(
            party="Ana Reyes",
            method="Signature",
            date=DAY + dt.timedelta(days=3),
            artifact_kind="IoTProjectDetail",
        ),
    )
    return p


def _requirements_checklist() -> ChecklistRecord:
    return ChecklistRecord(
        kind="RequirementsChecklist",
        completed_by="Marta Oliveira",
        date=DAY + dt.timedelta(days=4),
        items=(
            ChecklistItem("every requirement names its originating need", "Yes", ""),
            ChecklistItem("priorities were agreed with the stakeholders", "Yes", ""),
            ChecklistItem("no requirement mixes two separate demands", "Yes", ""),
        ),
    )


def _diagram_checklist() -> ChecklistRecord:
    return ChecklistRecord(
        kind="DiagramAndUseCasesChecklist",
        completed_by="Tom Alves",
        date=DAY + dt.timedelta(days=40),
        items=(
            ChecklistItem("every use case traces to at least one scenario", "Yes", ""),
            ChecklistItem("the diagram shows all actors of the use cases", "Yes", ""),
        ),
    )


def _use_cases(p: Project) -> None:
    p.use_cases = (
        IoTUseCase(
            id=Identifier(USE_CASE, 1),
            title="Monitor HPC room conditions",
            requirement_ids=(
                Identifier(FR, 1),
                Identifier(FR, 2),
                Identifier(FR, 3),
                Identifier(FR, 4),
            ),
            arrangement_ids=(Identifier(IIA, 1),),
            scenario_ids=(Identifier(SCENARIO, 1), Identifier(SCENARIO, 2)),
            preconditions="sensors and PDUs are powered and reachable",
            postconditions="current readings are stored and visible",
            actors=(
                Actor("Rack sensor", "Thing", "temperature and humidity probe"),
                Actor("PDU", "Thing", "metered power distribution unit"),
                Actor("Gateway", "SoftwareSystem", "collects and forwards readings"),
            ),
            base_flow=(
                "devices sample their readings",
                "gateway stores each reading",
                "dashboard shows the current values",
            ),
            alternative_flows=(
                ("gateway buffers readings while the database is down",),
            ),
            business_rule_ids=(Identifier(BR, 1),),
        ),
        IoTUseCase(
            id=Identifier(USE_CASE, 2),
            title="Alert on unsafe readings",
            requirement_ids=(Identifier(FR, 5),),
            scenario_ids=(Identifier(SCENARIO, 3),),
            preconditions="safe-band thresholds are configured",
            postconditions="the alert is acknowledged or escalated",
            actors=(
                Actor("Operator", "User", "operations team member on shift"),
                Actor("Dashboard", "SoftwareSystem", "presents readings and alerts"),
            ),
            base_flow=(
                "a reading leaves the safe band",
                "the dashboard raises an alert",
                "the operator acknowledges it",
            ),
            exception_flows=(
                ("unacknowledged alerts escalate to the facilities engineer",),
            ),
            business_rule_ids=(Identifier(BR, 1),),
        ),
    )
    p.use_case_diagram = "diagrams/use-cases.png"


def _clean_inspection(p: Project):
    questions = default_question_set()
    answers = []
    for scenario in p.scenarios:
        for number in (1, 2, 3, 4, 5, 6, 7, 24, 25):
            answers.append(Answer(number, scenario.id, "Yes", ""))
    return record_inspection(
        p, answers, "baseline-review", "Priya Natarajan", questions
    )


def datacenter_project() -> Project:
    p = _base_project()
    _use_cases(p)
    p.checklists = (_requirements_checklist(), _diagram_checklist())
    p = normalize_project(p)
    p.inspection_reports = (_clean_inspection(p),)

    request = ChangeRequest(
        id=Identifier(CR, 1),
        target_id=Identifier(FR, 3),
        kind="Modify",
        description="report energy per rack instead of per rack row",
    )
    draft = analyze_change(p, request)
    p.change_reports = (
        ChangeAnalysisReport(
            change=draft.change, impacted=draft.impacted, decision="Approved"
        ),
    )
    return normalize_project(p)


def stage1_project() -> Project:
    p = _base_project()
    p.checklists = (_requirements_checklist(),)
    # Stage 1 stops before design material exists.
    p.prototypes = ()
    p.agreements = ()
    return normalize_project(p)


def agile_project() -> Project:
    p = datacenter_project()
    p.agile = True
    p.use_cases = ()
    p.use_case_diagram = ""
    p.checklists = tuple(
        c for c in p.checklists if c.kind != "DiagramAndUseCasesChecklist"
    )
    return normalize_project(p)


# ---------------------------------------------------------------------------
# answer files for the end-to-end flow


SEEDED_ANSWERS = """\
== Session ==
Label: defect-hunt
Inspector: Priya Natarajan

== Answers ==

| Scenario | Question | Verdict | Note |
| IoT S01 | 1 | Yes |  |
| IoT S01 | 2 | No | the detail document never states the specific purpose |
| IoT S01 | 3 | Yes |  |
| IoT S02 | 1 | Yes |  |
| IoT S03 | 1 | Yes |  |
"""

CORRECTED_ANSWERS = """\
== Session ==
Label: defect-hunt
Inspector: Priya Natarajan

== Answers ==

| Scenario | Question | Verdict | Note |
| IoT S01 | 1 | Yes |  |
| IoT S01 | 2 | Yes |  |
| IoT S01 | 3 | Yes |  |
| IoT S02 | 1 | Yes |  |
| IoT S03 | 1 | Yes |  |
"""


# ---------------------------------------------------------------------------
# writing


def _save_fixture(project: Project, name: str) -> Path:
    root = FIXTURES / name
    if root.exists():
        shutil.rmtree(root)
    save_project(project, root)
    return root


def _verify(project: Project, name: str, ready: dict[int, bool]) -> None:
    issues = list(validate_model(project))
    issues += list(validate_links(build_trace_graph(project)))
    if issues:
        raise SystemExit(
            f"{name}: fixture does not validate:\n"
            + "\n".join(i.render() for i in issues)
        )
    data = default_stage_data()
    for stage, expect in ready.items():
        report = stage_gate(project, stage, data)
        if report.ready != expect:
            raise SystemExit(
                f"{name}: gate {stage} ready={report.ready}, expected {expect}\n"
                + render_gate_report(report)
            )


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    GOLDEN.mkdir(parents=True, exist_ok=True)

    full = datacenter_project()
    _verify(full, "datacenter-project", {1: True, 2: True, 3: True})
    full_dir = _save_fixture(full, "datacenter-project")

    stage1 = stage1_project()
    _verify(stage1, "datacenter-stage1", {1: True, 2: False, 3: False})
    stage1_dir = _save_fixture(stage1, "datacenter-stage1")

    agile = agile_project()
    _verify(agile, "datacenter-agile", {1: True, 2: True, 3: True})
    agile_dir = _save_fixture(agile, "datacenter-agile")
    strict = stage_gate(agile, 3, agile=False)
    if strict.ready:
        raise SystemExit("datacenter-agile: gate 3 must fail without the exemption")

    (FIXTURES / "seeded-answers.retiot").write_text(SEEDED_ANSWERS, encoding="utf-8")
    (FIXTURES / "corrected-answers.retiot").write_text(
        CORRECTED_ANSWERS, encoding="utf-8"
    )

    goldens: dict[str, str] = {}
    for label, root in (("full", full_dir), ("stage1", stage1_dir)):
        for stage in (1, 2, 3):
            outcome = run(["gate", str(root), "--stage", str(stage)])
            goldens[f"gate-{label}-{stage}.txt"] = outcome.stdout
    goldens["gate-agile-3.txt"] = run(
        ["gate", str(agile_dir), "--stage", "3"]
    ).stdout
    goldens["gate-agile-3-strict.txt"] = render_gate_report(strict) + "\n"
    goldens["audit-table1.txt"] = run(["audit"]).stdout

    for name, text in goldens.items():
        (GOLDEN / name).write_text(text, encoding="utf-8")

    print(f"fixtures: {full_dir}, {stage1_dir}, {agile_dir}")
    print(f"goldens: {len(goldens)} files in {GOLDEN}")


if __name__ == "__main__":
    main()
