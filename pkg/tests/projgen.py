"""Seeded random builders for property tests.

Everything here is deterministic in the seed so a failing case replays
exactly. random_project always returns a normalized project that passes
validate_model; text fields stay clear of pipes, commas in list context,
and newlines so the document grammar can carry them verbatim.
"""

from __future__ import annotations

import datetime as dt
import random
from dataclasses import replace

from retiot.identifiers import BR, CR, FR, IIA, NEED, NFR, SCENARIO, STK, USE_CASE, Identifier
from retiot.model import (
    ACTOR_CATEGORIES,
    AGREEMENT_METHODS,
    CHANGE_DECISIONS,
    CHANGE_KINDS,
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
    Need,
    PrototypeRecord,
    Project,
    Requirement,
    Stakeholder,
    allocate_id,
    normalize_project,
)
from retiot.versioning import snapshot_version

WORDS = (
    "sensor", "gateway", "reading", "alert", "threshold", "humidity",
    "temperature", "energy", "rack", "cluster", "dashboard", "operator",
    "nightly", "audit", "probe", "relay", "uplink", "archive", "window",
    "policy", "drift", "calibration", "beacon", "fallback", "quorum",
)

IIA01_PROMPT_ANSWERS = {
    "Who collects data?": "environment sensors",
    "What type of data is collected?": "temperature and humidity readings",
    "Source of data": "machine room racks",
}


def _words(rng: random.Random, lo: int = 2, hi: int = 6) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def _name(rng: random.Random) -> str:
    return _words(rng, 1, 2).title()


def _maybe(rng: random.Random, p: float, value: str) -> str:
    return value if rng.random() < p else ""


def _date(rng: random.Random) -> dt.date:
    return dt.date(2026, rng.randint(1, 12), rng.randint(1, 28))


def _sample_ids(rng: random.Random, pool: list[Identifier], lo: int, hi: int) -> tuple[Identifier, ...]:
    if not pool:
        return ()
    count = rng.randint(lo, min(hi, len(pool)))
    return tuple(rng.sample(pool, count))


def random_project(seed: int, max_each: int = 5, with_versions: bool = True) -> Project:
    """A valid project with a random subset of every artifact family."""
    rng = random.Random(seed)
    project = Project(
        name=_maybe(rng, 0.9, _words(rng, 1, 3).title()),
        responsible=_maybe(rng, 0.8, _name(rng)),
        description=_maybe(rng, 0.7, _words(rng)),
        problem_domain=_maybe(rng, 0.6, _words(rng, 1, 3)),
        objective=_maybe(rng, 0.6, _words(rng)),
        agile=rng.random() < 0.3,
    )
    project.glossary = {
        _words(rng, 1, 2) + f" {i}": _words(rng) for i in range(rng.randint(0, 3))
    }

    n_scn = rng.randint(0, max_each)
    n_uc = rng.randint(0, max_each) if n_scn else 0
    n_fr = rng.randint(1 if n_scn or n_uc else 0, max_each)
    n_nfr = rng.randint(0, max_each)
    n_need = rng.randint(0, max_each)
    n_stk = rng.randint(0, max_each)
    n_br = rng.randint(0, max_each)

    project.stakeholders = tuple(
        Stakeholder(
            Identifier(STK, i),
            _name(rng),
            _maybe(rng, 0.8, _words(rng, 1, 4)),
            rng.choice(ORDINALS),
            rng.choice(ORDINALS),
        )
        for i in range(1, n_stk + 1)
    )
    need_ids = [Identifier(NEED, i) for i in range(1, n_need + 1)]
    project.needs = tuple(
        Need(nid, _words(rng), rng.choice(NEED_ORIGINS)) for nid in need_ids
    )

    fr_ids = [Identifier(FR, i) for i in range(1, n_fr + 1)]
    nfr_ids = [Identifier(NFR, i) for i in range(1, n_nfr + 1)]
    requirements: list[Requirement] = []
    for number, fid in enumerate(fr_ids, start=1):
        requirements.append(
            Requirement(
                id=fid,
                description=_words(rng),
                situation=rng.choice(SITUATIONS),
                priority=rng.choice(PRIORITIES),
                iot_characteristics=tuple(
                    sorted(
                        rng.sample(IOT_CHARACTERISTICS, rng.randint(0, 2)),
                        key=IOT_CHARACTERISTICS.index,
                    )
                ),
                cost=_maybe(rng, 0.6, rng.choice(ORDINALS)),
                effort=_maybe(rng, 0.6, rng.choice(ORDINALS)),
                reused=rng.random() < 0.2,
                related_requirement_ids=_sample_ids(rng, fr_ids[: number - 1] + nfr_ids, 0, 2),
                dependencies=_sample_ids(rng, fr_ids[: number - 1], 0, 2),
                related_need_ids=_sample_ids(rng, need_ids, 0, 2),
            )
        )
    for nid in nfr_ids:
        requirements.append(
            Requirement(
                id=nid,
                description=_words(rng),
                situation=rng.choice(SITUATIONS),
                priority=rng.choice(PRIORITIES),
                iot_characteristics=tuple(
                    sorted(
                        rng.sample(IOT_CHARACTERISTICS, rng.randint(0, 2)),
                        key=IOT_CHARACTERISTICS.index,
                    )
                ),
                related_requirement_ids=_sample_ids(rng, fr_ids, 0, 2),
                related_need_ids=_sample_ids(rng, need_ids, 0, 2),
            )
        )
    project.requirements = tuple(requirements)

    br_ids = [Identifier(BR, i) for i in range(1, n_br + 1)]
    project.business_rules = tuple(
        BusinessRule(
            bid,
            _words(rng),
            rng.choice(SITUATIONS),
            rng.choice(PRIORITIES),
            _sample_ids(rng, need_ids, 0, 2),
        )
        for bid in br_ids
    )

    scn_ids = [Identifier(SCENARIO, i) for i in range(1, n_scn + 1)]
    iia_pool = [Identifier(IIA, n) for n in range(1, 10)]
    scenarios: list[IoTScenario] = []
    for number, sid in enumerate(scn_ids, start=1):
        scenarios.append(
            IoTScenario(
                id=sid,
                title=_words(rng, 2, 4).capitalize(),
                actors=tuple(
                    ActorRef(_name(rng) + f" {i}", _maybe(rng, 0.8, rng.choice(ACTOR_CATEGORIES)))
                    for i in range(rng.randint(0, 3))
                ),
                actions=tuple(_words(rng, 1, 3) for _ in range(rng.randint(0, 3))),
                arrangement_ids=_sample_ids(rng, iia_pool, 1, 3),
                related_fr_ids=_sample_ids(rng, fr_ids, 1, 3),
                precedencies=_sample_ids(rng, scn_ids[: number - 1], 0, 2),
                dependencies=_sample_ids(rng, scn_ids[: number - 1], 0, 2),
                collected_data=_maybe(rng, 0.7, _words(rng)),
                actions_performed=_maybe(rng, 0.5, _words(rng)),
                interaction_sequence=tuple(_words(rng, 2, 5) for _ in range(rng.randint(0, 4))),
            )
        )
    project.scenarios = tuple(scenarios)

    uc_ids = [Identifier(USE_CASE, i) for i in range(1, n_uc + 1)]
    use_cases: list[IoTUseCase] = []
    for number, uid in enumerate(uc_ids, start=1):
        use_cases.append(
            IoTUseCase(
                id=uid,
                title=_words(rng, 2, 4).capitalize(),
                requirement_ids=_sample_ids(rng, fr_ids + nfr_ids, 1, 3),
                arrangement_ids=_sample_ids(rng, iia_pool, 0, 2),
                scenario_ids=_sample_ids(rng, scn_ids, 1, 2),
                preconditions=_maybe(rng, 0.7, _words(rng)),
                postconditions=_maybe(rng, 0.7, _words(rng)),
                associated_use_cases=_sample_ids(rng, uc_ids[: number - 1], 0, 2),
                actors=tuple(
                    Actor(_name(rng) + f" {i}", rng.choice(ACTOR_CATEGORIES), _maybe(rng, 0.6, _words(rng)))
                    for i in range(rng.randint(0, 2))
                ),
                base_flow=tuple(_words(rng, 2, 5) for _ in range(rng.randint(1, 4))),
                alternative_flows=tuple(
                    tuple(_words(rng, 2, 4) for _ in range(rng.randint(1, 2)))
                    for _ in range(rng.randint(0, 2))
                ),
                exception_flows=tuple(
                    tuple(_words(rng, 2, 4) for _ in range(rng.randint(1, 2)))
                    for _ in range(rng.randint(0, 1))
                ),
                business_rule_ids=_sample_ids(rng, br_ids, 0, 2),
            )
        )
    project.use_cases = tuple(use_cases)
    if use_cases or rng.random() < 0.3:
        project.use_case_diagram = _maybe(rng, 0.7, "diagrams/use-cases.png")

    instances: list[ArrangementCatalogInstance] = []
    by_arrangement: dict[Identifier, list[Identifier]] = {}
    for scenario in scenarios:
        for aid in scenario.arrangement_ids:
            by_arrangement.setdefault(aid, []).append(scenario.id)
    for aid in sorted(by_arrangement):
        if rng.random() < 0.3:
            continue
        for instance in range(1, rng.randint(1, 2) + 1):
            covered = _sample_ids(rng, by_arrangement[aid], 1, 2)
            if aid.number == 1:
                answers = {
                    prompt: answer
                    for prompt, answer in IIA01_PROMPT_ANSWERS.items()
                    if rng.random() < 0.8
                }
            else:
                answers = {_words(rng, 2, 4) + "?": _words(rng) for _ in range(rng.randint(0, 2))}
            instances.append(ArrangementCatalogInstance(aid, instance, covered, answers))
    project.catalog_instances = tuple(instances)

    if rng.random() < 0.5:
        project.canvas = CanvasRecord(
            _maybe(rng, 0.8, "canvas.png"), _maybe(rng, 0.5, _words(rng))
        )
    if rng.random() < 0.5:
        project.feasibility = FeasibilityRecord(
            _maybe(rng, 0.8, _words(rng)),
            _maybe(rng, 0.8, _words(rng)),
            _maybe(rng, 0.8, _words(rng)),
            _maybe(rng, 0.8, _words(rng)),
        )

    project.agreements = tuple(
        AgreementRecord(
            _name(rng) + f" {i}",
            rng.choice(AGREEMENT_METHODS),
            _date(rng),
            rng.choice(TEMPLATE_KINDS),
        )
        for i in range(rng.randint(0, 3))
    )
    project.prototypes = tuple(
        PrototypeRecord(
            rng.choice(PROTOTYPE_KINDS),
            f"prototypes/build-{i}.pdf",
            _date(rng) if rng.random() < 0.7 else None,
        )
        for i in range(rng.randint(0, 2))
    )

    checklists: list[ChecklistRecord] = []
    for kind in ("RequirementsChecklist", "DiagramAndUseCasesChecklist"):
        if rng.random() < 0.4:
            checklists.append(
                ChecklistRecord(
                    kind,
                    _maybe(rng, 0.8, _name(rng)),
                    _date(rng) if rng.random() < 0.6 else None,
                    tuple(
                        ChecklistItem(_words(rng, 2, 5) + "?", rng.choice(VERDICTS), _maybe(rng, 0.3, _words(rng)))
                        for _ in range(rng.randint(1, 4))
                    ),
                )
            )
    project.checklists = tuple(checklists)

    reports: list[InspectionReport] = []
    if scenarios:
        for i in range(rng.randint(0, 2)):
            pairs = [(s.id, q) for s in scenarios for q in range(1, 33)]
            chosen = rng.sample(pairs, rng.randint(1, min(8, len(pairs))))
            answers = tuple(
                Answer(q, sid, rng.choice(VERDICTS), _maybe(rng, 0.3, _words(rng)))
                for sid, q in chosen
            )
            defects = tuple(
                Defect(
                    n,
                    rng.choice(scenarios).id,
                    rng.randint(1, 32),
                    rng.choice(DEFECT_CATEGORIES),
                    _words(rng),
                    rng.choice(DEFECT_STATUSES),
                )
                for n in range(1, rng.randint(0, 3) + 1)
            )
            omissions = tuple(
                (rng.choice(scenarios).id, rng.randint(1, 32))
                for _ in range(rng.randint(0, 3))
            )
            reports.append(
                InspectionReport(
                    f"session-{i + 1}", _name(rng), answers, defects, omissions, rng.random() < 0.5
                )
            )
    project.inspection_reports = tuple(reports)

    target_pool = (
        fr_ids + nfr_ids + br_ids + need_ids + scn_ids + uc_ids
        + [s.id for s in project.stakeholders] + iia_pool
    )
    changes: list[ChangeAnalysisReport] = []
    if target_pool:
        for i in range(rng.randint(0, 2)):
            kind = rng.choice(CHANGE_KINDS)
            changes.append(
                ChangeAnalysisReport(
                    change=ChangeRequest(
                        Identifier(CR, i + 1), rng.choice(target_pool), kind, _words(rng)
                    ),
                    impacted=tuple(
                        ImpactEntry(aid, rng.choice(("downstream", "upstream", "both")), rng.random() < 0.3)
                        for aid in _sample_ids(rng, target_pool, 0, 3)
                    ),
                    decision=_maybe(rng, 0.5, rng.choice(CHANGE_DECISIONS)),
                )
            )
    project.change_reports = tuple(changes)

    project = normalize_project(project)
    if with_versions and rng.random() < 0.4:
        project = snapshot_version(project, "0.1")
        project.name = _words(rng, 1, 3).title()
        if rng.random() < 0.5:
            project = snapshot_version(project, "0.2")
    return normalize_project(project)


def mutate_project(project: Project, seed: int, edits: int = 4) -> Project:
    """A validity-preserving variant of the project: scalar tweaks plus
    additions and removals of artifacts nothing else references."""
    rng = random.Random(seed)
    project = normalize_project(project)

    def tweak_name(p: Project) -> None:
        p.name = _words(rng, 1, 3).title()

    def tweak_agile(p: Project) -> None:
        p.agile = not p.agile

    def tweak_requirement(p: Project) -> None:
        if not p.requirements:
            return
        reqs = list(p.requirements)
        index = rng.randrange(len(reqs))
        reqs[index] = replace(
            reqs[index], description=_words(rng), priority=rng.choice(PRIORITIES)
        )
        p.requirements = tuple(reqs)

    def tweak_scenario(p: Project) -> None:
        if not p.scenarios:
            return
        scns = list(p.scenarios)
        index = rng.randrange(len(scns))
        scns[index] = replace(scns[index], title=_words(rng, 2, 4).capitalize(), collected_data=_words(rng))
        p.scenarios = tuple(scns)

    def add_glossary(p: Project) -> None:
        p.glossary = dict(p.glossary)
        p.glossary[_words(rng, 1, 2) + f" x{rng.randint(1, 99)}"] = _words(rng)

    def add_stakeholder(p: Project) -> None:
        p.stakeholders = p.stakeholders + (
            Stakeholder(allocate_id(p, STK), _name(rng), _words(rng, 1, 3), rng.choice(ORDINALS), rng.choice(ORDINALS)),
        )

    def add_prototype(p: Project) -> None:
        p.prototypes = p.prototypes + (
            PrototypeRecord(rng.choice(PROTOTYPE_KINDS), f"prototypes/rev-{rng.randint(1, 99)}.pdf", _date(rng)),
        )

    def drop_prototype(p: Project) -> None:
        if p.prototypes:
            rest = list(p.prototypes)
            rest.pop(rng.randrange(len(rest)))
            p.prototypes = tuple(rest)

    def drop_agreement(p: Project) -> None:
        if p.agreements:
            rest = list(p.agreements)
            rest.pop(rng.randrange(len(rest)))
            p.agreements = tuple(rest)

    def tweak_feasibility(p: Project) -> None:
        p.feasibility = FeasibilityRecord(_words(rng), _words(rng), _words(rng), _words(rng))

    moves = (
        tweak_name, tweak_agile, tweak_requirement, tweak_scenario, add_glossary,
        add_stakeholder, add_prototype, drop_prototype, drop_agreement, tweak_feasibility,
    )
    for _ in range(edits):
        rng.choice(moves)(project)
    return normalize_project(project)


def random_trace_project(seed: int, max_nodes: int = 50) -> Project:
    """A project whose derived trace graph is an acyclic typed DAG.

    Edge families all point forward along the artifact pipeline; the two
    requirement-to-requirement families are restricted to lower-to-higher
    numbers so no cycle can form.
    """
    rng = random.Random(seed)
    budget = rng.randint(4, max_nodes)

    weights = [rng.random() for _ in range(6)]
    total = sum(weights)
    shares = [max(1, int(budget * w / total)) for w in weights]
    while sum(shares) > budget:
        shares[shares.index(max(shares))] -= 1
    n_need, n_fr, n_nfr, n_br, n_scn, n_uc = shares
    n_fr = max(n_fr, 1)

    project = Project(name="Trace probe")
    need_ids = [Identifier(NEED, i) for i in range(1, n_need + 1)]
    project.needs = tuple(Need(nid, _words(rng), rng.choice(NEED_ORIGINS)) for nid in need_ids)

    fr_ids = [Identifier(FR, i) for i in range(1, n_fr + 1)]
    nfr_ids = [Identifier(NFR, i) for i in range(1, n_nfr + 1)]
    ordered_reqs = fr_ids + nfr_ids
    requirements = []
    for position, rid in enumerate(ordered_reqs):
        later = ordered_reqs[position + 1 :]
        requirements.append(
            Requirement(
                id=rid,
                description=_words(rng),
                situation=rng.choice(SITUATIONS),
                priority=rng.choice(PRIORITIES),
                cost=rng.choice(ORDINALS) if rid.kind == FR else "",
                related_requirement_ids=_sample_ids(rng, later, 0, 2),
                dependencies=_sample_ids(rng, fr_ids[: fr_ids.index(rid)], 0, 2) if rid.kind == FR else (),
                related_need_ids=_sample_ids(rng, need_ids, 0, 2),
            )
        )
    project.requirements = tuple(requirements)

    br_ids = [Identifier(BR, i) for i in range(1, n_br + 1)]
    project.business_rules = tuple(
        BusinessRule(bid, _words(rng), rng.choice(SITUATIONS), rng.choice(PRIORITIES), _sample_ids(rng, need_ids, 0, 2))
        for bid in br_ids
    )

    scn_ids = [Identifier(SCENARIO, i) for i in range(1, n_scn + 1)]
    iia_pool = [Identifier(IIA, n) for n in range(1, 10)]
    project.scenarios = tuple(
        IoTScenario(
            id=sid,
            title=_words(rng, 2, 3).capitalize(),
            arrangement_ids=_sample_ids(rng, iia_pool, 1, 2),
            related_fr_ids=_sample_ids(rng, fr_ids, 1, 3),
        )
        for sid in scn_ids
    )

    uc_ids = [Identifier(USE_CASE, i) for i in range(1, n_uc + 1)]
    project.use_cases = tuple(
        IoTUseCase(
            id=uid,
            title=_words(rng, 2, 3).capitalize(),
            requirement_ids=_sample_ids(rng, fr_ids + nfr_ids, 1, 2),
            scenario_ids=_sample_ids(rng, scn_ids, 1, 2) if scn_ids else (),
            base_flow=(_words(rng, 2, 4),),
            business_rule_ids=_sample_ids(rng, br_ids, 0, 2),
        )
        for uid in uc_ids
        if scn_ids
    )
    return normalize_project(project)


def brute_force_closure(edges, start, direction: str) -> set:
    """Reachability by repeated relaxation over the raw edge list; written
    to share nothing with the BFS in the library. The two-direction result
    is the union of the directed closures, not the undirected closure."""

    def relax(pairs) -> set:
        reached = {start}
        changed = True
        while changed:
            changed = False
            for a, b in pairs:
                if a in reached and b not in reached:
                    reached.add(b)
                    changed = True
        return reached - {start}

    forward = [(e.source, e.target) for e in edges]
    backward = [(e.target, e.source) for e in edges]
    if direction == "Downstream":
        return relax(forward)
    if direction == "Upstream":
        return relax(backward)
    return relax(forward) | relax(backward)


def random_answer_session(seed: int, project: Project, question_numbers: list[int]):
    """(label, inspector, answers) over the project's scenarios."""
    rng = random.Random(seed)
    pairs = [(s.id, q) for s in project.scenarios for q in question_numbers]
    rng.shuffle(pairs)
    count = rng.randint(1, len(pairs))
    answers = [
        Answer(q, sid, rng.choice(VERDICTS), _maybe(rng, 0.4, _words(rng)))
        for sid, q in pairs[:count]
    ]
    return f"session-{seed}", _name(rng), answers
