"""Scenario verification by checklist: questions, answers, defects, meetings.

The checklist has a General part (project information and systemic solution)
and a Specific part (non-functional properties of the IoT setting). Every
No verdict becomes exactly one defect; the discrimination meeting later
confirms defects (status Discussed) or discards them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from . import datafiles, sectext
from .identifiers import Identifier, parse_identifier
from .model import (
    QUESTION_PARTS,
    VERDICTS,
    Answer,
    Defect,
    InspectionReport,
    IoTScenario,
    Project,
    canon_enum,
)

PROJECT_INFO_TAG = "project-info"

CONFIRM = "Confirm"
DISCARD = "Discard"


class QuestionSetError(ValueError):
    pass


@dataclass
class ChecklistQuestion:
    number: int
    part: str
    text: str
    hint: str = ""
    applicability: str = ""
    tag: str = ""

    def category(self) -> str:
        if self.part == "Specific":
            return "NonFunctionalProperty"
        if self.tag == PROJECT_INFO_TAG:
            return "ProjectInfo"
        return "SystemicSolution"


def _parse_condition(condition: str) -> tuple[str, str]:
    key, sep, value = condition.partition("=")
    key = key.strip()
    value = value.strip()
    if not sep or key not in ("actor-category", "arrangement", "min-steps", "min-actors") or not value:
        raise QuestionSetError(f"unknown applicability condition {condition!r}")
    if key in ("min-steps", "min-actors") and not value.isdigit():
        raise QuestionSetError(f"applicability condition {condition!r} needs an integer")
    if key == "arrangement" and parse_identifier(value) is None:
        raise QuestionSetError(f"applicability condition {condition!r} needs an arrangement id")
    return key, value


def question_applies(question: ChecklistQuestion, scenario: IoTScenario) -> bool:
    """Evaluate the applicability predicate; an empty predicate always holds."""
    for condition in question.applicability.split(";"):
        condition = condition.strip()
        if not condition:
            continue
        key, value = _parse_condition(condition)
        if key == "actor-category":
            if not any(a.category == value for a in scenario.actors):
                return False
        elif key == "arrangement":
            if parse_identifier(value) not in scenario.arrangement_ids:
                return False
        elif key == "min-steps":
            if len(scenario.interaction_sequence) < int(value):
                return False
        elif key == "min-actors":
            if len(scenario.actors) < int(value):
                return False
    return True


def load_question_set(text: str, source: str = "questions") -> list[ChecklistQuestion]:
    """Parse a question-set data file; raises QuestionSetError on duplicate
    numbers, empty text, or malformed rows."""
    tree, diags = sectext.parse_sections(text, source)
    for diag in diags:
        if diag.severity == sectext.ERROR:
            raise QuestionSetError(f"{source}:{diag.line}: {diag.message}")
    section = tree.section("Questions")
    if section is None or section.table is None:
        raise QuestionSetError(f"{source}: no Questions table found")

    header = [h.lower() for h in section.table.header]
    columns = {}
    for name in ("number", "part", "text", "hint", "applies when", "tag"):
        if name in ("number", "part", "text") and name not in header:
            raise QuestionSetError(f"{source}: Questions table lacks a {name.title()} column")
        columns[name] = header.index(name) if name in header else None

    def cell(row: list[str], name: str) -> str:
        index = columns[name]
        return row[index].strip() if index is not None else ""

    questions: list[ChecklistQuestion] = []
    seen: set[int] = set()
    for row in section.table.rows:
        raw_number = cell(row, "number")
        if not raw_number.isdigit() or int(raw_number) < 1:
            raise QuestionSetError(f"{source}: bad question number {raw_number!r}")
        number = int(raw_number)
        if number in seen:
            raise QuestionSetError(f"{source}: duplicate question number {number}")
        seen.add(number)
        part = canon_enum(cell(row, "part"), QUESTION_PARTS)
        if part not in QUESTION_PARTS:
            raise QuestionSetError(f"{source}: question {number} has part {part!r}")
        text_value = cell(row, "text")
        if not text_value:
            raise QuestionSetError(f"{source}: question {number} has empty text")
        applicability = cell(row, "applies when")
        for condition in applicability.split(";"):
            if condition.strip():
                _parse_condition(condition)
        questions.append(
            ChecklistQuestion(
                number, part, text_value, cell(row, "hint"), applicability, cell(row, "tag")
            )
        )
    questions.sort(key=lambda q: q.number)
    return questions


def default_question_set(project_root: Path | None = None) -> list[ChecklistQuestion]:
    text, source = datafiles.data_text(datafiles.QUESTIONS_FILE, project_root)
    return load_question_set(text, source)


def applicable_questions(
    scenario: IoTScenario, questions: list[ChecklistQuestion]
) -> list[ChecklistQuestion]:
    """Questions whose predicate holds for the scenario, in numeric order."""
    ordered = sorted(questions, key=lambda q: q.number)
    return [q for q in ordered if question_applies(q, scenario)]


def record_inspection(
    project: Project,
    answers: list[Answer],
    session_label: str,
    inspector: str,
    questions: list[ChecklistQuestion] | None = None,
) -> InspectionReport:
    """Turn one answering session into an inspection report.

    Deterministic: the same answer set always yields the same report. Every
    No verdict yields exactly one defect; applicable questions left without
    an answer are listed as omissions.
    """
    if questions is None:
        questions = default_question_set()
    by_number = {q.number: q for q in questions}

    seen_pairs: set[tuple[int, Identifier]] = set()
    for answer in answers:
        if answer.question_number not in by_number:
            raise ValueError(f"unknown question number {answer.question_number}")
        if project.scenario(answer.scenario_id) is None:
            raise ValueError(f"unknown scenario {answer.scenario_id.render()}")
        if answer.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {answer.verdict!r} for question {answer.question_number}")
        pair = (answer.question_number, answer.scenario_id)
        if pair in seen_pairs:
            raise ValueError(
                f"duplicate answer for question {answer.question_number} "
                f"on {answer.scenario_id.render()}"
            )
        seen_pairs.add(pair)

    ordered = sorted(answers, key=lambda a: (a.scenario_id.number, a.question_number))

    defects: list[Defect] = []
    for answer in ordered:
        if answer.verdict != "No":
            continue
        question = by_number[answer.question_number]
        description = question.text
        if answer.note:
            description = f"{question.text} - {answer.note}"
        defects.append(
            Defect(
                id=len(defects) + 1,
                scenario_id=answer.scenario_id,
                question_number=answer.question_number,
                category=question.category(),
                description=description,
            )
        )

    omissions: list[tuple[Identifier, int]] = []
    for scenario in sorted(project.scenarios, key=lambda s: s.id):
        for question in applicable_questions(scenario, questions):
            if (question.number, scenario.id) not in seen_pairs:
                omissions.append((scenario.id, question.number))

    return InspectionReport(
        session_label=session_label,
        inspector=inspector,
        answers=tuple(ordered),
        defects=tuple(defects),
        omissions=tuple(omissions),
        meeting_done=False,
    )


def close_discrimination(
    report: InspectionReport, decisions: dict[int, str]
) -> InspectionReport:
    """Apply the discrimination meeting: confirmed defects become Discussed,
    discarded defects are removed. Every open defect needs a decision."""
    if report.meeting_done:
        raise ValueError(f"meeting already closed for session {report.session_label!r}")
    known = {d.id for d in report.defects}
    for defect_id, decision in decisions.items():
        if defect_id not in known:
            raise ValueError(f"decision for unknown defect {defect_id}")
        if decision not in (CONFIRM, DISCARD):
            raise ValueError(f"decision for defect {defect_id} must be Confirm or Discard")
    undecided = sorted(known - set(decisions))
    if undecided:
        raise ValueError(f"no decision for defects: {', '.join(str(d) for d in undecided)}")

    kept: list[Defect] = []
    for defect in report.defects:
        if decisions[defect.id] == DISCARD:
            continue
        kept.append(replace(defect, status="Discussed"))
    return replace(report, defects=tuple(kept), meeting_done=True)


def parse_answer_file(text: str, source: str) -> tuple[str, str, list[Answer]]:
    """Read an answering-session file; raises ValueError on malformed rows."""
    tree, diags = sectext.parse_sections(text, source)
    for diag in diags:
        if diag.severity == sectext.ERROR:
            raise ValueError(f"{source}:{diag.line}: {diag.message}")
    session = tree.section("Session")
    label = session.get("Label") if session else ""
    inspector = session.get("Inspector") if session else ""

    answers_section = tree.section("Answers")
    answers: list[Answer] = []
    if answers_section is not None and answers_section.table is not None:
        header = [h.lower() for h in answers_section.table.header]
        for name in ("scenario", "question", "verdict"):
            if name not in header:
                raise ValueError(f"{source}: Answers table lacks a {name.title()} column")
        note_col = header.index("note") if "note" in header else None
        for row in answers_section.table.rows:
            scenario = parse_identifier(row[header.index("scenario")])
            raw_question = row[header.index("question")].strip()
            if scenario is None:
                raise ValueError(f"{source}: bad scenario id {row[header.index('scenario')]!r}")
            if not raw_question.isdigit():
                raise ValueError(f"{source}: bad question number {raw_question!r}")
            verdict = canon_enum(
                row[header.index("verdict")],
                VERDICTS,
                {"na": "NotApplicable", "n/a": "NotApplicable", "not applicable": "NotApplicable"},
            )
            note = row[note_col].strip() if note_col is not None else ""
            answers.append(Answer(int(raw_question), scenario, verdict, note))
    return label, inspector, answers


def parse_decisions_file(text: str, source: str) -> dict[int, str]:
    tree, diags = sectext.parse_sections(text, source)
    for diag in diags:
        if diag.severity == sectext.ERROR:
            raise ValueError(f"{source}:{diag.line}: {diag.message}")
    section = tree.section("Decisions")
    if section is None or section.table is None:
        raise ValueError(f"{source}: no Decisions table found")
    header = [h.lower() for h in section.table.header]
    for name in ("defect", "decision"):
        if name not in header:
            raise ValueError(f"{source}: Decisions table lacks a {name.title()} column")
    decisions: dict[int, str] = {}
    for row in section.table.rows:
        raw_id = row[header.index("defect")].strip()
        if not raw_id.isdigit():
            raise ValueError(f"{source}: bad defect id {raw_id!r}")
        decision = canon_enum(row[header.index("decision")], (CONFIRM, DISCARD))
        decisions[int(raw_id)] = decision
    return decisions
