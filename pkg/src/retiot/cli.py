"""Command line entry point.

Exit codes: 0 clean/ready, 1 findings (defects, issues, gate not ready,
differences), 2 usage or I/O errors. Reports go to stdout (or ``--out``),
diagnostics go to stderr. Every command is read-only except ``init``,
``snapshot`` and ``inspect --save``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import sectext
from .arrangements import check_catalog_completeness, default_registry
from .docformat import (
    DETAIL_FILE,
    MANIFEST_FILE,
    ModelInvalidError,
    _slug,
    build_change_tree,
    build_inspection_tree,
    parse_project,
    save_project,
)
from .gates import (
    default_stage_data,
    process_status,
    render_gate_report,
    render_process_status,
    stage_gate,
)
from .identifiers import CR, parse_identifier
from .inspection import (
    applicable_questions,
    default_question_set,
    parse_answer_file,
    parse_decisions_file,
    close_discrimination,
    record_inspection,
)
from .model import TEMPLATE_KINDS, Answer, ChangeRequest, allocate_id, validate_model
from .reporting import (
    coverage_audit,
    default_coverage_fixtures,
    load_coverage_fixtures,
    render_coverage_matrix,
    render_document,
    render_inspection_record,
)
from .trace import analyze_change, build_trace_graph, impact_of_change, validate_links
from .versioning import diff_versions, render_changeset, snapshot_version

EXIT_CLEAN = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


@dataclass
class CommandOutcome:
    exit_code: int
    stdout: str = ""
    artifacts_written: list[str] = field(default_factory=list)


class _UsageError(Exception):
    pass


def _load_project(path_text: str):
    root = Path(path_text)
    if not root.is_dir():
        raise _UsageError(f"{root} is not a project directory")
    project, diags = parse_project(root)
    for diag in diags:
        print(diag.render(), file=sys.stderr)
    errors = sum(1 for d in diags if d.severity == sectext.ERROR)
    return root, project, errors


# --------------------------------------------------------------------------
# subcommand handlers


def _cmd_init(args) -> CommandOutcome:
    root = Path(args.dir)
    if root.exists() and any(root.glob("*.retiot")):
        raise _UsageError(f"{root} already contains a project")
    root.mkdir(parents=True, exist_ok=True)
    name = root.resolve().name
    manifest = root / MANIFEST_FILE
    manifest.write_text("== Project ==\nMethodology: Plan-driven\n", encoding="utf-8")
    detail = root / DETAIL_FILE
    detail.write_text(
        "== Document ==\nTemplate: IoTProjectDetail\nVersion: 1.0\n\n"
        f"== Project ==\nName: {name}\n",
        encoding="utf-8",
    )
    return CommandOutcome(
        EXIT_CLEAN,
        f"Initialized project {name!r} in {root}\n",
        [str(manifest), str(detail)],
    )


def _cmd_check(args) -> CommandOutcome:
    root, project, error_count = _load_project(args.dir)
    registry = default_registry(root)
    findings = [issue.render() for issue in validate_model(project)]
    findings += [issue.render() for issue in validate_links(build_trace_graph(project))]
    findings += [issue.render() for issue in check_catalog_completeness(project, registry)]
    lines = list(findings)
    if error_count:
        lines.append(f"{error_count} file errors (see stderr)")
    lines.append(f"{len(findings)} issues")
    code = EXIT_FINDINGS if findings or error_count else EXIT_CLEAN
    return CommandOutcome(code, "\n".join(lines) + "\n")


def _prompt(text: str) -> None:
    print(text, file=sys.stderr, flush=True)


def _collect_interactive(project, questions) -> list[Answer]:
    answers: list[Answer] = []
    stdin = sys.stdin
    for scenario in sorted(project.scenarios, key=lambda s: s.id):
        _prompt(f"Scenario {scenario.id.render()}: {scenario.title}")
        for question in applicable_questions(scenario, questions):
            _prompt(f"  Q{question.number}: {question.text}")
            if question.hint:
                _prompt(f"    hint: {question.hint}")
            verdict: str | None = None
            while True:
                _prompt("  answer [y/n/na/skip]:")
                line = stdin.readline()
                if not line:
                    return answers
                token = line.strip().lower()
                if token in ("y", "yes"):
                    verdict = "Yes"
                elif token in ("n", "no"):
                    verdict = "No"
                elif token in ("na", "n/a"):
                    verdict = "NotApplicable"
                elif token in ("s", "skip", ""):
                    verdict = None
                else:
                    _prompt("  please answer y, n, na, or skip")
                    continue
                break
            if verdict is None:
                continue
            note = ""
            if verdict == "No":
                _prompt("  note (optional):")
                line = stdin.readline()
                note = line.strip() if line else ""
            answers.append(Answer(question.number, scenario.id, verdict, note))
    return answers


def _render_answer_file(label: str, inspector: str, answers: list[Answer]) -> str:
    session = sectext.Section(
        "Session",
        fields=[sectext.Field("Label", label), sectext.Field("Inspector", inspector)],
    )
    table = sectext.Section("Answers")
    table.table = sectext.Table(
        header=["Scenario", "Question", "Verdict", "Note"],
        rows=[
            [a.scenario_id.render(), str(a.question_number), a.verdict, a.note]
            for a in answers
        ],
    )
    return sectext.render_sections([session, table])


def _cmd_inspect(args) -> CommandOutcome:
    root, project, _ = _load_project(args.dir)
    questions = default_question_set(root)
    written: list[str] = []

    if args.answers:
        path = Path(args.answers)
        label, inspector, answers = parse_answer_file(
            path.read_text(encoding="utf-8"), str(path)
        )
        label = args.session or label or path.stem
        inspector = args.inspector or inspector
    else:
        label = args.session or "interactive"
        inspector = args.inspector or ""
        answers = _collect_interactive(project, questions)

    report = record_inspection(project, answers, label, inspector, questions)
    text = render_inspection_record(report)

    if args.save:
        slug = _slug(label)
        checklist_dir = root / "checklists"
        checklist_dir.mkdir(exist_ok=True)
        record_path = checklist_dir / f"inspection-{slug}.retiot"
        tree = build_inspection_tree(report, str(record_path))
        record_path.write_text(sectext.render_sections(tree.sections), encoding="utf-8")
        written.append(str(record_path))
        if not args.answers:
            answer_path = checklist_dir / f"answers-{slug}.retiot"
            answer_path.write_text(
                _render_answer_file(label, inspector, answers), encoding="utf-8"
            )
            written.append(str(answer_path))

    code = EXIT_FINDINGS if report.defects else EXIT_CLEAN
    return CommandOutcome(code, text, written)


def _cmd_meeting(args) -> CommandOutcome:
    root, project, _ = _load_project(args.dir)
    report = None
    for candidate in project.inspection_reports:
        if candidate.session_label == args.session:
            report = candidate
            break
    if report is None:
        known = ", ".join(r.session_label for r in project.inspection_reports) or "none"
        raise _UsageError(f"no inspection session {args.session!r} (recorded: {known})")
    path = Path(args.decisions)
    decisions = parse_decisions_file(path.read_text(encoding="utf-8"), str(path))
    updated = close_discrimination(report, decisions)
    text = render_inspection_record(updated)
    code = EXIT_FINDINGS if updated.defects else EXIT_CLEAN
    return CommandOutcome(code, text)


def _cmd_trace(args) -> CommandOutcome:
    root, project, _ = _load_project(args.dir)
    target = parse_identifier(args.from_id)
    if target is None:
        raise _UsageError(f"malformed artifact id {args.from_id!r}")
    graph = build_trace_graph(project)
    impacted = impact_of_change(graph, target, args.direction)
    lines = [ident.render() for ident in sorted(impacted)]
    lines.append(f"{len(impacted)} artifacts affected")
    return CommandOutcome(EXIT_CLEAN, "\n".join(lines) + "\n")


def _cmd_change(args) -> CommandOutcome:
    root, project, _ = _load_project(args.dir)
    target = parse_identifier(args.target)
    if target is None:
        raise _UsageError(f"malformed artifact id {args.target!r}")
    kind = args.kind.capitalize()
    request = ChangeRequest(
        id=allocate_id(project, CR),
        target_id=target,
        kind=kind,
        description=args.description,
    )
    report = analyze_change(project, request)
    text = sectext.render_sections(build_change_tree(report).sections)
    code = EXIT_FINDINGS if report.impacted else EXIT_CLEAN
    return CommandOutcome(code, text)


def _cmd_gate(args) -> CommandOutcome:
    root, project, _ = _load_project(args.dir)
    data = default_stage_data(root)
    agile = True if args.agile else None
    if args.stage is not None:
        report = stage_gate(project, args.stage, data, agile)
        text = render_gate_report(report)
        code = EXIT_CLEAN if report.ready else EXIT_FINDINGS
        return CommandOutcome(code, text)
    reports = process_status(project, data, agile)
    text = render_process_status(reports)
    code = EXIT_CLEAN if all(r.ready for r in reports) else EXIT_FINDINGS
    return CommandOutcome(code, text)


def _cmd_render(args) -> CommandOutcome:
    root, project, _ = _load_project(args.dir)
    text = render_document(project, args.template, args.format)
    return CommandOutcome(EXIT_CLEAN, text)


def _cmd_audit(args) -> CommandOutcome:
    if args.fixtures:
        path = Path(args.fixtures)
        fieldsets = load_coverage_fixtures(path.read_text(encoding="utf-8"), str(path))
    else:
        fieldsets = default_coverage_fixtures()
    matrix = coverage_audit(fieldsets)
    return CommandOutcome(EXIT_CLEAN, render_coverage_matrix(matrix))


def _cmd_snapshot(args) -> CommandOutcome:
    root, project, _ = _load_project(args.dir)
    updated = snapshot_version(project, args.label)
    try:
        written = save_project(updated, root)
    except ModelInvalidError as exc:
        for issue in exc.issues:
            print(issue.render(), file=sys.stderr)
        print(f"snapshot refused: {len(exc.issues)} validation issues", file=sys.stderr)
        return CommandOutcome(EXIT_FINDINGS)
    return CommandOutcome(
        EXIT_CLEAN,
        f"Snapshot {args.label!r} recorded; {len(written)} files written\n",
        [str(p) for p in written],
    )


def _cmd_diff(args) -> CommandOutcome:
    root, project, _ = _load_project(args.dir)
    change = diff_versions(project, args.from_label, args.to_label)
    text = render_changeset(change)
    code = EXIT_CLEAN if change.is_empty() else EXIT_FINDINGS
    return CommandOutcome(code, text)


# --------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retiot",
        description="Scenario-driven IoT requirements documents: "
        "validation, inspection, traceability, gates, and audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, handler, needs_dir: bool = True):
        p = sub.add_parser(name, help=help_text)
        if needs_dir:
            p.add_argument("dir", help="project directory")
        p.add_argument("--out", help="write the report to this file instead of stdout")
        p.set_defaults(handler=handler)
        return p

    add("init", "create an empty project directory", _cmd_init)
    add("check", "validate the model, trace links, and catalogs", _cmd_check)

    p = add("inspect", "run a checklist inspection session", _cmd_inspect)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--answers", help="answer file for the session")
    mode.add_argument("--interactive", action="store_true", help="prompt on the terminal")
    p.add_argument("--save", action="store_true", help="write the record into the project")
    p.add_argument("--session", default="", help="session label")
    p.add_argument("--inspector", default="", help="inspector name")

    p = add("meeting", "close a discrimination meeting for a session", _cmd_meeting)
    p.add_argument("--session", required=True, help="inspection session label")
    p.add_argument("--decisions", required=True, help="decision file (Confirm/Discard per defect)")

    p = add("trace", "list artifacts affected by a change to one artifact", _cmd_trace)
    p.add_argument("--from", dest="from_id", required=True, metavar="ID")
    p.add_argument(
        "--direction",
        choices=["downstream", "upstream", "both"],
        default="both",
    )

    p = add("change", "draft a change analysis report for a request", _cmd_change)
    p.add_argument("--target", required=True, metavar="ID")
    p.add_argument("--kind", choices=["modify", "remove", "add"], required=True)
    p.add_argument("--description", default="")

    p = add("gate", "evaluate stage gates", _cmd_gate)
    p.add_argument("--stage", type=int, choices=[1, 2, 3])
    p.add_argument("--agile", action="store_true", help="apply the agile template exemptions")

    p = add("render", "render one template as text or HTML", _cmd_render)
    p.add_argument("--template", choices=list(TEMPLATE_KINDS), required=True)
    p.add_argument("--format", choices=["text", "html"], default="text")

    p = add("audit", "template coverage audit over declared field sets", _cmd_audit, needs_dir=False)
    p.add_argument("--fixtures", help="coverage fixture file (default: bundled)")

    p = add("snapshot", "freeze the current state under a version label", _cmd_snapshot)
    p.add_argument("--label", required=True)

    p = add("diff", "compare two versions (labels or 'current')", _cmd_diff)
    p.add_argument("--from", dest="from_label", required=True, metavar="VERSION")
    p.add_argument("--to", dest="to_label", required=True, metavar="VERSION")

    return parser


def run(argv: list[str] | None = None) -> CommandOutcome:
    """Dispatch one command; never raises on bad input."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return CommandOutcome(code)

    try:
        outcome = args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_USAGE)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_USAGE)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_USAGE)

    out_path = getattr(args, "out", None)
    if out_path and outcome.stdout:
        Path(out_path).write_text(outcome.stdout, encoding="utf-8")
        outcome.artifacts_written.append(str(Path(out_path)))
        outcome.stdout = ""
    return outcome


def main(argv: list[str] | None = None) -> int:
    outcome = run(argv if argv is not None else sys.argv[1:])
    if outcome.stdout:
        sys.stdout.write(outcome.stdout)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
