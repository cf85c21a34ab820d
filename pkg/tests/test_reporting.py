from __future__ import annotations

import dataclasses
import html.parser

import pytest

from projgen import random_project
from retiot import sectext
from retiot.docformat import build_documents
from retiot.model import Project, normalize_project
from retiot.reporting import (
    COVERAGE_DECLARATIONS,
    COVERAGE_FIXTURES_FILE,
    INFORMATION_ITEMS,
    LEGEND,
    CoverageError,
    coverage_audit,
    default_coverage_fixtures,
    load_coverage_fixtures,
    render_coverage_matrix,
    render_document,
    render_inspection_record,
)

# Expected audit marks, one row per information item in declared order and
# one column per shipped fixture (RL, IoTUCD1, PS, SP, IoTUCD2). A dot is a
# blank cell: the fixture does not declare the item at all.
EXPECTED_MARKS = [
    "TTTTT",  # Project name/Project responsible
    "TTTTT",  # Version control
    "T.T..",  # Explicit agreement
    "N.T..",  # Project/system objective
    "N.T..",  # Problem domain
    "T.T..",  # Project scope
    "T.T..",  # Glossaire
    "P.T..",  # Stakeholders description
    "N.T..",  # Business and Stakeholders needs a description
    "P.T..",  # Functional requirements
    "T.T..",  # Non-functional requirements
    "T.T..",  # Requirements negotiation (prioritization)
    "NTT.T",  # Business rules
    "N.P..",  # Project analyses
    "NP.TT",  # IoT scenarios
    ".N.TT",  # IoT components description
    ".P.TT",  # IoT interaction arrangements
    ".T..T",  # IoT use-cases diagram
    ".T..T",  # IoT use-cases description
    ".P.TT",  # Traceability
    "T.N..",  # References (others project documents)
]


def test_information_item_list_is_the_published_one():
    assert len(INFORMATION_ITEMS) == 21
    assert INFORMATION_ITEMS[0] == "Project name/Project responsible"
    assert INFORMATION_ITEMS[6] == "Glossaire"
    assert INFORMATION_ITEMS[20] == "References (others project documents)"
    assert len(set(INFORMATION_ITEMS)) == 21


def test_legend_text_is_exact():
    assert LEGEND == (
        "P - Partially collected; T - Totally collected; "
        "N - Does not collect information"
    )


def test_shipped_fixtures_load():
    fixtures = default_coverage_fixtures()
    assert [f.name for f in fixtures] == ["RL", "IoTUCD1", "PS", "SP", "IoTUCD2"]
    for fixture in fixtures:
        assert set(fixture.items) <= set(INFORMATION_ITEMS)
        assert set(fixture.items.values()) <= set(COVERAGE_DECLARATIONS)


def test_audit_matches_the_frozen_grid():
    matrix = coverage_audit(default_coverage_fixtures())
    assert len(matrix) == 21
    for row, item, expected in zip(matrix, INFORMATION_ITEMS, EXPECTED_MARKS):
        assert [c.template for c in row] == ["RL", "IoTUCD1", "PS", "SP", "IoTUCD2"]
        marks = [c.mark or "." for c in row]
        assert marks == list(expected), f"row {item!r}: {marks} != {list(expected)}"
        assert all(c.information_item == item for c in row)


def test_audit_requires_at_least_one_template():
    with pytest.raises(CoverageError):
        coverage_audit([])


def test_unknown_item_is_rejected():
    text = "== Template X ==\n\n| Item | Coverage |\n| Moon phase | Totally |\n"
    with pytest.raises(CoverageError):
        coverage_audit(load_coverage_fixtures(text, "bad.retiot"))


def test_unknown_declaration_is_rejected():
    text = (
        "== Template X ==\n\n| Item | Coverage |\n"
        "| Problem domain | Somewhat |\n"
    )
    with pytest.raises(CoverageError):
        coverage_audit(load_coverage_fixtures(text, "bad.retiot"))


def test_duplicate_item_in_one_fixture_is_rejected():
    text = (
        "== Template X ==\n\n| Item | Coverage |\n"
        "| Problem domain | Totally |\n| Problem domain | Partially |\n"
    )
    with pytest.raises(CoverageError):
        load_coverage_fixtures(text, "bad.retiot")


def test_render_coverage_matrix_is_deterministic_and_ends_with_legend():
    matrix = coverage_audit(default_coverage_fixtures())
    out = render_coverage_matrix(matrix)
    assert out == render_coverage_matrix(coverage_audit(default_coverage_fixtures()))
    lines = out.splitlines()
    assert lines[-1] == LEGEND
    assert lines[0].startswith("| Project/system information")
    # one header/divider block plus 21 item rows before the legend
    item_rows = [l for l in lines if l.startswith("|")]
    assert len(item_rows) == 22


def test_fixture_file_name_constant():
    assert COVERAGE_FIXTURES_FILE == "table1-fixtures.retiot"


def _tree_text(tree: sectext.SectionTree) -> str:
    return sectext.render_sections(tree.sections)


def test_plaintext_render_reparses_per_template_kind():
    project = random_project(1, with_versions=False)
    docs = build_documents(project)
    by_kind: dict[str, list] = {}
    for doc in docs:
        if doc.template_kind != "ProjectManifest":
            by_kind.setdefault(doc.template_kind, []).append(doc)
    assert by_kind, "fixture project renders no templates"
    for kind, kind_docs in by_kind.items():
        text = render_document(project, kind)
        if len(kind_docs) == 1:
            tree, diagnostics = sectext.parse_sections(text, "render.retiot")
            assert not diagnostics
            assert _tree_text(tree) == _tree_text(kind_docs[0].tree)
        else:
            # multi-document kinds are concatenated behind file markers
            assert text.count("# file: ") == len(kind_docs)


def test_render_document_rejects_manifest_and_absent_kinds():
    project = random_project(1, with_versions=False)
    with pytest.raises(ValueError):
        render_document(project, "ProjectManifest")
    empty = normalize_project(Project(name="x", responsible="y"))
    with pytest.raises(ValueError, match="absent-template"):
        render_document(empty, "IoTUseCaseDescription")
    with pytest.raises(ValueError):
        render_document(project, "IoTProjectDetail", format="Pdf")


class _HtmlAudit(html.parser.HTMLParser):
    def __init__(self):
        super().__init__()
        self.external = []
        self.tags = set()

    def handle_starttag(self, tag, attrs):
        self.tags.add(tag)
        for key, value in attrs:
            if key in ("src", "href") and value:
                self.external.append(value)


def test_html_render_is_self_contained_and_escaped():
    project = random_project(1, with_versions=False)
    project.description = 'sensors & "relays" <beta>'
    project = normalize_project(project)
    out = render_document(project, "IoTProjectDetail", format="Html")
    assert "<beta>" not in out
    assert "&lt;beta&gt;" in out
    assert "&amp;" in out
    audit = _HtmlAudit()
    audit.feed(out)
    assert audit.external == []
    assert {"html", "body", "style", "h1"} <= audit.tags


def test_html_render_accepts_case_insensitive_format_names():
    project = random_project(1, with_versions=False)
    assert render_document(project, "IoTProjectDetail", "HTML") == render_document(
        project, "IoTProjectDetail", "html"
    )
    assert render_document(project, "IoTProjectDetail", "text") == render_document(
        project, "IoTProjectDetail", "PlainText"
    )


def test_inspection_record_render_reports_zero_defects():
    project = random_project(1, with_versions=False)
    report = project.inspection_reports[0]
    clean = dataclasses.replace(
        report,
        session_label="clean",
        answers=tuple(
            dataclasses.replace(a, verdict="Yes", note="") for a in report.answers
        ),
        defects=(),
        meeting_done=False,
    )
    out = render_inspection_record(clean)
    assert "Defects: 0" in out
    assert out == render_inspection_record(clean)
