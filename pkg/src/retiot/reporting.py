"""Rendering: documents, inspection records, and the template coverage audit.

The audit compares how much of the 21 standard project/system information
items each document template collects. Shipped fixtures describe five
templates (two conventional, three from this toolchain); the audit itself
works for any declared template field set.
"""

from __future__ import annotations

import html as _html
from dataclasses import dataclass

from . import sectext
from .datafiles import COVERAGE_FIXTURES_FILE, data_text
from .docformat import MANIFEST_KIND, build_documents
from .model import Project

LEGEND = "P - Partially collected; T - Totally collected; N - Does not collect information"

INFORMATION_ITEMS = (
    "Project name/Project responsible",
    "Version control",
    "Explicit agreement",
    "Project/system objective",
    "Problem domain",
    "Project scope",
    "Glossaire",
    "Stakeholders description",
    "Business and Stakeholders needs a description",
    "Functional requirements",
    "Non-functional requirements",
    "Requirements negotiation (prioritization)",
    "Business rules",
    "Project analyses",
    "IoT scenarios",
    "IoT components description",
    "IoT interaction arrangements",
    "IoT use-cases diagram",
    "IoT use-cases description",
    "Traceability",
    "References (others project documents)",
)

COVERAGE_DECLARATIONS = ("Totally", "Partially", "None", "NotApplicable")

_MARKS = {"Totally": "T", "Partially": "P", "None": "N", "NotApplicable": ""}
_DECLARATION_ALIASES = {
    "t": "Totally",
    "p": "Partially",
    "n": "None",
    "na": "NotApplicable",
    "n/a": "NotApplicable",
    "not applicable": "NotApplicable",
    "totally": "Totally",
    "partially": "Partially",
    "none": "None",
    "notapplicable": "NotApplicable",
}

_HEADER_LABEL = "Project/system information"


class CoverageError(ValueError):
    pass


@dataclass
class CoverageCell:
    information_item: str
    template: str
    mark: str  # "T", "P", "N" or "" (not applicable)


@dataclass
class TemplateFieldSet:
    """Which of the 21 information items one document template collects."""

    name: str
    items: dict[str, str]  # information item -> coverage declaration

    def declaration(self, item: str) -> str:
        return self.items.get(item, "NotApplicable")


def load_coverage_fixtures(text: str, source: str) -> list[TemplateFieldSet]:
    tree, diags = sectext.parse_sections(text, source)
    errors = [d for d in diags if d.severity == sectext.ERROR]
    if errors:
        raise CoverageError(f"fixture file unreadable: {errors[0].render()}")
    fieldsets: list[TemplateFieldSet] = []
    for section in tree.sections_prefixed("Template "):
        name = section.name[len("Template "):].strip()
        if not name:
            raise CoverageError(f"{source}: template section without a name")
        items: dict[str, str] = {}
        if section.table is not None:
            header = [h.lower() for h in section.table.header]
            for row, line in zip(section.table.rows, section.table.row_lines):
                cells = dict(zip(header, row))
                item = cells.get("item", "").strip()
                raw = cells.get("coverage", "").strip()
                if item not in INFORMATION_ITEMS:
                    raise CoverageError(f"{source}:{line}: unknown information item {item!r}")
                declaration = _DECLARATION_ALIASES.get(raw.lower())
                if declaration is None:
                    raise CoverageError(
                        f"{source}:{line}: bad coverage {raw!r}; "
                        f"use one of {', '.join(COVERAGE_DECLARATIONS)}"
                    )
                if item in items:
                    raise CoverageError(
                        f"{source}:{line}: {item!r} declared twice in Template {name}"
                    )
                items[item] = declaration
        fieldsets.append(TemplateFieldSet(name, items))
    if not fieldsets:
        raise CoverageError(f"{source}: no 'Template <name>' sections found")
    return fieldsets


def default_coverage_fixtures(project_root=None) -> list[TemplateFieldSet]:
    text, source = data_text(COVERAGE_FIXTURES_FILE, project_root)
    return load_coverage_fixtures(text, source)


def coverage_audit(templates: list[TemplateFieldSet]) -> list[list[CoverageCell]]:
    """One row per information item, one column per template."""
    if not templates:
        raise CoverageError("coverage audit needs at least one template field set")
    for fieldset in templates:
        for item in fieldset.items:
            if item not in INFORMATION_ITEMS:
                raise CoverageError(f"unknown information item {item!r} in {fieldset.name}")
    matrix: list[list[CoverageCell]] = []
    for item in INFORMATION_ITEMS:
        row = [
            CoverageCell(item, fieldset.name, _MARKS[fieldset.declaration(item)])
            for fieldset in templates
        ]
        matrix.append(row)
    return matrix


def render_coverage_matrix(matrix: list[list[CoverageCell]]) -> str:
    if not matrix:
        raise CoverageError("empty coverage matrix")
    template_names = [cell.template for cell in matrix[0]]
    header = [_HEADER_LABEL] + template_names
    rows = [[row[0].information_item] + [cell.mark for cell in row] for row in matrix]
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def line(cells: list[str]) -> str:
        return "| " + " | ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)) + " |"

    out = [line(header)]
    out.extend(line(row) for row in rows)
    out.append("")
    out.append(LEGEND)
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# document rendering


def _docs_of_kind(project: Project, kind: str):
    return [d for d in build_documents(project) if d.template_kind == kind]


def render_document(project: Project, kind: str, format: str = "PlainText") -> str:
    """Render the project's document(s) of one template kind.

    PlainText shares the on-disk grammar, so a single document's output
    re-parses to the same artifact. When several documents of the kind exist
    (inspection records, change analyses) they are emitted one after another
    behind ``# file:`` comment markers.
    """
    if kind == MANIFEST_KIND:
        raise ValueError("the project manifest is not a renderable template")
    docs = _docs_of_kind(project, kind)
    if not docs:
        raise ValueError(f"absent-template: the project has no {kind} content")
    fmt = format.strip().lower()
    if fmt in ("plaintext", "text"):
        if len(docs) == 1:
            return docs[0].render()
        chunks = [f"# file: {doc.path}\n{doc.render()}" for doc in docs]
        return "\n".join(chunks)
    if fmt == "html":
        return _render_html(kind, docs)
    raise ValueError(f"unknown format {format!r}; use text or html")


def _render_html(kind: str, docs) -> str:
    esc = _html.escape
    parts = [
        "<!DOCTYPE html>",
        '<html><head><meta charset="utf-8">',
        f"<title>{esc(kind)}</title>",
        "<style>",
        "body { font-family: sans-serif; margin: 2em; }",
        "table { border-collapse: collapse; margin: 0.5em 0; }",
        "td, th { border: 1px solid #999; padding: 0.25em 0.6em; text-align: left; }",
        "h2 { border-bottom: 1px solid #ccc; }",
        "</style></head><body>",
        f"<h1>{esc(kind)}</h1>",
    ]
    for doc in docs:
        if len(docs) > 1:
            parts.append(f"<p><i>{esc(doc.path)}</i></p>")
        for section in doc.tree.sections:
            parts.append(f"<h2>{esc(section.name)}</h2>")
            if section.fields:
                parts.append("<dl>")
                for field in section.fields:
                    parts.append(f"<dt>{esc(field.key)}</dt><dd>{esc(field.value)}</dd>")
                parts.append("</dl>")
            if section.table is not None and section.table.header:
                parts.append("<table><tr>")
                parts.extend(f"<th>{esc(h)}</th>" for h in section.table.header)
                parts.append("</tr>")
                for row in section.table.rows:
                    parts.append("<tr>" + "".join(f"<td>{esc(c)}</td>" for c in row) + "</tr>")
                parts.append("</table>")
    parts.append("</body></html>")
    return "\n".join(parts) + "\n"


def render_inspection_record(report) -> str:
    """The inspection session as a standalone textual record."""
    from .docformat import build_inspection_tree

    tree = build_inspection_tree(report)
    return sectext.render_sections(tree.sections)
