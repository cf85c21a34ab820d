"""Line-oriented sectioned text: the on-disk grammar shared by all documents.

A file is a sequence of sections. A section opens with ``== Name ==`` and
holds ``Key: value`` fields plus at most one table. The first ``| a | b |``
row of a section is the table header, later pipe rows are data rows. Blank
lines and ``#`` comment lines are ignored and not preserved. Parsing is
total: malformed input produces diagnostics, never an exception.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

ERROR = "Error"
WARNING = "Warning"

_SECTION_RE = re.compile(r"==\s*(.+?)\s*==")


@dataclass
class Diagnostic:
    severity: str
    file: str
    line: int
    column: int
    message: str
    rule: str

    def render(self) -> str:
        return (
            f"{self.file}:{self.line}:{self.column}: "
            f"{self.severity.lower()}: {self.message} [{self.rule}]"
        )


def error(file: str, line: int, message: str, rule: str) -> Diagnostic:
    return Diagnostic(ERROR, file, line, 1, message, rule)


def warning(file: str, line: int, message: str, rule: str) -> Diagnostic:
    return Diagnostic(WARNING, file, line, 1, message, rule)


@dataclass
class Field:
    key: str
    value: str
    line: int = 0


@dataclass
class Table:
    header: list[str] = field(default_factory=list)
    rows: list[list[str]] = field(default_factory=list)
    line: int = 0
    row_lines: list[int] = field(default_factory=list)


@dataclass
class Section:
    name: str
    fields: list[Field] = field(default_factory=list)
    table: Table | None = None
    line: int = 0

    def get(self, key: str, default: str = "") -> str:
        for f in self.fields:
            if f.key == key:
                return f.value
        return default

    def field_line(self, key: str) -> int:
        for f in self.fields:
            if f.key == key:
                return f.line
        return self.line


@dataclass
class SectionTree:
    source: str
    sections: list[Section] = field(default_factory=list)

    def section(self, name: str) -> Section | None:
        for s in self.sections:
            if s.name == name:
                return s
        return None

    def sections_prefixed(self, prefix: str) -> list[Section]:
        return [s for s in self.sections if s.name.startswith(prefix)]


def _split_row(line: str) -> list[str]:
    inner = line.strip()[1:-1]
    return [cell.strip() for cell in inner.split("|")]


def parse_sections(text: str, source: str) -> tuple[SectionTree, list[Diagnostic]]:
    tree = SectionTree(source)
    diags: list[Diagnostic] = []
    seen: set[str] = set()
    current: Section | None = None
    discarding = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        match = _SECTION_RE.fullmatch(line)
        if match:
            name = match.group(1)
            if name in seen:
                diags.append(error(source, lineno, f"duplicate section {name!r}", "duplicate-section"))
                # First occurrence wins; the duplicate body is discarded.
                current = None
                discarding = True
                continue
            seen.add(name)
            current = Section(name, line=lineno)
            tree.sections.append(current)
            discarding = False
            continue

        if line.startswith("|") and line.endswith("|") and len(line) >= 2:
            if discarding:
                continue
            if current is None:
                diags.append(error(source, lineno, "table row outside any section", "orphan-content"))
                continue
            cells = _split_row(line)
            if current.table is None:
                current.table = Table(header=cells, line=lineno)
            else:
                width = len(current.table.header)
                if len(cells) != width:
                    diags.append(
                        warning(
                            source,
                            lineno,
                            f"row has {len(cells)} cells, header has {width}",
                            "ragged-row",
                        )
                    )
                    cells = (cells + [""] * width)[:width]
                current.table.rows.append(cells)
                current.table.row_lines.append(lineno)
            continue

        if ":" in line:
            if discarding:
                continue
            if current is None:
                diags.append(error(source, lineno, "field outside any section", "orphan-content"))
                continue
            key, _, value = line.partition(":")
            key = key.strip()
            value = value.strip()
            if not key:
                diags.append(error(source, lineno, "field with empty key", "unparseable-line"))
                continue
            if any(f.key == key for f in current.fields):
                diags.append(error(source, lineno, f"duplicate field {key!r}", "duplicate-field"))
                continue
            current.fields.append(Field(key, value, lineno))
            continue

        diags.append(error(source, lineno, f"unparseable line: {line[:60]!r}", "unparseable-line"))

    return tree, diags


def _clean(text: str) -> str:
    # The grammar is line oriented and pipe delimited; embedded newlines and
    # pipes cannot survive a round trip, so they are normalized on output.
    return text.replace("\n", " ").replace("|", "/").strip()


def render_sections(sections: list[Section]) -> str:
    blocks: list[str] = []
    for section in sections:
        lines = [f"== {_clean(section.name)} =="]
        for f in section.fields:
            lines.append(f"{_clean(f.key)}: {_clean(f.value)}".rstrip())
        if section.table is not None and section.table.header:
            if section.fields:
                lines.append("")
            lines.append("| " + " | ".join(_clean(c) for c in section.table.header) + " |")
            for row in section.table.rows:
                lines.append("| " + " | ".join(_clean(c) for c in row) + " |")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
