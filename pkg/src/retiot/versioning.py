"""Version snapshots and structural diffs between project states.

A snapshot freezes the whole working state under a label. Diffs are computed
per artifact: every keyed collection contributes added/removed/modified
entries, and project-wide scalars travel on a synthetic ``Project`` channel.
``apply_changeset(diff_projects(a, b), a)`` reproduces ``b`` exactly.
"""

from __future__ import annotations

import copy
import datetime as _dt
import re
from dataclasses import dataclass, field, fields

from .identifiers import Identifier
from .model import Project, VersionSnapshot, normalize_project

CURRENT_LABEL = "current"

_LABEL_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9._\- ]*")

# kind label -> (Project attribute, key function)
_COLLECTIONS: dict[str, tuple[str, object]] = {
    "Stakeholder": ("stakeholders", lambda a: a.id.render()),
    "Need": ("needs", lambda a: a.id.render()),
    "Requirement": ("requirements", lambda a: a.id.render()),
    "BusinessRule": ("business_rules", lambda a: a.id.render()),
    "IoTScenario": ("scenarios", lambda a: a.id.render()),
    "IoTUseCase": ("use_cases", lambda a: a.id.render()),
    "ArrangementCatalog": ("catalog_instances", lambda a: a.label()),
    "Checklist": ("checklists", lambda a: a.kind),
    "InspectionRecord": ("inspection_reports", lambda a: a.session_label),
    "ChangeAnalysisReport": ("change_reports", lambda a: a.change.id.render()),
}

# Whole-value project fields; each change is one Modified entry on the
# synthetic "Project" kind.
_PROJECT_FIELDS = (
    "name", "responsible", "description", "problem_domain", "objective",
    "glossary", "agile", "use_case_diagram", "canvas", "feasibility",
    "agreements", "prototypes", "versions",
)

PROJECT_KIND = "Project"


@dataclass
class AddedItem:
    kind: str
    key: str
    value: object


@dataclass
class RemovedItem:
    kind: str
    key: str


@dataclass
class ModifiedField:
    kind: str
    key: str
    field: str
    before: object
    after: object


@dataclass
class ChangeSet:
    added: list[AddedItem] = field(default_factory=list)
    removed: list[RemovedItem] = field(default_factory=list)
    modified: list[ModifiedField] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not (self.added or self.removed or self.modified)

    def counts(self) -> tuple[int, int, int]:
        return len(self.added), len(self.removed), len(self.modified)


def snapshot_version(project: Project, label: str) -> Project:
    """Return a new project whose version history gains a frozen copy of the
    current working state. Labels become directory names, so their alphabet
    is restricted."""
    if not _LABEL_RE.fullmatch(label or ""):
        raise ValueError(
            f"bad version label {label!r}: use letters, digits, dots, dashes, underscores"
        )
    if label == CURRENT_LABEL:
        raise ValueError(f"{CURRENT_LABEL!r} names the working state and cannot be a snapshot")
    if any(v.label == label for v in project.versions):
        raise ValueError(f"version label {label!r} already exists")
    state = copy.deepcopy(project)
    state.versions = []
    result = copy.deepcopy(project)
    result.versions = list(result.versions) + [VersionSnapshot(label, state)]
    return result


def resolve_version(project: Project, label: str) -> Project:
    """Fetch a labeled state; the label ``current`` means the working state
    with its history stripped, so any two states compare cleanly."""
    if label == CURRENT_LABEL:
        state = copy.deepcopy(project)
        state.versions = []
        return state
    for snapshot in project.versions:
        if snapshot.label == label:
            return copy.deepcopy(snapshot.state)
    known = ", ".join(v.label for v in project.versions) or "none"
    raise ValueError(f"no version labeled {label!r} (available: {known}, current)")


def _keyed(project: Project, kind: str) -> dict[str, object]:
    attr, key_fn = _COLLECTIONS[kind]
    out: dict[str, object] = {}
    for item in getattr(project, attr):
        out[key_fn(item)] = item
    return out


def diff_projects(before: Project, after: Project) -> ChangeSet:
    """Structural diff; both sides are normalized first so that ordering
    differences never register as changes."""
    a = normalize_project(before)
    b = normalize_project(after)
    change = ChangeSet()

    for fieldname in _PROJECT_FIELDS:
        old, new = getattr(a, fieldname), getattr(b, fieldname)
        if old != new:
            change.modified.append(
                ModifiedField(PROJECT_KIND, "", fieldname, copy.deepcopy(old), copy.deepcopy(new))
            )

    for kind in _COLLECTIONS:
        old_items = _keyed(a, kind)
        new_items = _keyed(b, kind)
        for key in sorted(new_items.keys() - old_items.keys()):
            change.added.append(AddedItem(kind, key, copy.deepcopy(new_items[key])))
        for key in sorted(old_items.keys() - new_items.keys()):
            change.removed.append(RemovedItem(kind, key))
        for key in sorted(old_items.keys() & new_items.keys()):
            old_item, new_item = old_items[key], new_items[key]
            if old_item == new_item:
                continue
            for item_field in fields(old_item):
                old_value = getattr(old_item, item_field.name)
                new_value = getattr(new_item, item_field.name)
                if old_value != new_value:
                    change.modified.append(
                        ModifiedField(
                            kind, key, item_field.name,
                            copy.deepcopy(old_value), copy.deepcopy(new_value),
                        )
                    )
    return change


def apply_changeset(change: ChangeSet, project: Project) -> Project:
    """Apply a diff to a state it was computed against. Refuses patches that
    do not fit (missing keys, duplicate additions, stale before-values)."""
    state = normalize_project(copy.deepcopy(project))

    for removal in change.removed:
        attr, key_fn = _COLLECTIONS[removal.kind]
        items = list(getattr(state, attr))
        remaining = [i for i in items if key_fn(i) != removal.key]
        if len(remaining) == len(items):
            raise ValueError(f"cannot remove {removal.kind} {removal.key!r}: not present")
        setattr(state, attr, tuple(remaining))

    for addition in change.added:
        attr, key_fn = _COLLECTIONS[addition.kind]
        items = list(getattr(state, attr))
        if any(key_fn(i) == addition.key for i in items):
            raise ValueError(f"cannot add {addition.kind} {addition.key!r}: already present")
        items.append(copy.deepcopy(addition.value))
        setattr(state, attr, tuple(items))

    for mod in change.modified:
        if mod.kind == PROJECT_KIND:
            current = getattr(state, mod.field)
            if current != mod.before:
                raise ValueError(f"stale patch for Project.{mod.field}: state changed underneath")
            setattr(state, mod.field, copy.deepcopy(mod.after))
            continue
        attr, key_fn = _COLLECTIONS[mod.kind]
        target = None
        for item in getattr(state, attr):
            if key_fn(item) == mod.key:
                target = item
                break
        if target is None:
            raise ValueError(f"cannot modify {mod.kind} {mod.key!r}: not present")
        if getattr(target, mod.field) != mod.before:
            raise ValueError(
                f"stale patch for {mod.kind} {mod.key!r}.{mod.field}: state changed underneath"
            )
        setattr(target, mod.field, copy.deepcopy(mod.after))

    return normalize_project(state)


def diff_versions(project: Project, from_label: str, to_label: str) -> ChangeSet:
    return diff_projects(resolve_version(project, from_label), resolve_version(project, to_label))


def _fmt(value: object) -> str:
    if isinstance(value, Identifier):
        return value.render()
    if isinstance(value, str):
        text = value if len(value) <= 60 else value[:57] + "..."
        return repr(text)
    if isinstance(value, bool) or value is None or isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, _dt.date):
        return value.isoformat()
    if isinstance(value, (list, tuple, dict)):
        return f"<{len(value)} entries>"
    return f"<{type(value).__name__}>"


def render_changeset(change: ChangeSet) -> str:
    if change.is_empty():
        return "No differences.\n"
    lines: list[str] = []
    for item in change.added:
        lines.append(f"Added {item.kind} {item.key}")
    for item in change.removed:
        lines.append(f"Removed {item.kind} {item.key}")
    for mod in change.modified:
        where = f"{mod.kind}.{mod.field}" if not mod.key else f"{mod.kind} {mod.key}.{mod.field}"
        lines.append(f"Modified {where}: {_fmt(mod.before)} -> {_fmt(mod.after)}")
    added, removed, modified = change.counts()
    lines.append(f"Total: {added} added, {removed} removed, {modified} modified.")
    return "\n".join(lines) + "\n"
