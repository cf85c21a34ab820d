"""Registry of IoT interaction arrangements and their catalog schemas.

The registry always holds exactly nine arrangement kinds, IIA-01 through
IIA-09. IIA-01 (Display of IoT data, historically called Data exhibition)
ships with a fixed catalog schema that data files may restate but never
change. The other eight kinds are placeholders until a data file supplies
their catalogs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import datafiles, sectext
from .identifiers import IIA, Identifier, parse_identifier
from .model import ArrangementCatalogInstance, Project

IIA01_NAME = "Display of IoT data"
IIA01_ALIASES = ("Data exhibition",)
IIA01_COMPONENT = "Data Producers"
IIA01_PROMPTS = (
    "Who collects data?",
    "What type of data is collected?",
    "Source of data",
)


class RegistryError(ValueError):
    pass


@dataclass
class ArrangementKind:
    id: Identifier
    name: str
    description: str = ""
    representation_ref: str = ""


@dataclass
class CatalogSchema:
    arrangement_id: Identifier
    components: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def prompts(self) -> tuple[str, ...]:
        return tuple(p for _, prompts in self.components for p in prompts)


@dataclass
class ArrangementRegistry:
    kinds: dict[int, ArrangementKind] = field(default_factory=dict)
    schemas: dict[int, CatalogSchema] = field(default_factory=dict)

    def kind(self, number: int) -> ArrangementKind:
        return self.kinds[number]

    def schema(self, number: int) -> CatalogSchema:
        return self.schemas[number]

    def prompts(self, number: int) -> tuple[str, ...]:
        return self.schemas[number].prompts()


def builtin_registry() -> ArrangementRegistry:
    registry = ArrangementRegistry()
    one = Identifier(IIA, 1)
    registry.kinds[1] = ArrangementKind(
        one,
        IIA01_NAME,
        "Things collect data that the system presents to the people and "
        "systems that consume it.",
    )
    registry.schemas[1] = CatalogSchema(one, ((IIA01_COMPONENT, IIA01_PROMPTS),))
    for n in range(2, 10):
        ident = Identifier(IIA, n)
        registry.kinds[n] = ArrangementKind(
            ident,
            f"Undefined arrangement {n:02d}",
            "No catalog content bundled for this arrangement; define it in "
            "arrangements.retiot.",
        )
        registry.schemas[n] = CatalogSchema(ident)
    return registry


def _schema_from_section(section: sectext.Section, ident: Identifier) -> CatalogSchema:
    components: list[tuple[str, list[str]]] = []
    if section.table is not None:
        header = [h.lower() for h in section.table.header]
        try:
            comp_col = header.index("component")
            prompt_col = header.index("prompt")
        except ValueError as exc:
            raise RegistryError(
                f"{section.name}: catalog table needs Component and Prompt columns"
            ) from exc
        for row in section.table.rows:
            comp = row[comp_col].strip()
            prompt = row[prompt_col].strip()
            if not prompt:
                continue
            if not comp and components:
                comp = components[-1][0]
            if components and components[-1][0] == comp:
                components[-1][1].append(prompt)
            else:
                components.append((comp, [prompt]))
    seen: set[str] = set()
    for _, prompts in components:
        for prompt in prompts:
            if prompt in seen:
                raise RegistryError(f"{section.name}: duplicate prompt {prompt!r}")
            seen.add(prompt)
    return CatalogSchema(ident, tuple((c, tuple(p)) for c, p in components))


def load_arrangement_registry(text: str, source: str = "arrangements.retiot") -> ArrangementRegistry:
    """Build the registry from a data file layered over the built-ins.

    Raises RegistryError on duplicate ids, malformed sections, or an attempt
    to change the fixed IIA-01 schema.
    """
    registry = builtin_registry()
    tree, diags = sectext.parse_sections(text, source)
    for diag in diags:
        if diag.severity == sectext.ERROR:
            raise RegistryError(f"{source}:{diag.line}: {diag.message}")

    for section in tree.sections:
        ident = parse_identifier(section.name)
        if ident is None or ident.kind != IIA:
            raise RegistryError(f"{source}: section {section.name!r} is not an arrangement id")
        if not 1 <= ident.number <= 9:
            raise RegistryError(f"{source}: arrangements are IIA-01 through IIA-09, got {section.name!r}")

        name = section.get("Name", "")
        description = section.get("Description", "")
        representation = section.get("Representation", "")
        schema = _schema_from_section(section, ident)

        if ident.number == 1:
            if schema.components and schema.components != ((IIA01_COMPONENT, IIA01_PROMPTS),):
                raise RegistryError(
                    "immutable-schema(IIA-01): the catalog prompts of IIA-01 are fixed"
                )
            if name and name not in (IIA01_NAME,) + IIA01_ALIASES:
                raise RegistryError(
                    "immutable-schema(IIA-01): IIA-01 is named "
                    f"{IIA01_NAME!r} (alias {IIA01_ALIASES[0]!r})"
                )
            if description:
                registry.kinds[1].description = description
            if representation:
                registry.kinds[1].representation_ref = representation
            continue

        registry.kinds[ident.number] = ArrangementKind(
            ident,
            name or registry.kinds[ident.number].name,
            description,
            representation,
        )
        registry.schemas[ident.number] = schema
    return registry


def default_registry(project_root: Path | None = None) -> ArrangementRegistry:
    text, source = datafiles.data_text(datafiles.ARRANGEMENTS_FILE, project_root)
    return load_arrangement_registry(text, source)


@dataclass
class CatalogIssue:
    rule: str
    subject: str
    message: str

    def render(self) -> str:
        return f"{self.rule}({self.subject}): {self.message}"


def check_catalog_completeness(
    project: Project, registry: ArrangementRegistry
) -> list[CatalogIssue]:
    """Report scenario/arrangement pairs without a catalog instance and
    schema prompts left unanswered. Answering a prompt never adds issues."""
    issues: list[CatalogIssue] = []

    covered: set[tuple[Identifier, Identifier]] = set()
    for inst in project.catalog_instances:
        for sid in inst.scenario_ids:
            covered.add((sid, inst.arrangement_id))

    for scenario in sorted(project.scenarios, key=lambda s: s.id):
        for arrangement in scenario.arrangement_ids:
            if arrangement.kind != IIA or not 1 <= arrangement.number <= 9:
                continue
            if (scenario.id, arrangement) not in covered:
                issues.append(
                    CatalogIssue(
                        "missing-catalog",
                        f"{scenario.id.render()}, {arrangement.render()}",
                        "the scenario uses this arrangement but no catalog instance covers it",
                    )
                )

    for inst in sorted(project.catalog_instances, key=lambda i: (i.arrangement_id, i.instance)):
        if inst.arrangement_id.kind != IIA or not 1 <= inst.arrangement_id.number <= 9:
            continue
        for prompt in registry.prompts(inst.arrangement_id.number):
            if not inst.answers.get(prompt, "").strip():
                issues.append(
                    CatalogIssue(
                        "unanswered-prompt",
                        f"{inst.label()}, {prompt}",
                        "the catalog leaves this prompt unanswered",
                    )
                )
    return issues


def arrangements_for_scenario(project: Project, scenario_id: Identifier) -> set[Identifier]:
    scenario = project.scenario(scenario_id)
    if scenario is None:
        raise ValueError(f"unknown scenario {scenario_id.render()}")
    return set(scenario.arrangement_ids)


def scenarios_for_arrangement(project: Project, arrangement_id: Identifier) -> set[Identifier]:
    if arrangement_id.kind != IIA or not 1 <= arrangement_id.number <= 9:
        raise ValueError(f"unknown arrangement {arrangement_id.render()}")
    return {s.id for s in project.scenarios if arrangement_id in s.arrangement_ids}


def instances_for(
    project: Project, scenario_id: Identifier, arrangement_id: Identifier
) -> list[ArrangementCatalogInstance]:
    return [
        inst
        for inst in project.catalog_instances
        if inst.arrangement_id == arrangement_id and scenario_id in inst.scenario_ids
    ]
