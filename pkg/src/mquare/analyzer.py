"""Textual metamodel format (.mmdl) and structural measure derivation.

The grammar is line-oriented; ``#`` starts a comment:

    metamodel "<name>"
    [abstract] concept <Name> [extends <Parent>] { [attr <name>: <type>]* }
    ref <Source>.<field> -> <Target> [<lower>..<upper|*>] [containment]
    root <Name>

From a parsed graph the analyzer derives concept coupling counts and the
instantiation-complexity elements: how many mandatory creations are order
constrained (A), and how many sibling groups may be completed in any
order (B). The measured complexity is X = A - B.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .catalog import Catalog
from .errors import (
    CyclicGeneralization,
    MandatoryContainmentCycle,
    MmdlParseError,
    NoRoot,
    UnknownConcept,
)
from .measurement import ElementValues
from .plan import EvaluationPlan


@dataclass(frozen=True)
class Concept:
    name: str
    abstract: bool = False
    attributes: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Reference:
    source: str
    field_name: str
    target: str
    lower: int
    upper: int | None    # None means unbounded (*)
    containment: bool = False

    @property
    def mandatory(self) -> bool:
        return self.lower >= 1

    def bounds_text(self) -> str:
        upper = "*" if self.upper is None else str(self.upper)
        return f"[{self.lower}..{upper}]"


@dataclass(frozen=True)
class Generalization:
    child: str
    parent: str


@dataclass(frozen=True)
class MetamodelGraph:
    name: str
    concepts: tuple[Concept, ...] = ()
    references: tuple[Reference, ...] = ()
    generalizations: tuple[Generalization, ...] = ()
    root: str | None = None

    def concept(self, name: str) -> Concept:
        for concept in self.concepts:
            if concept.name == name:
                return concept
        raise UnknownConcept(name)

    def has_concept(self, name: str) -> bool:
        return any(c.name == name for c in self.concepts)

    def parents_of(self, name: str) -> tuple[str, ...]:
        return tuple(g.parent for g in self.generalizations if g.child == name)

    def children_of(self, name: str) -> tuple[str, ...]:
        return tuple(g.child for g in self.generalizations if g.parent == name)

    def ancestors_of(self, name: str) -> set[str]:
        """All transitive generalization parents (name excluded)."""
        seen: set[str] = set()
        stack = list(self.parents_of(name))
        while stack:
            parent = stack.pop()
            if parent in seen:
                continue
            seen.add(parent)
            stack.extend(self.parents_of(parent))
        return seen

    def descendants_of(self, name: str) -> set[str]:
        """All transitive specializations (name excluded)."""
        seen: set[str] = set()
        stack = list(self.children_of(name))
        while stack:
            child = stack.pop()
            if child in seen:
                continue
            seen.add(child)
            stack.extend(self.children_of(child))
        return seen


# --- parsing -------------------------------------------------------------

_METAMODEL_RE = re.compile(r'^metamodel\s+"([^"]*)"$')
_CONCEPT_RE = re.compile(
    r"^(abstract\s+)?concept\s+(\w+)(?:\s+extends\s+(\w+))?\s*\{(.*?)(\})?$"
)
_ATTR_RE = re.compile(r"^attr\s+(\w+)\s*:\s*(\w+)$")
_REF_RE = re.compile(
    r"^ref\s+(\w+)\.(\w+)\s*->\s*(\w+)\s*\[(\d+)\.\.(\d+|\*)\]\s*(containment)?$"
)
_ROOT_RE = re.compile(r"^root\s+(\w+)$")


def parse_mmdl(text: str) -> MetamodelGraph:
    """Parse metamodel text; checks name resolution and generalization acyclicity."""
    name: str | None = None
    concepts: list[Concept] = []
    references: list[tuple[int, Reference]] = []
    generalizations: list[tuple[int, Generalization]] = []
    root: tuple[int, str] | None = None

    open_concept: dict | None = None
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue

        if open_concept is not None:
            if line == "}":
                concepts.append(_close_concept(open_concept))
                open_concept = None
                continue
            attr = _ATTR_RE.match(line)
            if attr is None:
                raise MmdlParseError(line_no, f"expected 'attr <name>: <type>' or '}}', got {line!r}")
            open_concept["attributes"].append((attr.group(1), attr.group(2)))
            continue

        if (match := _METAMODEL_RE.match(line)) is not None:
            if name is not None:
                raise MmdlParseError(line_no, "metamodel name declared twice")
            name = match.group(1)
            continue
        if (match := _CONCEPT_RE.match(line)) is not None:
            abstract, concept_name, parent, inline, closed = match.groups()
            if any(c.name == concept_name for c in concepts):
                raise MmdlParseError(line_no, f"concept {concept_name!r} declared twice")
            open_concept = {
                "line": line_no,
                "name": concept_name,
                "abstract": bool(abstract),
                "attributes": [],
            }
            if parent:
                generalizations.append((line_no, Generalization(concept_name, parent)))
            for part in filter(None, (p.strip() for p in inline.split(";") if p.strip())):
                attr = _ATTR_RE.match(part)
                if attr is None:
                    raise MmdlParseError(line_no, f"expected 'attr <name>: <type>', got {part!r}")
                open_concept["attributes"].append((attr.group(1), attr.group(2)))
            if closed:
                concepts.append(_close_concept(open_concept))
                open_concept = None
            continue
        if (match := _REF_RE.match(line)) is not None:
            source, field_name, target, lower, upper, containment = match.groups()
            upper_value = None if upper == "*" else int(upper)
            if upper_value is not None and upper_value < 1:
                raise MmdlParseError(line_no, "upper bound must be at least 1")
            if upper_value is not None and int(lower) > upper_value:
                raise MmdlParseError(line_no, f"lower bound {lower} exceeds upper bound {upper}")
            references.append(
                (line_no,
                 Reference(source, field_name, target, int(lower), upper_value,
                           bool(containment)))
            )
            continue
        if (match := _ROOT_RE.match(line)) is not None:
            if root is not None:
                raise MmdlParseError(line_no, "root declared twice")
            root = (line_no, match.group(1))
            continue
        raise MmdlParseError(line_no, f"unrecognized line {line!r}")

    if open_concept is not None:
        raise MmdlParseError(open_concept["line"], f"concept {open_concept['name']!r} is never closed")
    if name is None:
        raise MmdlParseError(1, 'missing metamodel declaration: metamodel "<name>"')

    known = {c.name for c in concepts}
    for line_no, ref in references:
        for concept_name in (ref.source, ref.target):
            if concept_name not in known:
                raise UnknownConcept(concept_name, line_no)
    for line_no, gen in generalizations:
        if gen.parent not in known:
            raise UnknownConcept(gen.parent, line_no)
    if root is not None and root[1] not in known:
        raise UnknownConcept(root[1], root[0])

    graph = MetamodelGraph(
        name=name,
        concepts=tuple(concepts),
        references=tuple(ref for _, ref in references),
        generalizations=tuple(gen for _, gen in generalizations),
        root=root[1] if root is not None else None,
    )
    _check_generalization_acyclic(graph)
    return graph


def _close_concept(open_concept: dict) -> Concept:
    return Concept(
        name=open_concept["name"],
        abstract=open_concept["abstract"],
        attributes=tuple(open_concept["attributes"]),
    )


def _check_generalization_acyclic(graph: MetamodelGraph) -> None:
    for concept in graph.concepts:
        if concept.name in graph.ancestors_of(concept.name):
            raise CyclicGeneralization(
                f"generalization cycle through concept {concept.name!r}"
            )


def serialize_mmdl(graph: MetamodelGraph) -> str:
    """Canonical text form; parsing it reproduces an equal graph."""
    lines = [f'metamodel "{graph.name}"']
    parents = {g.child: g.parent for g in graph.generalizations}
    for concept in graph.concepts:
        head = "abstract concept" if concept.abstract else "concept"
        extends = f" extends {parents[concept.name]}" if concept.name in parents else ""
        if concept.attributes:
            lines.append(f"{head} {concept.name}{extends} {{")
            for attr_name, attr_type in concept.attributes:
                lines.append(f"  attr {attr_name}: {attr_type}")
            lines.append("}")
        else:
            lines.append(f"{head} {concept.name}{extends} {{ }}")
    for ref in graph.references:
        containment = " containment" if ref.containment else ""
        lines.append(
            f"ref {ref.source}.{ref.field_name} -> {ref.target} "
            f"{ref.bounds_text()}{containment}"
        )
    if graph.root is not None:
        lines.append(f"root {graph.root}")
    return "\n".join(lines) + "\n"


# --- coupling ------------------------------------------------------------

@dataclass(frozen=True)
class CouplingReport:
    """Afferent/efferent dependency counts per concept.

    A dependency edge runs from a depender to the concept it depends on:
    reference sources depend on their targets, children on their parents.
    Distinct concept pairs count once; self-references are ignored.
    """

    afferent: dict[str, int]
    efferent: dict[str, int]
    edges: frozenset[tuple[str, str]]   # (depender, dependee)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def independent_concepts(self) -> tuple[str, ...]:
        """Concepts no other concept depends on (afferent count zero)."""
        return tuple(sorted(name for name, count in self.afferent.items() if count == 0))


def coupling_report(graph: MetamodelGraph) -> CouplingReport:
    edges: set[tuple[str, str]] = set()
    for ref in graph.references:
        if ref.source != ref.target:
            edges.add((ref.source, ref.target))
    for gen in graph.generalizations:
        if gen.child != gen.parent:
            edges.add((gen.child, gen.parent))

    afferent = {c.name: 0 for c in graph.concepts}
    efferent = {c.name: 0 for c in graph.concepts}
    for depender, dependee in edges:
        efferent[depender] += 1
        afferent[dependee] += 1
    return CouplingReport(afferent=afferent, efferent=efferent, edges=frozenset(edges))


# --- instantiation complexity ---------------------------------------------

@dataclass(frozen=True)
class InstantiationElement:
    """One mandatory creation: a containment role filled under a container.

    A target concept together with its concrete specializations collapses
    into a single element; whichever member is instantiated, one creation
    happens after the container's.
    """

    key: str                      # unique path, e.g. "Library/catalog:Catalog"
    concept: str                  # collapse representative (the declared target)
    hierarchy: tuple[str, ...]    # concrete members of the collapsed hierarchy
    container_key: str
    via: str                      # "<Source>.<field> [lo..hi]"


@dataclass(frozen=True)
class InstantiationComplexity:
    ordered_elements: int         # A: creations that must follow their container
    unordered_groups: int         # B: sibling groups completable in any order
    value: int                    # X = A - B
    elements: tuple[InstantiationElement, ...] = ()
    groups: tuple[tuple[str, tuple[str, ...]], ...] = ()   # (container key, member keys)
    trace: tuple[str, ...] = ()


def _guaranteed_mandatory_containments(graph: MetamodelGraph, concept: str) -> list[Reference]:
    """Containments every instance of ``concept`` must fill.

    Includes references declared on the concept itself and on its
    generalization ancestors; references declared only on specializations
    are conditional and therefore not mandatory for the collapsed element.
    """
    owners = {concept} | graph.ancestors_of(concept)
    refs = [
        ref for ref in graph.references
        if ref.containment and ref.mandatory and ref.source in owners
    ]
    refs.sort(key=lambda r: (r.source, r.field_name))
    return refs


def _concrete_members(graph: MetamodelGraph, concept: str) -> tuple[str, ...]:
    members = [concept] if not graph.concept(concept).abstract else []
    members.extend(
        sorted(d for d in graph.descendants_of(concept) if not graph.concept(d).abstract)
    )
    return tuple(members)


def instantiation_complexity(graph: MetamodelGraph) -> InstantiationComplexity:
    """Derive the ordered-creation count A, the free-group count B, and X = A - B.

    Every concrete concept reachable from the root through mandatory
    containment roles is one element (hierarchies collapse); each element
    must be created after its container, so A is the element count. B
    counts the groups of two or more sibling elements under one container
    whose mutual order nothing constrains. Optional containments and
    non-containment references impose no ordering and are noted in the
    trace.
    """
    if graph.root is None:
        raise NoRoot("instantiation analysis needs a declared root concept")

    trace: list[str] = [f"root: {graph.root}"]
    elements: list[InstantiationElement] = []
    groups: list[tuple[str, tuple[str, ...]]] = []

    def expand(container_key: str, concept: str, chain: tuple[str, ...]) -> None:
        children: list[str] = []
        for ref in _guaranteed_mandatory_containments(graph, concept):
            members = _concrete_members(graph, ref.target)
            via = f"{ref.source}.{ref.field_name} {ref.bounds_text()}"
            if not members:
                trace.append(
                    f"skipped {via}: target {ref.target} has no concrete member to instantiate"
                )
                continue
            if ref.target in chain:
                cycle = " -> ".join(chain + (ref.target,))
                raise MandatoryContainmentCycle(
                    f"mandatory containment cycle: {cycle}"
                )
            key = f"{container_key}/{ref.field_name}:{ref.target}"
            element = InstantiationElement(
                key=key,
                concept=ref.target,
                hierarchy=members,
                container_key=container_key,
                via=via,
            )
            elements.append(element)
            children.append(key)
            if len(members) > 1 or members[0] != ref.target:
                trace.append(
                    f"element {key}: hierarchy {{{', '.join(members)}}} collapses "
                    f"to a single creation (via {via})"
                )
            else:
                trace.append(f"element {key}: must be created after {container_key} (via {via})")
            expand(key, ref.target, chain + (ref.target,))
        if len(children) >= 2:
            groups.append((container_key, tuple(children)))
            trace.append(
                f"group under {container_key}: {{{', '.join(children)}}} may be "
                f"completed in any order"
            )

    expand(graph.root, graph.root, (graph.root,))

    for ref in graph.references:
        if ref.mandatory and not ref.containment:
            trace.append(
                f"note: mandatory reference {ref.source}.{ref.field_name} -> "
                f"{ref.target} {ref.bounds_text()} does not constrain creation order"
            )

    a = len(elements)
    b = len(groups)
    trace.append(f"A = {a} ordered creation(s), B = {b} free group(s), X = {a - b}")
    return InstantiationComplexity(
        ordered_elements=a,
        unordered_groups=b,
        value=a - b,
        elements=tuple(elements),
        groups=tuple(groups),
        trace=tuple(trace),
    )


# --- element suggestions --------------------------------------------------

_CONCEPT_TOTAL_MEASURES = ("CCp-1", "UAp-3", "UAp-4")

CONFIRM_NOTE = (
    "candidate values are derived from the metamodel implementation; the "
    "evaluator must confirm them against the specification before use"
)


@dataclass(frozen=True)
class ElementSuggestions:
    """Analyzer-derived session data: complete entries plus candidates.

    Entries are directly evaluable element sets. Candidates are single
    elements (such as a concept total offered as a B value) that need
    evaluator confirmation and are therefore not emitted as entries.
    """

    entries: tuple[ElementValues, ...] = ()
    candidates: tuple[tuple[str, str, int], ...] = ()   # (measure id, element, value)
    notes: tuple[str, ...] = ()


def suggest_elements(
    graph: MetamodelGraph,
    plan: EvaluationPlan | None = None,
    catalog: Catalog | None = None,
) -> ElementSuggestions:
    """Prefill structural measure elements from the graph.

    With a plan, only selected measures are suggested and the coupling
    element A is counted over the plan's required-independent concepts.
    Without a plan, everything derivable is offered.
    """
    del catalog  # reserved for future measure sets; built-ins need none
    entries: list[ElementValues] = []
    candidates: list[tuple[str, str, int]] = []
    notes: list[str] = []

    def wanted(measure_id: str) -> bool:
        return plan is None or measure_id in plan.selected_measures

    if wanted("MMo-2") and graph.root is not None:
        complexity = instantiation_complexity(graph)
        entries.append(
            ElementValues.counts(
                "MMo-2", A=complexity.ordered_elements, B=complexity.unordered_groups
            )
        )
    elif wanted("MMo-2"):
        notes.append("MMo-2 skipped: the metamodel declares no root")

    if wanted("MMo-1"):
        required = tuple(plan.required_independent_concepts) if plan is not None else ()
        if required:
            report = coupling_report(graph)
            for name in required:
                if not graph.has_concept(name):
                    raise UnknownConcept(name)
            independent = sum(1 for name in required if report.afferent[name] == 0)
            entries.append(ElementValues.counts("MMo-1", A=independent, B=len(required)))
        else:
            notes.append(
                "MMo-1 skipped: the plan lists no concepts required to be "
                "independent (field required_independent_concepts)"
            )

    total = len(graph.concepts)
    offered = [m for m in _CONCEPT_TOTAL_MEASURES if wanted(m)]
    for measure_id in offered:
        candidates.append((measure_id, "B", total))
    if offered:
        notes.append(
            f"B candidate for {', '.join(offered)}: {total} concepts declared "
            f"in the implementation; {CONFIRM_NOTE}"
        )

    return ElementSuggestions(
        entries=tuple(entries), candidates=tuple(candidates), notes=tuple(notes)
    )


def suggestions_to_session_dict(
    graph: MetamodelGraph,
    suggestions: ElementSuggestions,
    plan: EvaluationPlan | None = None,
) -> dict:
    """Session-fragment form (schema mqes-v1) of analyzer suggestions."""
    entries = {
        entry.measure_id: dict(entry.numeric) for entry in suggestions.entries
    }
    candidates: dict[str, dict[str, int]] = {}
    for measure_id, element, value in suggestions.candidates:
        candidates.setdefault(measure_id, {})[element] = value
    return {
        "schema": "mqes-v1",
        "metamodel_id": plan.metamodel_id if plan is not None else graph.name,
        "evaluator": "",
        "recorded_at": None,
        "notes": " | ".join(suggestions.notes),
        "entries": entries,
        "candidates": candidates,
    }
