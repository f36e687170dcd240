"""Built-in metamodel quality catalog.

The catalog is compiled-in data: five quality characteristics, their
sub-characteristics, the nineteen quality requirements (MQR01..MQR19),
and the twenty-three measures with their measurement-function shapes.
Everything is immutable after load and safe to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import UnknownMeasure, UnknownRequirement


class MeasureKind(Enum):
    """Shape of a measurement function."""

    NOMINAL = "nominal"
    ONE_MINUS_RATIO = "one_minus_ratio"
    RATIO = "ratio"
    DIFFERENCE = "difference"
    MEAN_OF_DEPENDENT = "mean_of_dependent"


class Orientation(Enum):
    """Which direction of the measured value is desirable."""

    HIGHER_BETTER = "higher_better"
    LOWER_BETTER = "lower_better"
    INFORMATIONAL = "informational"


class ArtifactKind(Enum):
    """Metamodel-related artifacts a requirement may need for evaluation."""

    SPECIFICATIONS = "specifications"
    IMPLEMENTATION = "implementation"
    USER_DOCUMENTATION = "user_documentation"
    HISTORY_DOCUMENTATION = "history_documentation"
    DOMAIN_SPECIFICATIONS = "domain_specifications"
    REPLACED_METAMODEL = "replaced_metamodel"


#: Canonical column order for artifact sets in documents and messages.
ARTIFACT_ORDER: tuple[ArtifactKind, ...] = (
    ArtifactKind.SPECIFICATIONS,
    ArtifactKind.IMPLEMENTATION,
    ArtifactKind.USER_DOCUMENTATION,
    ArtifactKind.HISTORY_DOCUMENTATION,
    ArtifactKind.DOMAIN_SPECIFICATIONS,
    ArtifactKind.REPLACED_METAMODEL,
)


@dataclass(frozen=True)
class Characteristic:
    id: str            # short code: C, CS, U, M, P
    initial: str       # uppercase initial used by measure ids (not unique)
    name: str
    description: str
    sub_characteristics: tuple[str, ...]


@dataclass(frozen=True)
class SubCharacteristic:
    id: str            # characteristic initial + two-letter code, e.g. "CCp"
    code: str          # two-letter code alone, e.g. "Cp" (not unique)
    name: str
    description: str
    parent: str        # Characteristic id
    measures: tuple[str, ...]

    @property
    def alias(self) -> str:
        """Identifier used for this sub-characteristic in formulas."""
        return self.id


@dataclass(frozen=True)
class MeasureSpec:
    id: str                      # e.g. "CCp-1"
    name: str
    description: str             # the question the measure answers
    kind: MeasureKind
    element_names: tuple[tuple[str, str], ...]   # (symbol, meaning)
    orientation: Orientation
    value_range: str             # "[0,1]", "unbounded integer", or "nominal list"
    sub_characteristic: str      # SubCharacteristic id
    requirements: tuple[str, ...]
    provenance_note: str

    @property
    def alias(self) -> str:
        """Identifier used for this measure in formulas (id without the dash)."""
        return self.id.replace("-", "")

    @property
    def is_numeric(self) -> bool:
        return self.kind is not MeasureKind.NOMINAL

    @property
    def function_text(self) -> str:
        """Human-readable shape of the measurement function."""
        return _FUNCTION_TEXT[self.kind]


_FUNCTION_TEXT = {
    MeasureKind.NOMINAL: "nominal list",
    MeasureKind.ONE_MINUS_RATIO: "X = 1 - A / B",
    MeasureKind.RATIO: "X = A / B",
    MeasureKind.DIFFERENCE: "X = A - B",
    MeasureKind.MEAN_OF_DEPENDENT: "X = (A1 + ... + An) / n",
}


@dataclass(frozen=True)
class QualityRequirement:
    id: str                      # "MQR01".."MQR19"
    text: str                    # verbatim requirement sentence
    sub_characteristic: str
    measures: tuple[str, ...]
    required_artifacts: frozenset[ArtifactKind]
    gloss: str | None = None     # normalized wording where the source sentence is garbled


@dataclass(frozen=True)
class Catalog:
    characteristics: tuple[Characteristic, ...]
    sub_characteristics: tuple[SubCharacteristic, ...]
    measures: tuple[MeasureSpec, ...]
    requirements: tuple[QualityRequirement, ...]

    def characteristic(self, char_id: str) -> Characteristic:
        for c in self.characteristics:
            if c.id == char_id:
                return c
        raise KeyError(char_id)

    def sub_characteristic(self, sub_id: str) -> SubCharacteristic:
        for s in self.sub_characteristics:
            if s.id == sub_id:
                return s
        raise KeyError(sub_id)

    def measure(self, measure_id: str) -> MeasureSpec:
        for m in self.measures:
            if m.id == measure_id:
                return m
        raise UnknownMeasure(f"unknown measure id {measure_id!r}")

    def has_measure(self, measure_id: str) -> bool:
        return any(m.id == measure_id for m in self.measures)

    def requirement(self, req_id: str) -> QualityRequirement:
        for r in self.requirements:
            if r.id == req_id:
                return r
        raise UnknownRequirement(f"unknown requirement id {req_id!r}")

    def has_requirement(self, req_id: str) -> bool:
        return any(r.id == req_id for r in self.requirements)

    def measures_for_requirement(self, req_id: str) -> list[str]:
        return list(self.requirement(req_id).measures)

    def required_artifacts(self, req_id: str) -> frozenset[ArtifactKind]:
        return self.requirement(req_id).required_artifacts

    def requirement_for_measure(self, measure_id: str) -> QualityRequirement:
        spec = self.measure(measure_id)
        return self.requirement(spec.requirements[0])

    def measure_order(self, measure_id: str) -> int:
        """Position of a measure in the canonical catalog ordering."""
        for i, m in enumerate(self.measures):
            if m.id == measure_id:
                return i
        raise UnknownMeasure(f"unknown measure id {measure_id!r}")


_MEASURE_ID_RE = re.compile(r"^([A-Z][A-Za-z]{2})-(\d+)$")


def parse_measure_id(measure_id: str, catalog: Catalog | None = None) -> tuple[str, str, int]:
    """Split a measure id into (characteristic id, sub-characteristic id, ordinal).

    The three-letter prefix is the sub-characteristic id; its first letter is
    the owning characteristic's initial.
    """
    m = _MEASURE_ID_RE.match(measure_id)
    if m is None:
        raise UnknownMeasure(f"measure id {measure_id!r} does not match the id scheme")
    prefix, ordinal = m.group(1), int(m.group(2))
    cat = catalog or load_builtin_catalog()
    try:
        sub = cat.sub_characteristic(prefix)
    except KeyError:
        raise UnknownMeasure(f"measure id {measure_id!r} names no known sub-characteristic") from None
    return sub.parent, sub.id, ordinal


# --- built-in data ------------------------------------------------------

_CHARACTERISTICS = (
    ("C", "C", "Compliance",
     "The degree to which a metamodel must comply with items such as widely "
     "accepted and sound theories, regulations, standards, and conventions.",
     ("CCc",)),
    ("CS", "C", "Conceptual Suitability",
     "The degree to which a metamodel satisfies requirements when used under "
     "specified conditions.",
     ("CCp", "CCr", "CAp")),
    ("U", "U", "Usability",
     "The degree to which a metamodel can be used to achieve specific goals "
     "in a specified application domain.",
     ("UAp", "ULe")),
    ("M", "M", "Maintainability",
     "The degree of effectiveness and efficiency with which a metamodel can "
     "be modified by the intended maintainers.",
     ("MMo", "MRe", "MMd")),
    ("P", "P", "Portability",
     "The degree of effectiveness and efficiency with which a metamodel can "
     "be transferred from one application domain to another.",
     ("PAd", "PRe")),
)

_SUB_CHARACTERISTICS = (
    ("CCc", "Cc", "Conceptual compliance",
     "The degree to which the conceptual foundation of a metamodel complies "
     "with widely accepted and sound theories, regulations, standards, and "
     "conventions.",
     "C", ("CCc-1", "CCc-2")),
    ("CCp", "Cp", "Conceptual completeness",
     "The degree to which the set of metamodel concepts covers all the "
     "specified requirements.",
     "CS", ("CCp-1",)),
    ("CCr", "Cr", "Conceptual correctness",
     "The degree to which the metamodel provides the correct modeling "
     "results with the needed degree of precision.",
     "CS", ("CCr-1",)),
    ("CAp", "Ap", "Conceptual appropriateness",
     "The degree to which the metamodel facilitates the accomplishment of "
     "modeling tasks, and for determining their adequacy for performing "
     "these tasks.",
     "CS", ("CAp-1", "CAp-2")),
    ("UAp", "Ap", "Appropriateness recognizability",
     "The degree to which users can recognize whether a metamodel is "
     "appropriate for their needs or not.",
     "U", ("UAp-1", "UAp-2", "UAp-3", "UAp-4")),
    ("ULe", "Le", "Learnability",
     "The degree to which a metamodel can be used by specified users to "
     "achieve specified learning goals in a given context of use.",
     "U", ("ULe-1",)),
    ("MMo", "Mo", "Modularity",
     "The degree to which a metamodel is composed of discrete concepts such "
     "that a change of one concept has minimal impact on other concepts.",
     "M", ("MMo-1", "MMo-2")),
    ("MRe", "Re", "Reusability",
     "The degree to which usage scenarios can be used in more than one "
     "metamodel.",
     "M", ("MRe-1",)),
    ("MMd", "Md", "Modifiability",
     "The degree to which a metamodel can be effectively and efficiently "
     "modified without introducing inconsistencies or degrading existing "
     "metamodel quality.",
     "M", ("MMd-1", "MMd-2", "MMd-3", "MMd-4", "MMd-5")),
    ("PAd", "Ad", "Adaptability",
     "The degree to which a metamodel can effectively and efficiently be "
     "adapted for different application domains.",
     "P", ("PAd-1",)),
    ("PRe", "Re", "Replaceability",
     "The degree to which a metamodel can replace another specified "
     "metamodel for the same purpose in the same application domain.",
     "P", ("PRe-1", "PRe-2", "PRe-3")),
)

# id, name, question, kind, elements, orientation, range, sub-characteristic,
# requirements, provenance note
_MEASURES = (
    ("CCc-1", "Conceptual foundation",
     "Which widely-accepted and sound theories, regulations, standards, and "
     "conventions is the metamodel compliant to?",
     MeasureKind.NOMINAL,
     (("items", "Theories, regulations, standards, and conventions the "
                "metamodel is compliant to"),),
     Orientation.INFORMATIONAL, "nominal list", "CCc", ("MQR01",),
     "Adapted from ISO/IEC 9126-3."),
    ("CCc-2", "Backward Traceability",
     "Which are the metamodel concepts that can be traced back to their "
     "conceptual foundations?",
     MeasureKind.NOMINAL,
     (("items", "Metamodel concepts paired with their conceptual "
                "foundations"),),
     Orientation.INFORMATIONAL, "nominal list", "CCc", ("MQR01",),
     "New measure."),
    ("CCp-1", "Conceptual coverage",
     "What proportion of the specified concepts has been modeled?",
     MeasureKind.ONE_MINUS_RATIO,
     (("A", "Number of missing concepts"),
      ("B", "Number of concepts described in the metamodel specification")),
     Orientation.HIGHER_BETTER, "[0,1]", "CCp", ("MQR02",),
     "Adapted from ISO/IEC 25023 functional coverage."),
    ("CCr-1", "Conceptual correctness",
     "What proportion of metamodel concepts is modeled correctly?",
     MeasureKind.ONE_MINUS_RATIO,
     (("A", "Number of incorrectly modeled concepts"),
      ("B", "Number of concepts considered in the evaluation")),
     Orientation.HIGHER_BETTER, "[0,1]", "CCr", ("MQR03",),
     "Adapted from ISO/IEC 25023 functional correctness."),
    ("CAp-1", "Conceptual appropriateness of usage objective",
     "What proportion of the metamodel concepts provides appropriate outcome "
     "to achieve a specific usage objective?",
     MeasureKind.ONE_MINUS_RATIO,
     (("A", "Number of missing or incorrectly modeled concepts among those "
            "that are required for achieving a specific usage objective"),
      ("B", "Number of concepts required for achieving a specific usage "
            "objective")),
     Orientation.HIGHER_BETTER, "[0,1]", "CAp", ("MQR04",),
     "Adapted from ISO/IEC 25023 functional appropriateness of usage "
     "objective."),
    ("CAp-2", "Conceptual appropriateness of metamodel",
     "What proportion of the metamodel concepts required by the users to "
     "achieve their objectives provides appropriate outcome?",
     MeasureKind.MEAN_OF_DEPENDENT,
     (("Ai", "Appropriateness score for usage objective i (the measured "
             "value of CAp-1 for the i-th usage objective)"),
      ("n", "Number of usage objectives")),
     Orientation.HIGHER_BETTER, "[0,1]", "CAp", ("MQR04",),
     "Adapted from ISO/IEC 25023 functional appropriateness of system."),
    ("UAp-1", "Description completeness",
     "What proportion of usage scenarios is described in the metamodel "
     "specifications?",
     MeasureKind.RATIO,
     (("A", "Number of usage scenarios described in the user documents that "
            "match usage scenarios described in the metamodel "
            "specifications"),
      ("B", "Number of usage scenarios described in the metamodel "
            "specifications")),
     Orientation.HIGHER_BETTER, "[0,1]", "UAp", ("MQR05",),
     "Adapted from ISO/IEC 25023 description completeness."),
    ("UAp-2", "Demonstration coverage",
     "What proportion of metamodel concepts requiring demonstration have "
     "demonstration capability?",
     MeasureKind.RATIO,
     (("A", "Number of concepts with demonstration features"),
      ("B", "Number of concepts that could benefit from demonstration "
            "features")),
     Orientation.HIGHER_BETTER, "[0,1]", "UAp", ("MQR06",),
     "Adapted from ISO/IEC 25023 demonstration coverage."),
    ("UAp-3", "Evident concepts",
     "What proportion of metamodel concepts is evident to the user?",
     MeasureKind.RATIO,
     (("A", "Number of concepts evident to the user"),
      ("B", "Number of concepts described in the metamodel specification")),
     Orientation.HIGHER_BETTER, "[0,1]", "UAp", ("MQR07",),
     "Adapted from ISO/IEC 9126-3."),
    ("UAp-4", "Concept understandability",
     "What proportion of metamodel concepts is correctly understood without "
     "prior training?",
     MeasureKind.RATIO,
     (("A", "Number of concepts whose purpose is correctly understood "
            "without prior training"),
      ("B", "Number of concepts described in the metamodel specification")),
     Orientation.HIGHER_BETTER, "[0,1]", "UAp", ("MQR08",),
     "Adapted from ISO/IEC 9126-3."),
    ("ULe-1", "User guide completeness",
     "What proportion of metamodel concepts is described in the user "
     "documentation that enable the use of the metamodel?",
     MeasureKind.RATIO,
     (("A", "Number of concepts described in the user documentation as "
            "required"),
      ("B", "Number of concepts required to be documented")),
     Orientation.HIGHER_BETTER, "[0,1]", "ULe", ("MQR09",),
     "Adapted from ISO/IEC 25023 user guide completeness."),
    ("MMo-1", "Coupling of concepts",
     "How strongly are the concepts independent and how many concepts are "
     "free of impacts from changes to other metamodel concepts?",
     MeasureKind.RATIO,
     (("A", "Number of concepts with no impact on others"),
      ("B", "Number of specified concepts which are required to be "
            "independent")),
     Orientation.HIGHER_BETTER, "[0,1]", "MMo", ("MQR10",),
     "Adapted from ISO/IEC 25023 coupling of components."),
    ("MMo-2", "Complexity of exercise",
     "How complex is building terminal models by analyzing the structure of "
     "the metamodel?",
     MeasureKind.DIFFERENCE,
     (("A", "Number of instantiation elements that must be done in order"),
      ("B", "Number of instantiation groups that must be completed, but in "
            "any order")),
     Orientation.LOWER_BETTER, "unbounded integer", "MMo", ("MQR11",),
     "Adapted from Sprinkle's metamodel complexity estimation."),
    ("MRe-1", "Reusability per application domain",
     "How reusable is the metamodel to an application domain?",
     MeasureKind.ONE_MINUS_RATIO,
     (("A", "Number of usage scenarios which were not possible to be reused "
            "for an application domain in particular"),
      ("B", "Number of usage scenarios described in the metamodel "
            "specifications")),
     Orientation.HIGHER_BETTER, "[0,1]", "MRe", ("MQR12",),
     "New measure."),
    ("MMd-1", "Conceptual stability",
     "How stable is the metamodel specification during the metamodel's "
     "development life cycle?",
     MeasureKind.ONE_MINUS_RATIO,
     (("A", "Number of concepts changed during the metamodel's development "
            "life cycle"),
      ("B", "Number of concepts described in the metamodel specification")),
     Orientation.HIGHER_BETTER, "[0,1]", "MMd", ("MQR13",),
     "Adapted from ISO/IEC 9126-3."),
    ("MMd-2", "Change recordability",
     "Are changes to metamodel specifications recorded adequately?",
     MeasureKind.RATIO,
     (("A", "Number of changes in concepts having change comments confirmed "
            "in review"),
      ("B", "Number of concepts changed from original metamodel "
            "specification")),
     Orientation.HIGHER_BETTER, "[0,1]", "MMd", ("MQR14",),
     "Adapted from ISO/IEC 9126-3."),
    ("MMd-3", "Change impact",
     "What is the frequency of adverse impacts after modification?",
     MeasureKind.ONE_MINUS_RATIO,
     (("A", "Number of detected adverse impacts after modifications"),
      ("B", "Number of modifications made")),
     Orientation.HIGHER_BETTER, "[0,1]", "MMd", ("MQR15",),
     "Adapted from ISO/IEC 9126-3."),
    ("MMd-4", "Modification impact localization",
     "How large is the impact of the modification on the metamodel?",
     MeasureKind.RATIO,
     (("A", "Number of concepts affected by modification, confirmed in "
            "review"),
      ("B", "Number of concepts described in the metamodel specification")),
     Orientation.LOWER_BETTER, "[0,1]", "MMd", ("MQR15",),
     "Adapted from ISO/IEC 9126-3."),
    ("MMd-5", "Modification correctness",
     "What proportion of modifications has been implemented correctly?",
     MeasureKind.ONE_MINUS_RATIO,
     (("A", "Number of modifications that caused an adverse impact within a "
            "defined period after made"),
      ("B", "Number of modifications made")),
     Orientation.HIGHER_BETTER, "[0,1]", "MMd", ("MQR15",),
     "Adapted from ISO/IEC 25023 modification correctness."),
    ("PAd-1", "Adaptability per application domain",
     "How adaptable is the metamodel to an application domain?",
     MeasureKind.ONE_MINUS_RATIO,
     (("A", "Number of usage scenarios which were not possible to be "
            "modeled for an application domain in particular"),
      ("B", "Number of usage scenarios described in the metamodel "
            "specifications")),
     Orientation.HIGHER_BETTER, "[0,1]", "PAd", ("MQR16",),
     "New measure."),
    ("PRe-1", "Usage similarity",
     "What proportion of usage scenarios of the replaced metamodel can be "
     "modeled without any additional learning or workaround?",
     MeasureKind.RATIO,
     (("A", "Number of usage scenarios which can be modeled without any "
            "additional learning or workaround"),
      ("B", "Number of usage scenarios in the replaced metamodel")),
     Orientation.HIGHER_BETTER, "[0,1]", "PRe", ("MQR17",),
     "Adapted from ISO/IEC 25023 usage similarity."),
    ("PRe-2", "Metamodel quality equivalence",
     "What proportion of the quality measures is satisfied after replacing "
     "previous metamodel by this one?",
     MeasureKind.RATIO,
     (("A", "Number of quality measures of the new metamodel which are "
            "better or equal to the replaced metamodel"),
      ("B", "Number of quality measures of the replaced metamodel that are "
            "relevant")),
     Orientation.HIGHER_BETTER, "[0,1]", "PRe", ("MQR18",),
     "Adapted from ISO/IEC 25023 product quality equivalence."),
    ("PRe-3", "Conceptual inclusiveness",
     "Can the similar concepts easily be used after replacing previous "
     "metamodel by this one?",
     MeasureKind.RATIO,
     (("A", "Number of concepts which produce similar results as before"),
      ("B", "Number of concepts which have to be used in the replaced "
            "metamodel")),
     Orientation.HIGHER_BETTER, "[0,1]", "PRe", ("MQR19",),
     "Adapted from ISO/IEC 25023 functional inclusiveness."),
)

_A = ArtifactKind

# id, verbatim text, sub-characteristic, measures, required artifacts, gloss
_REQUIREMENTS = (
    ("MQR01",
     "The metamodel conceptual foundation must comply with widely-accepted "
     "and sound theories, regulations, standards, and conventions.",
     "CCc", ("CCc-1", "CCc-2"), (_A.SPECIFICATIONS,), None),
    ("MQR02",
     "The metamodel must cover the concepts found in its specifications.",
     "CCp", ("CCp-1",), (_A.SPECIFICATIONS, _A.IMPLEMENTATION), None),
    ("MQR03",
     "The metamodel must represent the concepts found in its specifications "
     "correctly.",
     "CCr", ("CCr-1",), (_A.SPECIFICATIONS, _A.IMPLEMENTATION), None),
    ("MQR04",
     "The metamodel must represent the concepts required for achieving "
     "specific usage objectives.",
     "CAp", ("CAp-1", "CAp-2"),
     (_A.SPECIFICATIONS, _A.IMPLEMENTATION, _A.USER_DOCUMENTATION), None),
    ("MQR05",
     "The users must be able to recognize whether a metamodel is appropriate "
     "for their needs accordingly the usage scenarios described in the user "
     "documents.",
     "UAp", ("UAp-1",), (_A.SPECIFICATIONS, _A.USER_DOCUMENTATION), None),
    ("MQR06",
     "The users must be able to recognize whether a metamodel is appropriate "
     "for their needs accordingly the demonstration features of metamodel "
     "concepts.",
     "UAp", ("UAp-2",), (_A.SPECIFICATIONS, _A.USER_DOCUMENTATION), None),
    ("MQR07",
     "The users must be able to recognize whether a metamodel is appropriate "
     "for their needs accordingly the evident concepts to the user in the "
     "metamodel specifications.",
     "UAp", ("UAp-3",), (_A.SPECIFICATIONS, _A.IMPLEMENTATION), None),
    ("MQR08",
     "The users must be able to recognize whether a metamodel contain "
     "concepts whose purpose is correctly understood without prior training.",
     "UAp", ("UAp-4",), (_A.SPECIFICATIONS, _A.IMPLEMENTATION), None),
    ("MQR09",
     "The users must be able to recognize whether a metamodel is appropriate "
     "for their needs accordingly the metamodel user documentation.",
     "ULe", ("ULe-1",), (_A.SPECIFICATIONS, _A.USER_DOCUMENTATION), None),
    ("MQR10",
     "The metamodel must be composed of discrete concepts such that a change "
     "of one concept has minimal impact on other concepts.",
     "MMo", ("MMo-1",), (_A.IMPLEMENTATION,), None),
    ("MQR11",
     "The metamodel must be composed of discrete concepts such that a "
     "creation of model elements does not enforce ordered modelling actions.",
     "MMo", ("MMo-2",), (_A.IMPLEMENTATION,), None),
    ("MQR12",
     "The metamodel must be able to be reused to modelling usage scenarios "
     "for different application domains.",
     "MRe", ("MRe-1",),
     (_A.SPECIFICATIONS, _A.USER_DOCUMENTATION, _A.DOMAIN_SPECIFICATIONS),
     None),
    ("MQR13",
     "The users must be able to recognize metamodel modifications "
     "accordingly the changes documented in the metamodel specification "
     "during metamodel development life cycle.",
     "MMd", ("MMd-1",), (_A.SPECIFICATIONS, _A.HISTORY_DOCUMENTATION), None),
    ("MQR14",
     "The users must be able to recognize metamodel modifications "
     "accordingly the change comments confirmed in review.",
     "MMd", ("MMd-2",), (_A.SPECIFICATIONS, _A.HISTORY_DOCUMENTATION), None),
    ("MQR15",
     "The metamodel must be reused modified without introducing "
     "inconsistencies or degrading metamodel quality.",
     "MMd", ("MMd-3", "MMd-4", "MMd-5"),
     (_A.SPECIFICATIONS, _A.HISTORY_DOCUMENTATION),
     # The source sentence reads "must be reused modified"; normalized here.
     "The metamodel must be able to be reused and modified without "
     "introducing inconsistencies or degrading metamodel quality."),
    ("MQR16",
     "The metamodel must be able to be adapted to modelling usage scenarios "
     "for different application domains.",
     "PAd", ("PAd-1",),
     (_A.USER_DOCUMENTATION, _A.DOMAIN_SPECIFICATIONS), None),
    ("MQR17",
     "The metamodel must be able to replace another specified metamodel for "
     "the same purpose in the same application domain, without introducing "
     "any additional learning or workaround.",
     "PRe", ("PRe-1",), (_A.USER_DOCUMENTATION, _A.REPLACED_METAMODEL), None),
    ("MQR18",
     "The metamodel must be able to replace another specified metamodel for "
     "the same purpose in the same application domain, without degrading "
     "metamodel quality degree.",
     "PRe", ("PRe-2",),
     (_A.SPECIFICATIONS, _A.IMPLEMENTATION, _A.REPLACED_METAMODEL), None),
    ("MQR19",
     "The metamodel must be able to replace another specified metamodel for "
     "the same purpose in the same application domain by using similar "
     "concepts of previous metamodel.",
     "PRe", ("PRe-3",), (_A.SPECIFICATIONS, _A.IMPLEMENTATION), None),
)


def load_builtin_catalog() -> Catalog:
    """Build the built-in catalog. Repeated calls return equal content."""
    catalog = Catalog(
        characteristics=tuple(Characteristic(*row) for row in _CHARACTERISTICS),
        sub_characteristics=tuple(SubCharacteristic(*row) for row in _SUB_CHARACTERISTICS),
        measures=tuple(MeasureSpec(*row) for row in _MEASURES),
        requirements=tuple(
            QualityRequirement(rid, text, sub, measures, frozenset(arts), gloss)
            for rid, text, sub, measures, arts, gloss in _REQUIREMENTS
        ),
    )
    _self_check(catalog)
    return catalog


def _self_check(catalog: Catalog) -> None:
    """Internal consistency check; a failure here is a packaging defect."""
    assert len(catalog.characteristics) == 5
    assert len(catalog.measures) == 23
    assert len(catalog.requirements) == 19
    sub_ids = [s.id for s in catalog.sub_characteristics]
    assert len(set(sub_ids)) == len(sub_ids)
    for char in catalog.characteristics:
        for sid in char.sub_characteristics:
            assert catalog.sub_characteristic(sid).parent == char.id
    covered = []
    for sub in catalog.sub_characteristics:
        catalog.characteristic(sub.parent)
        for mid in sub.measures:
            assert catalog.measure(mid).sub_characteristic == sub.id
            covered.append(mid)
    assert sorted(covered) == sorted(m.id for m in catalog.measures)
    mapped = []
    for req in catalog.requirements:
        assert req.measures, f"{req.id} maps to no measure"
        assert req.required_artifacts, f"{req.id} requires no artifact"
        mapped.extend(req.measures)
    assert sorted(mapped) == sorted(m.id for m in catalog.measures)
    for measure in catalog.measures:
        char_id, sub_id, _ = parse_measure_id(measure.id, catalog)
        assert sub_id == measure.sub_characteristic
        assert catalog.sub_characteristic(sub_id).parent == char_id


def catalog_to_dict(catalog: Catalog) -> dict:
    """Structured form of the catalog (stable export format catalog-v1)."""
    return {
        "schema": "catalog-v1",
        "characteristics": [
            {
                "id": c.id,
                "initial": c.initial,
                "name": c.name,
                "description": c.description,
                "sub_characteristics": list(c.sub_characteristics),
            }
            for c in catalog.characteristics
        ],
        "sub_characteristics": [
            {
                "id": s.id,
                "code": s.code,
                "name": s.name,
                "description": s.description,
                "parent": s.parent,
                "measures": list(s.measures),
            }
            for s in catalog.sub_characteristics
        ],
        "measures": [
            {
                "id": m.id,
                "name": m.name,
                "description": m.description,
                "kind": m.kind.value,
                "element_names": {sym: meaning for sym, meaning in m.element_names},
                "orientation": m.orientation.value,
                "value_range": m.value_range,
                "sub_characteristic": m.sub_characteristic,
                "requirements": list(m.requirements),
                "provenance_note": m.provenance_note,
            }
            for m in catalog.measures
        ],
        "requirements": [
            {
                "id": r.id,
                "text": r.text,
                "gloss": r.gloss,
                "sub_characteristic": r.sub_characteristic,
                "measures": list(r.measures),
                "required_artifacts": sorted(a.value for a in r.required_artifacts),
            }
            for r in catalog.requirements
        ],
    }


def measures_for_requirement(req_id: str, catalog: Catalog | None = None) -> list[str]:
    """Measure ids mapped to a requirement, in catalog order."""
    return (catalog or load_builtin_catalog()).measures_for_requirement(req_id)


def required_artifacts(req_id: str, catalog: Catalog | None = None) -> frozenset[ArtifactKind]:
    """Artifacts that must be available to evaluate a requirement."""
    return (catalog or load_builtin_catalog()).required_artifacts(req_id)
