"""Measure computation and decision criteria.

Pure functions over immutable inputs: recorded measure elements go in,
measured values and statuses come out. Degenerate denominators produce
NotApplicable rather than failing a whole evaluation run; inconsistent
counts (A exceeding B in an "A out of B" measure) are computed as-is and
surfaced through warnings so the evaluator sees the bad data entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .catalog import MeasureKind, MeasureSpec, Orientation
from .errors import (
    IllFormedCriteria,
    MissingElement,
    OutOfRangeInput,
    WrongKindInput,
)


class MeasureStatus(Enum):
    TARGET_MET = "target_met"
    ACCEPTABLE = "acceptable"
    FAILED = "failed"
    NOT_APPLICABLE = "not_applicable"
    INFORMATIONAL = "informational"


#: Ordering used by monotonicity checks: worse < better.
STATUS_RANK = {
    MeasureStatus.FAILED: 0,
    MeasureStatus.ACCEPTABLE: 1,
    MeasureStatus.TARGET_MET: 2,
}


@dataclass(frozen=True)
class Numeric:
    value: float


@dataclass(frozen=True)
class Nominal:
    items: tuple[str, ...]


@dataclass(frozen=True)
class NotApplicable:
    reason: str


MeasureValue = Numeric | Nominal | NotApplicable


def _check_count(name: str, value) -> int | float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise OutOfRangeInput(f"element {name} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise OutOfRangeInput(f"element {name} must be finite, got {value!r}")
    if value < 0:
        raise OutOfRangeInput(f"element {name} must be non-negative, got {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise OutOfRangeInput(f"element {name} is a count and must be an integer, got {value!r}")
        return int(value)
    return value


@dataclass(frozen=True)
class ElementValues:
    """Raw measure elements recorded by an evaluator for one measure.

    ``numeric`` holds the named counts (A, B, ...); ``nominal_items`` the
    entries of a nominal measure; ``per_objective`` the per-usage-objective
    element sets that feed CAp-1/CAp-2.
    """

    measure_id: str
    numeric: tuple[tuple[str, int], ...] = ()
    nominal_items: tuple[str, ...] | None = None
    per_objective: tuple[tuple[str, "ElementValues"], ...] | None = None

    def __post_init__(self):
        checked = tuple((name, _check_count(name, value)) for name, value in self.numeric)
        object.__setattr__(self, "numeric", checked)

    @classmethod
    def counts(cls, measure_id: str, **elements: int) -> "ElementValues":
        return cls(measure_id=measure_id, numeric=tuple(sorted(elements.items())))

    def numeric_map(self) -> dict[str, int]:
        return dict(self.numeric)

    def get(self, name: str) -> int:
        for key, value in self.numeric:
            if key == name:
                return value
        raise MissingElement(f"{self.measure_id}: element {name} was not recorded")


def compute_measure(spec: MeasureSpec, elements: ElementValues) -> MeasureValue:
    """Apply a measure's measurement function to its recorded elements."""
    if elements.measure_id != spec.id:
        raise WrongKindInput(
            f"elements recorded for {elements.measure_id}, measure is {spec.id}"
        )
    if spec.kind is MeasureKind.NOMINAL:
        if elements.numeric:
            raise WrongKindInput(f"{spec.id} is a nominal measure; numeric elements do not apply")
        if elements.nominal_items is None:
            raise MissingElement(f"{spec.id}: nominal items were not recorded")
        return Nominal(tuple(elements.nominal_items))

    if elements.nominal_items is not None:
        raise WrongKindInput(f"{spec.id} is numeric; nominal items do not apply")

    if spec.kind is MeasureKind.MEAN_OF_DEPENDENT:
        if elements.numeric:
            raise WrongKindInput(
                f"{spec.id} is derived from per-objective values; do not record it directly"
            )
        if elements.per_objective is None:
            raise MissingElement(f"{spec.id}: per-objective values were not recorded")
        dependent = []
        for _name, objective_elements in elements.per_objective:
            value = _ratio_family(spec, objective_elements, MeasureKind.ONE_MINUS_RATIO)
            if isinstance(value, Numeric):
                dependent.append(value.value)
        if elements.per_objective and not dependent:
            return NotApplicable("every usage objective has B = 0")
        if not dependent:
            return NotApplicable("no usage objectives")
        # Not compute_cap2: inconsistent objective counts (A > B) yield values
        # outside [0, 1] that must flow through to the forced-FAILED diagnostic.
        return Numeric(math.fsum(dependent) / len(dependent))

    return _ratio_family(spec, elements, spec.kind)


def _ratio_family(spec: MeasureSpec, elements: ElementValues, kind: MeasureKind) -> MeasureValue:
    a = elements.get("A")
    b = elements.get("B")
    if kind is MeasureKind.DIFFERENCE:
        return Numeric(a - b)
    if b == 0:
        return NotApplicable("B = 0")
    if kind is MeasureKind.ONE_MINUS_RATIO:
        return Numeric(1 - a / b)
    return Numeric(a / b)


def compute_cap2(per_objective_values: list[float] | tuple[float, ...]) -> MeasureValue:
    """Mean appropriateness over usage objectives; empty input is inapplicable."""
    for value in per_objective_values:
        if not (0.0 <= value <= 1.0):
            raise OutOfRangeInput(f"per-objective value {value!r} outside [0, 1]")
    if not per_objective_values:
        return NotApplicable("no usage objectives")
    return Numeric(math.fsum(per_objective_values) / len(per_objective_values))


def element_warnings(spec: MeasureSpec, elements: ElementValues) -> tuple[str, ...]:
    """Data-entry diagnostics that do not stop computation.

    An "A out of B" measure with A > B signals inconsistent counting; its
    value is computed as-is and its status is later forced to FAILED.
    """
    warnings: list[str] = []
    if spec.kind in (MeasureKind.RATIO, MeasureKind.ONE_MINUS_RATIO):
        numeric = elements.numeric_map()
        a, b = numeric.get("A"), numeric.get("B")
        if a is not None and b is not None and a > b:
            warnings.append(f"{spec.id}: A ({a}) exceeds B ({b}); value computed as-is")
    if spec.kind is MeasureKind.MEAN_OF_DEPENDENT and elements.per_objective:
        for name, objective_elements in elements.per_objective:
            numeric = objective_elements.numeric_map()
            a, b = numeric.get("A"), numeric.get("B")
            if a is not None and b is not None and a > b:
                warnings.append(
                    f"{spec.id}: objective {name!r} has A ({a}) exceeding B ({b})"
                )
    return tuple(warnings)


@dataclass(frozen=True)
class DecisionCriteria:
    """Target and tolerance thresholds for one measure.

    The tolerance is an absolute threshold ("at least 0.75"), not a delta
    around the target. Nominal measures take no thresholds but may carry a
    minimum item count.
    """

    target_value: float | None = None
    acceptable_tolerance_value: float | None = None
    min_item_count: int | None = None


def check_criteria(criteria: DecisionCriteria, orientation: Orientation) -> None:
    """Raise IllFormedCriteria when thresholds sit on the wrong side."""
    target = criteria.target_value
    tolerance = criteria.acceptable_tolerance_value
    if target is None or tolerance is None:
        raise IllFormedCriteria("numeric criteria need both a target and a tolerance value")
    if orientation is Orientation.HIGHER_BETTER and tolerance > target:
        raise IllFormedCriteria(
            f"tolerance {tolerance} must not exceed target {target} when higher is better"
        )
    if orientation is Orientation.LOWER_BETTER and tolerance < target:
        raise IllFormedCriteria(
            f"tolerance {tolerance} must not undercut target {target} when lower is better"
        )


def apply_criteria(
    value: MeasureValue,
    criteria: DecisionCriteria | None,
    orientation: Orientation,
) -> MeasureStatus:
    """Compare a measured value against its decision criteria."""
    if isinstance(value, Nominal):
        if criteria is None or criteria.min_item_count is None:
            return MeasureStatus.INFORMATIONAL
        if criteria.min_item_count < 0:
            raise IllFormedCriteria("minimum item count must be non-negative")
        return (
            MeasureStatus.TARGET_MET
            if len(value.items) >= criteria.min_item_count
            else MeasureStatus.FAILED
        )

    if criteria is None:
        raise IllFormedCriteria("numeric values require decision criteria")
    check_criteria(criteria, orientation)

    if isinstance(value, NotApplicable):
        return MeasureStatus.NOT_APPLICABLE

    measured = value.value
    target = criteria.target_value
    tolerance = criteria.acceptable_tolerance_value
    if orientation is Orientation.LOWER_BETTER:
        if measured <= target:
            return MeasureStatus.TARGET_MET
        if measured <= tolerance:
            return MeasureStatus.ACCEPTABLE
        return MeasureStatus.FAILED
    if measured >= target:
        return MeasureStatus.TARGET_MET
    if measured >= tolerance:
        return MeasureStatus.ACCEPTABLE
    return MeasureStatus.FAILED


@dataclass(frozen=True)
class MeasureOutcome:
    """One measure's computed result, ready for scoring and reporting."""

    measure_id: str
    value: MeasureValue
    status: MeasureStatus
    warnings: tuple[str, ...] = ()
    elements: ElementValues | None = None
    contributions: tuple[tuple[str, MeasureValue], ...] = ()
    per_objective: tuple[tuple[str, MeasureValue], ...] = ()
