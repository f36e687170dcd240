"""Scorecard assembly: per-measure rows plus aggregated grades.

Sub-characteristic and characteristic grades come from the plan's explicit
formulas when given, otherwise from the arithmetic mean of the applicable
constituent values. Aggregation always consumes the measured numeric
values; statuses only drive the overall verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .catalog import Catalog, MeasureKind, load_builtin_catalog
from .errors import DivisionByZero, MissingResult, SessionFormatError, UnboundIdentifier
from .formula import evaluate_formula, parse_formula
from .jsonio import canonical_dumps, load_json
from .measurement import (
    MeasureOutcome,
    MeasureStatus,
    MeasureValue,
    Nominal,
    NotApplicable,
    Numeric,
)
from .plan import EvaluationPlan, plan_fingerprint


class Verdict(Enum):
    ALL_TARGETS_MET = "all_targets_met"
    ACCEPTABLE = "acceptable"
    FAILED = "failed"
    INCONCLUSIVE = "inconclusive"


#: Partial order used by monotonicity arguments: worse verdicts first.
VERDICT_RANK = {
    Verdict.FAILED: 0,
    Verdict.INCONCLUSIVE: 1,
    Verdict.ACCEPTABLE: 2,
    Verdict.ALL_TARGETS_MET: 3,
}


@dataclass(frozen=True)
class ScorecardRow:
    measure_id: str
    requirement_id: str
    sub_characteristic_id: str
    characteristic_id: str
    elements_summary: str
    value: MeasureValue
    final_value: float | None          # numeric value carried forward, else None
    status: MeasureStatus
    warnings: tuple[str, ...] = ()
    contributions: tuple[tuple[str, MeasureValue], ...] = ()
    per_objective: tuple[tuple[str, MeasureValue], ...] = ()


@dataclass(frozen=True)
class Scorecard:
    metamodel_id: str
    plan_fingerprint: str
    rows: tuple[ScorecardRow, ...]
    sub_characteristic_values: tuple[tuple[str, float], ...]
    characteristic_values: tuple[tuple[str, float], ...]
    verdict: Verdict
    warnings: tuple[str, ...] = ()

    def row(self, measure_id: str) -> ScorecardRow:
        for row in self.rows:
            if row.measure_id == measure_id:
                return row
        raise MissingResult(f"no row for measure {measure_id}")

    def sub_characteristic_value(self, alias: str) -> float | None:
        return dict(self.sub_characteristic_values).get(alias)

    def characteristic_value(self, char_id: str) -> float | None:
        return dict(self.characteristic_values).get(char_id)


def default_formula(values: list[float] | tuple[float, ...]) -> float | NotApplicable:
    """Arithmetic mean of the applicable values; inapplicable when empty."""
    if not values:
        return NotApplicable("no applicable value")
    return math.fsum(values) / len(values)


def _brief_value(value: MeasureValue) -> str:
    if isinstance(value, Numeric):
        return f"{value.value:g}"
    if isinstance(value, Nominal):
        return f"{len(value.items)} item(s)"
    return "n/a"


def _elements_summary(outcome: MeasureOutcome) -> str:
    value = outcome.value
    parts: list[str] = []
    if outcome.elements is not None:
        parts.extend(f"{name} = {count:g}" for name, count in outcome.elements.numeric)
    if isinstance(value, Numeric):
        parts.append(f"x = {value.value:g}")
    elif isinstance(value, Nominal):
        parts.append("; ".join(value.items) if value.items else "(empty list)")
    else:
        parts.append(f"n/a ({value.reason})")
    if len(outcome.contributions) > 1:
        breakdown = ", ".join(
            f"{name}: {_brief_value(v)}" for name, v in outcome.contributions
        )
        parts.append(f"(mean of {len(outcome.contributions)} evaluations: {breakdown})")
    return " ".join(parts)


def build_scorecard(
    plan: EvaluationPlan,
    results: dict[str, MeasureOutcome],
    catalog: Catalog | None = None,
) -> Scorecard:
    """Assemble the measurement table and aggregate grades for a plan."""
    catalog = catalog or load_builtin_catalog()
    warnings: list[str] = []

    selected = [m for m in catalog.measures if m.id in plan.selected_measures]
    rows: list[ScorecardRow] = []
    for spec in selected:
        outcome = results.get(spec.id)
        if outcome is None:
            raise MissingResult(f"no result recorded for selected measure {spec.id}")
        final = outcome.value.value if isinstance(outcome.value, Numeric) else None
        sub = catalog.sub_characteristic(spec.sub_characteristic)
        rows.append(
            ScorecardRow(
                measure_id=spec.id,
                requirement_id=catalog.requirement_for_measure(spec.id).id,
                sub_characteristic_id=sub.id,
                characteristic_id=sub.parent,
                elements_summary=_elements_summary(outcome),
                value=outcome.value,
                final_value=final,
                status=outcome.status,
                warnings=outcome.warnings,
                contributions=outcome.contributions,
                per_objective=outcome.per_objective,
            )
        )
        warnings.extend(outcome.warnings)

    # Bindings: numeric measure aliases -> final values.
    bindings: dict[str, float] = {}
    for spec, row in zip(selected, rows):
        if spec.is_numeric and row.final_value is not None:
            bindings[spec.alias] = row.final_value

    sub_values: list[tuple[str, float]] = []
    for sub in catalog.sub_characteristics:
        members = [
            (spec, row)
            for spec, row in zip(selected, rows)
            if spec.sub_characteristic == sub.id and spec.is_numeric
        ]
        if not members:
            continue
        formula_text = plan.sub_characteristic_formula(sub.alias)
        if formula_text is not None:
            value = _run_formula(
                formula_text, bindings, f"sub_characteristic_formulas[{sub.alias}]"
            )
            sub_values.append((sub.alias, value))
            continue
        applicable = []
        for spec, row in members:
            if row.final_value is None:
                continue
            if spec.kind is MeasureKind.DIFFERENCE:
                warnings.append(
                    f"{spec.id} has an unbounded range and is excluded from "
                    f"the default {sub.alias} aggregation"
                )
                continue
            applicable.append(row.final_value)
        value = default_formula(applicable)
        if isinstance(value, NotApplicable):
            continue
        sub_values.append((sub.alias, value))

    sub_bindings = dict(sub_values)
    char_values: list[tuple[str, float]] = []
    for char in catalog.characteristics:
        formula_text = plan.characteristic_formula(char.id)
        if formula_text is not None:
            value = _run_formula(
                formula_text,
                {**bindings, **sub_bindings},
                f"characteristic_formulas[{char.id}]",
            )
            char_values.append((char.id, value))
            continue
        members = [
            sub_bindings[sid] for sid in char.sub_characteristics if sid in sub_bindings
        ]
        value = default_formula(members)
        if isinstance(value, NotApplicable):
            continue
        char_values.append((char.id, value))

    verdict = _verdict(row.status for row in rows)
    return Scorecard(
        metamodel_id=plan.metamodel_id,
        plan_fingerprint=plan_fingerprint(plan),
        rows=tuple(rows),
        sub_characteristic_values=tuple(sub_values),
        characteristic_values=tuple(char_values),
        verdict=verdict,
        warnings=tuple(warnings),
    )


def _run_formula(text: str, bindings: dict[str, float], location: str) -> float:
    expr = parse_formula(text)
    try:
        return evaluate_formula(expr, bindings)
    except UnboundIdentifier as exc:
        raise UnboundIdentifier(exc.name, location) from None
    except DivisionByZero as exc:
        raise DivisionByZero(f"{location}: {exc}") from None


def _verdict(statuses) -> Verdict:
    statuses = list(statuses)
    conclusive = [
        s for s in statuses
        if s in (MeasureStatus.TARGET_MET, MeasureStatus.ACCEPTABLE, MeasureStatus.FAILED)
    ]
    if any(s is MeasureStatus.FAILED for s in conclusive):
        return Verdict.FAILED
    if not conclusive:
        return Verdict.INCONCLUSIVE
    if any(s is MeasureStatus.ACCEPTABLE for s in conclusive):
        return Verdict.ACCEPTABLE
    return Verdict.ALL_TARGETS_MET


# --- file format (mqer-v1) ----------------------------------------------

SCHEMA = "mqer-v1"


def _value_to_dict(value: MeasureValue) -> dict:
    if isinstance(value, Numeric):
        return {"numeric": value.value}
    if isinstance(value, Nominal):
        return {"nominal": list(value.items)}
    return {"not_applicable": value.reason}


def _value_from_dict(data: dict) -> MeasureValue:
    if "numeric" in data:
        return Numeric(data["numeric"])
    if "nominal" in data:
        return Nominal(tuple(data["nominal"]))
    return NotApplicable(data.get("not_applicable", ""))


def scorecard_to_dict(scorecard: Scorecard) -> dict:
    return {
        "schema": SCHEMA,
        "metamodel_id": scorecard.metamodel_id,
        "plan_fingerprint": scorecard.plan_fingerprint,
        "rows": [
            {
                "measure_id": row.measure_id,
                "requirement_id": row.requirement_id,
                "sub_characteristic_id": row.sub_characteristic_id,
                "characteristic_id": row.characteristic_id,
                "elements_summary": row.elements_summary,
                "value": _value_to_dict(row.value),
                "final_value": row.final_value,
                "status": row.status.value,
                "warnings": list(row.warnings),
                "contributions": [
                    {"evaluator": name, "value": _value_to_dict(v)}
                    for name, v in row.contributions
                ],
                "per_objective": [
                    {"objective": name, "value": _value_to_dict(v)}
                    for name, v in row.per_objective
                ],
            }
            for row in scorecard.rows
        ],
        "sub_characteristic_values": dict(scorecard.sub_characteristic_values),
        "characteristic_values": dict(scorecard.characteristic_values),
        "verdict": scorecard.verdict.value,
        "warnings": list(scorecard.warnings),
    }


def scorecard_to_json(scorecard: Scorecard) -> str:
    return canonical_dumps(scorecard_to_dict(scorecard))


def scorecard_from_dict(data: dict) -> Scorecard:
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise SessionFormatError(f"scorecard: expected schema {SCHEMA!r}")
    catalog = load_builtin_catalog()
    rows = tuple(
        ScorecardRow(
            measure_id=raw["measure_id"],
            requirement_id=raw["requirement_id"],
            sub_characteristic_id=raw["sub_characteristic_id"],
            characteristic_id=raw["characteristic_id"],
            elements_summary=raw["elements_summary"],
            value=_value_from_dict(raw["value"]),
            final_value=raw["final_value"],
            status=MeasureStatus(raw["status"]),
            warnings=tuple(raw.get("warnings", [])),
            contributions=tuple(
                (c["evaluator"], _value_from_dict(c["value"]))
                for c in raw.get("contributions", [])
            ),
            per_objective=tuple(
                (c["objective"], _value_from_dict(c["value"]))
                for c in raw.get("per_objective", [])
            ),
        )
        for raw in data.get("rows", [])
    )
    order = {m.id: i for i, m in enumerate(catalog.measures)}
    rows = tuple(sorted(rows, key=lambda r: order.get(r.measure_id, len(order))))
    sub_order = {s.id: i for i, s in enumerate(catalog.sub_characteristics)}
    char_order = {c.id: i for i, c in enumerate(catalog.characteristics)}
    return Scorecard(
        metamodel_id=data.get("metamodel_id", ""),
        plan_fingerprint=data.get("plan_fingerprint", ""),
        rows=rows,
        sub_characteristic_values=tuple(
            sorted(
                data.get("sub_characteristic_values", {}).items(),
                key=lambda kv: sub_order.get(kv[0], len(sub_order)),
            )
        ),
        characteristic_values=tuple(
            sorted(
                data.get("characteristic_values", {}).items(),
                key=lambda kv: char_order.get(kv[0], len(char_order)),
            )
        ),
        verdict=Verdict(data.get("verdict", "inconclusive")),
        warnings=tuple(data.get("warnings", [])),
    )


def load_scorecard(path: str | Path) -> Scorecard:
    try:
        data = load_json(path)
    except ValueError as exc:
        raise SessionFormatError(f"{path}: {exc}") from None
    return scorecard_from_dict(data)


def save_scorecard(scorecard: Scorecard, path: str | Path) -> None:
    Path(path).write_text(scorecard_to_json(scorecard), encoding="utf-8")
