"""Measurement sessions: recorded element values and their consolidation.

Each evaluator records one session (file schema mqes-v1). A session's
entries are computed against the plan's criteria; multiple sessions are
consolidated by averaging numeric measured values (nominal lists are
merged) and the statuses are recomputed on the consolidated values. The
per-evaluator breakdown is kept for the report.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import dataclass
from pathlib import Path

from .catalog import Catalog, MeasureKind, load_builtin_catalog
from .errors import (
    EmptySessionSet,
    MixedPlan,
    MquareError,
    PlanInvalid,
    SessionFormatError,
    UnselectedMeasure,
    WrongKindInput,
)
from .jsonio import canonical_dumps
from .measurement import (
    ElementValues,
    MeasureOutcome,
    MeasureStatus,
    Nominal,
    NotApplicable,
    Numeric,
    apply_criteria,
    compute_measure,
    element_warnings,
)
from .plan import EvaluationPlan, Severity, validate_plan
from .scoring import Scorecard, build_scorecard


@dataclass(frozen=True)
class MeasurementSession:
    metamodel_id: str
    evaluator: str = ""
    recorded_at: str | None = None   # ISO-8601 timestamp, verbatim
    entries: tuple[ElementValues, ...] = ()
    notes: str = ""

    def __post_init__(self):
        # Entry order is not meaningful; keep the canonical (sorted) order so
        # sessions round-trip through their file form unchanged.
        ordered = tuple(sorted(self.entries, key=lambda e: e.measure_id))
        ids = [e.measure_id for e in ordered]
        if len(ids) != len(set(ids)):
            duplicate = next(i for i in ids if ids.count(i) > 1)
            raise SessionFormatError(f"more than one entry for measure {duplicate}")
        object.__setattr__(self, "entries", ordered)

    def entry_for(self, measure_id: str) -> ElementValues | None:
        for entry in self.entries:
            if entry.measure_id == measure_id:
                return entry
        return None


@dataclass(frozen=True)
class ConsolidatedResults:
    metamodel_id: str
    evaluators: tuple[str, ...]
    results: dict[str, MeasureOutcome]


def _ensure_plan_valid(plan: EvaluationPlan, catalog: Catalog) -> None:
    errors = [f for f in validate_plan(plan, catalog) if f.severity is Severity.ERROR]
    if errors:
        raise PlanInvalid(errors)


def _forced_failed(value, warnings) -> bool:
    return isinstance(value, Numeric) and any("exceeds B" in w for w in warnings)


def compute_session(
    plan: EvaluationPlan,
    session: MeasurementSession,
    catalog: Catalog | None = None,
) -> dict[str, MeasureOutcome]:
    """Compute measured values and statuses for one session.

    CAp-1 entries may carry per-objective element sets; when CAp-2 is also
    selected it is synthesized from those per-objective values (a direct
    CAp-2 entry is rejected). A measured value with A exceeding B keeps its
    computed value but is forced to FAILED with a diagnostic.
    """
    catalog = catalog or load_builtin_catalog()
    _ensure_plan_valid(plan, catalog)

    results: dict[str, MeasureOutcome] = {}
    cap1_entry: ElementValues | None = None
    for entry in session.entries:
        measure_id = entry.measure_id
        if measure_id == "CAp-2":
            raise WrongKindInput(
                "CAp-2 is derived from CAp-1 per-objective values; do not record it directly"
            )
        if measure_id not in plan.selected_measures:
            # CAp-1 data is accepted as the carrier for a selected CAp-2.
            if measure_id == "CAp-1" and "CAp-2" in plan.selected_measures:
                cap1_entry = entry
                continue
            raise UnselectedMeasure(f"measure {measure_id} is not selected in the plan")

        spec = catalog.measure(measure_id)
        if measure_id == "CAp-1":
            cap1_entry = entry
            outcome = _compute_cap1(plan, spec, entry, session.evaluator)
        else:
            value = compute_measure(spec, entry)
            warnings = element_warnings(spec, entry)
            status = apply_criteria(value, plan.criteria_for(measure_id), spec.orientation)
            if _forced_failed(value, warnings):
                status = MeasureStatus.FAILED
            outcome = MeasureOutcome(
                measure_id=measure_id,
                value=value,
                status=status,
                warnings=warnings,
                elements=entry,
                contributions=((session.evaluator, value),),
            )
        results[measure_id] = outcome

    if "CAp-2" in plan.selected_measures and cap1_entry is not None:
        results["CAp-2"] = _synthesize_cap2(plan, catalog, cap1_entry, session.evaluator)

    return results


def _objective_values(
    spec, entry: ElementValues
) -> tuple[tuple[str, "NotApplicable | Numeric"], ...]:
    """Per-objective values of a CAp-1 entry (single implicit objective when flat)."""
    if entry.per_objective:
        values = []
        for name, objective_elements in entry.per_objective:
            values.append((name, compute_measure(spec, _as_cap1(objective_elements))))
        return tuple(values)
    return (("(all)", compute_measure(spec, entry)),)


def _as_cap1(elements: ElementValues) -> ElementValues:
    if elements.measure_id == "CAp-1":
        return elements
    return ElementValues(measure_id="CAp-1", numeric=elements.numeric)


def _compute_cap1(plan, spec, entry, evaluator) -> MeasureOutcome:
    per_objective = _objective_values(spec, entry)
    applicable = [v.value for _, v in per_objective if isinstance(v, Numeric)]
    if applicable:
        value = Numeric(math.fsum(applicable) / len(applicable))
    else:
        value = NotApplicable("every usage objective has B = 0")
    warnings = _cap1_warnings(spec, entry)
    status = apply_criteria(value, plan.criteria_for("CAp-1"), spec.orientation)
    if _forced_failed(value, warnings):
        status = MeasureStatus.FAILED
    return MeasureOutcome(
        measure_id="CAp-1",
        value=value,
        status=status,
        warnings=warnings,
        elements=entry if not entry.per_objective else None,
        contributions=((evaluator, value),),
        per_objective=per_objective if entry.per_objective else (),
    )


def _cap1_warnings(spec, entry: ElementValues) -> tuple[str, ...]:
    if not entry.per_objective:
        return element_warnings(spec, entry)
    warnings: list[str] = []
    for name, objective_elements in entry.per_objective:
        for w in element_warnings(spec, _as_cap1(objective_elements)):
            warnings.append(f"objective {name!r}: {w}")
    return tuple(warnings)


def _synthesize_cap2(plan, catalog, cap1_entry, evaluator) -> MeasureOutcome:
    spec = catalog.measure("CAp-2")
    cap1_spec = catalog.measure("CAp-1")
    per_objective = _objective_values(cap1_spec, cap1_entry)
    applicable = [v.value for _, v in per_objective if isinstance(v, Numeric)]
    if not applicable:
        value: Numeric | NotApplicable = NotApplicable("every usage objective has B = 0")
    else:
        value = Numeric(math.fsum(applicable) / len(applicable))
    warnings = _cap1_warnings(cap1_spec, cap1_entry)
    status = apply_criteria(value, plan.criteria_for("CAp-2"), spec.orientation)
    if _forced_failed(value, warnings):
        status = MeasureStatus.FAILED
    return MeasureOutcome(
        measure_id="CAp-2",
        value=value,
        status=status,
        warnings=warnings,
        contributions=((evaluator, value),),
        per_objective=per_objective if cap1_entry.per_objective else (),
    )


def consolidate(
    plan: EvaluationPlan,
    sessions: list[MeasurementSession] | tuple[MeasurementSession, ...],
    catalog: Catalog | None = None,
) -> ConsolidatedResults:
    """Merge evaluators' sessions into one result set per measure.

    Numeric values are averaged (sessions where the measure was not
    applicable are excluded; all-inapplicable stays inapplicable); nominal
    lists become the sorted, deduplicated union. Statuses are recomputed on
    the consolidated values. Consolidating a single session is the identity
    on values.
    """
    catalog = catalog or load_builtin_catalog()
    if not sessions:
        raise EmptySessionSet("no sessions to consolidate")
    ids = {s.metamodel_id for s in sessions}
    if len(ids) > 1:
        raise MixedPlan(f"sessions target different metamodels: {', '.join(sorted(ids))}")
    if sessions[0].metamodel_id != plan.metamodel_id:
        raise MixedPlan(
            f"sessions target {sessions[0].metamodel_id!r}, plan is for {plan.metamodel_id!r}"
        )

    # Deterministic processing order regardless of how sessions were listed;
    # the serialized content breaks ties between otherwise identical headers.
    ordered = sorted(
        sessions,
        key=lambda s: (s.evaluator, s.recorded_at or "", session_to_json(s)),
    )
    per_session = [(s, compute_session(plan, s, catalog)) for s in ordered]

    merged: dict[str, MeasureOutcome] = {}
    for spec in catalog.measures:
        outcomes = [
            (session, results[spec.id])
            for session, results in per_session
            if spec.id in results
        ]
        if not outcomes:
            continue
        if len(outcomes) == 1:
            merged[spec.id] = outcomes[0][1]
            continue
        merged[spec.id] = _merge(plan, spec, outcomes)

    evaluators = tuple(s.evaluator for s, _ in per_session)
    return ConsolidatedResults(
        metamodel_id=plan.metamodel_id, evaluators=evaluators, results=merged
    )


def _merge(plan, spec, outcomes) -> MeasureOutcome:
    contributions = tuple(
        (session.evaluator, outcome.value) for session, outcome in outcomes
    )
    warnings: list[str] = []
    for _, outcome in outcomes:
        warnings.extend(outcome.warnings)

    if spec.kind is MeasureKind.NOMINAL:
        items: set[str] = set()
        for _, outcome in outcomes:
            if isinstance(outcome.value, Nominal):
                items.update(outcome.value.items)
        value: Numeric | Nominal | NotApplicable = Nominal(tuple(sorted(items)))
    else:
        numeric = [
            outcome.value.value
            for _, outcome in outcomes
            if isinstance(outcome.value, Numeric)
        ]
        if numeric:
            value = Numeric(math.fsum(numeric) / len(numeric))
        else:
            value = NotApplicable("not applicable in every session")

    status = apply_criteria(value, plan.criteria_for(spec.id), spec.orientation)
    if _forced_failed(value, warnings):
        status = MeasureStatus.FAILED
    per_objective = ()
    for _, outcome in outcomes:
        if outcome.per_objective:
            per_objective = outcome.per_objective
            break
    return MeasureOutcome(
        measure_id=spec.id,
        value=value,
        status=status,
        warnings=tuple(warnings),
        contributions=contributions,
        per_objective=per_objective,
    )


def evaluate(
    plan: EvaluationPlan,
    consolidated: ConsolidatedResults,
    catalog: Catalog | None = None,
) -> Scorecard:
    """Score consolidated results: rows, grades per level, and the verdict."""
    catalog = catalog or load_builtin_catalog()
    if consolidated.metamodel_id != plan.metamodel_id:
        raise MixedPlan(
            f"results target {consolidated.metamodel_id!r}, plan is for {plan.metamodel_id!r}"
        )
    return build_scorecard(plan, consolidated.results, catalog)


def evaluate_sessions(
    plan: EvaluationPlan,
    sessions: list[MeasurementSession] | tuple[MeasurementSession, ...],
    catalog: Catalog | None = None,
) -> Scorecard:
    """Convenience pipeline: consolidate then evaluate."""
    catalog = catalog or load_builtin_catalog()
    return evaluate(plan, consolidate(plan, sessions, catalog), catalog)


# --- file format (mqes-v1) ----------------------------------------------

SCHEMA = "mqes-v1"


def session_to_dict(session: MeasurementSession) -> dict:
    entries: dict[str, object] = {}
    for entry in session.entries:
        entries[entry.measure_id] = _entry_to_dict(entry)
    return {
        "schema": SCHEMA,
        "metamodel_id": session.metamodel_id,
        "evaluator": session.evaluator,
        "recorded_at": session.recorded_at,
        "notes": session.notes,
        "entries": entries,
    }


def _entry_to_dict(entry: ElementValues):
    if entry.nominal_items is not None:
        return list(entry.nominal_items)
    if entry.per_objective:
        return {
            "objectives": {
                name: dict(values.numeric) for name, values in entry.per_objective
            }
        }
    return dict(entry.numeric)


def session_to_json(session: MeasurementSession) -> str:
    return canonical_dumps(session_to_dict(session))


def _entry_from_raw(measure_id: str, raw, catalog: Catalog) -> ElementValues:
    spec = catalog.measure(measure_id)
    if isinstance(raw, list):
        items = tuple(str(item) for item in raw)
        return ElementValues(measure_id=measure_id, nominal_items=items)
    if not isinstance(raw, dict):
        raise SessionFormatError(
            f"entries[{measure_id}]: expected an object or a list, got {type(raw).__name__}"
        )
    if "objectives" in raw:
        objectives = raw["objectives"]
        if not isinstance(objectives, dict):
            raise SessionFormatError(f"entries[{measure_id}].objectives: expected an object")
        per_objective = []
        for name in sorted(objectives):
            block = objectives[name]
            if not isinstance(block, dict):
                raise SessionFormatError(
                    f"entries[{measure_id}].objectives[{name}]: expected an object"
                )
            per_objective.append(
                (name, ElementValues(measure_id=measure_id, numeric=tuple(sorted(block.items()))))
            )
        return ElementValues(measure_id=measure_id, per_objective=tuple(per_objective))
    if spec.kind is MeasureKind.NOMINAL:
        raise SessionFormatError(f"entries[{measure_id}]: nominal measures take a list of items")
    return ElementValues(measure_id=measure_id, numeric=tuple(sorted(raw.items())))


def session_from_dict(data: dict, catalog: Catalog | None = None) -> tuple[MeasurementSession, list[str]]:
    """Parse a session file; returns the session plus load warnings."""
    catalog = catalog or load_builtin_catalog()
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise SessionFormatError(f"session: expected schema {SCHEMA!r}")
    warnings: list[str] = []
    raw_entries = data.get("entries", {})
    if not isinstance(raw_entries, dict):
        raise SessionFormatError("entries: expected an object keyed by measure id")
    entries = []
    for measure_id in sorted(raw_entries):
        try:
            entries.append(_entry_from_raw(measure_id, raw_entries[measure_id], catalog))
        except MquareError as exc:
            raise SessionFormatError(str(exc)) from None
    recorded_at = data.get("recorded_at")
    if recorded_at is not None:
        if not isinstance(recorded_at, str):
            raise SessionFormatError("recorded_at: expected an ISO-8601 timestamp string")
        try:
            datetime.datetime.fromisoformat(recorded_at)
        except ValueError:
            raise SessionFormatError(
                f"recorded_at: {recorded_at!r} is not an ISO-8601 timestamp"
            ) from None
    session = MeasurementSession(
        metamodel_id=str(data.get("metamodel_id", "")),
        evaluator=str(data.get("evaluator", "")),
        recorded_at=recorded_at,
        entries=tuple(entries),
        notes=str(data.get("notes", "")),
    )
    known = {"schema", "metamodel_id", "evaluator", "recorded_at", "notes", "entries", "candidates"}
    for name in sorted(set(data) - known):
        warnings.append(f"unknown session field {name!r} ignored")
    return session, warnings


def load_session(path: str | Path, catalog: Catalog | None = None) -> tuple[MeasurementSession, list[str]]:
    """Load a session file, reporting duplicate-entry replacements as warnings."""
    import json

    duplicates: list[str] = []

    def _pairs(pairs):
        seen: dict[str, object] = {}
        for key, value in pairs:
            if key in seen:
                duplicates.append(key)
            seen[key] = value
        return seen

    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh, object_pairs_hook=_pairs)
    except ValueError as exc:
        raise SessionFormatError(f"{path}: {exc}") from None
    session, warnings = session_from_dict(data)
    for key in duplicates:
        warnings.append(f"duplicate key {key!r}: the later entry replaced the earlier one")
    return session, warnings


def save_session(session: MeasurementSession, path: str | Path) -> None:
    Path(path).write_text(session_to_json(session), encoding="utf-8")
