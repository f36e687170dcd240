"""Machine-readable evaluation plans (file schema mqep-v1) and their validation.

A plan names the metamodel under evaluation, the evaluation purposes, the
available artifacts, the selected quality requirements and measures, the
decision criteria, and optional aggregation formulas. ``validate_plan``
checks every plan rule against the built-in catalog and reports findings;
ERROR findings block evaluation, WARNING findings do not.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from . import formula as formula_mod
from .catalog import ARTIFACT_ORDER, ArtifactKind, Catalog, load_builtin_catalog
from .errors import IllFormedCriteria, PlanFormatError, PlanInvalid
from .jsonio import canonical_dumps, load_json
from .measurement import DecisionCriteria, check_criteria


class MetamodelVersion(Enum):
    INTERMEDIATE = "intermediate"
    FINAL = "final"


@dataclass(frozen=True)
class Purpose:
    code: str
    text: str
    version: MetamodelVersion


#: The closed list of evaluation purposes, keyed by stable code.
PURPOSES: tuple[Purpose, ...] = (
    Purpose("INTERMEDIATE_ASSURE_QUALITY",
            "Assure quality for the metamodel",
            MetamodelVersion.INTERMEDIATE),
    Purpose("INTERMEDIATE_ACCEPT",
            "Decide on the acceptance of an intermediate metamodel version",
            MetamodelVersion.INTERMEDIATE),
    Purpose("INTERMEDIATE_FEASIBILITY",
            "Access the ongoing feasibility of the ongoing metamodel",
            MetamodelVersion.INTERMEDIATE),
    Purpose("INTERMEDIATE_PREDICT_QUALITY",
            "Predict or estimate final metamodel quality",
            MetamodelVersion.INTERMEDIATE),
    Purpose("INTERMEDIATE_DISCOVER_IMPROVEMENTS",
            "Discover improvement points in the metamodel",
            MetamodelVersion.INTERMEDIATE),
    Purpose("INTERMEDIATE_CONTROL_PROCESS",
            "Collect information on intermediate metamodel version in order "
            "to control and manage the process",
            MetamodelVersion.INTERMEDIATE),
    Purpose("FINAL_ACCEPT",
            "Decide on the acceptance of the metamodel",
            MetamodelVersion.FINAL),
    Purpose("FINAL_COMPARE",
            "Compare a metamodel with others",
            MetamodelVersion.FINAL),
    Purpose("FINAL_SELECT",
            "Select a metamodel from among alternative metamodels",
            MetamodelVersion.FINAL),
    Purpose("FINAL_ASSESS_EFFECTS",
            "Assess both positive and negative effects of a metamodel",
            MetamodelVersion.FINAL),
    Purpose("FINAL_DISCOVER_IMPROVEMENTS",
            "Discover improvement points in the metamodel",
            MetamodelVersion.FINAL),
)

_PURPOSE_BY_CODE = {p.code: p for p in PURPOSES}


def purposes_for_version(version: MetamodelVersion) -> tuple[Purpose, ...]:
    return tuple(p for p in PURPOSES if p.version is version)


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ValidationFinding:
    severity: Severity
    code: str
    message: str
    subject: str = ""

    def render(self) -> str:
        return f"{self.severity.name} {self.code}: {self.message}"


@dataclass(frozen=True)
class ScheduleEntry:
    activity: str
    evaluator: str
    start: datetime.date
    end: datetime.date


@dataclass(frozen=True)
class EvaluationPlan:
    metamodel_id: str
    version: MetamodelVersion
    date: datetime.date
    requester: str = ""
    purposes: tuple[str, ...] = ()
    artifacts_available: frozenset[ArtifactKind] = frozenset()
    resources: str = ""
    selected_requirements: frozenset[str] = frozenset()
    selected_measures: frozenset[str] = frozenset()
    criteria: tuple[tuple[str, DecisionCriteria], ...] = ()
    sub_characteristic_formulas: tuple[tuple[str, str], ...] = ()
    characteristic_formulas: tuple[tuple[str, str], ...] = ()
    usage_objectives: tuple[str, ...] = ()
    schedule: tuple[ScheduleEntry, ...] = ()
    baseline_results_ref: str | None = None
    required_independent_concepts: tuple[str, ...] = ()
    unknown_fields: tuple[str, ...] = field(default=(), compare=False)

    def selectable_purposes(self) -> tuple[Purpose, ...]:
        """Purposes allowed for this plan's metamodel version."""
        return purposes_for_version(self.version)

    def criteria_for(self, measure_id: str) -> DecisionCriteria | None:
        for mid, criteria in self.criteria:
            if mid == measure_id:
                return criteria
        return None

    def sub_characteristic_formula(self, alias: str) -> str | None:
        for key, text in self.sub_characteristic_formulas:
            if key == alias:
                return text
        return None

    def characteristic_formula(self, char_id: str) -> str | None:
        for key, text in self.characteristic_formulas:
            if key == char_id:
                return text
        return None


def init_plan(
    metamodel_id: str,
    version: MetamodelVersion,
    date: datetime.date | None = None,
    requester: str = "",
) -> EvaluationPlan:
    """Skeleton plan with empty selections, dated today unless overridden."""
    return EvaluationPlan(
        metamodel_id=metamodel_id,
        version=version,
        date=date or datetime.date.today(),
        requester=requester,
    )


# --- validation ---------------------------------------------------------

def validate_plan(plan: EvaluationPlan, catalog: Catalog | None = None) -> list[ValidationFinding]:
    """Check a plan against every plan rule; returns findings, never raises."""
    catalog = catalog or load_builtin_catalog()
    findings: list[ValidationFinding] = []

    def error(code: str, message: str, subject: str = "") -> None:
        findings.append(ValidationFinding(Severity.ERROR, code, message, subject))

    def warning(code: str, message: str, subject: str = "") -> None:
        findings.append(ValidationFinding(Severity.WARNING, code, message, subject))

    if not plan.metamodel_id:
        warning("empty-metamodel-id", "metamodel_id is empty", "metamodel_id")

    if not plan.purposes:
        error("purpose-empty", "no evaluation purpose declared", "purposes")
    for code in plan.purposes:
        purpose = _PURPOSE_BY_CODE.get(code)
        if purpose is None:
            error("unknown-purpose", f"unknown purpose code {code!r}", code)
        elif purpose.version is not plan.version:
            error(
                "purpose-version",
                f"purpose {code} belongs to the {purpose.version.value} "
                f"version, plan declares {plan.version.value}",
                code,
            )

    unknown_reqs = sorted(r for r in plan.selected_requirements if not catalog.has_requirement(r))
    for req_id in unknown_reqs:
        error("unknown-requirement", f"unknown requirement id {req_id!r}", req_id)
    unknown_measures = sorted(m for m in plan.selected_measures if not catalog.has_measure(m))
    for measure_id in unknown_measures:
        error("unknown-measure", f"unknown measure id {measure_id!r}", measure_id)

    known_reqs = sorted(plan.selected_requirements - set(unknown_reqs))
    known_measures = {m for m in plan.selected_measures if catalog.has_measure(m)}

    for req_id in known_reqs:
        req = catalog.requirement(req_id)
        missing = [a for a in ARTIFACT_ORDER
                   if a in req.required_artifacts and a not in plan.artifacts_available]
        if missing:
            error(
                "artifact-missing",
                f"{req_id} requires " + ", ".join(a.name for a in missing),
                req_id,
            )
        chosen = [m for m in req.measures if m in known_measures]
        if not chosen:
            error("coverage", f"{req_id} uncovered: select at least one of "
                  + ", ".join(req.measures), req_id)
        elif len(chosen) < len(req.measures):
            warning(
                "coverage-partial",
                f"{req_id} covered by {', '.join(chosen)} only; its full "
                f"mapping is {', '.join(req.measures)}",
                req_id,
            )

    for measure in catalog.measures:
        if measure.id not in known_measures:
            continue
        owner = measure.requirements[0]
        if owner not in plan.selected_requirements:
            warning(
                "measure-without-requirement",
                f"{measure.id} selected but its requirement {owner} is not",
                measure.id,
            )

    _validate_criteria(plan, catalog, known_measures, error, warning)
    _validate_formulas(plan, catalog, known_measures, error, warning)

    for index, entry in enumerate(plan.schedule):
        if entry.start > entry.end:
            error(
                "schedule-dates",
                f"schedule entry {index + 1} ({entry.activity!r}) ends before it starts",
                entry.activity,
            )

    if "CAp-2" in known_measures and "CAp-1" not in known_measures:
        warning(
            "cap2-without-cap1",
            "CAp-2 is derived from CAp-1 per-objective values; record CAp-1 "
            "entries in sessions",
            "CAp-2",
        )

    for name in sorted(plan.unknown_fields):
        warning("unknown-field", f"unknown plan field {name!r} ignored", name)

    return findings


def _validate_criteria(plan, catalog, known_measures, error, warning):
    criteria_map = dict(plan.criteria)
    for measure in catalog.measures:
        if measure.id not in known_measures:
            continue
        criteria = criteria_map.get(measure.id)
        if measure.is_numeric:
            if criteria is None:
                error(
                    "criteria-missing",
                    f"{measure.id} is numeric and needs a target and tolerance",
                    measure.id,
                )
                continue
            if criteria.min_item_count is not None:
                error(
                    "criteria-invalid",
                    f"{measure.id} is numeric; a minimum item count does not apply",
                    measure.id,
                )
            try:
                check_criteria(criteria, measure.orientation)
            except IllFormedCriteria as exc:
                error("criteria-invalid", f"{measure.id}: {exc}", measure.id)
        else:
            if criteria is not None and (
                criteria.target_value is not None
                or criteria.acceptable_tolerance_value is not None
            ):
                error(
                    "criteria-invalid",
                    f"{measure.id} is nominal; only a minimum item count applies",
                    measure.id,
                )
            if criteria is not None and criteria.min_item_count is not None and criteria.min_item_count < 0:
                error(
                    "criteria-invalid",
                    f"{measure.id}: minimum item count must be non-negative",
                    measure.id,
                )
    for measure_id in sorted(criteria_map):
        if measure_id not in plan.selected_measures:
            warning(
                "criteria-unused",
                f"criteria given for unselected measure {measure_id}",
                measure_id,
            )


def _validate_formulas(plan, catalog, known_measures, error, warning):
    sub_aliases = {s.alias for s in catalog.sub_characteristics}
    char_ids = {c.id for c in catalog.characteristics}
    measure_aliases = {
        catalog.measure(m).alias for m in known_measures if catalog.measure(m).is_numeric
    }
    scored_subs = {
        catalog.measure(m).sub_characteristic
        for m in known_measures
        if catalog.measure(m).is_numeric
    }

    for alias, text in plan.sub_characteristic_formulas:
        subject = f"sub_characteristic_formulas[{alias}]"
        if alias not in sub_aliases:
            error("unknown-alias", f"{alias!r} names no sub-characteristic", subject)
            continue
        if alias not in scored_subs:
            warning(
                "formula-unused",
                f"formula for {alias} ignored: no numeric measure of that "
                f"sub-characteristic is selected",
                subject,
            )
        _check_formula_text(text, measure_aliases, subject, error)

    for char_id, text in plan.characteristic_formulas:
        subject = f"characteristic_formulas[{char_id}]"
        if char_id not in char_ids:
            error("unknown-alias", f"{char_id!r} names no characteristic", subject)
            continue
        _check_formula_text(text, measure_aliases | scored_subs, subject, error)


def _check_formula_text(text, allowed_names, subject, error):
    try:
        expr = formula_mod.parse_formula(text)
    except Exception as exc:
        error("formula-syntax", f"{subject}: {exc}", subject)
        return
    for name in sorted(formula_mod.identifiers(expr)):
        if name not in allowed_names:
            error(
                "formula-unbound",
                f"{subject} references {name!r}, which no selected numeric "
                f"measure or scored sub-characteristic provides",
                subject,
            )


# --- rendering ----------------------------------------------------------

def render_plan_document(plan: EvaluationPlan, catalog: Catalog | None = None) -> str:
    """Human-readable plan document with the seven standard sections."""
    catalog = catalog or load_builtin_catalog()
    findings = validate_plan(plan, catalog)
    errors = [f for f in findings if f.severity is Severity.ERROR]
    if errors:
        raise PlanInvalid(errors)

    criteria_map = dict(plan.criteria)
    selected_reqs = [r for r in catalog.requirements if r.id in plan.selected_requirements]
    selected_measures = [m for m in catalog.measures if m.id in plan.selected_measures]

    lines: list[str] = []
    out = lines.append
    out(f"# Metamodel Quality Evaluation Plan: {plan.metamodel_id}")
    out("")
    out(f"- Evaluation requester: {plan.requester or '(not set)'}")
    out(f"- Plan elaboration date: {plan.date.isoformat()}")
    out(f"- Metamodel version: {plan.version.value}")
    out("")

    out("## 1. Evaluation Requirements")
    out("")
    out("### 1.1. Purpose")
    out("")
    for purpose in plan.selectable_purposes():
        mark = "x" if purpose.code in plan.purposes else " "
        out(f"- [{mark}] {purpose.text} ({purpose.code})")
    out("")
    out("### 1.2. Metamodel artifacts")
    out("")
    for artifact in ARTIFACT_ORDER:
        mark = "x" if artifact in plan.artifacts_available else " "
        out(f"- [{mark}] {artifact.name}")
    out("")
    out("### 1.3. Resources")
    out("")
    out(plan.resources or "(not set)")
    out("")

    out("## 2. Metamodel Quality Requirements")
    out("")
    if selected_reqs:
        for req in selected_reqs:
            arts = ", ".join(a.name for a in ARTIFACT_ORDER if a in req.required_artifacts)
            out(f"- {req.id}: {req.text}")
            out(f"  - requires: {arts}")
    else:
        out("(none selected)")
    out("")

    out("## 3. Metamodel Quality Measures")
    out("")
    if selected_measures:
        for measure in selected_measures:
            out(f"- {measure.id} {measure.name}: {measure.function_text}")
    else:
        out("(none selected)")
    out("")

    out("## 4. Criteria for Metamodel Quality Measures")
    out("")
    out("| Measure | Target value | Acceptable tolerance value |")
    out("| --- | --- | --- |")
    for measure in selected_measures:
        criteria = criteria_map.get(measure.id)
        if criteria is None:
            out(f"| {measure.id} | - | - |")
        elif measure.is_numeric:
            out(
                f"| {measure.id} | {_num(criteria.target_value)} "
                f"| {_num(criteria.acceptable_tolerance_value)} |"
            )
        else:
            out(f"| {measure.id} | at least {criteria.min_item_count} item(s) | - |")
    out("")

    out("## 5. Criteria for Evaluating the Metamodel")
    out("")
    if plan.sub_characteristic_formulas or plan.characteristic_formulas:
        for alias, text in plan.sub_characteristic_formulas:
            out(f"- sub-characteristic {alias} = {text}")
        for char_id, text in plan.characteristic_formulas:
            out(f"- characteristic {char_id} = {text}")
    else:
        out("(defaults: arithmetic mean of the applicable constituent values)")
    out("")

    out("## 6. Metamodel Evaluation Activities")
    out("")
    if plan.schedule:
        out("| Activity | Evaluators | Start date | End date |")
        out("| --- | --- | --- | --- |")
        for entry in plan.schedule:
            out(
                f"| {entry.activity} | {entry.evaluator} "
                f"| {entry.start.isoformat()} | {entry.end.isoformat()} |"
            )
    else:
        out("(no schedule)")
    out("")

    out("## 7. Measurements Table")
    out("")
    out("| Characteristic | Sub-characteristic | Quality Requirement | Measure "
        "| Measured value | Final measurement value | Sub-characteristic value "
        "| Characteristic value |")
    out("| --- | --- | --- | --- | --- | --- | --- | --- |")
    for measure in selected_measures:
        sub = catalog.sub_characteristic(measure.sub_characteristic)
        char = catalog.characteristic(sub.parent)
        req = catalog.requirement_for_measure(measure.id)
        out(f"| {char.name} | {sub.name} | {req.id} | {measure.id} {measure.name} | | | | |")
    out("")
    return "\n".join(lines)


def _num(value) -> str:
    if value is None:
        return "-"
    return f"{value:g}"


# --- file format (mqep-v1) ----------------------------------------------

SCHEMA = "mqep-v1"

_KNOWN_FIELDS = {
    "schema", "metamodel_id", "requester", "date", "version", "purposes",
    "artifacts_available", "resources", "selected_requirements",
    "selected_measures", "criteria", "sub_characteristic_formulas",
    "characteristic_formulas", "usage_objectives", "schedule",
    "baseline_results_ref", "required_independent_concepts",
}


def plan_to_dict(plan: EvaluationPlan) -> dict:
    criteria = {}
    for measure_id, c in sorted(plan.criteria):
        entry = {}
        if c.target_value is not None:
            entry["target_value"] = c.target_value
        if c.acceptable_tolerance_value is not None:
            entry["acceptable_tolerance_value"] = c.acceptable_tolerance_value
        if c.min_item_count is not None:
            entry["min_item_count"] = c.min_item_count
        criteria[measure_id] = entry
    return {
        "schema": SCHEMA,
        "metamodel_id": plan.metamodel_id,
        "requester": plan.requester,
        "date": plan.date.isoformat(),
        "version": plan.version.value,
        "purposes": list(plan.purposes),
        "artifacts_available": sorted(a.value for a in plan.artifacts_available),
        "resources": plan.resources,
        "selected_requirements": sorted(plan.selected_requirements),
        "selected_measures": sorted(plan.selected_measures),
        "criteria": criteria,
        "sub_characteristic_formulas": dict(plan.sub_characteristic_formulas),
        "characteristic_formulas": dict(plan.characteristic_formulas),
        "usage_objectives": list(plan.usage_objectives),
        "schedule": [
            {
                "activity": e.activity,
                "evaluator": e.evaluator,
                "start": e.start.isoformat(),
                "end": e.end.isoformat(),
            }
            for e in plan.schedule
        ],
        "baseline_results_ref": plan.baseline_results_ref,
        "required_independent_concepts": list(plan.required_independent_concepts),
    }


def plan_to_json(plan: EvaluationPlan) -> str:
    return canonical_dumps(plan_to_dict(plan))


def plan_fingerprint(plan: EvaluationPlan) -> str:
    """Content hash tying scorecards to the exact plan they came from."""
    import hashlib

    return hashlib.sha256(plan_to_json(plan).encode("utf-8")).hexdigest()


def _parse_date(raw, context: str) -> datetime.date:
    try:
        return datetime.date.fromisoformat(raw)
    except (TypeError, ValueError):
        raise PlanFormatError(f"{context}: expected an ISO-8601 date, got {raw!r}") from None


def _expect(raw, types, context: str):
    if not isinstance(raw, types):
        names = types.__name__ if isinstance(types, type) else "/".join(t.__name__ for t in types)
        raise PlanFormatError(f"{context}: expected {names}, got {type(raw).__name__}")
    return raw


def plan_from_dict(data: dict) -> EvaluationPlan:
    _expect(data, dict, "plan")
    schema = data.get("schema")
    if schema != SCHEMA:
        raise PlanFormatError(f"plan: expected schema {SCHEMA!r}, got {schema!r}")

    version_raw = _expect(data.get("version", ""), str, "version")
    try:
        version = MetamodelVersion(version_raw)
    except ValueError:
        raise PlanFormatError(f"version: expected 'intermediate' or 'final', got {version_raw!r}") from None

    artifacts = set()
    for raw in _expect(data.get("artifacts_available", []), list, "artifacts_available"):
        try:
            artifacts.add(ArtifactKind(_expect(raw, str, "artifacts_available[]")))
        except ValueError:
            raise PlanFormatError(f"artifacts_available: unknown artifact kind {raw!r}") from None

    criteria = []
    for measure_id, entry in sorted(_expect(data.get("criteria", {}), dict, "criteria").items()):
        _expect(entry, dict, f"criteria[{measure_id}]")
        target = entry.get("target_value")
        tolerance = entry.get("acceptable_tolerance_value")
        minimum = entry.get("min_item_count")
        for name, raw in (("target_value", target), ("acceptable_tolerance_value", tolerance)):
            if raw is not None and (isinstance(raw, bool) or not isinstance(raw, (int, float))):
                raise PlanFormatError(f"criteria[{measure_id}].{name}: expected a number, got {raw!r}")
        if minimum is not None and (isinstance(minimum, bool) or not isinstance(minimum, int)):
            raise PlanFormatError(f"criteria[{measure_id}].min_item_count: expected an integer, got {minimum!r}")
        criteria.append(
            (measure_id, DecisionCriteria(target, tolerance, minimum))
        )

    schedule = []
    for index, raw in enumerate(_expect(data.get("schedule", []), list, "schedule")):
        _expect(raw, dict, f"schedule[{index}]")
        schedule.append(
            ScheduleEntry(
                activity=_expect(raw.get("activity", ""), str, f"schedule[{index}].activity"),
                evaluator=_expect(raw.get("evaluator", ""), str, f"schedule[{index}].evaluator"),
                start=_parse_date(raw.get("start"), f"schedule[{index}].start"),
                end=_parse_date(raw.get("end"), f"schedule[{index}].end"),
            )
        )

    def _str_list(name: str) -> tuple[str, ...]:
        return tuple(_expect(v, str, f"{name}[]") for v in _expect(data.get(name, []), list, name))

    baseline = data.get("baseline_results_ref")
    if baseline is not None:
        baseline = _expect(baseline, str, "baseline_results_ref")

    return EvaluationPlan(
        metamodel_id=_expect(data.get("metamodel_id", ""), str, "metamodel_id"),
        requester=_expect(data.get("requester", ""), str, "requester"),
        date=_parse_date(data.get("date"), "date"),
        version=version,
        purposes=_str_list("purposes"),
        artifacts_available=frozenset(artifacts),
        resources=_expect(data.get("resources", ""), str, "resources"),
        selected_requirements=frozenset(_str_list("selected_requirements")),
        selected_measures=frozenset(_str_list("selected_measures")),
        criteria=tuple(criteria),
        sub_characteristic_formulas=tuple(
            sorted(
                (k, _expect(v, str, f"sub_characteristic_formulas[{k}]"))
                for k, v in _expect(
                    data.get("sub_characteristic_formulas", {}), dict,
                    "sub_characteristic_formulas",
                ).items()
            )
        ),
        characteristic_formulas=tuple(
            sorted(
                (k, _expect(v, str, f"characteristic_formulas[{k}]"))
                for k, v in _expect(
                    data.get("characteristic_formulas", {}), dict,
                    "characteristic_formulas",
                ).items()
            )
        ),
        usage_objectives=_str_list("usage_objectives"),
        schedule=tuple(schedule),
        baseline_results_ref=baseline,
        required_independent_concepts=_str_list("required_independent_concepts"),
        unknown_fields=tuple(sorted(set(data) - _KNOWN_FIELDS)),
    )


def load_plan(path: str | Path) -> EvaluationPlan:
    try:
        data = load_json(path)
    except ValueError as exc:
        raise PlanFormatError(f"{path}: {exc}") from None
    return plan_from_dict(data)


def save_plan(plan: EvaluationPlan, path: str | Path) -> None:
    Path(path).write_text(plan_to_json(plan), encoding="utf-8")


def select(plan: EvaluationPlan, **changes) -> EvaluationPlan:
    """Return a copy of the plan with fields replaced (authoring helper)."""
    return replace(plan, **changes)
