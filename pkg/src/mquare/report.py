"""Final evaluation report rendering.

The report is deterministic plain text with Markdown-compatible headings
and five fixed sections; the measurement table mirrors the scorecard rows
in catalog order. Prose fields (evaluator qualifications, problems,
analyses) pass through verbatim from the metadata file.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .catalog import Catalog, MeasureKind, load_builtin_catalog
from .errors import PlanScorecardMismatch, SessionFormatError
from .jsonio import load_json
from .plan import EvaluationPlan, plan_fingerprint
from .scoring import Scorecard


@dataclass(frozen=True)
class EvaluationMeta:
    """Free-text context the tool cannot synthesize."""

    evaluators: str = ""
    evaluation_period: str = ""
    problems: str = ""
    analyses: str = ""


def meta_from_dict(data: dict) -> EvaluationMeta:
    if not isinstance(data, dict):
        raise SessionFormatError("meta: expected a JSON object")
    return EvaluationMeta(
        evaluators=str(data.get("evaluators", "")),
        evaluation_period=str(data.get("evaluation_period", "")),
        problems=str(data.get("problems", "")),
        analyses=str(data.get("analyses", "")),
    )


def load_meta(path: str | Path) -> EvaluationMeta:
    try:
        return meta_from_dict(load_json(path))
    except ValueError as exc:
        raise SessionFormatError(f"{path}: {exc}") from None


def _format_value(value: float | None, kind: MeasureKind) -> str:
    if value is None:
        return ""
    if kind is MeasureKind.DIFFERENCE:
        return str(int(value))
    return f"{value:.2f}"


def _format_grade(value: float | None) -> str:
    return "" if value is None else f"{value:.2f}"


def render_report(
    plan: EvaluationPlan,
    scorecard: Scorecard,
    meta: EvaluationMeta,
    catalog: Catalog | None = None,
) -> str:
    """Render the evaluation report for a scorecard produced from this plan."""
    catalog = catalog or load_builtin_catalog()
    if scorecard.metamodel_id != plan.metamodel_id:
        raise PlanScorecardMismatch(
            f"scorecard is for {scorecard.metamodel_id!r}, plan is for {plan.metamodel_id!r}"
        )
    if scorecard.plan_fingerprint != plan_fingerprint(plan):
        raise PlanScorecardMismatch(
            "scorecard was produced from a different revision of this plan"
        )

    lines: list[str] = []
    out = lines.append
    out(f"# Metamodel Quality Evaluation Report: {plan.metamodel_id}")
    out("")
    out(f"- Metamodel identification: {plan.metamodel_id}")
    out(f"- Evaluator(s): {meta.evaluators or '(not recorded)'}")
    out(f"- Evaluation period: {meta.evaluation_period or '(not recorded)'}")
    out("")

    out("## 1. Quality evaluation plan")
    out("")
    out(f"- Requester: {plan.requester or '(not set)'}")
    out(f"- Plan date: {plan.date.isoformat()}")
    out(f"- Metamodel version: {plan.version.value}")
    purposes = ", ".join(plan.purposes) or "(none)"
    out(f"- Purposes: {purposes}")
    artifacts = ", ".join(sorted(a.name for a in plan.artifacts_available)) or "(none)"
    out(f"- Artifacts available: {artifacts}")
    out(f"- Selected requirements: {', '.join(sorted(plan.selected_requirements)) or '(none)'}")
    out(f"- Selected measures: {', '.join(sorted(plan.selected_measures)) or '(none)'}")
    if plan.resources:
        out(f"- Resources: {plan.resources}")
    out("")

    out("## 2. The evaluators and their qualifications")
    out("")
    out(meta.evaluators or "(not recorded)")
    out("")

    out("## 3. Problems or workarounds in adverse events")
    out("")
    out(meta.problems or "None reported.")
    out("")

    out("## 4. The results from the measurements and analyses performed")
    out("")
    out("| Characteristic | Sub-characteristic | Quality Requirement | Measure "
        "| Measured value | Final measurement value | Sub-characteristic value "
        "| Characteristic value |")
    out("| --- | --- | --- | --- | --- | --- | --- | --- |")
    sub_values = dict(scorecard.sub_characteristic_values)
    char_values = dict(scorecard.characteristic_values)
    seen_subs: set[str] = set()
    seen_chars: set[str] = set()
    for row in scorecard.rows:
        spec = catalog.measure(row.measure_id)
        sub = catalog.sub_characteristic(row.sub_characteristic_id)
        char = catalog.characteristic(row.characteristic_id)
        char_cell = sub_cell = ""
        if sub.id not in seen_subs:
            seen_subs.add(sub.id)
            sub_cell = _format_grade(sub_values.get(sub.id))
        if char.id not in seen_chars:
            seen_chars.add(char.id)
            char_cell = _format_grade(char_values.get(char.id))
        out(
            f"| {char.name} | {sub.name} | {row.requirement_id} "
            f"| {row.measure_id} {spec.name} | {row.elements_summary} "
            f"| {_format_value(row.final_value, spec.kind)} "
            f"| {sub_cell} | {char_cell} |"
        )
    out("")
    if scorecard.warnings:
        out("Diagnostics:")
        out("")
        for warning in scorecard.warnings:
            out(f"- {warning}")
        out("")
    out(meta.analyses or "(no further analyses recorded)")
    out("")

    out("## 5. Result of the evaluation")
    out("")
    if scorecard.sub_characteristic_values:
        out("Sub-characteristic grades:")
        out("")
        for alias, value in scorecard.sub_characteristic_values:
            sub = catalog.sub_characteristic(alias)
            out(f"- {sub.name} ({alias}): {_format_grade(value)}")
        out("")
    if scorecard.characteristic_values:
        out("Characteristic grades:")
        out("")
        for char_id, value in scorecard.characteristic_values:
            char = catalog.characteristic(char_id)
            out(f"- {char.name} ({char_id}): {_format_grade(value)}")
        out("")
    out(f"Verdict: {scorecard.verdict.name}")
    out("")
    return "\n".join(lines)
