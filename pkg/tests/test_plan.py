"""Plan authoring, validation rules, rendering, and the mqep-v1 file format."""

from __future__ import annotations

import datetime

import pytest

from mquare import (
    ArtifactKind,
    DecisionCriteria,
    MetamodelVersion,
    init_plan,
    render_plan_document,
    validate_plan,
)
from mquare.errors import PlanFormatError, PlanInvalid
from mquare.plan import (
    PURPOSES,
    ScheduleEntry,
    Severity,
    load_plan,
    plan_from_dict,
    plan_to_dict,
    save_plan,
    select,
)

from conftest import PLAN_DATE, criteria_for, make_minimal_plan, table16_plan

SECTION_HEADINGS = [
    "Evaluation Requirements",
    "Metamodel Quality Requirements",
    "Metamodel Quality Measures",
    "Criteria for Metamodel Quality Measures",
    "Criteria for Evaluating the Metamodel",
    "Metamodel Evaluation Activities",
    "Measurements Table",
]


def errors_of(findings):
    return [f for f in findings if f.severity is Severity.ERROR]


def warnings_of(findings):
    return [f for f in findings if f.severity is Severity.WARNING]


class TestInitPlan:
    def test_final_version_offers_five_purposes(self):
        plan = init_plan("OntoM", MetamodelVersion.FINAL, date=PLAN_DATE)
        assert len(plan.selectable_purposes()) == 5

    def test_intermediate_version_offers_six_purposes(self):
        plan = init_plan("OntoM", MetamodelVersion.INTERMEDIATE, date=PLAN_DATE)
        assert len(plan.selectable_purposes()) == 6

    def test_purpose_catalog_is_closed_world(self):
        assert len(PURPOSES) == 11
        assert len({p.code for p in PURPOSES}) == 11

    def test_empty_metamodel_id_warns_on_first_validation(self):
        plan = init_plan("", MetamodelVersion.FINAL, date=PLAN_DATE)
        findings = validate_plan(plan)
        assert any(
            f.code == "empty-metamodel-id" and f.severity is Severity.WARNING
            for f in findings
        )

    def test_defaults_to_today(self):
        plan = init_plan("OntoM", MetamodelVersion.FINAL)
        assert plan.date == datetime.date.today()


class TestValidatePlan:
    def test_clean_single_requirement_plan(self):
        plan = table16_plan()
        assert validate_plan(plan) == []

    def test_missing_artifacts_reported_once_with_names(self):
        plan = make_minimal_plan("MQR17")
        plan = select(plan, artifacts_available=frozenset({ArtifactKind.SPECIFICATIONS}))
        findings = errors_of(validate_plan(plan))
        assert len(findings) == 1
        finding = findings[0]
        assert finding.code == "artifact-missing"
        assert finding.subject == "MQR17"
        assert "USER_DOCUMENTATION" in finding.message
        assert "REPLACED_METAMODEL" in finding.message

    def test_uncovered_requirement(self):
        plan = make_minimal_plan("MQR04")
        plan = select(plan, selected_measures=frozenset(), criteria=())
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "coverage" and f.subject == "MQR04" for f in findings)

    def test_partial_coverage_is_a_warning(self):
        plan = make_minimal_plan("MQR15")
        plan = select(
            plan,
            selected_measures=frozenset({"MMd-3"}),
            criteria=(("MMd-3", criteria_for("MMd-3")),),
        )
        findings = validate_plan(plan)
        assert not errors_of(findings)
        assert any(f.code == "coverage-partial" for f in warnings_of(findings))

    def test_measure_without_requirement_is_a_warning(self):
        plan = table16_plan()
        plan = select(
            plan,
            selected_measures=plan.selected_measures | {"CCr-1"},
            criteria=plan.criteria + (("CCr-1", criteria_for("CCr-1")),),
        )
        findings = validate_plan(plan)
        assert not errors_of(findings)
        assert any(f.code == "measure-without-requirement" for f in findings)

    def test_purpose_must_match_version(self):
        plan = table16_plan()
        plan = select(plan, purposes=("INTERMEDIATE_ASSURE_QUALITY",))
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "purpose-version" for f in findings)

    def test_empty_and_unknown_purposes(self):
        plan = select(table16_plan(), purposes=())
        assert any(f.code == "purpose-empty" for f in errors_of(validate_plan(plan)))
        plan = select(table16_plan(), purposes=("NOT_A_PURPOSE",))
        assert any(f.code == "unknown-purpose" for f in errors_of(validate_plan(plan)))

    def test_unknown_ids(self):
        plan = table16_plan()
        plan = select(
            plan,
            selected_requirements=plan.selected_requirements | {"MQR99"},
            selected_measures=plan.selected_measures | {"ZZz-9"},
        )
        codes = {f.code for f in errors_of(validate_plan(plan))}
        assert "unknown-requirement" in codes
        assert "unknown-measure" in codes

    def test_numeric_measure_needs_criteria(self):
        plan = select(table16_plan(), criteria=())
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "criteria-missing" and f.subject == "CCp-1" for f in findings)

    def test_wrong_side_tolerance_rejected(self):
        plan = select(table16_plan(), criteria=(("CCp-1", DecisionCriteria(0.75, 1)),))
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "criteria-invalid" for f in findings)

    def test_thresholds_on_nominal_measure_rejected(self):
        plan = make_minimal_plan("MQR01")
        plan = select(plan, criteria=(("CCc-1", DecisionCriteria(1, 0.75)),))
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "criteria-invalid" and f.subject == "CCc-1" for f in findings)

    def test_min_item_count_on_nominal_accepted(self):
        plan = make_minimal_plan("MQR01", with_nominal_criteria=True)
        assert validate_plan(plan) == []

    def test_criteria_for_unselected_measure_warns(self):
        plan = table16_plan()
        plan = select(plan, criteria=plan.criteria + (("CCr-1", criteria_for("CCr-1")),))
        findings = validate_plan(plan)
        assert not errors_of(findings)
        assert any(f.code == "criteria-unused" for f in findings)

    def test_formula_syntax_error(self):
        plan = select(table16_plan(), sub_characteristic_formulas=(("CCp", "CCp1 +"),))
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "formula-syntax" for f in findings)

    def test_formula_unresolvable_identifier(self):
        plan = select(table16_plan(), sub_characteristic_formulas=(("CCp", "CCr1"),))
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "formula-unbound" for f in findings)

    def test_formula_for_unknown_alias(self):
        plan = select(table16_plan(), sub_characteristic_formulas=(("XXx", "1"),))
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "unknown-alias" for f in findings)

    def test_characteristic_formula_may_mix_aliases(self):
        plan = make_minimal_plan("MQR02")
        plan = select(
            plan,
            selected_requirements=frozenset({"MQR02", "MQR03"}),
            selected_measures=frozenset({"CCp-1", "CCr-1"}),
            criteria=(
                ("CCp-1", criteria_for("CCp-1")),
                ("CCr-1", criteria_for("CCr-1")),
            ),
            artifacts_available=frozenset(
                {ArtifactKind.SPECIFICATIONS, ArtifactKind.IMPLEMENTATION}
            ),
            characteristic_formulas=(("CS", "(CCp1 + CCr) / 2"),),
        )
        assert validate_plan(plan) == []

    def test_backwards_schedule_rejected(self):
        plan = select(
            table16_plan(),
            schedule=(
                ScheduleEntry(
                    "evaluate", "ana",
                    datetime.date(2020, 9, 16), datetime.date(2020, 9, 15),
                ),
            ),
        )
        findings = errors_of(validate_plan(plan))
        assert any(f.code == "schedule-dates" for f in findings)

    def test_cap2_without_cap1_warns(self):
        plan = make_minimal_plan("MQR04")
        plan = select(
            plan,
            selected_measures=frozenset({"CAp-2"}),
            criteria=(("CAp-2", criteria_for("CAp-2")),),
        )
        findings = validate_plan(plan)
        assert not errors_of(findings)
        assert any(f.code == "cap2-without-cap1" for f in findings)

    def test_idempotent_and_order_insensitive(self):
        plan = make_minimal_plan("MQR04")
        once = validate_plan(plan)
        twice = validate_plan(plan)
        assert once == twice
        reordered = select(
            plan,
            selected_measures=frozenset(reversed(sorted(plan.selected_measures))),
            artifacts_available=frozenset(reversed(sorted(plan.artifacts_available, key=lambda a: a.value))),
        )
        assert validate_plan(reordered) == once


class TestTable13Matrix:
    @pytest.mark.parametrize("req_id", [f"MQR{i:02d}" for i in range(1, 20)])
    def test_exact_artifacts_validate_cleanly(self, req_id, catalog):
        plan = make_minimal_plan(req_id, catalog=catalog)
        assert errors_of(validate_plan(plan, catalog)) == []

    @pytest.mark.parametrize("req_id", [f"MQR{i:02d}" for i in range(1, 20)])
    def test_each_removed_artifact_yields_one_error(self, req_id, catalog):
        base = make_minimal_plan(req_id, catalog=catalog)
        for artifact in sorted(catalog.required_artifacts(req_id), key=lambda a: a.value):
            plan = select(base, artifacts_available=base.artifacts_available - {artifact})
            findings = errors_of(validate_plan(plan, catalog))
            assert len(findings) == 1
            assert findings[0].code == "artifact-missing"
            assert findings[0].subject == req_id
            assert artifact.name in findings[0].message


class TestRenderPlanDocument:
    def test_contains_the_seven_sections_in_order(self):
        document = render_plan_document(table16_plan())
        positions = [document.index(h) for h in SECTION_HEADINGS]
        assert positions == sorted(positions)

    def test_invalid_plan_raises_with_findings(self):
        plan = select(table16_plan(), purposes=())
        with pytest.raises(PlanInvalid) as exc:
            render_plan_document(plan)
        assert any(f.code == "purpose-empty" for f in exc.value.findings)

    def test_rendering_is_deterministic(self):
        plan = make_minimal_plan("MQR04")
        assert render_plan_document(plan) == render_plan_document(plan)


class TestPlanFiles:
    def test_round_trip(self, tmp_path):
        plan = make_minimal_plan("MQR04")
        plan = select(
            plan,
            usage_objectives=("track loans", "order stock"),
            schedule=(
                ScheduleEntry(
                    "evaluate", "ana",
                    datetime.date(2020, 9, 15), datetime.date(2020, 9, 16),
                ),
            ),
            sub_characteristic_formulas=(("CAp", "(CAp1 + CAp2) / 2"),),
            baseline_results_ref="prior/scorecard.json",
            required_independent_concepts=("Library",),
        )
        path = tmp_path / "plan.json"
        save_plan(plan, path)
        assert load_plan(path) == plan

    def test_write_is_byte_identical(self, tmp_path):
        plan = make_minimal_plan("MQR02")
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        save_plan(plan, first)
        save_plan(plan, second)
        assert first.read_bytes() == second.read_bytes()

    def test_unknown_fields_surface_as_warnings(self):
        data = plan_to_dict(table16_plan())
        data["frobnication_level"] = 11
        plan = plan_from_dict(data)
        findings = validate_plan(plan)
        assert any(
            f.code == "unknown-field" and "frobnication_level" in f.message
            for f in findings
        )
        assert not errors_of(findings)

    def test_bad_schema_rejected(self):
        with pytest.raises(PlanFormatError):
            plan_from_dict({"schema": "nope"})

    def test_bad_date_rejected(self):
        data = plan_to_dict(table16_plan())
        data["date"] = "last tuesday"
        with pytest.raises(PlanFormatError):
            plan_from_dict(data)

    def test_bad_version_rejected(self):
        data = plan_to_dict(table16_plan())
        data["version"] = "beta"
        with pytest.raises(PlanFormatError):
            plan_from_dict(data)
