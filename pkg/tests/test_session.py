"""Session computation, consolidation, and the mqes-v1 file format."""

from __future__ import annotations

import itertools
import random

import pytest

from mquare import (
    ElementValues,
    MeasureKind,
    MeasureStatus,
    Nominal,
    NotApplicable,
    Numeric,
    Verdict,
    compute_session,
    consolidate,
    evaluate,
    evaluate_sessions,
    validate_plan,
)
from mquare.errors import (
    EmptySessionSet,
    MixedPlan,
    PlanInvalid,
    SessionFormatError,
    UnselectedMeasure,
    WrongKindInput,
)
from mquare.plan import select
from mquare.session import (
    MeasurementSession,
    load_session,
    save_session,
    session_from_dict,
    session_to_dict,
)

from conftest import criteria_for, make_minimal_plan, table16_plan, table16_session


def session_with(entries, evaluator="ana", metamodel_id="OntoM", recorded_at=None):
    return MeasurementSession(
        metamodel_id=metamodel_id,
        evaluator=evaluator,
        recorded_at=recorded_at,
        entries=tuple(entries),
    )


class TestComputeSession:
    def test_worked_example(self):
        results = compute_session(table16_plan(), table16_session())
        outcome = results["CCp-1"]
        assert outcome.value == Numeric(1.0)
        assert outcome.status is MeasureStatus.TARGET_MET

    def test_unselected_measure_rejected(self):
        session = session_with(
            [
                ElementValues.counts("CCp-1", A=0, B=20),
                ElementValues.counts("CCr-1", A=0, B=20),
            ]
        )
        with pytest.raises(UnselectedMeasure):
            compute_session(table16_plan(), session)

    def test_invalid_plan_blocks_computation(self):
        plan = select(table16_plan(), purposes=())
        with pytest.raises(PlanInvalid):
            compute_session(plan, table16_session())

    def test_cap2_synthesized_from_objectives(self):
        plan = make_minimal_plan("MQR04")
        entry = ElementValues(
            measure_id="CAp-1",
            per_objective=(
                ("o1", ElementValues.counts("CAp-1", A=2, B=5)),
                ("o2", ElementValues.counts("CAp-1", A=0, B=4)),
            ),
        )
        results = compute_session(plan, session_with([entry]))
        assert results["CAp-2"].value == Numeric(0.8)
        assert dict(results["CAp-2"].per_objective)["o1"] == Numeric(0.6)
        assert dict(results["CAp-2"].per_objective)["o2"] == Numeric(1.0)

    def test_cap1_value_is_mean_over_objectives(self):
        plan = make_minimal_plan("MQR04")
        entry = ElementValues(
            measure_id="CAp-1",
            per_objective=(
                ("o1", ElementValues.counts("CAp-1", A=2, B=5)),
                ("o2", ElementValues.counts("CAp-1", A=0, B=4)),
            ),
        )
        results = compute_session(plan, session_with([entry]))
        assert results["CAp-1"].value == Numeric(0.8)

    def test_direct_cap2_entry_rejected(self):
        plan = make_minimal_plan("MQR04")
        session = session_with([ElementValues.counts("CAp-2", A=1, B=2)])
        with pytest.raises(WrongKindInput):
            compute_session(plan, session)

    def test_cap1_entry_accepted_when_only_cap2_selected(self):
        plan = make_minimal_plan("MQR04")
        plan = select(
            plan,
            selected_measures=frozenset({"CAp-2"}),
            criteria=(("CAp-2", criteria_for("CAp-2")),),
        )
        entry = ElementValues(
            measure_id="CAp-1",
            per_objective=(("o1", ElementValues.counts("CAp-1", A=1, B=4)),),
        )
        results = compute_session(plan, session_with([entry]))
        assert set(results) == {"CAp-2"}
        assert results["CAp-2"].value == Numeric(0.75)

    def test_results_never_exceed_selection(self):
        plan = make_minimal_plan("MQR04")
        entry = ElementValues(
            measure_id="CAp-1",
            per_objective=(("o1", ElementValues.counts("CAp-1", A=0, B=2)),),
        )
        results = compute_session(plan, session_with([entry]))
        assert set(results) <= plan.selected_measures

    def test_a_exceeding_b_forces_failed_with_diagnostic(self):
        results = compute_session(table16_plan(), table16_session(a=25, b=20))
        outcome = results["CCp-1"]
        assert outcome.value == Numeric(1 - 25 / 20)
        assert outcome.status is MeasureStatus.FAILED
        assert any("exceeds" in w for w in outcome.warnings)

    def test_inconsistent_objective_counts_flow_into_cap2(self):
        plan = make_minimal_plan("MQR04")
        entry = ElementValues(
            measure_id="CAp-1",
            per_objective=(
                ("o1", ElementValues.counts("CAp-1", A=6, B=4)),   # value -0.5
                ("o2", ElementValues.counts("CAp-1", A=0, B=4)),   # value 1.0
            ),
        )
        results = compute_session(plan, session_with([entry]))
        assert results["CAp-2"].value == Numeric(0.25)
        assert results["CAp-2"].status is MeasureStatus.FAILED
        assert any("exceed" in w for w in results["CAp-2"].warnings)
        assert results["CAp-1"].status is MeasureStatus.FAILED


class TestConsolidate:
    def test_single_session_is_identity(self):
        plan = table16_plan()
        consolidated = consolidate(plan, [table16_session()])
        single = compute_session(plan, table16_session())
        assert consolidated.results["CCp-1"].value == single["CCp-1"].value
        assert consolidated.results["CCp-1"].status == single["CCp-1"].status

    def test_numeric_mean_of_two_sessions(self):
        plan = table16_plan()
        sessions = [
            table16_session(evaluator="ana", a=4, b=20),   # 0.8
            table16_session(evaluator="rui", a=0, b=20),   # 1.0
        ]
        consolidated = consolidate(plan, sessions)
        outcome = consolidated.results["CCp-1"]
        assert outcome.value == Numeric(0.9)
        assert outcome.status is MeasureStatus.ACCEPTABLE
        assert dict(outcome.contributions)["ana"] == Numeric(0.8)
        assert dict(outcome.contributions)["rui"] == Numeric(1.0)

    def test_nominal_union_sorted_and_deduplicated(self):
        plan = make_minimal_plan("MQR01")
        sessions = [
            session_with(
                [ElementValues(measure_id="CCc-1", nominal_items=("UML 2.5",))],
                evaluator="ana",
            ),
            session_with(
                [ElementValues(measure_id="CCc-1", nominal_items=("UML 2.5", "BPMN 2.0"))],
                evaluator="rui",
            ),
        ]
        consolidated = consolidate(plan, sessions)
        value = consolidated.results["CCc-1"].value
        assert value == Nominal(("BPMN 2.0", "UML 2.5"))

    def test_not_applicable_sessions_excluded(self):
        plan = table16_plan()
        sessions = [
            table16_session(evaluator="ana", a=0, b=0),    # not applicable
            table16_session(evaluator="rui", a=0, b=20),   # 1.0
        ]
        outcome = consolidate(plan, sessions).results["CCp-1"]
        assert outcome.value == Numeric(1.0)

    def test_all_not_applicable_stays_not_applicable(self):
        plan = table16_plan()
        sessions = [
            table16_session(evaluator="ana", a=0, b=0),
            table16_session(evaluator="rui", a=0, b=0),
        ]
        outcome = consolidate(plan, sessions).results["CCp-1"]
        assert isinstance(outcome.value, NotApplicable)
        assert outcome.status is MeasureStatus.NOT_APPLICABLE

    def test_empty_session_set_rejected(self):
        with pytest.raises(EmptySessionSet):
            consolidate(table16_plan(), [])

    def test_mixed_metamodels_rejected(self):
        sessions = [
            table16_session(evaluator="ana"),
            session_with(
                [ElementValues.counts("CCp-1", A=0, B=20)],
                evaluator="rui",
                metamodel_id="OtherMM",
            ),
        ]
        with pytest.raises(MixedPlan):
            consolidate(table16_plan(), sessions)

    def test_permutation_invariance(self):
        plan = table16_plan()
        sessions = [
            table16_session(evaluator="ana", a=1, b=20),
            table16_session(evaluator="rui", a=3, b=20),
            table16_session(evaluator="zoe", a=7, b=20),
        ]
        reference = consolidate(plan, sessions)
        for permutation in itertools.permutations(sessions):
            again = consolidate(plan, list(permutation))
            assert again == reference

    def test_consolidated_value_bounded_by_sessions(self):
        plan = table16_plan()
        rng = random.Random(7)
        for _ in range(50):
            counts = [rng.randint(0, 20) for _ in range(rng.randint(1, 5))]
            sessions = [
                table16_session(evaluator=f"e{i}", a=a, b=20)
                for i, a in enumerate(counts)
            ]
            values = [1 - a / 20 for a in counts]
            outcome = consolidate(plan, sessions).results["CCp-1"]
            assert min(values) - 1e-12 <= outcome.value.value <= max(values) + 1e-12


class TestEvaluate:
    def test_worked_example_scorecard(self):
        scorecard = evaluate_sessions(table16_plan(), [table16_session()])
        assert scorecard.sub_characteristic_value("CCp") == 1.0
        assert scorecard.verdict is Verdict.ALL_TARGETS_MET

    def test_all_not_applicable_is_inconclusive(self):
        scorecard = evaluate_sessions(table16_plan(), [table16_session(a=0, b=0)])
        assert scorecard.verdict is Verdict.INCONCLUSIVE

    def test_metamodel_mismatch_rejected(self):
        plan = table16_plan()
        consolidated = consolidate(plan, [table16_session()])
        other = select(plan, metamodel_id="Other")
        with pytest.raises(MixedPlan):
            evaluate(other, consolidated)


class TestCleanPlansAlwaysEvaluate:
    """A plan with no ERROR findings plus sessions covering every selected
    measure must always produce a scorecard (never MissingResult)."""

    @staticmethod
    def _entry_for(spec):
        if spec.kind is MeasureKind.NOMINAL:
            return ElementValues(measure_id=spec.id, nominal_items=("UML 2.5",))
        if spec.kind is MeasureKind.DIFFERENCE:
            return ElementValues.counts(spec.id, A=3, B=1)
        if spec.kind is MeasureKind.MEAN_OF_DEPENDENT:
            return None   # synthesized from the dependent measure's entry
        if spec.id == "CAp-1":
            return ElementValues(
                measure_id="CAp-1",
                per_objective=(("o1", ElementValues.counts("CAp-1", A=1, B=4)),),
            )
        return ElementValues.counts(spec.id, A=1, B=4)

    @pytest.mark.parametrize("req_id", [f"MQR{i:02d}" for i in range(1, 20)])
    def test_every_requirement_evaluates(self, req_id, catalog):
        plan = make_minimal_plan(req_id, catalog=catalog)
        assert not [f for f in validate_plan(plan) if f.severity.value == "error"]
        entries = [
            entry
            for measure_id in sorted(plan.selected_measures)
            for entry in [self._entry_for(catalog.measure(measure_id))]
            if entry is not None
        ]
        scorecard = evaluate_sessions(plan, [session_with(entries)])
        assert {row.measure_id for row in scorecard.rows} == plan.selected_measures


class TestSessionFiles:
    def test_round_trip(self, tmp_path):
        session = MeasurementSession(
            metamodel_id="OntoM",
            evaluator="ana",
            recorded_at="2020-09-15T10:00:00",
            entries=(
                ElementValues.counts("CCp-1", A=0, B=20),
                ElementValues(measure_id="CCc-1", nominal_items=("UML 2.5",)),
                ElementValues(
                    measure_id="CAp-1",
                    per_objective=(
                        ("o1", ElementValues.counts("CAp-1", A=2, B=5)),
                        ("o2", ElementValues.counts("CAp-1", A=0, B=4)),
                    ),
                ),
            ),
            notes="first pass",
        )
        path = tmp_path / "session.json"
        save_session(session, path)
        loaded, warnings = load_session(path)
        assert warnings == []
        assert loaded == session

    def test_duplicate_entries_replace_with_warning(self, tmp_path):
        path = tmp_path / "session.json"
        path.write_text(
            '{"schema": "mqes-v1", "metamodel_id": "OntoM", "evaluator": "ana",\n'
            ' "entries": {"CCp-1": {"A": 5, "B": 20}, "CCp-1": {"A": 0, "B": 20}}}',
            encoding="utf-8",
        )
        session, warnings = load_session(path)
        assert session.entry_for("CCp-1").numeric_map() == {"A": 0, "B": 20}
        assert any("CCp-1" in w for w in warnings)

    def test_bad_schema_rejected(self):
        with pytest.raises(SessionFormatError):
            session_from_dict({"schema": "mqep-v1"})

    def test_bad_timestamp_rejected(self):
        data = session_to_dict(table16_session())
        data["recorded_at"] = "yesterday"
        with pytest.raises(SessionFormatError):
            session_from_dict(data)

    def test_unknown_fields_warn(self):
        data = session_to_dict(table16_session())
        data["mood"] = "optimistic"
        _, warnings = session_from_dict(data)
        assert any("mood" in w for w in warnings)

    def test_candidates_field_tolerated(self):
        data = session_to_dict(table16_session())
        data["candidates"] = {"CCp-1": {"B": 6}}
        _, warnings = session_from_dict(data)
        assert warnings == []

    def test_end_to_end_determinism(self, tmp_path):
        from mquare.scoring import save_scorecard

        plan = table16_plan()
        outputs = []
        for name in ("one.json", "two.json"):
            scorecard = evaluate_sessions(plan, [table16_session()])
            path = tmp_path / name
            save_scorecard(scorecard, path)
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1]
