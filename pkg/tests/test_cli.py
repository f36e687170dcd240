"""Command-line behaviour: subcommands, exit codes, deterministic outputs."""

from __future__ import annotations

import json

import pytest

from mquare.cli import main
from mquare.jsonio import canonical_dumps
from mquare.plan import save_plan, select

from conftest import DEMO_DIR, make_minimal_plan, table16_plan, table16_session
from mquare.session import save_session


@pytest.fixture
def table16_files(tmp_path):
    plan_path = tmp_path / "plan.json"
    session_path = tmp_path / "session.json"
    save_plan(table16_plan(), plan_path)
    save_session(table16_session(), session_path)
    return plan_path, session_path


class TestUsage:
    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_no_command_prints_usage(self, capsys):
        assert main([]) == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_missing_file_is_exit_two(self, capsys):
        assert main(["plan", "validate", "/does/not/exist.json"]) == 2

    def test_malformed_json_is_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        assert main(["plan", "validate", str(bad)]) == 2


class TestCatalog:
    def test_list_shows_all_measures(self, capsys):
        assert main(["catalog", "list"]) == 0
        out = capsys.readouterr().out
        assert out.count("\n") == 23
        assert "CCp-1" in out and "PRe-3" in out

    def test_list_filtered_by_characteristic(self, capsys):
        assert main(["catalog", "list", "--characteristic", "M"]) == 0
        out = capsys.readouterr().out
        assert out.count("\n") == 8
        assert "MMo-1" in out and "CCp-1" not in out

    def test_list_unknown_characteristic(self, capsys):
        assert main(["catalog", "list", "--characteristic", "Q"]) == 2

    def test_show_measure(self, capsys):
        assert main(["catalog", "show", "CCp-1"]) == 0
        out = capsys.readouterr().out
        assert "Conceptual coverage" in out
        assert "X = 1 - A / B" in out
        assert "MQR02" in out

    def test_show_unknown_measure(self, capsys):
        assert main(["catalog", "show", "XXX-1"]) == 2

    def test_export_is_canonical(self, tmp_path, capsys):
        out_path = tmp_path / "catalog.json"
        assert main(["catalog", "export", "--out", str(out_path)]) == 0
        data = json.loads(out_path.read_text(encoding="utf-8"))
        assert data["schema"] == "catalog-v1"
        assert len(data["measures"]) == 23
        assert out_path.read_text(encoding="utf-8") == canonical_dumps(data)


class TestPlanCommands:
    def test_init_writes_skeleton_and_guidance(self, tmp_path, capsys):
        out_path = tmp_path / "plan.json"
        code = main(
            ["plan", "init", "--metamodel", "OntoM", "--version", "final",
             "--out", str(out_path), "--date", "2020-09-14"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "FINAL_ACCEPT" in out
        data = json.loads(out_path.read_text(encoding="utf-8"))
        assert data["schema"] == "mqep-v1"
        assert data["metamodel_id"] == "OntoM"
        assert data["date"] == "2020-09-14"

    def test_validate_good_plan(self, table16_files, capsys):
        plan_path, _ = table16_files
        assert main(["plan", "validate", str(plan_path)]) == 0
        assert "valid" in capsys.readouterr().out

    def test_validate_bad_plan_exits_one_with_findings(self, tmp_path, capsys):
        plan = make_minimal_plan("MQR17")
        plan = select(plan, artifacts_available=frozenset())
        path = tmp_path / "plan.json"
        save_plan(plan, path)
        assert main(["plan", "validate", str(path)]) == 1
        err = capsys.readouterr().err
        assert "artifact-missing" in err
        assert "MQR17" in err

    def test_render(self, table16_files, tmp_path):
        plan_path, _ = table16_files
        doc_path = tmp_path / "plan.md"
        assert main(["plan", "render", str(plan_path), "--out", str(doc_path)]) == 0
        assert "Measurements Table" in doc_path.read_text(encoding="utf-8")

    def test_render_invalid_plan_exits_one(self, tmp_path):
        plan = select(table16_plan(), purposes=())
        path = tmp_path / "plan.json"
        save_plan(plan, path)
        assert main(["plan", "render", str(path), "--out", str(tmp_path / "doc.md")]) == 1


class TestPipeline:
    def test_evaluate_worked_example(self, table16_files, tmp_path, capsys):
        plan_path, session_path = table16_files
        score_path = tmp_path / "scorecard.json"
        code = main(
            ["evaluate", "--plan", str(plan_path), "--session", str(session_path),
             "--out", str(score_path)]
        )
        assert code == 0
        assert "ALL_TARGETS_MET" in capsys.readouterr().out
        data = json.loads(score_path.read_text(encoding="utf-8"))
        assert data["rows"][0]["final_value"] == 1.0
        assert data["sub_characteristic_values"]["CCp"] == 1.0

    def test_evaluate_invalid_plan_exits_one(self, tmp_path):
        plan = select(table16_plan(), criteria=())
        plan_path = tmp_path / "plan.json"
        save_plan(plan, plan_path)
        session_path = tmp_path / "session.json"
        save_session(table16_session(), session_path)
        code = main(
            ["evaluate", "--plan", str(plan_path), "--session", str(session_path),
             "--out", str(tmp_path / "s.json")]
        )
        assert code == 1

    def test_evaluate_session_for_unselected_measure_exits_one(self, tmp_path, capsys):
        plan_path = tmp_path / "plan.json"
        save_plan(table16_plan(), plan_path)
        from mquare import ElementValues
        from mquare.session import MeasurementSession

        rogue = MeasurementSession(
            metamodel_id="OntoM",
            evaluator="ana",
            entries=(ElementValues.counts("CCr-1", A=0, B=20),),
        )
        session_path = tmp_path / "session.json"
        save_session(rogue, session_path)
        code = main(
            ["evaluate", "--plan", str(plan_path), "--session", str(session_path),
             "--out", str(tmp_path / "s.json")]
        )
        assert code == 1

    def test_analyze_demo_fragment(self, tmp_path):
        out_path = tmp_path / "fragment.json"
        code = main(
            ["analyze", str(DEMO_DIR / "library.mmdl"),
             "--plan", str(DEMO_DIR / "plan.json"), "--out", str(out_path)]
        )
        assert code == 0
        data = json.loads(out_path.read_text(encoding="utf-8"))
        assert data["entries"]["MMo-2"] == {"A": 3, "B": 1}
        assert data["entries"]["MMo-1"] == {"A": 2, "B": 2}
        assert data["candidates"]["CCp-1"] == {"B": 6}

    def test_analyze_parse_error_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.mmdl"
        bad.write_text("wibble\n", encoding="utf-8")
        assert main(["analyze", str(bad), "--out", str(tmp_path / "f.json")]) == 2

    def test_full_demo_pipeline_and_repeatability(self, tmp_path):
        outputs = {}
        for round_name in ("first", "second"):
            fragment = tmp_path / f"{round_name}-fragment.json"
            scorecard = tmp_path / f"{round_name}-scorecard.json"
            report = tmp_path / f"{round_name}-report.md"
            trace = tmp_path / f"{round_name}-trace.txt"
            assert main(
                ["analyze", str(DEMO_DIR / "library.mmdl"),
                 "--plan", str(DEMO_DIR / "plan.json"),
                 "--out", str(fragment), "--trace", str(trace)]
            ) == 0
            assert main(
                ["evaluate", "--plan", str(DEMO_DIR / "plan.json"),
                 "--session", str(DEMO_DIR / "session.json"),
                 "--session", str(fragment),
                 "--out", str(scorecard)]
            ) == 0
            assert main(
                ["report", "--plan", str(DEMO_DIR / "plan.json"),
                 "--scorecard", str(scorecard),
                 "--meta", str(DEMO_DIR / "meta.json"),
                 "--out", str(report)]
            ) == 0
            outputs[round_name] = (
                fragment.read_bytes(), scorecard.read_bytes(), report.read_bytes()
            )
        assert outputs["first"] == outputs["second"]

    def test_report_for_wrong_plan_exits_one(self, table16_files, tmp_path):
        plan_path, session_path = table16_files
        score_path = tmp_path / "scorecard.json"
        main(["evaluate", "--plan", str(plan_path), "--session", str(session_path),
              "--out", str(score_path)])
        meta_path = tmp_path / "meta.json"
        meta_path.write_text('{"evaluators": "ana"}', encoding="utf-8")
        code = main(
            ["report", "--plan", str(DEMO_DIR / "plan.json"),
             "--scorecard", str(score_path), "--meta", str(meta_path),
             "--out", str(tmp_path / "report.md")]
        )
        assert code == 1
