"""Command-line driver for the evaluation pipeline.

Exit codes: 0 success; 1 validation or evaluation findings at ERROR
severity; 2 usage, I/O, or parse failure. All file outputs are
deterministic: identical invocations write byte-identical files.
"""

from __future__ import annotations

import argparse
import datetime
import sys
from pathlib import Path

from . import analyzer, plan as plan_mod, report as report_mod, scoring, session as session_mod
from .catalog import catalog_to_dict, load_builtin_catalog
from .errors import (
    CyclicGeneralization,
    MmdlParseError,
    MquareError,
    PlanFormatError,
    PlanInvalid,
    SessionFormatError,
    UnknownConcept,
    UnknownMeasure,
    UnknownRequirement,
)
from .jsonio import canonical_dumps
from .plan import MetamodelVersion, Severity

_USAGE_ERRORS = (
    PlanFormatError,
    SessionFormatError,
    MmdlParseError,
    UnknownConcept,
    CyclicGeneralization,
    UnknownMeasure,
    UnknownRequirement,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mquare",
        description="Metamodel quality evaluation: catalog, plans, sessions, "
                    "scoring, and reports.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p_catalog = sub.add_parser("catalog", help="inspect the built-in quality catalog")
    catalog_sub = p_catalog.add_subparsers(dest="catalog_command", metavar="subcommand")
    p_list = catalog_sub.add_parser("list", help="list measures")
    p_list.add_argument("--characteristic", help="filter by characteristic id (C, CS, U, M, P)")
    p_show = catalog_sub.add_parser("show", help="show one measure in full")
    p_show.add_argument("measure_id")
    p_export = catalog_sub.add_parser("export", help="write the catalog as JSON (catalog-v1)")
    p_export.add_argument("--out", help="output file (default: stdout)")

    p_plan = sub.add_parser("plan", help="author, validate, and render evaluation plans")
    plan_sub = p_plan.add_subparsers(dest="plan_command", metavar="subcommand")
    p_init = plan_sub.add_parser("init", help="write a skeleton plan")
    p_init.add_argument("--metamodel", required=True, help="metamodel identification")
    p_init.add_argument("--version", required=True, choices=["intermediate", "final"])
    p_init.add_argument("--out", required=True)
    p_init.add_argument("--requester", default="")
    p_init.add_argument("--date", help="plan elaboration date (YYYY-MM-DD; default: today)")
    p_validate = plan_sub.add_parser("validate", help="check a plan against the catalog rules")
    p_validate.add_argument("plan_file")
    p_render = plan_sub.add_parser("render", help="render a valid plan as a document")
    p_render.add_argument("plan_file")
    p_render.add_argument("--out", required=True)

    p_analyze = sub.add_parser(
        "analyze", help="derive structural measure elements from a metamodel file"
    )
    p_analyze.add_argument("mmdl_file")
    p_analyze.add_argument("--plan", dest="plan_file")
    p_analyze.add_argument("--out", required=True, help="session fragment (mqes-v1)")
    p_analyze.add_argument("--trace", help="write the analysis trace to a file")

    p_eval = sub.add_parser("evaluate", help="compute a scorecard from sessions")
    p_eval.add_argument("--plan", dest="plan_file", required=True)
    p_eval.add_argument(
        "--session", dest="session_files", action="append", required=True,
        help="session file; repeat for several evaluators",
    )
    p_eval.add_argument("--out", required=True, help="scorecard (mqer-v1)")

    p_report = sub.add_parser("report", help="render the evaluation report")
    p_report.add_argument("--plan", dest="plan_file", required=True)
    p_report.add_argument("--scorecard", dest="scorecard_file", required=True)
    p_report.add_argument("--meta", dest="meta_file", required=True)
    p_report.add_argument("--out", required=True)

    return parser


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _print_findings(findings) -> None:
    for finding in findings:
        print(finding.render(), file=sys.stderr)


def _cmd_catalog(args) -> int:
    catalog = load_builtin_catalog()
    if args.catalog_command == "list":
        measures = catalog.measures
        if args.characteristic:
            try:
                catalog.characteristic(args.characteristic)
            except KeyError:
                print(f"unknown characteristic id {args.characteristic!r}", file=sys.stderr)
                return 2
            measures = tuple(
                m for m in measures
                if catalog.sub_characteristic(m.sub_characteristic).parent == args.characteristic
            )
        for measure in measures:
            sub = catalog.sub_characteristic(measure.sub_characteristic)
            char = catalog.characteristic(sub.parent)
            print(f"{measure.id:7} {measure.name:45} {sub.name} ({char.name})")
        return 0
    if args.catalog_command == "show":
        spec = catalog.measure(args.measure_id)
        sub = catalog.sub_characteristic(spec.sub_characteristic)
        char = catalog.characteristic(sub.parent)
        req = catalog.requirement_for_measure(spec.id)
        print(f"{spec.id} {spec.name}")
        print(f"  question:    {spec.description}")
        print(f"  function:    {spec.function_text}")
        for symbol, meaning in spec.element_names:
            print(f"    {symbol} = {meaning}")
        print(f"  range:       {spec.value_range}")
        print(f"  orientation: {spec.orientation.value}")
        print(f"  grouping:    {sub.name} ({sub.id}) under {char.name} ({char.id})")
        print(f"  requirement: {req.id}: {req.text}")
        print(f"  origin:      {spec.provenance_note}")
        return 0
    if args.catalog_command == "export":
        _write(args.out, canonical_dumps(catalog_to_dict(catalog)))
        return 0
    print("usage: mquare catalog {list,show,export}", file=sys.stderr)
    return 2


def _cmd_plan(args) -> int:
    if args.plan_command == "init":
        date = datetime.date.fromisoformat(args.date) if args.date else None
        plan = plan_mod.init_plan(
            args.metamodel,
            MetamodelVersion(args.version),
            date=date,
            requester=args.requester,
        )
        plan_mod.save_plan(plan, args.out)
        print(f"wrote skeleton plan to {args.out}")
        print(f"selectable purposes for the {plan.version.value} version:")
        for purpose in plan.selectable_purposes():
            print(f"  {purpose.code}: {purpose.text}")
        return 0
    if args.plan_command == "validate":
        plan = plan_mod.load_plan(args.plan_file)
        findings = plan_mod.validate_plan(plan)
        _print_findings(findings)
        errors = [f for f in findings if f.severity is Severity.ERROR]
        if errors:
            return 1
        print(f"plan {args.plan_file} is valid"
              + (f" ({len(findings)} warning(s))" if findings else ""))
        return 0
    if args.plan_command == "render":
        plan = plan_mod.load_plan(args.plan_file)
        try:
            document = plan_mod.render_plan_document(plan)
        except PlanInvalid as exc:
            _print_findings(exc.findings)
            return 1
        _write(args.out, document)
        return 0
    print("usage: mquare plan {init,validate,render}", file=sys.stderr)
    return 2


def _cmd_analyze(args) -> int:
    text = Path(args.mmdl_file).read_text(encoding="utf-8")
    graph = analyzer.parse_mmdl(text)
    plan = None
    if args.plan_file:
        plan = plan_mod.load_plan(args.plan_file)
        findings = plan_mod.validate_plan(plan)
        if any(f.severity is Severity.ERROR for f in findings):
            _print_findings(findings)
            return 1
    suggestions = analyzer.suggest_elements(graph, plan)
    fragment = analyzer.suggestions_to_session_dict(graph, suggestions, plan)
    _write(args.out, canonical_dumps(fragment))

    trace_lines = list(suggestions.notes)
    if graph.root is not None and (plan is None or "MMo-2" in plan.selected_measures):
        trace_lines.extend(analyzer.instantiation_complexity(graph).trace)
    trace_text = "\n".join(trace_lines) + "\n" if trace_lines else ""
    if args.trace:
        _write(args.trace, trace_text)
    else:
        sys.stdout.write(trace_text)
    return 0


def _cmd_evaluate(args) -> int:
    plan = plan_mod.load_plan(args.plan_file)
    findings = plan_mod.validate_plan(plan)
    errors = [f for f in findings if f.severity is Severity.ERROR]
    if errors:
        _print_findings(findings)
        return 1
    sessions = []
    for path in args.session_files:
        session, warnings = session_mod.load_session(path)
        for warning in warnings:
            print(f"WARNING {path}: {warning}", file=sys.stderr)
        sessions.append(session)
    scorecard = session_mod.evaluate_sessions(plan, sessions)
    scoring.save_scorecard(scorecard, args.out)
    for warning in scorecard.warnings:
        print(f"WARNING {warning}", file=sys.stderr)
    print(f"verdict: {scorecard.verdict.name}")
    return 0


def _cmd_report(args) -> int:
    plan = plan_mod.load_plan(args.plan_file)
    scorecard = scoring.load_scorecard(args.scorecard_file)
    meta = report_mod.load_meta(args.meta_file)
    document = report_mod.render_report(plan, scorecard, meta)
    _write(args.out, document)
    return 0


_HANDLERS = {
    "catalog": _cmd_catalog,
    "plan": _cmd_plan,
    "analyze": _cmd_analyze,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    handler = _HANDLERS[args.command]
    try:
        return handler(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PlanInvalid as exc:
        _print_findings(exc.findings)
        return 1
    except MquareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
