"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import datetime
from pathlib import Path

import pytest

from mquare import (
    ArtifactKind,
    DecisionCriteria,
    ElementValues,
    MetamodelVersion,
    Orientation,
    init_plan,
    load_builtin_catalog,
)
from mquare.plan import select
from mquare.session import MeasurementSession

REPO_ROOT = Path(__file__).resolve().parent.parent
DEMO_DIR = REPO_ROOT / "demo"

PLAN_DATE = datetime.date(2020, 9, 14)


@pytest.fixture(scope="session")
def catalog():
    return load_builtin_catalog()


def criteria_for(measure_id: str, catalog=None) -> DecisionCriteria:
    """Well-formed criteria for any measure, oriented correctly."""
    catalog = catalog or load_builtin_catalog()
    spec = catalog.measure(measure_id)
    if not spec.is_numeric:
        return DecisionCriteria(min_item_count=1)
    if spec.orientation is Orientation.LOWER_BETTER:
        if spec.value_range == "unbounded integer":
            return DecisionCriteria(target_value=2, acceptable_tolerance_value=5)
        return DecisionCriteria(target_value=0, acceptable_tolerance_value=0.2)
    return DecisionCriteria(target_value=1, acceptable_tolerance_value=0.75)


def make_minimal_plan(req_id: str, *, catalog=None, with_nominal_criteria=False):
    """A valid plan selecting exactly one requirement with its full mapping."""
    catalog = catalog or load_builtin_catalog()
    req = catalog.requirement(req_id)
    criteria = tuple(
        (mid, criteria_for(mid, catalog))
        for mid in req.measures
        if catalog.measure(mid).is_numeric or with_nominal_criteria
    )
    plan = init_plan("OntoM", MetamodelVersion.FINAL, date=PLAN_DATE, requester="req")
    return select(
        plan,
        purposes=("FINAL_ACCEPT",),
        artifacts_available=frozenset(req.required_artifacts),
        selected_requirements=frozenset({req_id}),
        selected_measures=frozenset(req.measures),
        criteria=criteria,
    )


def table16_plan():
    """Plan for the worked single-measure scenario (coverage, target 1, tolerance 0.75)."""
    plan = init_plan("OntoM", MetamodelVersion.FINAL, date=PLAN_DATE)
    return select(
        plan,
        purposes=("FINAL_ACCEPT",),
        artifacts_available=frozenset(
            {ArtifactKind.SPECIFICATIONS, ArtifactKind.IMPLEMENTATION}
        ),
        selected_requirements=frozenset({"MQR02"}),
        selected_measures=frozenset({"CCp-1"}),
        criteria=(("CCp-1", DecisionCriteria(1, 0.75)),),
    )


def table16_session(evaluator="ana", a=0, b=20):
    return MeasurementSession(
        metamodel_id="OntoM",
        evaluator=evaluator,
        recorded_at="2020-09-15T10:00:00",
        entries=(ElementValues.counts("CCp-1", A=a, B=b),),
    )


WORKED_MMDL = """\
metamodel "M"
concept R { }
concept X { }
concept Y { }
concept Z { }
ref R.x -> X [1..1] containment
ref R.y -> Y [1..1] containment
ref X.z -> Z [1..1] containment
root R
"""

COLLAPSE_MMDL = """\
metamodel "M2"
concept R { }
concept X { }
concept Y { }
abstract concept Z { }
concept Z1 extends Z { }
concept Z2 extends Z { }
ref R.x -> X [1..1] containment
ref R.y -> Y [1..1] containment
ref X.z -> Z [1..1] containment
root R
"""

COUPLING_MMDL = """\
metamodel "M3"
concept Foo { }
concept Bar { }
concept Baz extends Bar { }
ref Foo.b -> Baz [0..1]
"""
