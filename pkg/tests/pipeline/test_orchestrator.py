from app.cli import EXIT_ABORT, EXIT_DECIDED, exit_code_for
from app.models.config import SampleConfig, SearchBounds
from app.models.report import ObstructionReport, PointModel
from app.pipeline import stages
from app.pipeline.orchestrator import (
    ClassifyState,
    after_local_solubility,
    after_obstruction,
    after_point_search,
    classify_curve,
)
from app.utils.errors import NodeBudgetExceededError, PointOutsideSurvivorsError, PrecisionExhaustedError

QUICK = SampleConfig(
    height_bound=20,
    search=SearchBounds(degree=1, coeff_bound=2, linear_bound=6, relation_pool=40, max_relations=4, max_candidates=8),
)


def _report(verdict):
    return ObstructionReport(curve=[1, 0, 0, 0, 0, 0, 1], genus=2, verdict=verdict)


def test_routing_after_local_solubility():
    state = ClassifyState(coefficients=[1, 0, 0, 0, 0, 0, 1])
    assert after_local_solubility(state) == "point_search"
    assert after_local_solubility(state.model_copy(update={"failing_place": "3"})) == "finalize"
    assert after_local_solubility(state.model_copy(update={"error": "boom"})) == "finalize"


def test_routing_after_point_search():
    state = ClassifyState(coefficients=[1, 0, 0, 0, 0, 0, 1])
    point = PointModel(x="0", y="1")
    assert after_point_search(state) == "obstruction"
    assert after_point_search(state.model_copy(update={"point": point})) == "obstruction"
    unchecked = state.model_copy(update={"point": point, "config": SampleConfig(consistency_check=False)})
    assert after_point_search(unchecked) == "finalize"


def test_routing_after_obstruction():
    deep = SampleConfig()
    deep.engine.deep = True
    state = ClassifyState(coefficients=[1, 0, 0, 0, 0, 0, 1], config=deep, report=_report("not_obstructed_by_B"))
    assert after_obstruction(state) == "deep"
    assert after_obstruction(state.model_copy(update={"deep_done": True})) == "finalize"
    assert after_obstruction(state.model_copy(update={"report": _report("obstructed")})) == "finalize"
    shallow = state.model_copy(update={"config": SampleConfig()})
    assert after_obstruction(shallow) == "finalize"


def test_not_locally_soluble(no_real_points):
    result = classify_curve(no_real_points, QUICK)
    assert result.category == "NotLocallySoluble"
    assert result.failing_place == "inf"
    assert result.report is None
    assert "local_solubility" in result.timings


def test_point_without_cross_check(sextic):
    config = QUICK.model_copy(update={"consistency_check": False})
    result = classify_curve(sextic, config, index=7)
    assert result.category == "HasRationalPoint"
    assert result.point == PointModel(x=None, y="1")
    assert result.report is None
    assert result.index == 7


def test_point_cross_checked_against_survivors(sextic):
    result = classify_curve(sextic, QUICK, ells=[["0", "1"]])
    assert result.category == "HasRationalPoint"
    assert result.report.verdict == "not_obstructed_by_B"
    assert set(result.report.diagnostics["point_classes"]) == {"inf", "2", "3"}
    assert not result.diagnostics["deep_pass"]


def test_bad_ell_keeps_the_point(sextic):
    result = classify_curve(sextic, QUICK, ells=[["1", "-1"]])
    assert result.category == "HasRationalPoint"
    assert result.diagnostics["error_type"] == "NonSquareNormError"
    assert result.diagnostics["stage"] == "obstruction"


def test_abort_after_point_keeps_the_point(sextic, monkeypatch):
    def exhausted(*args, **kwargs):
        raise NodeBudgetExceededError("node budget exhausted")

    monkeypatch.setattr(stages, "run_engine", exhausted)
    result = classify_curve(sextic, QUICK)
    assert result.category == "HasRationalPoint"
    assert result.point is not None
    assert result.diagnostics["error_type"] == "NodeBudgetExceededError"
    assert result.diagnostics["stage"] == "obstruction"
    assert exit_code_for(result) == EXIT_DECIDED


def test_point_outside_survivors_is_undecided(sextic, monkeypatch):
    def outside(run, point):
        raise PointOutsideSurvivorsError(f"point {point} outside the survivors")

    monkeypatch.setattr(stages, "check_point_in_survivors", outside)
    result = classify_curve(sextic, QUICK)
    assert result.category == "Undecided"
    assert result.point is None
    assert result.diagnostics["error_type"] == "PointOutsideSurvivorsError"


def test_abort_without_point_is_undecided(no_real_points, monkeypatch):
    def exhausted(*args, **kwargs):
        raise PrecisionExhaustedError("precision ran out")

    monkeypatch.setattr(stages, "first_insoluble_place", exhausted)
    result = classify_curve(no_real_points, QUICK)
    assert result.category == "Undecided"
    assert exit_code_for(result) == EXIT_ABORT
