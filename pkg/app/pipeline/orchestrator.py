from functools import lru_cache
from typing import Any, Dict, List, Optional

from langgraph.graph import END, StateGraph
from pydantic import BaseModel, Field

from app.etale.curve import Curve
from app.etale.places import place_label
from app.models.config import SampleConfig
from app.models.report import ClassificationResult, ObstructionReport, PointModel
from app.pipeline.stages import (
    LocalSolubilityStage,
    ObstructionStage,
    PointSearchStage,
    curve_from_coefficients,
    model_to_point,
    parse_ells,
    point_to_model,
)
from app.utils.errors import PointOutsideSurvivorsError
from app.utils.logging_utils import log_state, setup_logger

# Set up logger
logger = setup_logger("pipeline.orchestrator")


# Define the state for the graph
class ClassifyState(BaseModel):
    """State object for the classification graph. Holds serializable data only."""
    coefficients: List[int] = Field(..., description="Coefficients of f, leading first")
    config: SampleConfig = Field(default_factory=SampleConfig)
    ells: Optional[List[List[str]]] = Field(None, description="User ℓ's; searched for when None")
    index: Optional[int] = Field(None, description="Position in a sampled batch")
    failing_place: Optional[str] = Field(None, description="A place without local points")
    point: Optional[PointModel] = Field(None, description="A rational point found by the search")
    report: Optional[ObstructionReport] = Field(None, description="Latest obstruction report")
    deep_done: bool = False
    result: Optional[ClassificationResult] = None
    timings: Dict[str, float] = Field(default_factory=dict)
    error: Optional[str] = Field(None, description="Error message if any")
    error_type: Optional[str] = None
    error_stage: Optional[str] = None


local_solubility_stage = LocalSolubilityStage()
point_search_stage = PointSearchStage()
obstruction_stage = ObstructionStage()
deep_stage = ObstructionStage(deep=True)


def _curve(state: ClassifyState) -> Curve:
    return curve_from_coefficients(tuple(state.coefficients))


def _failure(state: ClassifyState, stage: str, e: Exception) -> Dict[str, Any]:
    logger.error(f"{stage} error on {state.coefficients}: {str(e)}", exc_info=True)
    return {"error": f"{stage} error: {str(e)}", "error_type": type(e).__name__, "error_stage": stage}


# Define node functions
def check_local_solubility(state: ClassifyState) -> Dict[str, Any]:
    """Find a place without local points, if any."""
    try:
        log_state(logger, state.model_dump(), "Initial")
        failing, elapsed = local_solubility_stage.run(curve=_curve(state))
        return {
            "failing_place": None if failing is None else place_label(failing),
            "timings": {**state.timings, "local_solubility": elapsed},
        }
    except Exception as e:
        return _failure(state, "local_solubility", e)


def search_points(state: ClassifyState) -> Dict[str, Any]:
    """Look for a rational point up to the configured height."""
    try:
        point, elapsed = point_search_stage.run(curve=_curve(state), height=state.config.height_bound)
        return {
            "point": None if point is None else point_to_model(point),
            "timings": {**state.timings, "point_search": elapsed},
        }
    except Exception as e:
        return _failure(state, "point_search", e)


def _obstruction_node(state: ClassifyState, stage: ObstructionStage) -> Dict[str, Any]:
    try:
        log_state(logger, state.model_dump(), "Initial")
        curve = _curve(state)
        run, elapsed = stage.run(
            curve=curve,
            ells=None if state.ells is None else parse_ells(curve, state.ells),
            config=state.config.engine,
            search=state.config.search,
            point=None if state.point is None else model_to_point(state.point),
        )
        return {
            "report": run.report(),
            "deep_done": state.deep_done or stage.deep,
            "timings": {**state.timings, stage.name: elapsed},
        }
    except Exception as e:
        return _failure(state, stage.name, e)


def run_obstruction(state: ClassifyState) -> Dict[str, Any]:
    """The obstruction algorithm over S_min; with a point at hand this cross-checks the point instead."""
    return _obstruction_node(state, obstruction_stage)


def run_deep(state: ClassifyState) -> Dict[str, Any]:
    """The obstruction algorithm again over S with the small and bad primes added."""
    return _obstruction_node(state, deep_stage)


def _categorize(state: ClassifyState) -> Dict[str, Any]:
    """A verified point wins over any later failure except its own cross-check."""
    diagnostics = {}
    if state.error:
        diagnostics = {"error": state.error, "error_type": state.error_type, "stage": state.error_stage}
    if state.point is not None and state.error_type != PointOutsideSurvivorsError.__name__:
        return {"category": "HasRationalPoint", "point": state.point, "diagnostics": diagnostics}
    if state.error:
        return {"category": "Undecided", "diagnostics": diagnostics}
    if state.failing_place is not None:
        return {"category": "NotLocallySoluble", "failing_place": state.failing_place}
    report = state.report
    if report is not None and report.verdict == "obstructed":
        return {"category": "BrauerManinObstructed"}
    if report is not None and report.verdict == "not_locally_soluble":
        failing = report.diagnostics.get("failing_places") or [None]
        return {"category": "NotLocallySoluble", "failing_place": failing[0]}
    return {"category": "Undecided"}


def finalize_classification(state: ClassifyState) -> Dict[str, Any]:
    """Assemble the result; errors are kept in the diagnostics."""
    curve = _curve(state)
    fields = _categorize(state)
    diagnostics = fields.pop("diagnostics", {})
    if state.report is not None:
        diagnostics["deep_pass"] = state.deep_done
    result = ClassificationResult(
        curve=list(state.coefficients),
        genus=curve.genus,
        report=state.report,
        timings=state.timings,
        diagnostics=diagnostics,
        index=state.index,
        **fields,
    )
    logger.info(f"{curve}: {result.category}")
    log_state(logger, state.model_dump(), "Final")
    return {"result": result}


# Define the conditional edges
def after_local_solubility(state: ClassifyState) -> str:
    if state.error or state.failing_place is not None:
        return "finalize"
    return "point_search"


def after_point_search(state: ClassifyState) -> str:
    if state.error:
        return "finalize"
    if state.point is not None and not state.config.consistency_check:
        logger.debug("Point found, skipping the cross-check")
        return "finalize"
    return "obstruction"


def after_obstruction(state: ClassifyState) -> str:
    if state.error or state.point is not None:
        return "finalize"
    if state.report is not None and state.report.verdict == "not_obstructed_by_B":
        if state.config.engine.deep and not state.deep_done:
            logger.debug("No obstruction over S_min, continuing with the deep pass")
            return "deep"
    return "finalize"


# Build the graph
def build_classification_graph() -> StateGraph:
    """Build the classification graph."""
    workflow = StateGraph(ClassifyState)

    # Add nodes
    workflow.add_node("local_solubility", check_local_solubility)
    workflow.add_node("point_search", search_points)
    workflow.add_node("obstruction", run_obstruction)
    workflow.add_node("deep", run_deep)
    workflow.add_node("finalize", finalize_classification)

    # Set conditional edges
    workflow.add_conditional_edges(
        "local_solubility",
        after_local_solubility,
        {"finalize": "finalize", "point_search": "point_search"},
    )
    workflow.add_conditional_edges(
        "point_search",
        after_point_search,
        {"finalize": "finalize", "obstruction": "obstruction"},
    )
    workflow.add_conditional_edges(
        "obstruction",
        after_obstruction,
        {"finalize": "finalize", "deep": "deep"},
    )

    # Add edges
    workflow.add_edge("deep", "finalize")
    workflow.add_edge("finalize", END)

    workflow.set_entry_point("local_solubility")
    return workflow


@lru_cache(maxsize=1)
def _compiled_graph():
    return build_classification_graph().compile()


def classify_curve(
    curve: Curve,
    config: Optional[SampleConfig] = None,
    ells: Optional[List[List[str]]] = None,
    index: Optional[int] = None,
) -> ClassificationResult:
    """
    Classify one curve as NotLocallySoluble, HasRationalPoint,
    BrauerManinObstructed or Undecided.

    Args:
        curve: The curve
        config: Point search height, ℓ search bounds and engine knobs
        ells: User ℓ's as coefficient strings, constant first
        index: Position in a sampled batch

    Returns:
        A ClassificationResult with its witness attached
    """
    logger.info(f"Classifying {curve}")
    initial_state = ClassifyState(
        coefficients=curve.leading_first(),
        config=config or SampleConfig(),
        ells=ells,
        index=index,
    )
    result = _compiled_graph().invoke(initial_state)
    result_dict = dict(result)
    logger.debug(f"Result keys: {list(result_dict.keys())}")

    final = result_dict.get("result")
    if final is None:
        raise RuntimeError(f"classification of {curve} produced no result")
    if isinstance(final, dict):
        final = ClassificationResult(**final)
    return final
