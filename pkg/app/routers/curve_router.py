from fastapi import APIRouter, HTTPException
from fastapi.concurrency import run_in_threadpool

from app.engine.algorithm import run_algorithm1
from app.engine.verify import verify_report
from app.etale.curve import Curve
from app.models.config import EngineConfig, SampleConfig
from app.models.curve import GENUS5_COEFFICIENTS, CurveRequest, ExampleCurve
from app.models.report import ClassificationResult, ObstructionReport, VerificationResult
from app.pipeline.orchestrator import classify_curve
from app.pipeline.stages import parse_ells
from app.utils.config import get_settings
from app.utils.errors import InvalidCurveError, NonSquareNormError, ResourceAbort
from app.utils.logging_utils import setup_logger

logger = setup_logger("routers.curve_router")

router = APIRouter(
    prefix="/api/curves",
    tags=["curves"],
    responses={404: {"description": "Not found"}},
)


def _curve(request: CurveRequest) -> Curve:
    try:
        return Curve.from_coefficients(request.coefficients)
    except InvalidCurveError as e:
        raise HTTPException(status_code=422, detail=str(e))


def _engine_config(request: CurveRequest) -> EngineConfig:
    try:
        return EngineConfig(extra_primes=request.extra_primes, deep=request.deep)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


@router.post("/classify", response_model=ClassificationResult)
async def classify(request: CurveRequest):
    """
    Classify a curve as NotLocallySoluble, HasRationalPoint,
    BrauerManinObstructed or Undecided, with its witness.
    """
    curve = _curve(request)
    config = SampleConfig(
        genus=curve.genus,
        height_bound=request.height_bound or get_settings().height_bound,
        engine=_engine_config(request),
    )
    try:
        result = await run_in_threadpool(classify_curve, curve, config, request.ells)
    except Exception as e:
        logger.error(f"classification failed: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Failed to classify curve: {str(e)}")
    if result.diagnostics.get("error_type") == NonSquareNormError.__name__:
        raise HTTPException(status_code=422, detail=result.diagnostics["error"])
    return result


@router.post("/obstruct", response_model=ObstructionReport)
async def obstruct(request: CurveRequest):
    """Run the obstruction algorithm directly and return its report."""
    curve = _curve(request)
    config = _engine_config(request)
    try:
        ells = None if request.ells is None else parse_ells(curve, request.ells)
        return await run_in_threadpool(run_algorithm1, curve, ells, config)
    except ResourceAbort:
        raise
    except (NonSquareNormError, ValueError, ZeroDivisionError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"obstruction run failed: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Failed to run the obstruction algorithm: {str(e)}")


@router.post("/verify", response_model=VerificationResult)
async def verify(report: ObstructionReport):
    """Replay the F₂ arithmetic recorded in a report."""
    try:
        return await run_in_threadpool(verify_report, report)
    except Exception as e:
        logger.error(f"verification failed: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Failed to verify report: {str(e)}")


@router.get("/example", response_model=ExampleCurve)
async def get_example_curve():
    """A genus 5 curve that is everywhere locally soluble and has S_min = {∞, 2, 5, 17}."""
    return ExampleCurve(
        name="genus-5",
        coefficients=GENUS5_COEFFICIENTS,
        genus=5,
        description="Everywhere locally soluble; no rational points, shown with 239 added to S.",
    )
