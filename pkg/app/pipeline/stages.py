"""The stages of the classification pipeline, one per workflow node."""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from app.engine.algorithm import EngineRun, run_deep_pass, run_engine
from app.etale.curve import Curve
from app.etale.element import EtaleElement
from app.etale.places import place_label
from app.models.config import EngineConfig, SearchBounds
from app.models.report import PointModel
from app.mu.image import Point, mu_of_point
from app.mu.solubility import first_insoluble_place
from app.pipeline.base_stage import BaseStage
from app.pipeline.point_search import first_point
from app.utils.errors import PointOutsideSurvivorsError
from app.utils.logging_utils import setup_logger

logger = setup_logger("pipeline.stages")


@lru_cache(maxsize=64)
def curve_from_coefficients(coefficients: Tuple[int, ...]) -> Curve:
    """Curves are rebuilt from the serializable state; the cache keeps the disc factorization."""
    return Curve.from_coefficients(coefficients)


def parse_ells(curve: Curve, rows: Sequence[Sequence[str]]) -> List[EtaleElement]:
    """ℓ's given as rational coefficient strings of powers of θ, constant first."""
    return [EtaleElement.from_coeffs(curve, [Fraction(c) for c in row]) for row in rows]


def point_to_model(point: Point) -> PointModel:
    x, y = point
    return PointModel(x=None if x is None else str(x), y=str(y))


def model_to_point(model: PointModel) -> Point:
    return (None if model.x is None else Fraction(model.x), Fraction(model.y))


def check_point_in_survivors(run: EngineRun, point: Point) -> Dict[str, int]:
    """
    A rational point's class tuple must survive every functional.

    Raises:
        PointOutsideSurvivorsError: the tuple lies outside every surviving subproduct
    """
    classes = {v: mu_of_point(run.curve, point, v, run.spaces[v]) for v in run.places}
    labelled = {place_label(v): cls for v, cls in classes.items()}
    if not run.contains(classes):
        raise PointOutsideSurvivorsError(f"point {point} of {run.curve} has classes {labelled} outside the survivors")
    logger.debug(f"point {point} lies in the survivors of {run.curve}")
    return labelled


class LocalSolubilityStage(BaseStage):
    def __init__(self):
        super().__init__("local_solubility")

    def execute(self, curve: Curve) -> Optional[int]:
        return first_insoluble_place(curve)


class PointSearchStage(BaseStage):
    def __init__(self):
        super().__init__("point_search")

    def execute(self, curve: Curve, height: int) -> Optional[Point]:
        return first_point(curve, height)


class ObstructionStage(BaseStage):
    """The obstruction algorithm over S_min and user primes, or the deep pass over the enlarged S."""

    def __init__(self, deep: bool = False):
        super().__init__("deep_pass" if deep else "obstruction")
        self.deep = deep

    def execute(
        self,
        curve: Curve,
        ells: Optional[List[EtaleElement]],
        config: EngineConfig,
        search: SearchBounds,
        point: Optional[Point] = None,
    ) -> EngineRun:
        if self.deep:
            run = run_deep_pass(curve, config, ells, search)
        else:
            run = run_engine(curve, ells, config, search)
        if point is not None:
            run.diagnostics["point_classes"] = check_point_in_survivors(run, point)
        return run
