"""
The obstruction algorithm end to end.

1. Assemble S from S_min, the ramification of the ℓ's and user primes.
2. Build the functional of each ℓ on the local square class spaces.
3. Compute the local images I_v for v ∈ S.
4. Intersect ∏ I_v with the kernels through the subproduct tree.

An empty intersection certifies that C has no rational points.
"""
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Union

from app.arith.gf2 import F2Span, to_bits
from app.arith.integers import primes_up_to
from app.engine.phi import PhiFunctional, build_phi
from app.engine.primes import PrimeSelection, assemble_S, compute_smin
from app.engine.tree import Subproduct, subproduct_intersect
from app.etale.curve import Curve
from app.etale.element import EtaleElement
from app.etale.ells import EllCandidate, generate_square_norm_elements, verify_ell_input
from app.etale.places import local_algebra, place_label
from app.models.config import EngineConfig, SearchBounds
from app.models.report import ObstructionReport, PhiData, PlaceData, PlaceEntry
from app.mu.image import LocalImage, local_image
from app.mu.solubility import bad_primes
from app.padic.algebra import LocalAlgebra
from app.padic.squares import SquareClassSpace, build_square_class_space
from app.utils.errors import CertificateError
from app.utils.logging_utils import setup_logger

logger = setup_logger("engine.algorithm")


@dataclass
class EngineRun:
    """Everything one run computed; the report is its serialized form."""
    curve: Curve
    selection: PrimeSelection
    ells: List[EllCandidate]
    spaces: Dict[int, SquareClassSpace] = field(default_factory=dict)
    images: Dict[int, LocalImage] = field(default_factory=dict)
    phis: List[PhiFunctional] = field(default_factory=list)
    leaves: List[Subproduct] = field(default_factory=list)
    verdict: str = "error"
    diagnostics: Dict = field(default_factory=dict)

    @property
    def places(self) -> List[int]:
        return self.selection.places

    @property
    def obstructed(self) -> bool:
        return self.verdict == "obstructed"

    def contains(self, classes: Dict[int, int]) -> bool:
        """Whether the per-place class tuple lies in some surviving subproduct."""
        return any(all(classes[v] in xs for v, xs in leaf.sets) for leaf in self.leaves)

    def report(self) -> ObstructionReport:
        return build_report(self)


@contextmanager
def _step(name: str, timings: Dict[str, float]) -> Iterator[None]:
    start = time.perf_counter()
    try:
        yield
    except Exception as e:
        logger.error(f"step '{name}' failed: {e}", exc_info=True)
        e.step = name
        raise
    finally:
        timings[name] = round(time.perf_counter() - start, 4)


def _as_candidate(curve: Curve, ell: Union[EllCandidate, EtaleElement]) -> EllCandidate:
    if isinstance(ell, EllCandidate):
        return ell
    return verify_ell_input(curve, ell)


def _check_unramified(selection: PrimeSelection, images: Dict[int, LocalImage]) -> None:
    """Image classes at odd places outside S_min are unramified."""
    for v, image in images.items():
        if v in selection.s_min:
            continue
        for full in image.representatives.values():
            if not image.space.is_unramified_class(full):
                raise CertificateError(f"ramified image class at {place_label(v)} outside S_min")


def _independent(phis: Sequence[PhiFunctional], images: Dict[int, LocalImage], places: Sequence[int]) -> List[PhiFunctional]:
    """Drop functionals whose values on the images are sums of earlier ones."""
    span = F2Span()
    out = []
    for phi in phis:
        vec = 0
        shift = 0
        for v in places:
            for cls in sorted(images[v].classes):
                vec |= phi.value(v, cls) << shift
                shift += 1
        if span.add(vec):
            out.append(phi)
    return out


def run_engine(
    curve: Curve,
    ells: Optional[Sequence[Union[EllCandidate, EtaleElement]]] = None,
    config: Optional[EngineConfig] = None,
    search: Optional[SearchBounds] = None,
) -> EngineRun:
    """
    Run the four steps and keep the intermediate data.

    Args:
        curve: The curve
        ells: Square-norm elements; searched for when None
        config: Engine knobs (extra primes, node budget)
        search: Bounds for the ℓ search

    Raises:
        NonSquareNormError: a supplied ℓ does not have square norm
        ResourceAbort: factorization, precision, recursion or node budget ran out
        CertificateError: a checked invariant failed
    """
    config = config or EngineConfig()
    timings: Dict[str, float] = {}

    with _step("S", timings):
        if ells is None:
            base = set(compute_smin(curve).places) | set(config.extra_primes)
            candidates = generate_square_norm_elements(curve, base, search)
        else:
            candidates = [_as_candidate(curve, e) for e in ells]
        selection = assemble_S(curve, candidates, config.extra_primes)
    run = EngineRun(curve, selection, candidates, diagnostics={"timings": timings})

    with _step("images", timings):
        for v in selection.places:
            run.spaces[v] = build_square_class_space(local_algebra(curve, v), "scalar")
            run.images[v] = local_image(curve, v, run.spaces[v])
    failing = [v for v in selection.places if not run.images[v].soluble]
    run.diagnostics["precision"] = {
        place_label(v): s.algebra.precision for v, s in run.spaces.items() if isinstance(s.algebra, LocalAlgebra)
    }
    run.diagnostics["discs"] = {place_label(v): img.discs for v, img in run.images.items()}
    if failing:
        run.verdict = "not_locally_soluble"
        run.diagnostics["failing_places"] = [place_label(v) for v in failing]
        logger.info(f"{curve} has no points at {run.diagnostics['failing_places']}")
        return run
    if config.check_unramified:
        _check_unramified(selection, run.images)

    with _step("phi", timings):
        phis = [build_phi(ell, selection, run.spaces, run.images) for ell in candidates]
        run.phis = _independent(phis, run.images, selection.places)
    run.diagnostics["ells_dropped"] = len(phis) - len(run.phis)

    with _step("intersect", timings):
        images = {v: run.images[v].classes for v in selection.places}
        run.leaves = subproduct_intersect(images, run.phis, config.node_budget)
    run.verdict = "not_obstructed_by_B" if run.leaves else "obstructed"
    logger.info(
        f"{curve}: {len(run.phis)} functionals over S = {[place_label(v) for v in selection.places]}, "
        f"{len(run.leaves)} surviving subproducts -> {run.verdict}"
    )
    return run


def run_algorithm1(
    curve: Curve,
    ells: Optional[Sequence[Union[EllCandidate, EtaleElement]]] = None,
    config: Optional[EngineConfig] = None,
    search: Optional[SearchBounds] = None,
) -> ObstructionReport:
    """The obstruction report for the curve and the given (or searched) ℓ's."""
    return run_engine(curve, ells, config, search).report()


def deep_extra_primes(curve: Curve, config: EngineConfig) -> List[int]:
    """All primes up to the small bound and the bad primes up to the bad bound."""
    small = set(primes_up_to(config.deep_small_bound))
    bad = {p for p in bad_primes(curve) if p <= config.deep_bad_bound}
    return sorted(small | bad | set(config.extra_primes))


def run_deep_pass(
    curve: Curve,
    config: EngineConfig,
    ells: Optional[Sequence[Union[EllCandidate, EtaleElement]]] = None,
    search: Optional[SearchBounds] = None,
) -> EngineRun:
    """Re-run with S enlarged. Without user ℓ's the search runs again over the larger S."""
    deep = config.model_copy(update={"extra_primes": deep_extra_primes(curve, config), "deep": False})
    logger.info(f"deep pass on {curve} with {len(deep.extra_primes)} extra primes")
    run = run_engine(curve, ells, deep, search)
    run.diagnostics["deep_pass"] = True
    return run


def build_report(run: EngineRun) -> ObstructionReport:
    places = run.selection.places
    sorted_images = {v: sorted(run.images[v].classes) for v in run.images}
    place_data = []
    for v in places:
        space = run.spaces.get(v)
        if space is None:
            continue
        algebra = space.algebra
        place_data.append(PlaceData(
            place=place_label(v),
            dim=space.dim,
            full_dim=space.full_dim,
            labels=space.labels,
            free_positions=list(space.free_positions),
            images=[to_bits(c, space.dim) for c in sorted_images.get(v, [])],
            soluble=run.images[v].soluble if v in run.images else True,
            precision=algebra.precision if isinstance(algebra, LocalAlgebra) else None,
        ))
    phi_data = []
    for phi in run.phis:
        rows = {place_label(v): to_bits(phi.rows.get(v, 0), run.spaces[v].dim) for v in places}
        values = {place_label(v): [phi.value(v, c) for c in sorted_images[v]] for v in places}
        phi_data.append(PhiData(
            ell=phi.ell.coefficient_strings(),
            norm=str(phi.ell.norm),
            support=[place_label(v) for v in places if v in phi.support],
            rows=rows,
            values=values,
            source=phi.ell.source,
        ))
    survivors = []
    for leaf in run.leaves:
        survivors.append({
            place_label(v): sorted(sorted_images[v].index(c) for c in xs) for v, xs in leaf.sets
        })
    return ObstructionReport(
        curve=run.curve.leading_first(),
        genus=run.curve.genus,
        S=[PlaceEntry(place=place_label(v), provenance=run.selection.provenance[v]) for v in places],
        ells=[ell.coefficient_strings() for ell in run.ells],
        places=place_data,
        phi=phi_data,
        survivors=survivors,
        verdict=run.verdict,
        diagnostics=run.diagnostics,
    )


def error_report(curve: Curve, error: Exception) -> ObstructionReport:
    """Report for a run that aborted; never claims an obstruction."""
    return ObstructionReport(
        curve=curve.leading_first(),
        genus=curve.genus,
        verdict="error",
        diagnostics={
            "error": str(error),
            "error_type": type(error).__name__,
            "step": getattr(error, "step", None),
        },
    )
