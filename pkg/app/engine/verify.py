"""Replay the F₂ arithmetic recorded in an obstruction report."""
from itertools import product
from typing import Dict, FrozenSet, List, Set, Tuple

from app.arith.gf2 import dot, from_bits
from app.engine.phi import PhiFunctional
from app.engine.tree import naive_intersect, subproduct_intersect
from app.etale.places import parse_place
from app.models.report import ObstructionReport, VerificationResult
from app.utils.logging_utils import setup_logger

logger = setup_logger("engine.verify")

# Products up to this size are replayed tuple by tuple
NAIVE_LIMIT = 10 ** 5

Leaf = Tuple[Tuple[int, FrozenSet[int]], ...]


def _images(report: ObstructionReport) -> Dict[int, List[int]]:
    return {parse_place(pd.place): [from_bits(bits) for bits in pd.images] for pd in report.places}


def _functionals(report: ObstructionReport, images: Dict[int, List[int]], problems: List[str]) -> List[PhiFunctional]:
    dims = {parse_place(pd.place): pd.dim for pd in report.places}
    phis = []
    for k, data in enumerate(report.phi):
        support = frozenset(parse_place(v) for v in data.support)
        phi = PhiFunctional(None, support=support)
        for label, bits in data.rows.items():
            v = parse_place(label)
            if len(bits) != dims.get(v, -1):
                problems.append(f"phi {k}: row at {label} has length {len(bits)}, expected {dims.get(v)}")
                continue
            row = from_bits(bits)
            if row and v not in support:
                problems.append(f"phi {k}: nonzero row at {label} outside its support")
            phi.rows[v] = row
        for label, recorded in data.values.items():
            v = parse_place(label)
            replayed = [dot(phi.rows.get(v, 0), c) for c in images.get(v, [])]
            if replayed != recorded:
                problems.append(f"phi {k}: values at {label} do not match the row")
        phis.append(phi)
    return phis


def _recorded_leaves(report: ObstructionReport, images: Dict[int, List[int]]) -> Set[Leaf]:
    out: Set[Leaf] = set()
    for leaf in report.survivors:
        sets = {parse_place(label): frozenset(images[parse_place(label)][i] for i in idx) for label, idx in leaf.items()}
        if sorted(sets) != sorted(images):
            raise ValueError("surviving subproduct does not cover every place of S")
        out.add(tuple(sorted(sets.items())))
    return out


def _tuples(leaves: Set[Leaf]) -> Set[Tuple[int, ...]]:
    out: Set[Tuple[int, ...]] = set()
    for leaf in leaves:
        out.update(product(*(sorted(xs) for _, xs in leaf)))
    return out


def verify_report(report: ObstructionReport) -> VerificationResult:
    """
    Check a report using F₂ arithmetic only: rows against recorded values,
    the intersection against the recorded survivors, and the verdict.
    """
    problems: List[str] = []
    if report.verdict == "error":
        return VerificationResult(valid=False, verdict="error", survivors=0, problems=["report records an aborted run"])

    images = _images(report)
    if report.verdict == "not_locally_soluble":
        if not any(not pd.soluble and not pd.images for pd in report.places):
            problems.append("verdict is not_locally_soluble but every place has image classes")
        return VerificationResult(valid=not problems, verdict=report.verdict, survivors=0, problems=problems)

    phis = _functionals(report, images, problems)
    image_sets = {v: frozenset(cls) for v, cls in images.items()}
    try:
        recorded = _recorded_leaves(report, images)
    except (IndexError, KeyError, ValueError) as e:
        problems.append(f"survivors are malformed: {e}")
        recorded = set()

    size = 1
    for cls in images.values():
        size *= len(cls)
    if size <= NAIVE_LIMIT:
        replayed = naive_intersect(image_sets, phis)
        count = len(replayed)
        if _tuples(recorded) != replayed:
            problems.append(f"replayed {count} surviving tuples, the report lists a different set")
    else:
        leaves = subproduct_intersect(image_sets, phis)
        count = sum(leaf.size() for leaf in leaves)
        if {leaf.sets for leaf in leaves} != recorded:
            problems.append("replayed subproducts differ from the recorded survivors")

    verdict = "obstructed" if count == 0 else "not_obstructed_by_B"
    if verdict != report.verdict:
        problems.append(f"verdict {report.verdict} does not match the replay ({verdict})")
    if problems:
        logger.warning(f"report for {report.curve} failed verification: {problems}")
    return VerificationResult(valid=not problems, verdict=verdict, survivors=count, problems=problems)
