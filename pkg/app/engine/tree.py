"""
Intersection of ∏ I_v with the kernels of the functionals φ_ℓ.

A subproduct is a product of per-place subsets. Processing one ℓ splits each
X_v by the value of φ_ℓ and keeps the products over parity vectors with even
sum; places outside S′(ℓ) always take the zero side. The search is
depth-first with empty nodes pruned.
"""
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from app.engine.phi import PhiFunctional
from app.utils.config import get_settings
from app.utils.errors import NodeBudgetExceededError
from app.utils.logging_utils import setup_logger

logger = setup_logger("engine.tree")


@dataclass(frozen=True)
class Subproduct:
    """X = ∏_v X_v at a given depth of the tree."""
    sets: Tuple[Tuple[int, FrozenSet[int]], ...]
    depth: int

    @classmethod
    def root(cls, images: Mapping[int, FrozenSet[int]]) -> "Subproduct":
        return cls(tuple(sorted((v, frozenset(s)) for v, s in images.items())), 0)

    def as_dict(self) -> Dict[int, FrozenSet[int]]:
        return dict(self.sets)

    def is_empty(self) -> bool:
        return any(not s for _, s in self.sets)

    def size(self) -> int:
        n = 1
        for _, s in self.sets:
            n *= len(s)
        return n

    def tuples(self) -> Iterator[Tuple[int, ...]]:
        """Every point of the product, in place order."""
        return product(*(sorted(s) for _, s in self.sets))


def order_functionals(phis: Sequence[PhiFunctional]) -> List[PhiFunctional]:
    """Ascending |S′(ℓ)|, stable otherwise."""
    return sorted(phis, key=lambda phi: len(phi.support))


class _Search:
    def __init__(self, phis: Sequence[PhiFunctional], budget: int):
        self.phis = list(phis)
        self.budget = budget
        self.nodes = 0
        self.leaves: List[Subproduct] = []

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise NodeBudgetExceededError(f"subproduct search exceeded {self.budget} nodes")

    def run(self, node: Subproduct) -> None:
        self._tick()
        if node.is_empty():
            return
        if node.depth == len(self.phis):
            self.leaves.append(node)
            return
        phi = self.phis[node.depth]
        fixed: Dict[int, FrozenSet[int]] = {}
        options: List[List[Tuple[int, int, FrozenSet[int]]]] = []
        for v, xs in node.sets:
            zero = frozenset(x for x in xs if not phi.value(v, x))
            if v not in phi.support:
                if not zero:
                    return
                fixed[v] = zero
                continue
            one = xs - zero
            options.append([(v, 0, zero)] * bool(zero) + [(v, 1, one)] * bool(one))
        for choice in product(*options):
            if sum(a for _, a, _ in choice) % 2:
                continue
            sets = dict(fixed)
            sets.update((v, s) for v, _, s in choice)
            self.run(Subproduct(tuple(sorted(sets.items())), node.depth + 1))


def subproduct_intersect(
    images: Mapping[int, FrozenSet[int]],
    phis: Sequence[PhiFunctional],
    node_budget: Optional[int] = None,
) -> List[Subproduct]:
    """
    Nonempty leaf subproducts of the tree; their union is ∏ I_v ∩ ⋂ ker φ_ℓ.

    Args:
        images: Place -> image classes
        phis: Functionals on the same spaces
        node_budget: Nodes visited before giving up; defaults to settings

    Raises:
        NodeBudgetExceededError: the budget was exhausted
    """
    budget = node_budget or get_settings().node_budget
    search = _Search(order_functionals(phis), budget)
    search.run(Subproduct.root(images))
    logger.debug(f"subproduct search: {search.nodes} nodes, {len(search.leaves)} leaves")
    return search.leaves


def naive_intersect(images: Mapping[int, FrozenSet[int]], phis: Sequence[PhiFunctional]) -> Set[Tuple[int, ...]]:
    """All tuples of ∏ I_v on which every functional sums to zero."""
    places = sorted(images)
    out = set()
    for point in product(*(sorted(images[v]) for v in places)):
        if all(sum(phi.value(v, x) for v, x in zip(places, point)) % 2 == 0 for phi in phis):
            out.add(point)
    return out


def survivor_tuples(leaves: Sequence[Subproduct]) -> Set[Tuple[int, ...]]:
    out: Set[Tuple[int, ...]] = set()
    for leaf in leaves:
        out.update(leaf.tuples())
    return out
