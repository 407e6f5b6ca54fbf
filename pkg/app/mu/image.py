"""
The local images I_v = μ_v(C(ℚ_v)) in L_v^×/ℚ_v^×L_v^×².

Finite places walk residue discs of ℙ¹(ℚ_p) on two charts: |x| ≤ 1 with
values a - θ, and |x| > 1 through b = 1/x with values 1 - bθ. A disc is
settled once every component value has a constant square class on it, or
when exactly one ℚ_p-component still moves because a rational root of f sits
inside the disc. The real place is read off from sign patterns between
consecutive real roots.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from app.etale.curve import Curve
from app.etale.places import INFINITY, local_algebra, place_label
from app.padic.algebra import LocalAlgebra, RealAlgebra
from app.padic.field import PadicElement
from app.padic.linalg import charpoly_mod
from app.padic.squares import SquareClassSpace, build_square_class_space, is_square_qp
from app.utils.errors import CertificateError, PrecisionExhaustedError, RecursionDepthExceededError
from app.utils.logging_utils import setup_logger

logger = setup_logger("mu.image")

# (x, y) with x = None for a point at infinity
Point = Tuple[Optional[Fraction], Fraction]

# int64 Horner steps stay exact below this modulus
_FAST_PATH_LIMIT = 2 ** 31


@dataclass
class LocalImage:
    """
    I_v for one place.

    Attributes:
        place: The place (0 = ∞)
        space: Scalar-quotient square class space the classes live in
        classes: Quotient coordinates of the image classes
        representatives: Full-space lift of each class, as found on C(ℚ_v)
        soluble: Whether C(ℚ_v) is nonempty
        discs: Residue discs visited (0 at ∞)
    """
    place: int
    space: SquareClassSpace
    classes: FrozenSet[int]
    representatives: Dict[int, int] = field(default_factory=dict)
    soluble: bool = False
    discs: int = 0

    def __contains__(self, cls: int) -> bool:
        return cls in self.classes

    def labels(self) -> List[str]:
        return self.space.labels


def _space_for(curve: Curve, v: int, space: Optional[SquareClassSpace]) -> SquareClassSpace:
    if space is not None:
        return space
    return build_square_class_space(local_algebra(curve, v), "scalar")


# -- μ of a single point -----------------------------------------------------


def mu_of_point_full(curve: Curve, point: Point, space: SquareClassSpace) -> int:
    """Full-space class of μ_v(P); the zero vector at the points at infinity."""
    x, y = point
    if x is not None and not curve.is_point(x, y):
        raise ValueError(f"({x}, {y}) is not on {curve}")
    if x is None:
        return 0
    x = Fraction(x)
    algebra = space.algebra
    weierstrass = curve.f(x) == 0
    deriv = curve.f.derivative()(x) if weierstrass else None

    if isinstance(algebra, RealAlgebra):
        signs = algebra.linear_signs(x)
        if weierstrass:
            signs = [s if s else (1 if deriv > 0 else -1) for s in signs]
        return space.full_dlog(signs)

    images = algebra.embed_linear(x)
    if weierstrass:
        vanishing = [i for i, a in enumerate(images) if a.is_zero]
        if len(vanishing) != 1 or algebra.components[vanishing[0]].degree != 1:
            raise PrecisionExhaustedError(f"cannot single out the component of the root {x} over Q_{algebra.p}")
        i0 = vanishing[0]
        images[i0] = algebra.components[i0].field.from_rational(deriv)
    return space.full_dlog(images)


def mu_of_point(curve: Curve, point: Point, v: int, space: Optional[SquareClassSpace] = None) -> int:
    """
    Quotient class of μ_v(P) for a point P ∈ C(ℚ_v) with rational coordinates.

    Weierstrass points take f′(a) on the component where a - θ vanishes.
    """
    space = _space_for(curve, v, space)
    return space.project(mu_of_point_full(curve, point, space))


# -- real place --------------------------------------------------------------


def _real_image(curve: Curve, space: SquareClassSpace) -> LocalImage:
    algebra: RealAlgebra = space.algebra
    roots = algebra.roots
    found: Dict[int, int] = {}
    if not roots:
        if curve.c > 0:
            found[0] = 0
        return LocalImage(INFINITY, space, frozenset(found), found, bool(found))

    samples = [roots[0].lo - 1] + [iv.hi for iv in roots[:-1]] + [roots[-1].hi + 1]
    for x in samples:
        if curve.f(x) <= 0:
            continue
        full = space.full_dlog(algebra.signs_of_linear(x))
        found.setdefault(space.project(full), full)
    logger.debug(f"real image of {curve}: {len(found)} classes from {len(samples)} regions")
    return LocalImage(INFINITY, space, frozenset(found), found, True)


# -- finite places -----------------------------------------------------------


@dataclass(frozen=True)
class _Disc:
    infinite: bool
    center: int
    level: int


class _DiscWalker:
    """Residue disc recursion for one prime over a fixed square class space."""

    def __init__(self, curve: Curve, space: SquareClassSpace, stop_at_first: bool):
        self.curve = curve
        self.space = space
        self.algebra: LocalAlgebra = space.algebra
        self.p = self.algebra.p
        self.stop_at_first = stop_at_first
        comps = self.algebra.components
        self.thetas = [c.theta for c in comps]
        self.margins = [2 * c.e + 1 if self.p == 2 else 1 for c in comps]
        self.theta_vals = [None if t.is_zero else t.val for t in self.thetas]
        self.depth_cap = 4 * (1 + curve.disc_valuation(self.p)) + 2 * max(c.e for c in comps) + 4
        self.f_rev = curve.f_reversed
        self.found: Dict[int, int] = {}
        self.soluble = False
        self.visited = 0

    # chart helpers

    def _value(self, disc: _Disc, center: Optional[int] = None) -> int:
        center = disc.center if center is None else center
        return self.f_rev(center) if disc.infinite else self.curve.f(center)

    def _images(self, disc: _Disc, center: Optional[int] = None) -> List[PadicElement]:
        center = disc.center if center is None else center
        if disc.infinite:
            return self.algebra.embed_linear(1, center)
        return self.algebra.embed_linear(center)

    def _beta_val(self, disc: _Disc, i: int) -> Optional[int]:
        """Valuation of d(value)/d(center) for component i; None for zero."""
        return self.theta_vals[i] if disc.infinite else 0

    def _weierstrass_value(self, disc: _Disc) -> int:
        if disc.infinite:
            b = disc.center
            return -b * self.f_rev.derivative()(b)
        return self.curve.f.derivative()(disc.center)

    # recording

    def _record(self, images: Sequence[PadicElement]) -> None:
        self._check_norm(images)
        full = self.space.full_dlog(images)
        self.found.setdefault(self.space.project(full), full)
        self.soluble = True

    def _check_norm(self, images: Sequence[PadicElement]) -> None:
        """c times the norm of the class must be a square in ℚ_p."""
        need = 3 if self.p == 2 else 1
        if any(x.rel < need * x.field.e for x in images):
            return
        norm = Fraction(self.curve.c)
        for x in images:
            norm *= x.field.norm(x)
        if not is_square_qp(norm, self.p):
            raise CertificateError(f"image class at {self.p} has norm {norm} outside c times squares")

    # recursion

    def _settle(self, disc: _Disc) -> bool:
        """Record what the disc contributes; False when it has to be subdivided."""
        images = self._images(disc)
        unstable = []
        for i, alpha in enumerate(images):
            vb = self._beta_val(disc, i)
            if vb is None:
                # 1 - b·0 is constant
                continue
            if alpha.is_zero or alpha.field.e * disc.level + vb - alpha.val < self.margins[i]:
                unstable.append(i)
        value = self._value(disc)

        if not unstable:
            if is_square_qp(value, self.p):
                self._record(images)
            return True

        if len(unstable) > 1:
            return False
        i0 = unstable[0]
        comp = self.algebra.components[i0]
        if comp.degree != 1:
            return False
        alpha = images[i0]
        vb = self._beta_val(disc, i0)
        if not alpha.is_zero and alpha.val - vb < disc.level:
            return False

        # a rational root of the model lies in this disc: it is a point, and
        # the moving component takes the class of the cofactor
        fld = comp.field
        if value == 0:
            images[i0] = fld.from_rational(self._weierstrass_value(disc))
            self._record(images)
            return True
        if alpha.is_zero:
            shifted = disc.center + self.p ** disc.level
            images = self._images(disc, shifted)
            value = self._value(disc, shifted)
            alpha = images[i0]
            if alpha.is_zero:
                raise PrecisionExhaustedError(f"root of f at {self.p} not separated at working precision")
        images[i0] = fld.from_rational(value) / alpha
        self._record(images)
        return True

    def _children(self, disc: _Disc) -> List[_Disc]:
        step = self.p ** disc.level
        return [_Disc(disc.infinite, disc.center + j * step, disc.level + 1) for j in range(self.p)]

    def _fast_level_one(self) -> Optional[List[_Disc]]:
        """
        Settle the level-one discs of the integral chart where f has no root
        modulo p, working over F_p. Only for odd p not dividing c with θ
        integral in every component. Returns the discs still to be walked.
        """
        p = self.p
        if p == 2 or self.curve.c % p == 0 or p >= _FAST_PATH_LIMIT:
            return None
        if any(v is not None and v < 0 for v in self.theta_vals):
            return None
        residue_polys = [self._residue_charpoly(i) for i in range(len(self.thetas))]

        xs = np.arange(p, dtype=np.int64)
        fvals = _eval_mod(self.curve.f.coeffs, xs, p)
        good = fvals != 0
        hits = good & (_euler(fvals, p) == 1)
        self.visited += int(good.sum())
        if hits.any():
            self.soluble = True
            # one column per component: the residue of a - θ_i is a nonsquare
            chars = np.stack([_euler(_eval_mod(psi, xs[hits], p), p) != 1 for psi in residue_polys], axis=1)
            for row in np.unique(chars, axis=0):
                full = 0
                for i, bit in enumerate(row):
                    if bit:
                        full |= 1 << (self.space.offsets[i] + 1)
                self.found.setdefault(self.space.project(full), full)
        return [_Disc(False, int(a), 1) for a in xs[~good]]

    def _residue_charpoly(self, i: int) -> List[int]:
        """Characteristic polynomial over F_p of the residue of θ_i, constant first."""
        theta = self.thetas[i]
        fld = theta.field
        f_res = fld.f
        rf = fld.residue_field
        if theta.is_zero or theta.val > 0:
            return [0] * f_res + [1]
        r = fld.residue(theta)
        rows = []
        for j in range(f_res):
            zj = rf.normalize([0] * j + [1])
            rows.append(list(rf.mul(zj, r)))
        return charpoly_mod(rows, self.p)

    def walk(self) -> None:
        stack: List[_Disc] = [_Disc(True, 0, 1)]
        fast = self._fast_level_one()
        if fast is None:
            stack.append(_Disc(False, 0, 0))
        else:
            stack.extend(fast)
        while stack:
            if self.stop_at_first and self.soluble:
                return
            disc = stack.pop()
            self.visited += 1
            if self._settle(disc):
                continue
            if disc.level >= self.depth_cap:
                raise RecursionDepthExceededError(
                    f"disc {disc} at {self.p} still unsettled at depth cap {self.depth_cap}"
                )
            stack.extend(self._children(disc))


def _eval_mod(coeffs: Sequence[int], xs: np.ndarray, p: int) -> np.ndarray:
    acc = np.zeros_like(xs)
    for c in reversed(list(coeffs)):
        acc = (acc * xs + (int(c) % p)) % p
    return acc


def _euler(values: np.ndarray, p: int) -> np.ndarray:
    """values^((p-1)/2) mod p elementwise: 1 on nonzero squares."""
    result = np.ones_like(values)
    base = values % p
    e = (p - 1) // 2
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def local_image(
    curve: Curve,
    v: int,
    space: Optional[SquareClassSpace] = None,
    stop_at_first: bool = False,
) -> LocalImage:
    """
    Compute I_v and whether C(ℚ_v) is nonempty.

    Args:
        curve: The curve
        v: A prime, or 0 for the real place
        space: Square class space to express classes in; built from the
            cached local algebra when omitted
        stop_at_first: Stop at the first soluble disc (solubility only)

    Returns:
        LocalImage with exact classes (partial when stop_at_first is set)

    Raises:
        PrecisionExhaustedError: working precision cannot separate a disc
        RecursionDepthExceededError: a disc is still unsettled at the depth cap
    """
    space = _space_for(curve, v, space)
    if v == INFINITY:
        return _real_image(curve, space)
    walker = _DiscWalker(curve, space, stop_at_first)
    walker.walk()
    logger.debug(
        f"I_{place_label(v)} of {curve}: {len(walker.found)} classes, "
        f"{walker.visited} discs, soluble={walker.soluble}"
    )
    return LocalImage(v, space, frozenset(walker.found), dict(walker.found), walker.soluble, walker.visited)

