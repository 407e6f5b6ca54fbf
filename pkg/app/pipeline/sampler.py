"""Random curves y² = f(x) with deg f = 2g + 2 and |coefficients| ≤ n."""
from typing import Iterator, Tuple

import numpy as np

from app.arith.poly import IntPoly
from app.arith.zfactor import is_irreducible_over_Z
from app.etale.curve import Curve
from app.models.config import SampleConfig
from app.utils.errors import InvalidCurveError
from app.utils.logging_utils import setup_logger

logger = setup_logger("pipeline.sampler")


def draw_coefficients(rng: np.random.Generator, genus: int, bound: int) -> Tuple[int, ...]:
    """One uniform draw from [-bound, bound]^(2g+3), leading coefficient first."""
    return tuple(int(c) for c in rng.integers(-bound, bound + 1, size=2 * genus + 3))


def sample_curves(config: SampleConfig) -> Iterator[Tuple[int, Curve]]:
    """
    Yield (index, curve) for `config.sample_size` retained curves.

    Draws with a zero leading coefficient, a reducible f or a zero
    discriminant are rejected. The stream depends only on the seed, so a
    resumed batch sees the same curve at the same index.
    """
    rng = np.random.default_rng(config.seed)
    kept = drawn = 0
    while kept < config.sample_size:
        coeffs = draw_coefficients(rng, config.genus, config.bound)
        drawn += 1
        if coeffs[0] == 0:
            continue
        f = IntPoly.from_leading_first(coeffs)
        if not is_irreducible_over_Z(f):
            continue
        try:
            curve = Curve.from_poly(f)
        except InvalidCurveError:
            continue
        yield kept, curve
        kept += 1
    logger.info(f"sampled {kept} curves of genus {config.genus} from {drawn} draws (seed {config.seed})")
