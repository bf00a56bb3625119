"""Named example systems and random instance generators.

The named systems are the small worked cases used throughout the test suite
and the demos; the generators draw reproducible random instances from a
:class:`random.Random`.
"""

from __future__ import annotations

import itertools
import random

from .errors import SpecError
from .subshift import SpongeSpec


def mcmullen_carpet() -> SpongeSpec:
    """Three digits in a 2 x 3 grid with fibres of sizes 1 and 2."""
    return SpongeSpec.full((2, 3), [(0, 0), (1, 0), (1, 2)])


def full_cube(m=(2, 3, 5)) -> SpongeSpec:
    """Every digit tuple allowed; the sponge is the whole cube."""
    return SpongeSpec.full(m, itertools.product(*[range(x) for x in m]))


def uniform_carpet() -> SpongeSpec:
    """Both columns carry two digits, so all fibres have size 2."""
    return SpongeSpec.full((2, 4), [(0, 0), (0, 1), (1, 2), (1, 3)])


def golden_mean() -> SpongeSpec:
    """One-dimensional golden-mean shift: no two consecutive 1s."""
    return SpongeSpec.sft((2,), [(0,), (1,)], forbidden=[((1,), (1,))])


def golden_mean_pair() -> SpongeSpec:
    """Golden-mean shift on the diagonal digits of the 2 x 2 grid."""
    return SpongeSpec.sft((2, 2), [(0, 0), (1, 1)], forbidden=[((1, 1), (1, 1))])


def sft_carpet() -> SpongeSpec:
    """A 2 x 3 carpet with two forbidden transitions; its first projection is still full."""
    return SpongeSpec.sft(
        (2, 3),
        [(0, 0), (0, 2), (1, 1), (1, 2)],
        forbidden=[((1, 1), (1, 1)), ((1, 2), (0, 0))],
    )


NAMED = {
    "mcmullen_carpet": mcmullen_carpet,
    "full_cube": full_cube,
    "uniform_carpet": uniform_carpet,
    "golden_mean": golden_mean,
    "golden_mean_pair": golden_mean_pair,
    "sft_carpet": sft_carpet,
}


def random_moduli(rng: random.Random, r_max: int = 4, m_max: int = 7) -> tuple:
    r = rng.randint(1, r_max)
    return tuple(sorted(rng.randint(2, m_max) for _ in range(r)))


def random_full_spec(rng: random.Random, r_max: int = 4, n_max: int = 12,
                     m_max: int = 6) -> SpongeSpec:
    """Random moduli and a random digit set of size between 2 and ``n_max``."""
    m = random_moduli(rng, r_max, m_max)
    grid = list(itertools.product(*[range(x) for x in m]))
    k = rng.randint(2, min(n_max, len(grid)))
    return SpongeSpec.full(m, rng.sample(grid, k))


def random_sft_spec(rng: random.Random, r_max: int = 3, n_max: int = 6,
                    m_max: int = 5, density: float = 0.6) -> SpongeSpec:
    """Random one-step SFT; dead symbols are pruned and degenerate draws retried."""
    while True:
        m = random_moduli(rng, r_max, m_max)
        grid = list(itertools.product(*[range(x) for x in m]))
        k = rng.randint(2, min(n_max, len(grid)))
        digits = rng.sample(grid, k)
        succ = [[j for j in range(k) if rng.random() < density] for _ in range(k)]
        try:
            return SpongeSpec.sft_pruned(m, digits, succ)
        except SpecError:
            continue
