"""Approximate cubes, covers and separated sets in the slice X_Omega|_N.

A point of X_Omega|_N is a sequence of words of Omega|_N (one per base-m
digit position ``k``); block ``l`` at time ``n`` has coordinate
``sum_k x_{k,l}[n] / m_l**k``.  Points are stored with ``K`` explicit digit
rows followed by one legal word repeated forever, so every coordinate is an
exact rational.

All distance assertions in this module use integer or ``Fraction``
arithmetic only.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ResourceLimitError, VerificationError
from .subshift import DEFAULT_CAP, SpongeSpec, count_words, word_table

DEFAULT_CUBE_CAP = 200_000
DEFAULT_PAIR_CAP = 5_000


@dataclass(frozen=True)
class LevelDepths:
    M: int
    L: tuple

    def row_depths(self) -> tuple:
        """Number of constrained coordinate blocks in digit rows 1..L_1."""
        return tuple(sum(1 for x in self.L if x >= k) for k in range(1, self.L[0] + 1))


def level_depths(m, M: int) -> LevelDepths:
    """``L_i(M) = floor(M log m_1 / log m_i)``, fixed up in integer arithmetic.

    ``L_i`` is the largest integer with ``m_i**L_i <= m_1**M``.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    target = m[0] ** M
    L = []
    for mi in m:
        k = int(math.floor(M * math.log(m[0]) / math.log(mi)))
        while mi**k > target:
            k -= 1
        while mi ** (k + 1) <= target:
            k += 1
        L.append(k)
    L = tuple(L)
    assert L[0] == M
    assert all(a >= b for a, b in zip(L, L[1:])) and L[-1] >= 0
    assert all(mi**k <= target < mi ** (k + 1) for mi, k in zip(m, L))
    return LevelDepths(M, L)


def cover_count(spec: SpongeSpec, N: int, M: int) -> int:
    """``|Omega|_N|**L_r * prod_i |pi_i(Omega)|_N|**(L_i - L_{i+1})`` exactly."""
    L = level_depths(spec.m, M).L
    r = spec.r
    out = count_words(spec, r, N) ** L[r - 1]
    for i in range(1, r):
        out *= count_words(spec, i, N) ** (L[i - 1] - L[i])
    return out


def _log_cover_count(spec, N, M) -> float:
    L = level_depths(spec.m, M).L
    r = spec.r
    s = L[r - 1] * math.log(count_words(spec, r, N))
    for i in range(1, r):
        s += (L[i - 1] - L[i]) * math.log(count_words(spec, i, N))
    return s


def finite_scale_mdim_ratio(spec: SpongeSpec, N: int, M: int) -> float:
    """``log(cover count) / (N M log m_1)``."""
    return _log_cover_count(spec, N, M) / (N * M * math.log(spec.m[0]))


# -- point construction -------------------------------------------------------


@dataclass(frozen=True)
class SlicePoint:
    """Exact point of X_Omega|_N; coordinates ordered block-major, then time."""

    coordinates: tuple
    rows: tuple = ()
    tail: tuple = ()


class _Slice:
    """Helpers bound to one ``(spec, N)``."""

    def __init__(self, spec, N, cap=DEFAULT_CAP):
        self.spec = spec
        self.N = N
        self.table = word_table(spec, N, cap)
        self.children = {i: self.table.children(i) for i in range(1, spec.r)}

    def complete(self, level, k, pick):
        """Extend a level-``level`` word id to a full word id, choosing children by ``pick``."""
        while level < self.spec.r:
            kids = self.children[level][k]
            k = int(pick(kids))
            level += 1
        return k

    def full_row(self, k):
        return self.table.words[self.table.reps[self.spec.r][k]]

    def scaled(self, rows, tail):
        """Integer numerators and denominators of a point's coordinates."""
        spec, N = self.spec, self.N
        K = len(rows)
        nums, dens = [], []
        for l, ml in enumerate(spec.m):
            den = ml**K * (ml - 1)
            for n in range(N):
                acc = 0
                for k, row in enumerate(rows):
                    acc += spec.digits[row[n]][l] * ml ** (K - 1 - k)
                acc = acc * (ml - 1) + spec.digits[tail[n]][l]
                nums.append(acc)
                dens.append(den)
        return nums, dens


def _point(sl, rows, tail):
    nums, dens = sl.scaled(rows, tail)
    return SlicePoint(
        tuple(Fraction(a, b) for a, b in zip(nums, dens)),
        tuple(tuple(int(x) for x in row) for row in rows),
        tuple(int(x) for x in tail),
    )


def linf(p: SlicePoint, q: SlicePoint) -> Fraction:
    return max(abs(a - b) for a, b in zip(p.coordinates, q.coordinates))


def _cube_prefixes(sl, depths, cube_cap):
    counts = [sl.table.count(i) for i in depths]
    total = math.prod(counts)
    if total > cube_cap:
        raise ResourceLimitError(f"{total} cubes exceed the cube cap {cube_cap}")
    return itertools.product(*[range(c) for c in counts])


def _cube_id(sl, depths, prefix):
    return tuple(sl.table.word(i, k) for i, k in zip(depths, prefix))


def _int_matrix(vectors):
    big = max(max(abs(x) for x in v) for v in vectors)
    if big < 2**40:
        return np.array(vectors, dtype=np.int64)
    return np.array(vectors, dtype=object)


def _min_pair_margin(nums, dens, scale):
    """True iff every pair differs by ``>= 1/scale`` in some coordinate."""
    a = _int_matrix(nums)
    d = _int_matrix([dens])[0]
    for p in range(len(a) - 1):
        diff = np.abs(a[p + 1 :] - a[p]) * scale
        ok = (diff >= d).any(axis=1)
        if not ok.all():
            return False
    return True


def cube_cover(spec: SpongeSpec, N: int, M: int, samples: int = 3, seed: int = 0,
               cube_cap: int = DEFAULT_CUBE_CAP, K: int | None = None,
               check: bool = True) -> list:
    """The approximate cubes of level ``M`` covering X_Omega|_N.

    Each cube is identified by its digit prefix: one projected word per digit
    row ``k <= L_1(M)``, of level equal to the number of blocks constrained in
    that row.  With ``check`` set, ``samples`` member points per cube are
    drawn (lexicographically least, greatest, then random) and their pairwise
    l-infinity distances are verified to be at most ``m_r * m_1**-M``.
    """
    sl = _Slice(spec, N)
    depths = level_depths(spec.m, M).row_depths()
    K = depths and (len(depths) + 2) if K is None else K
    rng = random.Random(seed)
    picks = [lambda ks: ks[0], lambda ks: ks[-1]]
    picks += [lambda ks: ks[rng.randrange(len(ks))]] * max(0, samples - 2)
    picks = picks[:samples]
    n_full = sl.table.count(spec.r)
    choose_full = [lambda: 0, lambda: n_full - 1] + [lambda: rng.randrange(n_full)] * samples
    scale_num = spec.m[0] ** M
    bound = spec.m[-1]

    cubes = []
    for prefix in _cube_prefixes(sl, depths, cube_cap):
        cubes.append(_cube_id(sl, depths, prefix))
        if not check or samples < 2:
            continue
        nums = []
        for s, pick in enumerate(picks):
            rows = [sl.full_row(sl.complete(i, k, pick)) for i, k in zip(depths, prefix)]
            rows += [sl.full_row(choose_full[s]()) for _ in range(K - len(depths))]
            tail = sl.full_row(choose_full[s]())
            a, dens = sl.scaled(rows, tail)
            nums.append(a)
        a = _int_matrix(nums)
        d = _int_matrix([dens])[0]
        for p in range(len(a) - 1):
            diff = np.abs(a[p + 1 :] - a[p]) * scale_num
            if not (diff <= bound * d).all():
                raise VerificationError(f"cube {cubes[-1]} has diameter above m_r m_1^-M")
    expected = cover_count(spec, N, M)
    if len(cubes) != expected:
        raise VerificationError(f"{len(cubes)} cubes, product formula gives {expected}")
    return cubes


def separated_set(spec: SpongeSpec, N: int, M: int, cube_cap: int = DEFAULT_CUBE_CAP,
                  K: int | None = None) -> list:
    """One point per approximate cube, pairwise ``m_1**-M`` apart.

    Rows inside the prefix keep the cube's digits and are completed upward by
    the lexicographically least legal extension at each level; rows past
    ``L_1(M)`` and the infinite tail use the least word of Omega|_N.
    """
    sl = _Slice(spec, N)
    depths = level_depths(spec.m, M).row_depths()
    K = len(depths) + 2 if K is None else K
    least = lambda ks: ks[0]
    base = sl.full_row(0)
    pts = []
    for prefix in _cube_prefixes(sl, depths, cube_cap):
        rows = [sl.full_row(sl.complete(i, k, least)) for i, k in zip(depths, prefix)]
        rows += [base] * (K - len(depths))
        pts.append(_point(sl, rows, base))
    return pts


def check_separated(spec: SpongeSpec, points, M: int, pair_cap: int = DEFAULT_PAIR_CAP) -> bool:
    """Exact check that all pairs are at l-infinity distance ``>= m_1**-M``."""
    if len(points) > pair_cap:
        raise ResourceLimitError(f"{len(points)} points exceed the pairwise cap {pair_cap}")
    if len(points) < 2:
        return True
    dens = [math.lcm(*{p.coordinates[j].denominator for p in points})
            for j in range(len(points[0].coordinates))]
    nums = [[c.numerator * (dens[j] // c.denominator) for j, c in enumerate(p.coordinates)]
            for p in points]
    return _min_pair_margin(nums, dens, spec.m[0] ** M)


@dataclass(frozen=True)
class SandwichReport:
    N: int
    M: int
    L: tuple
    formula_count: int
    cube_count: int
    separated_count: int
    separation: Fraction
    diameter_bound: Fraction
    diameters_ok: bool
    separated_ok: bool

    @property
    def verified(self) -> bool:
        return (
            self.diameters_ok
            and self.separated_ok
            and self.cube_count == self.formula_count == self.separated_count
        )

    def summary(self) -> str:
        status = "sandwich verified" if self.verified else "sandwich FAILED"
        return f"{self.cube_count} cubes / {self.separated_count} separated points, {status}"


def verify_sandwich(spec: SpongeSpec, N: int, M: int, samples: int = 3, seed: int = 0,
                    cube_cap: int = DEFAULT_CUBE_CAP,
                    pair_cap: int = DEFAULT_PAIR_CAP) -> SandwichReport:
    """Build the cover and the separated set and check both against the product formula."""
    formula = cover_count(spec, N, M)
    try:
        cubes = cube_cover(spec, N, M, samples=samples, seed=seed, cube_cap=cube_cap)
        diam_ok = True
    except VerificationError:
        cubes = cube_cover(spec, N, M, check=False, cube_cap=cube_cap)
        diam_ok = False
    pts = separated_set(spec, N, M, cube_cap=cube_cap)
    sep_ok = check_separated(spec, pts, M, pair_cap=pair_cap)
    return SandwichReport(
        N, M, level_depths(spec.m, M).L, formula, len(cubes), len(pts),
        Fraction(1, spec.m[0] ** M), Fraction(spec.m[-1], spec.m[0] ** M), diam_ok, sep_ok,
    )


# -- Bowen metric comparison --------------------------------------------------


def _random_path(spec, length, rng, start=None):
    succ = spec.successor_lists()
    path = [rng.randrange(spec.n_digits)] if start is None else list(start)
    while len(path) < length:
        path.append(rng.choice(succ[path[-1]]))
    return path


@dataclass(frozen=True)
class _TruncatedPoint:
    """Point of X_Omega known for times 1..T; values afterwards are unknown in [0, 1]."""

    values: tuple  # values[n][l] as Fraction, n < T


def _truncated_point(spec, rows, tail):
    T = len(tail)
    K = len(rows)
    vals = []
    for n in range(T):
        col = []
        for l, ml in enumerate(spec.m):
            num = 0
            for k, row in enumerate(rows):
                num += spec.digits[row[n]][l] * ml ** (K - 1 - k)
            num = num * (ml - 1) + spec.digits[tail[n]][l]
            col.append(Fraction(num, ml**K * (ml - 1)))
        vals.append(tuple(col))
    return _TruncatedPoint(tuple(vals))


def bowen_distance_bounds(x: _TruncatedPoint, y: _TruncatedPoint, N: int) -> tuple:
    """Exact bracket for ``d_N(x, y)`` with ``d = sum_k 2**-k max_l |x_kl - y_kl|``."""
    T = len(x.values)
    if T < N:
        raise ValueError("points must be known for at least N times")
    gaps = [max(abs(a - b) for a, b in zip(u, v)) for u, v in zip(x.values, y.values)]
    lo = hi = Fraction(0)
    for j in range(N):
        s = sum((g / 2 ** (n + 1) for n, g in enumerate(gaps[j:])), Fraction(0))
        lo = max(lo, s)
        hi = max(hi, s + Fraction(1, 2 ** (T - j)))
    return lo, hi


def metric_comparison_check(spec: SpongeSpec, N: int, eps, samples: int = 1000,
                            seed: int = 0, depth: int = 3, extra: int = 16,
                            pairs=None, slack=1) -> bool:
    """Sample point pairs of X_Omega and test both l-infinity / Bowen comparisons.

    With ``N0`` minimal such that ``sum_{n >= N0} 2**-n < eps / 2`` the two
    assertions are: l-infinity distance ``>= eps`` on the first ``N`` times
    implies ``d_N >= eps``; and ``d_N`` is below the l-infinity distance on
    the first ``N + N0`` times plus ``eps / 2``.  Returns False as soon as a
    certified counterexample is found.

    With weights ``2**-k`` starting at ``k = 1`` a single gap of size ``eps``
    only forces ``d_N >= eps / 2``, so the first assertion can fail as
    stated.  ``slack`` relaxes it to ``d_N >= slack * eps``; ``slack=1/2`` is
    the form that always holds.
    """
    eps = Fraction(eps)
    slack = Fraction(slack)
    N0 = 1
    while Fraction(1, 2 ** (N0 - 1)) >= eps / 2:
        N0 += 1
    T = N + N0 + extra
    rng = random.Random(seed)

    def sample_pair():
        xr = [_random_path(spec, T, rng) for _ in range(depth)]
        if rng.random() < 0.5:
            cut = rng.randrange(1, N + N0 + 1)
            yr = [_random_path(spec, T, rng, start=row[:cut]) for row in xr]
        else:
            yr = [_random_path(spec, T, rng) for _ in range(depth)]
        tail = _random_path(spec, T, rng)
        return _truncated_point(spec, xr, tail), _truncated_point(spec, yr, tail)

    it = pairs if pairs is not None else (sample_pair() for _ in range(samples))
    for x, y in it:
        gaps = [max(abs(a - b) for a, b in zip(u, v)) for u, v in zip(x.values, y.values)]
        lo, hi = bowen_distance_bounds(x, y, N)
        if max(gaps[:N]) >= eps and hi < slack * eps:
            return False
        if lo >= max(gaps[: N + N0]) + eps / 2:
            return False
    return True
