"""The Z-weighted distribution f_N on Omega|_N and cylinder masses of its product.

``f_N`` factors level by level: given the level ``j - 1`` projection ``v`` of
a word, its level ``j`` projection ``u`` has conditional probability
``Z_N(u) ** e_j / Z_N(v)``, where the level-0 value is the scalar ``Z_N`` and
top-level words have value 1.  The infinite product ``mu_N = f_N ** N`` over
digit rows is never built; only masses of cylinders are evaluated.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import IllegalWordError, VerificationError
from .geometry import level_depths
from .subshift import DEFAULT_CAP, SpongeSpec
from .weighted import ZTable, z_value

AGREEMENT_TOL = 1e-10


@dataclass
class CylinderMeasure:
    """``f_N`` with its per-level conditional factors and marginals.

    ``conditional[j]`` and ``marginal[j]`` are arrays indexed by level-``j``
    word ids of ``ztable.table``; ``marginal[r]`` is ``f_N`` itself.
    """

    ztable: ZTable
    conditional: dict
    marginal: dict
    log_z: dict

    @property
    def N(self) -> int:
        return self.ztable.N

    @property
    def spec(self) -> SpongeSpec:
        return self.ztable.table.spec

    @property
    def f(self) -> np.ndarray:
        return self.marginal[self.spec.r]

    def mass(self, u) -> float:
        """``f_N(u)`` for a word of Omega|_N."""
        return float(self.f[self.ztable.table.id_of(u)])

    def direct_f(self) -> np.ndarray:
        """``f_N`` from the closed product formula, without the conditional chain."""
        t = self.ztable.table
        w = self.ztable.weights
        r = self.spec.r
        acc = np.full(t.count(r), -self.ztable.log_total)
        for j in range(1, r):
            acc += (w.level_exponent(j) - 1.0) * self.log_z[j][t.ids[j][t.reps[r]]]
        return np.exp(acc)

    def normalization_error(self) -> float:
        return abs(float(np.sum(self.f)) - 1.0)

    def factorization_error(self) -> float:
        return float(np.max(np.abs(self.f - self.direct_f())))


def build_fN(spec: SpongeSpec, a=None, N: int = 1, cap: int = DEFAULT_CAP) -> CylinderMeasure:
    """Construct ``f_N`` from the Z table of ``Omega|_N``.

    Examples
    --------
    >>> from spongedim import SpongeSpec
    >>> mu = build_fN(SpongeSpec.full((2, 2), [(0, 0), (1, 1)]), N=2)
    >>> [round(float(x), 12) for x in mu.f]
    [0.25, 0.25, 0.25, 0.25]
    """
    zt = z_value(spec, a, N, cap=cap)
    t = zt.table
    w = zt.weights
    r = spec.r
    log_z = {j: np.log(np.asarray(zt.values[j], dtype=float)) for j in range(1, r + 1)}
    log_total = zt.log_total
    cond, marg = {}, {}
    for j in range(1, r + 1):
        e = w.level_exponent(j)
        parent_log = np.full(t.count(j), log_total) if j == 1 else log_z[j - 1][t.parent[j]]
        cond[j] = np.exp(e * log_z[j] - parent_log)
        marg[j] = cond[j] if j == 1 else marg[j - 1][t.parent[j]] * cond[j]
    out = CylinderMeasure(zt, cond, marg, log_z)
    if out.normalization_error() > 1e-10:
        raise VerificationError(f"f_N sums to {np.sum(out.f)!r}")
    return out


@dataclass(frozen=True)
class CylinderSpec:
    """Digit prefix of a cylinder: row ``k`` is a word of depth ``depths[k]``.

    ``L`` are the level depths ``L_i(M)``; row ``k`` (1-based) constrains the
    first ``#{i : k <= L_i}`` coordinate blocks.  ``M = 0`` is the whole space.
    """

    N: int
    M: int
    L: tuple
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(tuple(int(c) for c in a) for a in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != (self.L[0] if self.L else 0):
            raise IllegalWordError(f"expected {self.L[0] if self.L else 0} rows, got {len(rows)}")
        for k, (row, d) in enumerate(zip(rows, self.depths), start=1):
            if len(row) != self.N or any(len(a) != d for a in row):
                raise IllegalWordError(f"row {k} must be a level-{d} word of length {self.N}")

    @property
    def depths(self) -> tuple:
        return tuple(sum(1 for x in self.L if x >= k) for k in range(1, (self.L[0] if self.L else 0) + 1))

    @classmethod
    def make(cls, spec: SpongeSpec, N: int, M: int, rows) -> "CylinderSpec":
        L = level_depths(spec.m, M).L if M > 0 else (0,) * spec.r
        return cls(N, M, L, tuple(rows))


def random_cylinder(spec: SpongeSpec, N: int, M: int, rng: random.Random,
                    measure: CylinderMeasure | None = None) -> CylinderSpec:
    """A uniformly drawn legal cylinder: random words of Omega|_N truncated row by row."""
    from .subshift import word_table

    t = measure.ztable.table if measure is not None else word_table(spec, N)
    L = level_depths(spec.m, M).L
    rows = []
    for k in range(1, L[0] + 1):
        d = sum(1 for x in L if x >= k)
        u = t.word(spec.r, rng.randrange(t.count(spec.r)))
        rows.append(tuple(a[:d] for a in u))
    return CylinderSpec(N, M, L, tuple(rows))


def _row_ids(measure, cyl):
    t = measure.ztable.table
    if cyl.N != measure.N:
        raise IllegalWordError(f"cylinder has N={cyl.N}, measure has N={measure.N}")
    return [t.id_of(row) for row in cyl.rows]


def log_mu_identity(measure: CylinderMeasure, cyl: CylinderSpec) -> float:
    """``log mu_N`` from partial sums of ``log Z_N`` over the constrained rows."""
    spec = measure.spec
    t = measure.ztable.table
    w = measure.ztable.weights
    r = spec.r
    if cyl.M == 0:
        return 0.0
    ids = _row_ids(measure, cyl)
    depths = cyl.depths
    L = cyl.L
    total = -cyl.M * measure.ztable.log_total
    for i in range(1, r):
        # ancestor ids at level i for every row deep enough
        partial = []
        for k in range(L[i - 1]):
            j, d = ids[k], depths[k]
            while d > i:
                j = t.parent[d][j]
                d -= 1
            partial.append(measure.log_z[i][j])
        u_Li = math.fsum(partial)
        u_Li1 = math.fsum(partial[: L[i]])
        total += w.level_exponent(i) * u_Li - u_Li1
    return total


def log_mu_cylinder(measure: CylinderMeasure, cyl: CylinderSpec) -> float:
    """``log mu_N`` of a cylinder, in nats.

    Evaluated as the sum of per-row marginal logs and cross-checked against
    the partial-sum identity; a disagreement above ``1e-10`` raises
    :class:`VerificationError`.
    """
    if cyl.M == 0:
        return 0.0
    ids = _row_ids(measure, cyl)
    direct = math.fsum(math.log(measure.marginal[d][k]) for d, k in zip(cyl.depths, ids))
    other = log_mu_identity(measure, cyl)
    if abs(direct - other) > AGREEMENT_TOL * max(1.0, abs(direct)):
        raise VerificationError(f"cylinder mass routes disagree: {direct!r} vs {other!r}")
    return direct
