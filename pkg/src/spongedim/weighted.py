"""Exponent vector, probability weights and weighted topological entropy.

For moduli ``m_1 <= ... <= m_r`` the exponents are
``a_i = log m_{r-i} / log m_{r-i+1}`` (i = 1..r-1).  The weighted entropy is
the growth rate of ``Z_N``, a nested power sum over the projection fibers of
Omega|_N::

    Z_N(v) = sum over children u of v of Z_N(u) ** e(level of u)

with top-level words valued 1, ``e(r) = 1`` and ``e(j) = a_{r-j}`` below.
``Z_N`` itself is the same sum taken over the level-1 words.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .subshift import DEFAULT_CAP, SpongeSpec, word_table


@dataclass(frozen=True)
class ExponentWeights:
    a: tuple
    w: tuple

    @property
    def r(self) -> int:
        return len(self.w)

    def level_exponent(self, level: int) -> float:
        """Exponent applied to a level-``level`` Z value when summed into its parent."""
        r = self.r
        return 1.0 if level == r else self.a[r - level - 1]


def weights_from_exponents(a) -> tuple:
    """Probability vector ``w_a`` built from ``a`` by the product rule."""
    a = list(a)
    r = len(a) + 1
    w = []
    for i in range(1, r + 1):
        # w_1 = a_1...a_{r-1};  w_i = (1 - a_{i-1}) a_i ... a_{r-1}
        head = 1.0 if i == 1 else 1.0 - a[i - 2]
        w.append(head * math.prod(a[i - 1 :]))
    return tuple(w)


def closed_form_weights(m) -> tuple:
    """``w_a`` written directly in terms of the moduli.

    ``(log m1/log mr, log m1/log m_{r-1} - log m1/log mr, ..., 1 - log m1/log m2)``
    """
    lm = [math.log(x) for x in m]
    r = len(lm)
    q = [lm[0] / lm[j] for j in range(r)]  # q[j] = log m1 / log m_{j+1}
    w = [q[r - 1]]
    for i in range(2, r + 1):
        w.append(q[r - i] - q[r - i + 1])
    return tuple(w)


def exponents_and_weights(m) -> ExponentWeights:
    m = tuple(m)
    r = len(m)
    lm = [math.log(x) for x in m]
    a = tuple(lm[r - i - 1] / lm[r - i] for i in range(1, r))
    w = weights_from_exponents(a)
    closed = closed_form_weights(m)
    assert all(0.0 < x <= 1.0 for x in a)
    assert abs(sum(w) - 1.0) <= 1e-12
    assert all(abs(x - y) <= 1e-12 for x, y in zip(w, closed)), (w, closed)
    return ExponentWeights(a, w)


def _as_weights(spec: SpongeSpec, a) -> ExponentWeights:
    if a is None:
        return exponents_and_weights(spec.m)
    if isinstance(a, ExponentWeights):
        return a
    a = tuple(float(x) for x in a)
    if len(a) != spec.r - 1:
        raise ValueError(f"expected {spec.r - 1} exponents, got {len(a)}")
    return ExponentWeights(a, weights_from_exponents(a))


@dataclass
class ZTable:
    """Per-level Z values for one ``N``.

    ``values[i]`` is indexed by level-``i`` word id of ``table`` (levels
    1..r; the top level is identically 1).  ``total`` is the scalar ``Z_N``.
    In extended-precision mode the entries are ``mpmath.mpf``.
    """

    table: object
    weights: ExponentWeights
    values: dict
    total: float
    precision: int | None = None
    log_total: float = field(init=False)

    def __post_init__(self):
        self.log_total = float(mpmath.log(self.total)) if self.precision else math.log(self.total)

    @property
    def N(self) -> int:
        return self.table.N

    def value(self, v) -> float:
        """Z_N(v) for a projected word ``v`` (levels below r)."""
        k = self.table.id_of(v)
        level = len(v[0])
        return self.values[level][k]


def _z_recursion(table, weights, precision):
    r = table.spec.r
    values = {}
    if precision:
        with mpmath.workprec(precision):
            cur = [mpmath.mpf(1)] * table.count(r)
            values[r] = np.array(cur, dtype=object)
            for level in range(r - 1, 0, -1):
                e = mpmath.mpf(weights.level_exponent(level + 1))
                acc = [mpmath.mpf(0)] * table.count(level)
                for child, par in enumerate(table.parent[level + 1]):
                    acc[par] += cur[child] ** e
                cur = acc
                values[level] = np.array(cur, dtype=object)
            e = mpmath.mpf(weights.level_exponent(1))
            total = mpmath.fsum(x**e for x in cur)
        return values, total
    cur = np.ones(table.count(r))
    values[r] = cur
    for level in range(r - 1, 0, -1):
        e = weights.level_exponent(level + 1)
        cur = np.bincount(table.parent[level + 1], weights=cur**e, minlength=table.count(level))
        values[level] = cur
    total = float(np.sum(cur ** weights.level_exponent(1)))
    return values, total


def z_value(spec: SpongeSpec, a=None, N: int = 1, precision: int | None = None,
            cap: int = DEFAULT_CAP) -> ZTable:
    """Evaluate the Z recursion over Omega|_N bottom-up.

    Parameters
    ----------
    a : sequence of float or ExponentWeights, optional
        Exponents; defaults to the ones induced by ``spec.m``.
    precision : int, optional
        Mantissa bits for an mpmath evaluation instead of double precision.
    """
    weights = _as_weights(spec, a)
    table = word_table(spec, N, cap)
    values, total = _z_recursion(table, weights, precision)
    return ZTable(table, weights, values, total, precision)


@dataclass(frozen=True)
class WeightedEntropyEstimate:
    fekete_upper: float
    sequence: tuple  # log Z_N / N for N = 1..N_max
    log_z: tuple

    @property
    def N_max(self) -> int:
        return len(self.sequence)


def weighted_entropy_estimate(spec: SpongeSpec, a=None, N_max: int = 4,
                              precision: int | None = None,
                              cap: int = DEFAULT_CAP) -> WeightedEntropyEstimate:
    """``min_N log Z_N / N`` (an upper bound on the weighted entropy) and the sequence."""
    if N_max < 1:
        raise ValueError("N_max must be >= 1")
    log_z = tuple(z_value(spec, a, N, precision, cap).log_total for N in range(1, N_max + 1))
    seq = tuple(lz / n for n, lz in enumerate(log_z, start=1))
    return WeightedEntropyEstimate(min(seq), seq, log_z)
