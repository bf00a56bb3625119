"""Metric mean dimension, mean Hausdorff dimension and the surrounding report.

Both dimensions are functions of entropies of the projection chain:

    mdim_M = h(Omega)/log m_r + sum_i (1/log m_i - 1/log m_{i+1}) h(pi_i Omega)
    mdim_H = h^a / log m_1

``h^a`` has no finite-N error bound, so mean Hausdorff dimension is reported
as an interval between a variational lower bound and a Fekete upper bound.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .entropy import EntropyEstimate, entropies
from .errors import SpecError
from .geometry import finite_scale_mdim_ratio
from .subshift import DEFAULT_CAP, FULL, SpongeSpec, word_table
from .variational import markov_lower_bound, optimize_bernoulli
from .weighted import ExponentWeights, exponents_and_weights, weighted_entropy_estimate, z_value

# outward rounding applied to the floating-point ends of the mdim_H interval
ROUNDING_SLACK = 1e-12

CERTIFIED = "certified"
EVIDENCE = "evidence"


def _metric_terms(m, h) -> list:
    lm = [math.log(x) for x in m]
    r = len(m)
    terms = [(1 / lm[i] - 1 / lm[i + 1]) * h[i] for i in range(r - 1)]
    terms.append(h[r - 1] / lm[r - 1])
    return terms


def metric_mean_dimension(spec: SpongeSpec, ents: list | None = None) -> float:
    """Metric mean dimension from the exact (spectral) projection entropies.

    Examples
    --------
    >>> from spongedim import SpongeSpec
    >>> round(metric_mean_dimension(SpongeSpec.full((2, 3), [(0, 0), (1, 0), (1, 2)])), 10)
    1.3690702464
    """
    ents = entropies(spec) if ents is None else ents
    return math.fsum(_metric_terms(spec.m, [e.exact_value for e in ents]))


def mean_hausdorff_dimension(spec: SpongeSpec, N_max: int = 4, block: int = 4,
                             precision: int | None = None, cap: int = DEFAULT_CAP) -> tuple:
    """``(upper, lower)`` bounds on the mean Hausdorff dimension.

    The upper end is the Fekete bound ``min_N log Z_N / N`` and the lower end
    the best variational value (Bernoulli optimum on full digit sets, Parry
    measure with ``block``-step pushforward bounds on SFTs), both divided by
    ``log m_1`` and rounded outward by ``1e-12`` relative.
    """
    up, lo = _h_a_bounds(spec, N_max, block, precision, cap)[:2]
    lm1 = math.log(spec.m[0])
    return _outward(up / lm1, lo / lm1)


def _outward(upper, lower):
    return (upper + ROUNDING_SLACK * max(1.0, abs(upper)),
            lower - ROUNDING_SLACK * max(1.0, abs(lower)))


def _h_a_bounds(spec, N_max, block, precision, cap):
    est = weighted_entropy_estimate(spec, None, N_max, precision, cap)
    if spec.kind == FULL:
        lower = optimize_bernoulli(spec)[1]
        method = "bernoulli optimum"
    else:
        lower = markov_lower_bound(spec, block=block)
        method = f"parry measure, block {block}"
    return est.fekete_upper, lower, est, method


@dataclass(frozen=True)
class UniformFibres:
    """Per-level equal-fibre flags; ``levels[i-1]`` concerns fibres over level ``i``."""

    levels: tuple
    status: str
    N_max: int

    @property
    def all_uniform(self) -> bool:
        return all(self.levels)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED and self.all_uniform


def uniform_fibre_check(spec: SpongeSpec, N_max: int = 4, cap: int = DEFAULT_CAP) -> UniformFibres:
    """Check that every fibre of the drop-one-coordinate maps has the same size.

    For a full digit set the fibres over a length-N word are products of
    single-letter fibres, so ``N = 1`` decides the question for all ``N``.
    For an SFT the check runs for each ``N <= N_max`` and is only evidence.
    """
    full = spec.kind == FULL
    Ns = [1] if full else range(1, N_max + 1)
    flags = [True] * (spec.r - 1)
    for N in Ns:
        t = word_table(spec, N, cap)
        for i in range(1, spec.r):
            sizes = {len(c) for c in t.children(i)}
            if len(sizes) > 1:
                flags[i - 1] = False
    return UniformFibres(tuple(flags), CERTIFIED if full else EVIDENCE, 1 if full else N_max)


def classical_sponge_dimensions(spec: SpongeSpec) -> tuple:
    """Box-counting and Hausdorff dimensions of the static sponge with digit set D."""
    if spec.kind != FULL:
        raise SpecError("classical sponge dimensions need a full-on-digits subshift")
    h = [math.log(len(spec.alphabet(i))) for i in range(1, spec.r + 1)]
    minkowski = math.fsum(_metric_terms(spec.m, h))
    hausdorff = z_value(spec, N=1).log_total / math.log(spec.m[0])
    return minkowski, hausdorff


@dataclass
class DimensionReport:
    m: tuple
    kind: str
    weights: ExponentWeights
    entropies: list
    mdim_M: float
    mdim_M_terms: list
    mdim_H_upper: float
    mdim_H_lower: float
    h_a_upper: float
    h_a_lower: float
    lower_method: str
    uniform: UniformFibres
    classical: tuple | None
    weighted_table: list = field(default_factory=list)  # (N, log Z_N / N)
    ratio_table: list = field(default_factory=list)  # (N, M, finite-scale ratio)

    @property
    def coincidence_flag(self) -> bool:
        return self.uniform.all_uniform

    @property
    def coincidence_status(self) -> str:
        return self.uniform.status

    @property
    def mdim_H_width(self) -> float:
        return self.mdim_H_upper - self.mdim_H_lower

    def check(self) -> list:
        """Consistency problems found in the report (empty when all invariants hold)."""
        out = []
        if self.mdim_H_lower > self.mdim_H_upper + 1e-6:
            out.append("mdim_H lower bound exceeds upper bound")
        if self.mdim_H_lower > self.mdim_M + 1e-6:
            out.append("mdim_H lower bound exceeds mdim_M")
        for e in self.entropies:
            if e.exact_value > e.fekete_upper + 1e-9:
                out.append(f"level {e.level} spectral entropy exceeds its Fekete bound")
        if self.uniform.certified and abs(self.mdim_H_upper - self.mdim_M) >= 1e-6:
            out.append("uniform fibres but mdim_H differs from mdim_M")
        return out

    def to_dict(self) -> dict:
        return {
            "m": list(self.m),
            "kind": self.kind,
            "exponents": list(self.weights.a),
            "weights": list(self.weights.w),
            "entropies": [_entropy_dict(e) for e in self.entropies],
            "mdim_M": self.mdim_M,
            "mdim_M_terms": list(self.mdim_M_terms),
            "mdim_H_upper": self.mdim_H_upper,
            "mdim_H_lower": self.mdim_H_lower,
            "h_a_upper": self.h_a_upper,
            "h_a_lower": self.h_a_lower,
            "lower_method": self.lower_method,
            "uniform_fibres": list(self.uniform.levels),
            "coincidence_flag": self.coincidence_flag,
            "coincidence_status": self.coincidence_status,
            "classical": None if self.classical is None else
            {"minkowski": self.classical[0], "hausdorff": self.classical[1]},
            "weighted_table": [list(x) for x in self.weighted_table],
            "ratio_table": [list(x) for x in self.ratio_table],
            "problems": self.check(),
        }


def _entropy_dict(e: EntropyEstimate) -> dict:
    d = asdict(e)
    d["enclosure"] = [float(x) for x in e.enclosure]
    d["counts"] = [int(x) for x in e.counts]
    return d


def analyze(spec: SpongeSpec, N_max: int = 4, M_max: int = 8, block: int = 4,
            precision: int | None = None, cap: int = DEFAULT_CAP,
            entropy_n: int = 24) -> DimensionReport:
    """Run every estimator on ``spec`` and collect the results."""
    weights = exponents_and_weights(spec.m)
    ents = entropies(spec, entropy_n)
    h = [e.exact_value for e in ents]
    terms = _metric_terms(spec.m, h)
    up, lo, est, method = _h_a_bounds(spec, N_max, block, precision, cap)
    lm1 = math.log(spec.m[0])
    H_up, H_lo = _outward(up / lm1, lo / lm1)
    ratio = [(N, M, finite_scale_mdim_ratio(spec, N, M))
             for N in range(1, N_max + 1) for M in range(1, M_max + 1)]
    return DimensionReport(
        m=spec.m,
        kind=spec.kind,
        weights=weights,
        entropies=ents,
        mdim_M=math.fsum(terms),
        mdim_M_terms=terms,
        mdim_H_upper=H_up,
        mdim_H_lower=H_lo,
        h_a_upper=up,
        h_a_lower=lo,
        lower_method=method,
        uniform=uniform_fibre_check(spec, N_max, cap),
        classical=classical_sponge_dimensions(spec) if spec.kind == FULL else None,
        weighted_table=list(enumerate(est.sequence, start=1)),
        ratio_table=ratio,
    )
