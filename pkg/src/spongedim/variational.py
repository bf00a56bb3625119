"""Measure-based lower bounds on the weighted topological entropy.

Any shift-invariant measure ``mu`` on Omega gives

    h^a >= w_1 h(mu) + sum_{i=1}^{r-1} w_{r-i+1} h((pi_i)_* mu)

so every number returned here is a lower bound once the pushforward entropies
are themselves bounded from below.  Bernoulli measures on a full digit set
push forward to Bernoulli measures, which makes the bound exact and lets a
fixed-point iteration find the optimum.  For SFTs the Parry measure is used
and pushforward entropies are bounded with conditional block entropies of
the induced hidden Markov process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.sparse.csgraph import connected_components

from .errors import ConvergenceError, ResourceLimitError, SpecError
from .subshift import FULL, SpongeSpec
from .weighted import ExponentWeights, _as_weights

FLOOR = 1e-300
DEFAULT_BRANCH_CAP = 2_000_000


def _entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


# -- Bernoulli ----------------------------------------------------------------


@dataclass(frozen=True)
class BernoulliModel:
    """Bernoulli measure; ``p[k]`` is the mass of ``spec.digits[k]``."""

    spec: SpongeSpec
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (self.spec.n_digits,):
            raise SpecError(f"expected {self.spec.n_digits} probabilities, got shape {p.shape}")
        if (p < 0).any() or abs(p.sum() - 1.0) > 1e-12:
            raise SpecError("probabilities must be nonnegative and sum to 1")
        object.__setattr__(self, "p", p)

    @classmethod
    def from_mapping(cls, spec: SpongeSpec, masses: dict) -> "BernoulliModel":
        """Build from ``{digit tuple: mass}``; digits outside D are a support violation."""
        index = {d: k for k, d in enumerate(spec.digits)}
        p = np.zeros(spec.n_digits)
        for d, x in masses.items():
            d = tuple(d)
            if d not in index:
                raise SpecError(f"digit {d} is not in the digit set")
            p[index[d]] = x
        return cls(spec, p)

    @classmethod
    def uniform(cls, spec: SpongeSpec) -> "BernoulliModel":
        return cls(spec, np.full(spec.n_digits, 1.0 / spec.n_digits))

    def lump(self, level: int) -> np.ndarray:
        """Distribution of the level-``level`` letter."""
        codes = self.spec.letter_codes(level)
        return np.bincount(codes, weights=self.p, minlength=len(self.spec.alphabet(level)))

    def as_mapping(self) -> dict:
        return {d: float(x) for d, x in zip(self.spec.digits, self.p)}


def _weights(spec, w) -> ExponentWeights:
    if isinstance(w, ExponentWeights):
        return w
    if w is None:
        return _as_weights(spec, None)
    w = tuple(float(x) for x in w)
    if len(w) != spec.r:
        raise ValueError(f"expected {spec.r} weights, got {len(w)}")
    return ExponentWeights((), w)


def weighted_value_bernoulli(model: BernoulliModel, w=None) -> float:
    """``w_1 H(p) + sum_i w_{r-i+1} H(lump_i p)`` in nats."""
    spec = model.spec
    w = _weights(spec, w).w
    r = spec.r
    val = w[0] * _entropy(model.p)
    for i in range(1, r):
        val += w[r - i] * _entropy(model.lump(i))
    return val


def weighted_gradient_bernoulli(model: BernoulliModel, w=None) -> np.ndarray:
    """Partial derivatives of :func:`weighted_value_bernoulli` in each ``p_d``."""
    spec = model.spec
    w = _weights(spec, w).w
    r = spec.r
    p = np.maximum(model.p, FLOOR)
    g = -w[0] * (np.log(p) + 1.0)
    for i in range(1, r):
        q = np.maximum(model.lump(i), FLOOR)
        g -= w[r - i] * (np.log(q[spec.letter_codes(i)]) + 1.0)
    return g


def optimize_bernoulli(spec: SpongeSpec, w=None, tol: float = 1e-12,
                       max_iter: int = 200_000) -> tuple:
    """Maximize the Bernoulli weighted value over the simplex on D.

    Damped log-space reweighting ``p <- p**(1-w_1) * prod_i q_i**(-w_{r-i+1})``
    (normalized), whose fixed points are exactly the stationarity conditions.

    Returns
    -------
    model : BernoulliModel
    value : float
    """
    if spec.kind != FULL:
        raise SpecError("Bernoulli optimization needs a full-on-digits subshift")
    w = _weights(spec, w).w
    r = spec.r
    codes = [spec.letter_codes(i) for i in range(1, r)]
    sizes = [len(spec.alphabet(i)) for i in range(1, r)]
    logp = np.full(spec.n_digits, -math.log(spec.n_digits))
    for _ in range(max_iter):
        p = np.exp(logp)
        new = (1.0 - w[0]) * logp
        for i in range(1, r):
            q = np.bincount(codes[i - 1], weights=p, minlength=sizes[i - 1])
            new -= w[r - i] * np.log(np.maximum(q, FLOOR))[codes[i - 1]]
        new -= new.max()
        new -= math.log(np.exp(new).sum())
        new = np.maximum(new, math.log(FLOOR))
        step = float(np.max(np.abs(np.exp(new) - p)))
        logp = new
        if step <= tol:
            break
    else:
        raise ConvergenceError("Bernoulli fixed point did not converge", last=np.exp(logp))
    p = np.exp(logp)
    model = BernoulliModel(spec, p / p.sum())
    return model, weighted_value_bernoulli(model, w)


# -- Markov -------------------------------------------------------------------


@dataclass(frozen=True)
class MarkovModel:
    """Stationary Markov chain on digit indices, supported on allowed transitions."""

    spec: SpongeSpec
    P: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=float)
        pi = np.asarray(self.pi, dtype=float)
        adj = self.spec.adjacency()
        if (P[adj == 0] != 0).any():
            raise SpecError("transition matrix charges a forbidden transition")
        live = pi > 0
        if np.max(np.abs(P[live].sum(axis=1) - 1.0), initial=0.0) > 1e-10:
            raise SpecError("transition rows must sum to 1")
        if np.max(np.abs(pi @ P - pi)) > 1e-10 or abs(pi.sum() - 1.0) > 1e-10:
            raise SpecError("pi is not stationary for P")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "pi", pi)

    def entropy_rate(self) -> float:
        P = self.P
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(P > 0, P * np.log(np.where(P > 0, P, 1.0)), 0.0)
        return float(-self.pi @ terms.sum(axis=1))


def _stationary(P, support):
    sub = P[np.ix_(support, support)]
    vals, vecs = np.linalg.eig(sub.T)
    k = int(np.argmin(np.abs(vals - 1.0)))
    v = np.abs(np.real(vecs[:, k]))
    pi = np.zeros(len(P))
    pi[support] = v / v.sum()
    return pi


def parry_measure(spec: SpongeSpec) -> MarkovModel:
    """Maximal-entropy Markov measure on the strongly connected component of largest Perron root."""
    A = spec.adjacency().astype(float)
    n_comp, labels = connected_components(A > 0, directed=True, connection="strong")
    best = None
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        B = A[np.ix_(idx, idx)]
        if not B.any():
            continue
        vals, right = np.linalg.eig(B)
        k = int(np.argmax(np.real(vals)))
        rho = float(np.real(vals[k]))
        if best is None or rho > best[0] + 1e-12:
            lvals, left = np.linalg.eig(B.T)
            kl = int(np.argmin(np.abs(lvals - vals[k])))
            best = (rho, idx, np.abs(np.real(right[:, k])), np.abs(np.real(left[:, kl])))
    rho, idx, v, u = best
    P = np.zeros_like(A)
    sub = A[np.ix_(idx, idx)] * v[None, :] / (rho * v[:, None])
    P[np.ix_(idx, idx)] = sub
    pi = np.zeros(len(A))
    pi[idx] = u * v / np.dot(u, v)
    # clean rounding so the stationarity check sees a consistent pair
    P[idx] /= P[idx].sum(axis=1, keepdims=True)
    pi = _stationary(P, idx)
    return MarkovModel(spec, P, pi)


def _block_entropies(model: MarkovModel, level: int, block: int, branch_cap: int):
    """``H(X_1, Y_2..Y_k)`` for ``k = 1..block + 1`` (Y letters at ``level``)."""
    spec = model.spec
    codes = spec.letter_codes(level)
    n_letters = len(spec.alphabet(level))
    live = np.flatnonzero(model.pi > 0)
    masks = [model.P[:, codes == c] for c in range(n_letters)]
    cols = [np.flatnonzero(codes == c) for c in range(n_letters)]
    # alpha[row] is the sub-probability vector over the current digit for one history
    alpha = np.zeros((len(live), spec.n_digits))
    alpha[np.arange(len(live)), live] = model.pi[live]
    out = [_entropy(alpha.sum(axis=1))]
    for _ in range(block):
        parts = []
        for c in range(n_letters):
            nxt = np.zeros_like(alpha)
            nxt[:, cols[c]] = alpha @ masks[c]
            keep = nxt.sum(axis=1) > 0
            parts.append(nxt[keep])
        alpha = np.concatenate(parts)
        if len(alpha) > branch_cap:
            raise ResourceLimitError(f"block entropy needs {len(alpha)} histories, cap {branch_cap}")
        out.append(_entropy(alpha.sum(axis=1)))
    return out


def pushforward_entropy_lower(model: MarkovModel, level: int, block: int,
                              branch_cap: int = DEFAULT_BRANCH_CAP) -> float:
    """``H(Y_{b+1} | Y_1..Y_b, X_1)``, a lower bound on the entropy of the level process."""
    if block < 1:
        raise ValueError("block must be >= 1")
    if level == model.spec.r:
        return model.entropy_rate()
    h = _block_entropies(model, level, block, branch_cap)
    return max(0.0, h[block] - h[block - 1])


def markov_value(model: MarkovModel, w=None, block: int = 4,
                 branch_cap: int = DEFAULT_BRANCH_CAP) -> float:
    spec = model.spec
    w = _weights(spec, w).w
    r = spec.r
    val = w[0] * model.entropy_rate()
    for i in range(1, r):
        if w[r - i] > 0:
            val += w[r - i] * pushforward_entropy_lower(model, i, block, branch_cap)
    return val


def markov_lower_bound(spec: SpongeSpec, w=None, block: int = 4,
                       branch_cap: int = DEFAULT_BRANCH_CAP) -> float:
    """Weighted value of the Parry measure with block-entropy pushforward bounds."""
    return markov_value(parry_measure(spec), w, block, branch_cap)


def refine_markov(spec: SpongeSpec, w=None, block: int = 3, max_iter: int = 200,
                  start: MarkovModel | None = None) -> tuple:
    """Local search over transition rows starting from the Parry measure.

    Edge log-weights are optimized with L-BFGS on finite-difference gradients.
    Not needed for soundness; any result is still a valid lower bound.
    """
    start = start or parry_measure(spec)
    support = np.flatnonzero(start.pi > 0)
    adj = spec.adjacency()[np.ix_(support, support)] > 0
    edges = np.argwhere(adj)
    x0 = np.log(np.maximum(start.P[np.ix_(support, support)][adj], FLOOR))

    def build(x):
        sub = np.zeros(adj.shape)
        sub[edges[:, 0], edges[:, 1]] = np.exp(x - x.max())
        sub /= sub.sum(axis=1, keepdims=True)
        P = np.zeros((spec.n_digits, spec.n_digits))
        P[np.ix_(support, support)] = sub
        return MarkovModel(spec, P, _stationary(P, support))

    def objective(x):
        try:
            return -markov_value(build(x), w, block)
        except SpecError:
            return math.inf

    res = minimize(objective, x0, method="L-BFGS-B", options={"maxiter": max_iter})
    best = build(res.x) if -res.fun >= -objective(x0) else start
    return best, markov_value(best, w, block)
