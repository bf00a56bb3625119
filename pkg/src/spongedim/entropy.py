"""Topological entropy of a subshift and of its coordinate projections.

The projected language pi_i(Omega) is sofic.  It is presented by a
deterministic automaton obtained from the SFT graph by the subset
construction, then minimized so that states are follower-set classes.  The
entropy is the log of the Perron root of the resulting transfer matrix.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import ConvergenceError, DeterminizationError
from .subshift import SpongeSpec

DEFAULT_MAX_STATES = 100_000

_INIT = "init"


@dataclass(frozen=True)
class SoficPresentation:
    """Minimal deterministic presentation of pi_level(Omega).

    ``delta[s]`` maps a level letter (index into ``spec.alphabet(level)``) to
    the successor state.  ``states[s]`` is one subset of SFT symbols in the
    class of ``s`` (``None`` for the unconstrained start state).
    """

    level: int
    states: tuple
    initial: int
    delta: tuple
    matrix: np.ndarray

    @property
    def n_states(self) -> int:
        return len(self.states)

    def count(self, N: int) -> int:
        """Number of words of length ``N``, in exact integer arithmetic."""
        vec = [0] * self.n_states
        vec[self.initial] = 1
        for _ in range(N):
            nxt = [0] * self.n_states
            for s, v in enumerate(vec):
                if v:
                    for t in self.delta[s].values():
                        nxt[t] += v
            vec = nxt
        return sum(vec)

    def counts(self, n_max: int) -> list:
        out = []
        vec = [0] * self.n_states
        vec[self.initial] = 1
        for _ in range(n_max):
            nxt = [0] * self.n_states
            for s, v in enumerate(vec):
                if v:
                    for t in self.delta[s].values():
                        nxt[t] += v
            vec = nxt
            out.append(sum(vec))
        return out


def _minimize(states, delta, initial):
    # Moore refinement; every state accepts, so only the transition signature matters
    block = [0] * len(states)
    n_blocks = 1
    while True:
        sigs = {}
        new = []
        for s in range(len(states)):
            sig = (block[s], tuple(sorted((b, block[t]) for b, t in delta[s].items())))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == n_blocks:
            break
        block, n_blocks = new, len(sigs)
    # renumber blocks in order of first appearance (BFS order from the start state)
    order = {}
    for s in range(len(states)):
        order.setdefault(block[s], len(order))
    rep = {}
    for s in range(len(states)):
        rep.setdefault(order[block[s]], s)
    m_states = tuple(states[rep[k]] for k in range(len(order)))
    m_delta = tuple(
        {b: order[block[t]] for b, t in delta[rep[k]].items()} for k in range(len(order))
    )
    return m_states, m_delta, order[block[initial]]


@functools.lru_cache(maxsize=128)
def determinize_projection(spec: SpongeSpec, level: int,
                           max_states: int = DEFAULT_MAX_STATES) -> SoficPresentation:
    """Subset construction on the SFT graph labelled by level-``level`` letters."""
    spec.check_level(level)
    codes = spec.letter_codes(level)
    succ = spec.successor_lists()
    n_letters = len(spec.alphabet(level))
    by_letter = [frozenset(np.flatnonzero(codes == b).tolist()) for b in range(n_letters)]

    states = [_INIT]
    index = {_INIT: 0}
    delta = []
    k = 0
    while k < len(states):
        s = states[k]
        reach = frozenset(range(spec.n_digits)) if s is _INIT else frozenset(
            j for d in s for j in succ[d]
        )
        moves = {}
        for b in range(n_letters):
            t = reach & by_letter[b]
            if t:
                if t not in index:
                    if len(states) >= max_states:
                        raise DeterminizationError(
                            f"subset construction exceeded {max_states} states at level "
                            f"{level}; fall back to word enumeration"
                        )
                    index[t] = len(states)
                    states.append(t)
                moves[b] = index[t]
        delta.append(moves)
        k += 1

    m_states, m_delta, init = _minimize(states, delta, 0)
    m_states = tuple(None if s is _INIT else tuple(sorted(s)) for s in m_states)
    mat = np.zeros((len(m_states), len(m_states)), dtype=np.int64)
    for s, moves in enumerate(m_delta):
        for t in moves.values():
            mat[s, t] += 1
    mat.setflags(write=False)
    return SoficPresentation(level, m_states, init, m_delta, mat)


def perron_root(matrix, tol: float = 1e-12, max_iter: int = 1_000_000):
    """Spectral radius of a nonnegative matrix with a Collatz-Wielandt enclosure.

    Works component by component: the spectral radius of a reducible matrix is
    the maximum over its strongly connected components.  Each irreducible
    block ``B`` is shifted to ``B + I`` (primitive, same Perron vector) and
    power-iterated from the all-ones vector.

    Returns
    -------
    rho, lower, upper : float
        Point estimate and the certified bracket ``lower <= rho <= upper``.
    """
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    n_comp, labels = connected_components(a > 0, directed=True, connection="strong")
    best = (0.0, 0.0, 0.0)
    for c in range(n_comp):
        idx = np.flatnonzero(labels == c)
        block = a[np.ix_(idx, idx)]
        if not block.any():
            continue
        b = block + np.eye(len(idx))
        x = np.ones(len(idx))
        for _ in range(max_iter):
            y = b @ x
            q = y / x
            lo, hi = q.min(), q.max()
            x = y / y.max()
            if hi - lo <= tol * hi:
                break
        else:
            raise ConvergenceError("power iteration did not converge", last=x)
        est = (lo - 1.0, hi - 1.0)
        cand = (0.5 * (est[0] + est[1]), est[0], est[1])
        if cand[0] > best[0]:
            best = cand
    assert n == 0 or best[2] >= best[1]
    return best


@dataclass(frozen=True)
class EntropyEstimate:
    """Entropy of one level in nats.

    ``fekete_upper`` is ``min_N log|W_N| / N`` over the computed range and is a
    rigorous upper bound; ``ratio_estimate`` is ``log(|W_N| / |W_{N-1}|)`` at
    the last ``N``.  ``enclosure`` brackets ``exp(exact_value)``.
    """

    level: int
    exact_value: float | None
    fekete_upper: float
    ratio_estimate: float
    N_used: int
    enclosure: tuple = (math.nan, math.nan)
    counts: tuple = ()

    @property
    def fekete_sequence(self) -> list:
        return [math.log(c) / n for n, c in enumerate(self.counts, start=1)]


def topological_entropy(spec: SpongeSpec, level: int | None = None,
                        n_max: int = 24) -> EntropyEstimate:
    """Topological entropy of pi_level(Omega) (level defaults to r)."""
    level = spec.r if level is None else spec.check_level(level)
    pres = determinize_projection(spec, level)
    rho, lo, hi = perron_root(pres.matrix)
    counts = pres.counts(n_max)
    fekete = min(math.log(c) / n for n, c in enumerate(counts, start=1))
    if n_max >= 2:
        ratio = math.log(counts[-1] / counts[-2])
    else:
        ratio = math.log(counts[0])
    exact = math.log(rho) if rho > 0 else -math.inf
    rho, lo, hi = float(rho), float(lo), float(hi)
    return EntropyEstimate(level, exact, fekete, ratio, n_max, (lo, hi), tuple(counts))


def entropies(spec: SpongeSpec, n_max: int = 24) -> list:
    """Entropy estimates for levels 1..r."""
    return [topological_entropy(spec, i, n_max) for i in range(1, spec.r + 1)]
