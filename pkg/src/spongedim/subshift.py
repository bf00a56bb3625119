"""Digit alphabets, subshifts and their finite-word languages.

A sponge system is fixed by nondecreasing moduli ``m_1 <= ... <= m_r`` and a
one-sided subshift over digit tuples ``(x_1, ..., x_r)`` with
``0 <= x_l < m_l``.  Two kinds of subshift are supported: the full shift on a
digit set ``D`` and a one-step shift of finite type on ``D``.

Words are tuples of letters and letters are tuples of ints, so a level-1 word
of length two looks like ``((0,), (1,))``.  Internally words are rows of
digit indices into the canonically sorted ``SpongeSpec.digits``.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import IllegalWordError, LevelError, ResourceLimitError, SpecError

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**7

FULL = "full"
SFT = "sft"

Letter = tuple
Word = tuple


@dataclass(frozen=True)
class SpongeSpec:
    """Moduli plus a subshift of digit tuples.

    ``digits`` is stored sorted lexicographically; ``successors[d]`` lists the
    indices (into the sorted digits) allowed after digit ``d``.  For the full
    kind ``successors`` is ``None``.
    """

    m: tuple
    digits: tuple
    successors: tuple | None = None

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        if len(m) < 1:
            raise SpecError("at least one modulus is required")
        if m[0] < 2:
            raise SpecError(f"moduli must be >= 2, got {m}")
        if any(b < a for a, b in zip(m, m[1:])):
            raise SpecError(f"moduli must be nondecreasing, got {list(m)}")
        raw = [tuple(int(c) for c in d) for d in self.digits]
        for d in raw:
            if len(d) != len(m):
                raise SpecError(f"digit {d} has length {len(d)}, expected r={len(m)}")
            for l, (c, ml) in enumerate(zip(d, m)):
                if not 0 <= c < ml:
                    raise SpecError(
                        f"digit {d} out of range: coordinate {l + 1} must lie in [0, {ml - 1}]"
                    )
        if len(set(raw)) != len(raw):
            raise SpecError("duplicate digits")
        if len(raw) < 2:
            raise SpecError("the subshift needs at least two digits")

        order = sorted(range(len(raw)), key=lambda k: raw[k])
        rank = {old: new for new, old in enumerate(order)}
        digits = tuple(raw[k] for k in order)

        succ = None
        if self.successors is not None:
            if len(self.successors) != len(raw):
                raise SpecError("transitions must list successors for every digit")
            succ_old = []
            for k, row in enumerate(self.successors):
                row = [int(j) for j in row]
                for j in row:
                    if not 0 <= j < len(raw):
                        raise SpecError(f"transition index {j} of digit {raw[k]} out of range")
                succ_old.append(row)
            succ = [None] * len(raw)
            for old, row in enumerate(succ_old):
                succ[rank[old]] = tuple(sorted({rank[j] for j in row}))
            succ = tuple(succ)
            has_pred = set(j for row in succ for j in row)
            for k, row in enumerate(succ):
                if not row:
                    raise SpecError(f"symbol {digits[k]} has no allowed successor")
                if k not in has_pred:
                    raise SpecError(f"symbol {digits[k]} has no allowed predecessor")

        object.__setattr__(self, "m", m)
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "successors", succ)

    # -- constructors -----------------------------------------------------

    @classmethod
    def full(cls, m: Sequence[int], digits: Iterable[Sequence[int]]) -> "SpongeSpec":
        return cls(tuple(m), tuple(tuple(d) for d in digits), None)

    @classmethod
    def sft(
        cls,
        m: Sequence[int],
        digits: Iterable[Sequence[int]],
        successors: Sequence[Sequence[int]] | None = None,
        forbidden: Iterable[tuple] | None = None,
    ) -> "SpongeSpec":
        """Build an SFT from successor index lists or from forbidden digit pairs."""
        digits = [tuple(d) for d in digits]
        if (successors is None) == (forbidden is None):
            raise SpecError("give exactly one of successors= or forbidden=")
        if forbidden is not None:
            bad = {(tuple(a), tuple(b)) for a, b in forbidden}
            successors = [
                [j for j, e in enumerate(digits) if (d, e) not in bad] for d in digits
            ]
        return cls(tuple(m), tuple(digits), tuple(tuple(s) for s in successors))

    @classmethod
    def sft_pruned(cls, m, digits, successors) -> "SpongeSpec":
        """Like :meth:`sft` but strips symbols that cannot extend both ways.

        Dead symbols are removed iteratively with a warning instead of raising.
        """
        digits = [tuple(d) for d in digits]
        alive = set(range(len(digits)))
        succ = {k: set(int(j) for j in row) for k, row in enumerate(successors)}
        changed = True
        while changed:
            changed = False
            pred = {k: set() for k in alive}
            for k in alive:
                for j in succ[k] & alive:
                    pred[j].add(k)
            for k in sorted(alive):
                if not (succ[k] & alive) or not pred[k]:
                    log.warning("stripping dead symbol %s", digits[k])
                    alive.discard(k)
                    changed = True
        keep = sorted(alive)
        remap = {old: new for new, old in enumerate(keep)}
        return cls.sft(
            m,
            [digits[k] for k in keep],
            successors=[[remap[j] for j in sorted(succ[k] & alive)] for k in keep],
        )

    # -- basic structure ----------------------------------------------------

    @property
    def r(self) -> int:
        return len(self.m)

    @property
    def kind(self) -> str:
        return FULL if self.successors is None else SFT

    @property
    def n_digits(self) -> int:
        return len(self.digits)

    def successor_lists(self) -> tuple:
        """Successor index lists; the full kind allows every digit after every digit."""
        if self.successors is None:
            every = tuple(range(self.n_digits))
            return tuple(every for _ in self.digits)
        return self.successors

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n_digits, self.n_digits), dtype=np.int64)
        for k, row in enumerate(self.successor_lists()):
            a[k, list(row)] = 1
        return a

    def check_level(self, level: int) -> int:
        if not 1 <= level <= self.r:
            raise LevelError(f"level must lie in [1, {self.r}], got {level}")
        return level

    def alphabet(self, level: int) -> tuple:
        """Sorted distinct level-``level`` letters ``p_i(D)``."""
        self.check_level(level)
        return _alphabet(self, level)

    def letter_codes(self, level: int) -> np.ndarray:
        """Map digit index -> index of its projected letter in :meth:`alphabet`."""
        self.check_level(level)
        return _letter_codes(self, level)

    def as_sft(self) -> "SpongeSpec":
        """The same subshift presented as an SFT with a complete transition graph."""
        return SpongeSpec(self.m, self.digits, self.successor_lists())


@functools.lru_cache(maxsize=None)
def _alphabet(spec: SpongeSpec, level: int) -> tuple:
    return tuple(sorted({d[:level] for d in spec.digits}))


@functools.lru_cache(maxsize=None)
def _letter_codes(spec: SpongeSpec, level: int) -> np.ndarray:
    index = {a: k for k, a in enumerate(_alphabet(spec, level))}
    codes = np.array([index[d[:level]] for d in spec.digits], dtype=np.int64)
    codes.setflags(write=False)
    return codes


# -- words ------------------------------------------------------------------


def word_level(w: Sequence[Sequence[int]]) -> int:
    if len(w) == 0:
        raise LevelError("empty word has no level")
    lengths = {len(a) for a in w}
    if len(lengths) != 1:
        raise LevelError("letters of a word must all have the same length")
    return lengths.pop()


def project_word(w: Sequence[Sequence[int]], i: int) -> Word:
    """Truncate every letter of ``w`` to its first ``i`` coordinates.

    >>> project_word([(1, 0, 2), (0, 1, 4)], 2)
    ((1, 0), (0, 1))
    """
    j = word_level(w)
    if not 1 <= i < j:
        raise LevelError(f"cannot project a level-{j} word to level {i}")
    return tuple(tuple(a[:i]) for a in w)


def _extend_paths(spec: SpongeSpec, N: int, cap: int, allowed=None) -> np.ndarray:
    """All legal N-letter digit-index paths in lexicographic order.

    ``allowed`` optionally gives, per position, a boolean mask over digits.
    """
    if N < 1:
        raise ValueError("word length N must be >= 1")
    n = spec.n_digits
    succ = spec.successor_lists()
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(s) for s in succ])
    indices = np.fromiter((j for s in succ for j in s), dtype=np.int64, count=indptr[-1])

    first = np.arange(n, dtype=np.int64)
    if allowed is not None:
        first = first[allowed[0]]
    words = first.astype(np.int16).reshape(-1, 1)
    for pos in range(1, N):
        last = words[:, -1].astype(np.int64)
        if allowed is not None:
            mask = allowed[pos][indices]
            kept = np.cumsum(np.concatenate([[0], mask.astype(np.int64)]))
            deg = kept[indptr[last + 1]] - kept[indptr[last]]
            pool = indices[mask]
            start = kept[indptr[last]]
        else:
            deg = indptr[last + 1] - indptr[last]
            pool = indices
            start = indptr[last]
        total = int(deg.sum())
        if total > cap:
            raise ResourceLimitError(
                f"enumerating {total} words of length {pos + 1} exceeds cap {cap}"
            )
        rows = np.repeat(np.arange(len(words)), deg)
        offs = np.arange(total) - np.repeat(np.cumsum(deg) - deg, deg)
        nxt = pool[np.repeat(start, deg) + offs]
        words = np.concatenate([words[rows], nxt.astype(np.int16).reshape(-1, 1)], axis=1)
    return words


class WordTable:
    """Omega|_N together with its projection hierarchy.

    ``words`` holds one row of digit indices per word of Omega|_N, in
    lexicographic order.  For each level ``i`` the array ``ids[i]`` assigns
    every row the index of its level-``i`` projection among the sorted words
    of pi_i(Omega)|_N; ``parent[i]`` maps level-``i`` word ids to level
    ``i - 1`` ids (defined for ``i >= 2``).
    """

    def __init__(self, spec: SpongeSpec, N: int, cap: int = DEFAULT_CAP):
        total = count_words(spec, spec.r, N)
        if total > cap:
            raise ResourceLimitError(f"|Omega|_{N}| = {total} exceeds cap {cap}")
        self.spec = spec
        self.N = N
        self.words = _extend_paths(spec, N, cap)
        self.words.setflags(write=False)
        self.ids = {}
        self.reps = {}
        self.parent = {}
        for i in range(1, spec.r + 1):
            letters = spec.letter_codes(i)[self.words.astype(np.int64)]
            k = len(spec.alphabet(i))
            code = np.zeros(len(self.words), dtype=np.int64)
            for pos in range(N):
                code = code * k + letters[:, pos]
                _, code = np.unique(code, return_inverse=True)
                code = code.reshape(-1)
            uniq, rep = np.unique(code, return_index=True)
            self.ids[i] = code
            self.reps[i] = rep
            self.ids[i].setflags(write=False)
        for i in range(2, spec.r + 1):
            self.parent[i] = self.ids[i - 1][self.reps[i]]
        self._index = {}

    def count(self, level: int) -> int:
        return len(self.reps[level])

    def word(self, level: int, k: int) -> Word:
        """The level-``level`` word with id ``k`` as a tuple of letters."""
        row = self.words[self.reps[level][k]]
        return tuple(self.spec.digits[d][:level] for d in row)

    def words_at(self, level: int) -> list:
        return [self.word(level, k) for k in range(self.count(level))]

    def index(self, level: int) -> dict:
        """Lookup table word tuple -> id at ``level`` (built on first use)."""
        if level not in self._index:
            self._index[level] = {self.word(level, k): k for k in range(self.count(level))}
        return self._index[level]

    def id_of(self, w: Sequence[Sequence[int]]) -> int:
        w = tuple(tuple(a) for a in w)
        level = word_level(w)
        self.spec.check_level(level)
        if len(w) != self.N:
            raise IllegalWordError(f"word has length {len(w)}, expected N={self.N}")
        try:
            return self.index(level)[w]
        except KeyError:
            raise IllegalWordError(f"{w} is not a legal word at level {level}") from None

    def children(self, level: int) -> list:
        """For each level-``level`` id, the sorted ids of its level+1 fiber."""
        par = self.parent[level + 1]
        order = np.argsort(par, kind="stable")
        bounds = np.searchsorted(par[order], np.arange(self.count(level) + 1))
        return [order[bounds[k] : bounds[k + 1]] for k in range(self.count(level))]


@functools.lru_cache(maxsize=32)
def word_table(spec: SpongeSpec, N: int, cap: int = DEFAULT_CAP) -> WordTable:
    """Cached :class:`WordTable` for ``(spec, N)``."""
    return WordTable(spec, N, cap)


def enumerate_words(spec: SpongeSpec, level: int, N: int, cap: int = DEFAULT_CAP) -> list:
    """Sorted list of the words of pi_level(Omega)|_N."""
    spec.check_level(level)
    return word_table(spec, N, cap).words_at(level)


def count_words(spec: SpongeSpec, level: int, N: int) -> int:
    """Exact ``|pi_level(Omega)|_N|`` via the determinized transfer matrix."""
    from .entropy import determinize_projection

    spec.check_level(level)
    if N < 1:
        raise ValueError("word length N must be >= 1")
    return determinize_projection(spec, level).count(N)


def fiber(spec: SpongeSpec, level: int, v: Sequence[Sequence[int]], N: int,
          cap: int = DEFAULT_CAP) -> list:
    """Level ``level + 1`` words lying over the level-``level`` word ``v``."""
    spec.check_level(level)
    if level >= spec.r:
        raise LevelError(f"no fiber above the top level {spec.r}")
    v = tuple(tuple(a) for a in v)
    if len(v) != N or word_level(v) != level:
        raise IllegalWordError(f"{v} is not a level-{level} word of length {N}")
    allowed = [np.array([d[:level] == a for d in spec.digits]) for a in v]
    paths = _extend_paths(spec, N, cap, allowed)
    if len(paths) == 0:
        raise IllegalWordError(f"{v} is not a legal word at level {level}")
    out = {tuple(spec.digits[d][: level + 1] for d in row) for row in paths}
    return sorted(out)
