import logging
import random

import numpy as np
import pytest
from oracles import brute_words
from hypothesis import given, settings
from hypothesis import strategies as st

from spongedim import samples
from spongedim.errors import IllegalWordError, LevelError, ResourceLimitError, SpecError
from spongedim.subshift import (
    SpongeSpec,
    count_words,
    enumerate_words,
    fiber,
    project_word,
    word_table,
)


def test_project_word_examples():
    assert project_word([(1, 0, 2), (0, 1, 4)], 2) == ((1, 0), (0, 1))
    assert project_word([(1, 0)], 1) == ((1,),)


def test_project_word_rejects_bad_level():
    with pytest.raises(LevelError):
        project_word([(1, 0)], 2)
    with pytest.raises(LevelError):
        project_word([(1, 0)], 0)


@given(st.lists(st.tuples(*[st.integers(0, 4)] * 4), min_size=1, max_size=6))
def test_projection_composes(w):
    for i in range(1, 3):
        for j in range(i + 1, 4):
            assert project_word(project_word(w, j), i) == project_word(w, i)


def test_carpet_words(carpet):
    assert enumerate_words(carpet, 2, 1) == [((0, 0),), ((1, 0),), ((1, 2),)]
    assert enumerate_words(carpet, 1, 2) == [((0,), (0,)), ((0,), (1,)), ((1,), (0,)), ((1,), (1,))]
    assert count_words(carpet, 1, 3) == 8


def test_golden_counts(golden):
    assert count_words(golden, 1, 4) == 8
    assert count_words(golden, 1, 6) == 21
    assert len(enumerate_words(golden, 1, 4)) == 8


def test_full_counts_are_powers():
    rng = random.Random(3)
    for _ in range(10):
        spec = samples.random_full_spec(rng)
        for N in range(1, 5):
            assert count_words(spec, spec.r, N) == spec.n_digits**N


def test_fiber_examples(carpet):
    assert fiber(carpet, 1, [(1,)], 1) == [((1, 0),), ((1, 2),)]
    assert fiber(carpet, 1, [(0,)], 1) == [((0, 0),)]
    assert fiber(carpet, 1, [(0,), (1,)], 2) == [((0, 0), (1, 0)), ((0, 0), (1, 2))]


def test_fiber_rejects_illegal(golden_pair):
    with pytest.raises(IllegalWordError):
        fiber(golden_pair, 1, [(1,), (1,)], 2)
    with pytest.raises(LevelError):
        fiber(golden_pair, 2, [(1, 1)], 1)


@pytest.mark.parametrize("seed", range(8))
def test_enumeration_matches_brute_force(seed):
    rng = random.Random(seed)
    spec = samples.random_sft_spec(rng) if seed % 2 else samples.random_full_spec(rng, n_max=5)
    for N in range(1, 5):
        for level in range(1, spec.r + 1):
            expected = brute_words(spec, level, N)
            got = enumerate_words(spec, level, N)
            assert got == sorted(expected)
            assert count_words(spec, level, N) == len(expected)


@pytest.mark.parametrize("seed", range(6))
def test_language_laws(seed):
    spec = samples.random_sft_spec(random.Random(100 + seed))
    for level in range(1, spec.r + 1):
        counts = [count_words(spec, level, N) for N in range(1, 8)]
        for N in range(1, 7):
            assert counts[N] <= spec.n_digits * counts[N - 1]
        for a in range(1, 4):
            for b in range(1, 4):
                assert counts[a + b - 1] <= counts[a - 1] * counts[b - 1]
        if level < spec.r:
            for N in range(1, 6):
                assert counts[N - 1] <= count_words(spec, level + 1, N)
    # factorial language at N <= 6
    words = set(enumerate_words(spec, spec.r, 6))
    shorter = set(enumerate_words(spec, spec.r, 4))
    for w in words:
        for s in range(3):
            assert w[s : s + 4] in shorter


@pytest.mark.parametrize("seed", range(5))
def test_fibers_partition(seed):
    spec = samples.random_sft_spec(random.Random(200 + seed), r_max=3)
    if spec.r < 2:
        spec = samples.sft_carpet()
    for N in (1, 2, 3):
        for i in range(1, spec.r):
            parts = [fiber(spec, i, v, N) for v in enumerate_words(spec, i, N)]
            flat = [u for p in parts for u in p]
            assert all(parts)
            assert sorted(flat) == enumerate_words(spec, i + 1, N)
            assert sum(map(len, parts)) == count_words(spec, i + 1, N)


def test_word_table_ids_roundtrip(sft_carpet):
    t = word_table(sft_carpet, 3)
    for level in (1, 2):
        for k in range(t.count(level)):
            assert t.id_of(t.word(level, k)) == k
    with pytest.raises(IllegalWordError):
        t.id_of([(1, 1), (1, 1), (0, 0)])


def test_resource_guard():
    spec = samples.full_cube((2, 3, 5))
    with pytest.raises(ResourceLimitError):
        enumerate_words(spec, 3, 4, cap=1000)


@pytest.mark.parametrize(
    "kwargs, match",
    [
        (dict(m=(3, 2), digits=[(0, 0), (1, 1)]), "nondecreasing"),
        (dict(m=(2, 3), digits=[(0, 3), (1, 1)]), "out of range"),
        (dict(m=(2, 3), digits=[(0, 0)]), "at least two"),
        (dict(m=(2, 3), digits=[(0, 0), (0, 0)]), "duplicate"),
        (dict(m=(2,), digits=[(0,), (1,)], successors=[[0, 1], []]), r"\(1,\) has no allowed successor"),
        (dict(m=(2,), digits=[(0,), (1,)], successors=[[0], [0]]), r"\(1,\) has no allowed predecessor"),
    ],
)
def test_spec_validation(kwargs, match):
    with pytest.raises(SpecError, match=match):
        SpongeSpec(**{**kwargs, "digits": tuple(kwargs["digits"])})


def test_pruning_strips_dead_symbols(caplog):
    caplog.set_level(logging.WARNING, logger="spongedim.subshift")
    spec = SpongeSpec.sft_pruned((3,), [(0,), (1,), (2,)], [[0, 1], [0, 1], [0]])
    assert spec.digits == ((0,), (1,))
    assert "stripping dead symbol" in caplog.text


def test_digits_are_sorted_and_successors_remapped():
    a = SpongeSpec.sft((2,), [(1,), (0,)], successors=[[1], [0, 1]])
    b = SpongeSpec.sft((2,), [(0,), (1,)], successors=[[0, 1], [0]])
    assert a == b
    assert np.array_equal(a.adjacency(), [[1, 1], [1, 0]])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_counts_match_enumeration_random(seed):
    spec = samples.random_sft_spec(random.Random(seed), n_max=5)
    for N in range(1, 6):
        for level in range(1, spec.r + 1):
            assert count_words(spec, level, N) == len(enumerate_words(spec, level, N))
