import math
import random

import pytest

from spongedim import samples
from spongedim.dimension import (
    analyze,
    classical_sponge_dimensions,
    mean_hausdorff_dimension,
    metric_mean_dimension,
    uniform_fibre_check,
)
from spongedim.entropy import entropies
from spongedim.errors import SpecError
from spongedim.subshift import SpongeSpec, enumerate_words, fiber

L2, L3 = math.log(2), math.log(3)
CARPET_H = math.log(1 + 2 ** (L2 / L3)) / L2


def test_metric_mean_dimension_examples(carpet, cube, golden_pair):
    assert abs(metric_mean_dimension(cube) - 3) < 1e-12
    assert abs(metric_mean_dimension(carpet) - (2 - L2 / L3)) < 1e-12
    h = entropies(golden_pair)[-1].exact_value
    assert metric_mean_dimension(golden_pair) == pytest.approx(h / L2, abs=1e-12)


def test_mean_hausdorff_examples(carpet, cube, uniform):
    up, lo = mean_hausdorff_dimension(carpet)
    assert abs(up - CARPET_H) < 1e-6 and abs(lo - CARPET_H) < 1e-6
    up, lo = mean_hausdorff_dimension(uniform)
    assert abs(up - 1.5) < 1e-9 and abs(lo - 1.5) < 1e-9
    up, lo = mean_hausdorff_dimension(cube, N_max=2)
    assert lo <= 3 <= up and up - lo < 1e-6


def test_uniform_fibres(carpet, cube, uniform):
    u = uniform_fibre_check(uniform)
    assert u.levels == (True,) and u.certified
    assert uniform_fibre_check(carpet).levels == (False,)
    assert uniform_fibre_check(cube).levels == (True, True)


def test_sft_uniformity_is_evidence_only(golden_pair):
    u = uniform_fibre_check(golden_pair, N_max=5)
    assert u.all_uniform and u.status == "evidence" and not u.certified


def test_classical(carpet, uniform):
    mink, haus = classical_sponge_dimensions(carpet)
    assert mink == pytest.approx(2 - L2 / L3, abs=1e-12)
    assert haus == pytest.approx(CARPET_H, abs=1e-12)
    assert classical_sponge_dimensions(uniform) == pytest.approx((1.5, 1.5), abs=1e-12)
    column = SpongeSpec.full((2, 3), [(0, 0), (0, 1)])
    mink, haus = classical_sponge_dimensions(column)
    assert mink == pytest.approx(L2 / L3, abs=1e-12) and haus == pytest.approx(mink, abs=1e-12)
    with pytest.raises(SpecError):
        classical_sponge_dimensions(samples.golden_mean_pair())


def test_report(named):
    rep = analyze(named, N_max=3, M_max=3)
    assert rep.check() == []
    assert rep.mdim_H_lower <= rep.mdim_H_upper + 1e-6
    assert rep.mdim_H_lower <= rep.mdim_M + 1e-6
    d = rep.to_dict()
    assert d["problems"] == [] and len(d["ratio_table"]) == 9


@pytest.mark.parametrize("seed", range(10))
def test_coincidence_and_gap(seed):
    spec = samples.random_full_spec(random.Random(seed), r_max=3, n_max=8)
    rep = analyze(spec, N_max=2, M_max=2)
    mink, haus = rep.classical
    if rep.uniform.certified:
        assert abs(rep.mdim_H_upper - rep.mdim_M) < 1e-6
        assert abs(mink - haus) < 1e-9
    else:
        assert haus < mink - 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_carpet_only_path(seed):
    """Two-level outputs against a direct fibre-count computation."""
    rng = random.Random(300 + seed)
    spec = None
    while spec is None or spec.r != 2:
        spec = samples.random_full_spec(rng, r_max=2, n_max=7)
    a = L2 / L3 if spec.m == (2, 3) else math.log(spec.m[0]) / math.log(spec.m[1])
    z1 = sum(len(fiber(spec, 1, v, 1)) ** a for v in enumerate_words(spec, 1, 1))
    haus = math.log(z1) / math.log(spec.m[0])
    mink = (math.log(spec.n_digits) / math.log(spec.m[1])
            + (1 / math.log(spec.m[0]) - 1 / math.log(spec.m[1])) * math.log(len(spec.alphabet(1))))
    rep = analyze(spec, N_max=1, M_max=1)
    assert abs(rep.classical[1] - haus) < 1e-12
    assert abs(rep.mdim_M - mink) < 1e-12
