"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run under pytest (lines go straight to the terminal) or directly with
``python3 tests/test_acceptance.py``.
"""

import math
import random
import sys
import time

import numpy as np
import pytest

from spongedim import samples
from spongedim.dimension import analyze
from spongedim.entropy import topological_entropy
from spongedim.errors import ResourceLimitError
from spongedim.geometry import verify_sandwich
from spongedim.measures import build_fN, log_mu_cylinder, log_mu_identity, random_cylinder
from spongedim.subshift import count_words
from spongedim.variational import (
    BernoulliModel,
    markov_lower_bound,
    optimize_bernoulli,
    weighted_gradient_bernoulli,
    weighted_value_bernoulli,
)
from spongedim.weighted import closed_form_weights, exponents_and_weights, weighted_entropy_estimate, z_value

L2, L3 = math.log(2), math.log(3)
GOLDEN = math.log((1 + math.sqrt(5)) / 2)


def _named():
    return [samples.NAMED[k]() for k in sorted(samples.NAMED)]


_CAPMAN = {}


@pytest.fixture(autouse=True)
def _terminal(request):
    # let the verdict lines through pytest's output capture
    _CAPMAN["capman"] = request.config.pluginmanager.getplugin("capturemanager")
    yield
    _CAPMAN.clear()


def _emit(k, ok, detail):
    line = f"CRITERION {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    capman = _CAPMAN.get("capman")
    if capman is None:
        print(line, flush=True)
    else:
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
    return ok


def test_criterion_01_full_cube():
    t0 = time.perf_counter()
    rep = analyze(samples.full_cube())
    elapsed = time.perf_counter() - t0
    ok = (abs(rep.mdim_M - 3) <= 1e-12 and rep.mdim_H_lower <= 3 <= rep.mdim_H_upper
          and rep.mdim_H_width < 1e-6 and elapsed < 10)
    assert _emit(1, ok, f"mdim_M={rep.mdim_M!r} mdim_H=[{rep.mdim_H_lower!r}, {rep.mdim_H_upper!r}] "
                        f"width={rep.mdim_H_width:.2e} time={elapsed:.2f}s")


def test_criterion_02_carpet():
    rep = analyze(samples.mcmullen_carpet())
    mink = 2 - L2 / L3
    haus = math.log(1 + 2 ** (L2 / L3)) / L2
    ok = (abs(rep.mdim_M - mink) <= 1e-12
          and abs(rep.mdim_H_upper - haus) <= 1e-6 and abs(rep.mdim_H_lower - haus) <= 1e-6
          and rep.mdim_H_width <= 1e-6 and rep.mdim_M - rep.mdim_H_upper > 0.01)
    assert _emit(2, ok, f"mdim_M err={abs(rep.mdim_M - mink):.1e} mdim_H=[{rep.mdim_H_lower:.12f}, "
                        f"{rep.mdim_H_upper:.12f}] target {haus:.12f} gap={rep.mdim_M - rep.mdim_H_upper:.4f}")


def test_criterion_03_uniform_fibres():
    rep = analyze(samples.uniform_carpet())
    diff = max(abs(rep.mdim_H_upper - rep.mdim_M), abs(rep.mdim_H_lower - rep.mdim_M))
    ok = diff < 1e-9 and rep.coincidence_flag and rep.coincidence_status == "certified"
    assert _emit(3, ok, f"|mdim_H - mdim_M| <= {diff:.1e}, coincidence {rep.coincidence_flag} "
                        f"({rep.coincidence_status})")


def test_criterion_04_weights():
    rng = random.Random(4)
    worst, worst_sum = 0.0, 0.0
    for _ in range(50):
        m = samples.random_moduli(rng, r_max=6, m_max=1000)
        ew = exponents_and_weights(m)
        worst = max(worst, max(abs(x - y) for x, y in zip(ew.w, closed_form_weights(m))))
        worst_sum = max(worst_sum, abs(sum(ew.w) - 1))
    ok = worst <= 1e-12 and worst_sum <= 1e-12
    assert _emit(4, ok, f"50 moduli vectors, max |w - closed form|={worst:.1e}, max |sum - 1|={worst_sum:.1e}")


def test_criterion_05_z_laws():
    rng = random.Random(5)
    prod_err = 0.0
    bracket_ok = True
    for _ in range(20):
        spec = samples.random_full_spec(rng, r_max=4, n_max=12)
        z1 = z_value(spec, N=1).total
        for N in range(1, 7):
            zt = z_value(spec, N=N)
            prod_err = max(prod_err, abs(zt.total / z1**N - 1))
            bracket_ok &= count_words(spec, 1, N) <= zt.total <= count_words(spec, spec.r, N)
    sub_gap = -math.inf
    for _ in range(20):
        spec = samples.random_sft_spec(rng)
        lz = [z_value(spec, N=N).log_total for N in range(1, 9)]
        for n in range(1, 8):
            for m in range(1, 9 - n):
                sub_gap = max(sub_gap, lz[n + m - 1] - lz[n - 1] - lz[m - 1])
        for N in range(1, 7):
            total = z_value(spec, N=N).total
            bracket_ok &= count_words(spec, 1, N) <= total <= count_words(spec, spec.r, N)
    ok = prod_err <= 1e-10 and sub_gap <= 1e-9 and bracket_ok
    assert _emit(5, ok, f"max |Z_N/Z_1^N - 1|={prod_err:.1e}, max subadditivity excess={sub_gap:.1e}, "
                        f"bracketing {'holds' if bracket_ok else 'FAILS'}")


def test_criterion_06_measures():
    specs = _named() + [samples.random_sft_spec(random.Random(60 + k)) for k in range(4)]
    norm = fact = 0.0
    checked = skipped = 0
    for spec in specs:
        for N in range(1, 6):
            try:
                mu = build_fN(spec, N=N)
            except ResourceLimitError:
                skipped += 1
                continue
            checked += 1
            norm = max(norm, mu.normalization_error())
            fact = max(fact, mu.factorization_error())
    rng = random.Random(6)
    agree = 0.0
    for _ in range(200):
        spec = specs[rng.randrange(len(specs))]
        N = rng.randint(1, 2 if spec.n_digits > 10 else 3)
        M = rng.randint(1, 8)
        mu = build_fN(spec, N=N)
        cyl = random_cylinder(spec, N, M, rng, mu)
        agree = max(agree, abs(log_mu_cylinder(mu, cyl) - log_mu_identity(mu, cyl)))
    ok = norm <= 1e-10 and fact <= 1e-12 and agree <= 1e-10
    assert _emit(6, ok, f"{checked} (spec, N) pairs ({skipped} over cap): normalization {norm:.1e}, "
                        f"factorization {fact:.1e}; 200 cylinders max route gap {agree:.1e}")


def test_criterion_07_sandwich():
    checked, guarded, bad = 0, 0, []
    for spec in _named():
        for N in (1, 2):
            for M in (1, 2, 3, 4):
                try:
                    rep = verify_sandwich(spec, N, M)
                except ResourceLimitError:
                    guarded += 1
                    continue
                checked += 1
                if not (rep.verified and rep.cube_count == rep.formula_count == rep.separated_count):
                    bad.append((spec.m, N, M))
    ok = not bad and checked > 0
    assert _emit(7, ok, f"{checked} (spec, N, M) cases verified exactly, {guarded} beyond the guard, "
                        f"failures: {bad or 'none'}")


def test_criterion_08_variational():
    rng = random.Random(8)
    instances = _named() + [samples.random_full_spec(rng) for _ in range(10)] + \
        [samples.random_sft_spec(rng) for _ in range(10)]
    sound_gap, opt_err = -math.inf, 0.0
    for spec in instances:
        upper = weighted_entropy_estimate(spec, N_max=5 if spec.n_digits <= 12 else 3).fekete_upper
        if spec.kind == "full":
            _, lower = optimize_bernoulli(spec)
            opt_err = max(opt_err, abs(lower - z_value(spec, N=1).log_total))
        else:
            lower = markov_lower_bound(spec, block=4)
        sound_gap = max(sound_gap, lower - upper)
    grad_err = 0.0
    nrng = np.random.default_rng(8)
    for k in range(20):
        spec = samples.random_full_spec(random.Random(800 + k), n_max=8)
        p = nrng.dirichlet(np.ones(spec.n_digits)) * 0.9 + 0.1 / spec.n_digits
        model = BernoulliModel(spec, p / p.sum())
        g = weighted_gradient_bernoulli(model)
        d = nrng.normal(size=spec.n_digits)
        d -= d.mean()
        h = 1e-6
        fd = (weighted_value_bernoulli(BernoulliModel(spec, model.p + h * d))
              - weighted_value_bernoulli(BernoulliModel(spec, model.p - h * d))) / (2 * h)
        grad_err = max(grad_err, abs(fd - g @ d))
    ok = sound_gap <= 1e-6 and opt_err < 1e-6 and grad_err < 1e-6
    assert _emit(8, ok, f"{len(instances)} instances, max(lower - upper)={sound_gap:.1e}, "
                        f"|opt - log Z_1|<={opt_err:.1e}, gradient err {grad_err:.1e} at 20 points")


def test_criterion_09_ordering():
    rng = random.Random(9)
    worst = -math.inf
    for k in range(20):
        spec = samples.random_full_spec(rng) if k % 2 else samples.random_sft_spec(rng)
        rep = analyze(spec, N_max=3, M_max=2)
        worst = max(worst, rep.mdim_H_lower - rep.mdim_M)
    ok = worst <= 1e-6
    assert _emit(9, ok, f"20 mixed instances, max(mdim_H lower - mdim_M)={worst:.3e}")


def test_criterion_10_entropy():
    err = abs(topological_entropy(samples.golden_mean()).exact_value - GOLDEN)
    rng = random.Random(10)
    specs = _named() + [samples.random_sft_spec(rng) for _ in range(10)] + \
        [samples.random_full_spec(rng) for _ in range(5)]
    worst = -math.inf
    for spec in specs:
        for level in range(1, spec.r + 1):
            est = topological_entropy(spec, level)
            worst = max(worst, est.exact_value - est.fekete_upper)
    ok = err <= 1e-10 and worst <= 1e-9
    assert _emit(10, ok, f"golden-mean error {err:.1e}; max(spectral - Fekete)={worst:.1e} "
                         f"over {len(specs)} specs, all levels")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
