"""Acceptance criteria, one test each.

Every test prints a PASS/FAIL line (collected again in the terminal summary).
Criteria that cannot hold as stated are implemented faithfully and marked
xfail(strict=True): they must keep failing, and the reason is given inline.
"""
import math
import time

import numpy as np
import pytest

from ldis import harness
from ldis.distributions import Exponential, FiniteDiscrete, Gaussian
from ldis.events import EventSet
from ldis.limits import (
    DEFAULT_R_GRID,
    ZERO_HIT,
    PathMixture,
    is_log_efficient,
    lra_curve,
    mixture_lra,
    y_limit,
)
from ldis.mc_engine import SampleSchedule, run_cell, sweep
from ldis.oracle import enumerate_exact, grid_minimize
from ldis.rate_functions import legendre, moment_rate

G = Gaussian(0.0, 1.0)
B = EventSet.above(0.8)
I_EXP = 0.3 - math.log(1.3)  # rate of Exp(1) at 1.3


def test_1_rate_function_exactness(criterion):
    t0 = time.perf_counter()
    v = legendre(Exponential(1.0), 1.3).value
    xs = np.linspace(-5, 5, 100)
    worst = max(abs(legendre(G, x).value - 0.5 * x * x) for x in xs)
    dt = time.perf_counter() - t0
    ok = abs(v - 0.0376357) <= 1e-6 and worst <= 1e-9 and dt < 1.0
    criterion("1", ok, f"I_exp(1.3)={v:.10f} (0.0376357 +- 1e-6), gaussian max err {worst:.1e} (<= 1e-9), {dt:.3f}s (< 1s)")
    assert ok


@pytest.fixture(scope="module")
def exp2_runs():
    t0 = time.perf_counter()
    run = harness.run_preset("exp2", seeds=(1, 2, 3, 4, 5))
    return run, time.perf_counter() - t0


def _y_table(run, label):
    """{(seed, n): Y} for one scenario of a preset run."""
    out = {}
    for (lab, _), res in zip(run.scenarios, run.results):
        if lab != label:
            continue
        for rep in res.reports:
            for rec in rep.records:
                if rec["status"] == "ok":
                    out[(rep.seed, rec["n"])] = rec["y"]
    return out


def test_2_exponential_experiment(exp2_runs, criterion):
    run, dt = exp2_runs
    y1, y2 = _y_table(run, "q1"), _y_table(run, "q2")
    seeds = sorted({s for s, _ in y1})
    ns = sorted({n for _, n in y1})
    at400 = [y1[(s, 400)] for s in seeds]
    near = all(abs(v - 0.0376) <= 0.015 for v in at400)
    above = all(y2[k] > y1[k] for k in y1)
    # finite-n bias shrinks like log(n)/n, so q1's Y must fall toward I(b)
    trend = all(all(y1[(s, a)] > y1[(s, b)] for a, b in zip(ns, ns[1:])) for s in seeds)
    ok = near and above and trend and dt < 600 and seeds == [1, 2, 3, 4, 5] and ns == [100, 200, 300, 400]
    criterion(
        "2",
        ok,
        f"q1 Y_400 in [{min(at400):.4f}, {max(at400):.4f}] (0.0376 +- 0.015); "
        f"q2 > q1 in all {len(y1)} cells: {above}; q1 decreasing in n: {trend}; {dt:.0f}s (< 600s)",
    )
    assert ok


@pytest.mark.xfail(strict=True, reason="finite-n bias: the exact Y_30 is 0.401, outside 0.32 +- 10%")
def test_3_crude_monte_carlo_experiment(criterion):
    t0 = time.perf_counter()
    low = SampleSchedule((30,), (0.6, 0.7), kind="c", reference_rate=0.32, cap=5 * 10**8)
    high = SampleSchedule((30,), (1.1, 1.2, 1.3, 1.4, 1.5, 1.6), kind="c", reference_rate=0.32, cap=5 * 10**8)
    zero, cells, ys = 0, 0, []
    for seed in range(1, 11):
        for rec in sweep(low, G, G, B, seed=seed).records:
            cells += 1
            zero += rec["label"] == "zero-hit"
        ys += [rec["y"] for rec in sweep(high, G, G, B, seed=seed).records]
    dt = time.perf_counter() - t0
    frac = zero / cells
    stable = all(abs(y - 0.32) <= 0.032 for y in ys)
    ok = stable and frac >= 0.8 and dt < 300
    criterion(
        "3",
        ok,
        f"Y_30(c>=1.1) in [{min(ys):.4f}, {max(ys):.4f}] vs 0.32 +- 0.032: {stable}; "
        f"zero-hit share for c<=0.7: {frac:.0%} (>= 80%); {dt:.0f}s (< 300s)",
    )
    assert ok


def test_4_zero_hit_phase_boundary(criterion):
    q = G.tilt(0.4)
    below = [y_limit(G, q, r, B) for r in np.linspace(0.001, 0.0799, 80)]
    above = [y_limit(G, q, r, B) for r in np.linspace(0.081, 4.0, 80)]
    lim_ok = all(v == ZERO_HIT for v in below) and all(abs(v + 0.32) <= 1e-12 for v in above)
    n = 60
    hits = reps = 0
    finite = total = 0
    below_r, above_r = (0.02, 0.04, 0.06, 0.07), (0.15, 0.2)
    for seed in range(1, 11):
        # cells on one seed are nested prefixes, so the largest one holds every
        # distinct replication below the boundary
        m = math.floor(math.exp(max(below_r) * n))
        c = run_cell(G, q, n, m, B, seed=seed, checkpoints=[m])
        hits += c.hit_count
        reps += m
        for r in above_r:
            m = math.floor(math.exp(r * n))
            c = run_cell(G, q, n, m, B, seed=seed, checkpoints=[m])
            total += 1
            finite += math.isfinite(c.y)
    rate_below, share_above = hits / reps, finite / total
    ok = lim_ok and rate_below < 0.01 and share_above > 0.5
    criterion(
        "4",
        ok,
        f"limit zero-hit below 0.08 and -0.32 above 0.081: {lim_ok}; "
        f"MC n=60 hit rate below {rate_below:.2%} of {reps} replications (< 1%), finite-Y share above {share_above:.0%} (> 50%)",
    )
    assert ok


def _random_instance(rng):
    k = int(rng.integers(2, 4))
    pts = np.sort(rng.choice(np.arange(-3, 4), size=k, replace=False)).astype(float)
    probs = rng.dirichlet(np.ones(k) * 2.0)
    p = FiniteDiscrete(tuple(pts), tuple(probs / probs.sum()))
    n = int(rng.integers(2, 13))
    mu = p.mean()
    b = float(mu + rng.uniform(0.2, 0.8) * (pts[-1] - mu))
    A = EventSet.above(b)
    q = p.tilt(float(rng.uniform(0.2, 1.2)))
    return p, q, n, A


def test_5_unbiasedness_oracle_equivalence(criterion):
    rng = np.random.default_rng(20240605)
    t0 = time.perf_counter()
    exact_ok, within, worst = True, 0, 0.0
    for i in range(50):
        p, q, n, A = _random_instance(rng)
        alpha = enumerate_exact(p, p, n, A).value
        ez = enumerate_exact(p, q, n, A).value
        rel = abs(ez / alpha - 1.0)
        worst = max(worst, rel)
        exact_ok &= rel <= 1e-12
        c = run_cell(p, q, n, 10**5, A, seed=1000 + i, checkpoints=[10**5])
        se = math.sqrt(c.srv.points[-1].srv) if c.hit_count else 0.0
        err = abs(math.expm1(c.log_alpha_hat - math.log(alpha)))
        within += se > 0 and err <= 3 * se
    dt = time.perf_counter() - t0
    ok = exact_ok and within >= 48 and dt < 60
    criterion(
        "5",
        ok,
        f"enumeration E^Q Z = alpha, worst rel diff {worst:.1e}; MC within 3 SE in {within}/50 (>= 95%); {dt:.1f}s (< 60s)",
    )
    assert ok


def _prefix_cells():
    """Nested-prefix cells: one stream per (scenario, seed, n), read at growing m."""
    cases = [(G, G.tilt(th), B) for th in (0.0, 0.4, 0.8, 2.0)]
    sched = SampleSchedule((10, 20), tuple(np.round(np.arange(0.1, 0.75, 0.05), 2)), cap=10**7)
    for p, q, A in cases:
        for seed in (1, 2, 3):
            rep = sweep(sched, p, q, A, seed=seed)
            for n in sched.n_values:
                recs = [r for r in rep.records if r["n"] == n and r["status"] == "ok"]
                yield rep, n, recs


@pytest.mark.xfail(strict=True, reason="a longer prefix adds zero terms and shrinks the mean; the ordering holds only in the limit")
def test_6_monotonicity_on_nested_prefixes(criterion):
    tested = bad = 0
    for _, n, recs in _prefix_cells():
        logs = [r["moments"][0]["log_mean"] / n for r in recs]
        tested += 1
        bad += any(b < a for a, b in zip(logs, logs[1:]))
    ok = bad == 0
    criterion("6", ok, f"(1/n) log alpha-hat nondecreasing in r on {tested - bad}/{tested} prefix sequences (need all)")
    assert ok


def test_6_monotone_parts_that_do_hold():
    # cumulative sums over nested prefixes and the limiting exponent are monotone
    for _, n, recs in _prefix_cells():
        logsums = [r["moments"][0]["log_mean"] + math.log(r["m"]) for r in recs]
        assert all(b >= a for a, b in zip(logsums, logsums[1:]))
    for th in (0.0, 0.4, 0.8, 2.0):
        ys = [y_limit(G, G.tilt(th), r, B) for r in DEFAULT_R_GRID]
        assert all(b >= a for a, b in zip(ys, ys[1:]))


def _oracle_lra(r, th=1.0, a=1.0, b=1.2):
    def h(x):
        return 0.5 * x * x + 0.5 * max(r - 0.5 * (x - th) ** 2, 0.0)

    return grid_minimize(h, EventSet.two_sided(a, b), 10**4)[1] - 0.5 * a * a


def test_7_lra_characterization(criterion):
    one = lra_curve(G, G.tilt(0.8), B)
    err_one = float(np.max(np.abs(one.values - one.r_grid / 2)))
    two = lra_curve(G, G.tilt(1.0), EventSet.two_sided(1.0, 1.2))
    r = two.r_grid
    inside = (r >= 0.44) & (r <= 2.42)
    err_plateau = float(np.max(np.abs(two.values[inside] - 0.22)))
    oracle = np.array([_oracle_lra(float(v)) for v in r])
    err_oracle = float(np.max(np.abs(oracle - two.values)))
    flat = np.abs(oracle - 0.22) <= 1e-6
    k0, k1 = int(np.argmax(flat)), len(flat) - 1 - int(np.argmax(flat[::-1]))
    grid_bps = (r[k0 - 1], r[k0]), (r[k1], r[k1 + 1])
    bps = sorted(two.breakpoints)
    located = len(bps) == 2 and all(lo <= bp <= hi for bp, (lo, hi) in zip(bps, grid_bps))
    ok = err_one <= 1e-9 and err_plateau <= 1e-6 and located and err_oracle <= 1e-6
    criterion(
        "7",
        ok,
        f"one-sided |LRA - r/2| max {err_one:.1e} (<= 1e-9); plateau |LRA - 0.22| max {err_plateau:.1e} (<= 1e-6); "
        f"breakpoints {bps[0]:.6f}, {bps[1]:.6f} inside grid cells of the oracle's: {located}; oracle max diff {err_oracle:.1e}",
    )
    assert ok


def test_8_mixture_lra(criterion):
    A = EventSet.two_sided(1.0, 1.2)
    comps = [G.tilt(1.0), G, G.tilt(-1.2)]
    curves = [lra_curve(G, c, A) for c in comps]
    mix = mixture_lra(comps, G, A)
    exact_max = bool(np.array_equal(mix.values, np.maximum.reduce([c.values for c in curves])))
    q = PathMixture((0.5, 0.5), (G.tilt(1.0), G.tilt(-1.2)))
    y1 = y_limit(G, q, math.inf, A, 1.0)
    y2 = y_limit(G, q, math.inf, A, 2.0)
    eff = is_log_efficient(G, q, A) and abs(y2 - 2 * y1) <= 1e-6
    ok = exact_max and eff
    criterion("8", ok, f"pointwise max exact on shared grid: {exact_max}; half/half mixture y2 - 2 y1 = {y2 - 2 * y1:.1e}, efficient: {eff}")
    assert ok


def test_9_second_moment_exponent(criterion):
    a, b = 1.0, 2.0
    A = EventSet.two_sided(a, b)
    analytic = -0.5 * b * b + a * b + 0.5 * a * a
    _, vmin = grid_minimize(lambda x: moment_rate(G, a, 2.0, x), A, 10**5)
    lib = y_limit(G, G.tilt(a), math.inf, A, 2.0)
    close = abs(-vmin - analytic) <= 1e-9 and abs(lib - analytic) <= 1e-9
    # discrete analogue: fair +-1 steps, A = {x >= 1/2} u {x <= -1}, tilt to mean 1/2
    R = FiniteDiscrete((-1.0, 1.0), (0.5, 0.5))
    AR = EventSet(((-math.inf, -1.0), (0.5, math.inf)))
    qR = R.tilt(math.atanh(0.5))
    lim = y_limit(R, qR, math.inf, AR, 2.0)
    gaps = [abs(enumerate_exact(R, qR, n, AR, xi=2.0).log_value / n - lim) for n in (4, 8, 12)]
    mono = gaps[0] > gaps[1] > gaps[2]
    ok = close and mono
    criterion(
        "9",
        ok,
        f"limit {lib:.12f} and grid {-vmin:.12f} vs analytic {analytic} (1e-9); "
        f"discrete gaps n=4,8,12: {gaps[0]:.2e}, {gaps[1]:.2e}, {gaps[2]:.2e} decreasing: {mono}",
    )
    assert ok


def test_10_determinism(criterion):
    same = {}
    for name in harness.PRESETS:
        texts = [
            harness.run_preset(name, seeds=(1, 2), threads=t, quick=True).json()
            for t in (1, 4, 4)
        ]
        same[name] = len(set(texts)) == 1
    # one full-size cell spanning many chunks
    sched = SampleSchedule((300,), (0.036,), cap=2 * 10**8)
    args = (sched, Exponential(1.0), Exponential(1 / 1.3), EventSet.above(1.3))
    big = {sweep(*args, seed=7, threads=t).to_json() for t in (1, 4)}
    same["exp2 n=300 full"] = len(big) == 1
    ok = all(same.values())
    criterion("10", ok, "byte-identical reports for threads 1, 4 and a rerun: " + ", ".join(f"{k}={v}" for k, v in same.items()))
    assert ok
