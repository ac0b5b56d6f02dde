"""Importance-sampling simulation of random-walk tail probabilities.

Replication j of a cell with walk length n draws its randomness from its own
counter space (seed, j, n), so a run is a pure function of (seed, n, m) no
matter how replications are split over threads.  Hits are reduced chunk by
chunk in replication order with a max-shifted log-sum-exp, and a prefix of
m' < m replications reproduces a standalone run of size m' bit for bit.

Two samplers are used.  When every proposal component is an exponential tilt
of a Gaussian or Exponential nominal law, S_n is drawn directly (Gaussian or
Gamma) and the likelihood ratio is a function of S_n alone.  Otherwise the
walk is simulated coordinate by coordinate.
"""
from __future__ import annotations

import json
import math
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtr

from . import _kernels
from .distributions import DistributionModel, Exponential, Gaussian, support_contains
from .errors import AbsContError, BudgetError, DomainError, OracleUnavailable
from .events import EventSet
from .limits import PathMixture, Proposal, tilt_pieces
from .sampling import ContinuousTable, DiscreteTable, atom_grid
from .tables import csv_text

DEFAULT_CHUNK = 1 << 20
DEFAULT_CAP = 10**8
DEFAULT_SRV_EPS = 0.01
REPORT_VERSION = 1


def default_threads() -> int:
    env = os.environ.get("LDIS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# schedules


@dataclass(frozen=True)
class SampleSchedule:
    """m_n = floor(prefactor * exp(rate * n)); with kind "c" the grid holds
    multipliers c and rate = c * reference_rate."""

    n_values: tuple[int, ...]
    rates: tuple[float, ...]
    kind: str = "r"
    reference_rate: float | None = None
    prefactor: int = 100
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise DomainError("n_values must be positive integers")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise DomainError("n_values must be strictly ascending")
        if not self.rates or any(not r > 0 for r in self.rates):
            raise DomainError("rates must be positive")
        if self.kind not in ("r", "c"):
            raise DomainError("schedule kind is 'r' or 'c'")
        if self.kind == "c" and not (self.reference_rate and self.reference_rate > 0):
            raise DomainError("a c-schedule needs a positive reference_rate")
        if self.prefactor < 1 or self.cap < 1:
            raise DomainError("prefactor and cap must be positive")

    def effective_rate(self, value: float) -> float:
        return value * self.reference_rate if self.kind == "c" else value

    def raw_size(self, n: int, value: float) -> float:
        """prefactor * exp(rate n) before flooring (may be inf)."""
        try:
            return self.prefactor * math.exp(self.effective_rate(value) * n)
        except OverflowError:
            return math.inf

    def size(self, n: int, value: float) -> int:
        raw = self.raw_size(n, value)
        if raw > self.cap:
            raise BudgetError(f"m = {raw:.4g} at n={n}, {self.kind}={value:g} exceeds cap {self.cap}")
        return max(1, math.floor(raw))

    def to_config(self) -> dict:
        return {
            "n_values": list(self.n_values),
            "rates": list(self.rates),
            "kind": self.kind,
            "reference_rate": self.reference_rate,
            "prefactor": self.prefactor,
            "cap": self.cap,
        }


# results


@dataclass(frozen=True)
class MomentEstimate:
    xi: float
    log_mean: float
    hit_count: int
    m: int
    log_max_term: float


@dataclass(frozen=True)
class SrvPoint:
    m: int
    log_mean: float
    log_var: float | None
    srv: float | None

    @property
    def defined(self) -> bool:
        return self.srv is not None


@dataclass(frozen=True)
class SrvTrace:
    points: tuple[SrvPoint, ...]
    eps: float
    stop_flags: tuple[int, ...]

    def first_stop(self) -> SrvPoint | None:
        for pt in self.points:
            if pt.m in self.stop_flags:
                return pt
        return None


@dataclass(frozen=True)
class CellResult:
    n: int
    m: int
    moments: tuple[MomentEstimate, ...]
    srv: SrvTrace
    weighted_mean: float | None
    mean_log_lr: float | None

    @property
    def hit_count(self) -> int:
        return self.moments[0].hit_count

    def moment(self, xi: float) -> MomentEstimate:
        for mo in self.moments:
            if mo.xi == xi:
                return mo
        raise KeyError(xi)

    @property
    def log_alpha_hat(self) -> float:
        return self.moment(1.0).log_mean

    @property
    def y(self) -> float:
        """Y_n = -(1/n) log alpha_hat; +inf for a zero-hit cell."""
        return -self.log_alpha_hat / self.n

    @property
    def label(self) -> str:
        return "zero-hit" if self.hit_count == 0 else "finite"


# streaming accumulation


class _Accumulator:
    """Per-xi running (max, shifted sum) plus the weighted-mean numerator."""

    def __init__(self, xis: Sequence[float]):
        self.xis = tuple(xis)
        self.mx = [-math.inf] * len(self.xis)
        self.sm = [0.0] * len(self.xis)
        self.wx = 0.0  # sum of exp(logl - mx[xi=1]) * xbar
        self.hits = 0
        self.sum_logl = 0.0
        self._one = self.xis.index(1.0)

    def copy(self) -> "_Accumulator":
        c = _Accumulator.__new__(_Accumulator)
        c.xis, c._one = self.xis, self._one
        c.mx, c.sm = list(self.mx), list(self.sm)
        c.wx, c.hits, c.sum_logl = self.wx, self.hits, self.sum_logl
        return c

    def add(self, logl: np.ndarray, xbar: np.ndarray) -> None:
        if logl.shape[0] == 0:
            return
        for k, xi in enumerate(self.xis):
            v = logl if xi == 1.0 else xi * logl
            M = float(np.max(v))
            e = np.exp(v - M)
            S = float(np.sum(e))
            scale_old, scale_new = self._merge(k, M, S)
            if k == self._one:
                self.wx = self.wx * scale_old + float(np.sum(e * xbar)) * scale_new
        self.hits += int(logl.shape[0])
        self.sum_logl += float(np.sum(logl))

    def _merge(self, k: int, M: float, S: float) -> tuple[float, float]:
        if M > self.mx[k]:
            a = math.exp(self.mx[k] - M) if self.mx[k] > -math.inf else 0.0
            self.sm[k] = self.sm[k] * a + S
            self.mx[k] = M
            return a, 1.0
        b = math.exp(M - self.mx[k])
        self.sm[k] = self.sm[k] + S * b
        return 1.0, b

    def log_mean(self, k: int, m: int) -> float:
        if self.hits == 0:
            return -math.inf
        return self.mx[k] + math.log(self.sm[k]) - math.log(m)

    def weighted_mean(self) -> float | None:
        if self.hits == 0:
            return None
        return self.wx / self.sm[self._one]


def two_pass_log_mean(logl: np.ndarray, m: int, xi: float = 1.0) -> float:
    """Reference max-shifted log mean of exp(xi * logl) over m replications."""
    if logl.shape[0] == 0:
        return -math.inf
    v = logl if xi == 1.0 else xi * logl
    M = float(np.max(v))
    return M + math.log(float(np.sum(np.exp(v - M)))) - math.log(m)


def _srv_point(acc: _Accumulator, m: int) -> SrvPoint:
    i1, i2 = acc.xis.index(1.0), acc.xis.index(2.0)
    l1, l2 = acc.log_mean(i1, m), acc.log_mean(i2, m)
    if acc.hits == 0 or m < 2:
        return SrvPoint(m, l1, -math.inf if acc.hits == 0 else None, None)
    # s^2 / (m alpha^2) = (M2 / M1^2 - 1) / (m - 1), with s^2 the unbiased variance
    ratio_m1 = math.expm1(l2 - 2.0 * l1)
    rel = max(ratio_m1, 0.0) * m / (m - 1)
    log_var = 2.0 * l1 + math.log(rel) if rel > 0 else -math.inf
    return SrvPoint(m, l1, log_var, rel / m)


# simulation plans


@dataclass
class _Plan:
    kind: str
    args: tuple

    def run(self, seed: np.uint64, n: int, j0: int, j1: int):
        size = j1 - j0
        logl = np.empty(size)
        xbar = np.empty(size)
        idx = np.empty(size, dtype=np.int64)
        fn = {
            "gauss": _kernels.chunk_gauss,
            "gamma": _kernels.chunk_gamma,
            "direct": _kernels.chunk_direct,
            "discrete": _kernels.chunk_discrete,
        }[self.kind]
        cnt = fn(seed, n, j0, j1, *self.args, logl, xbar, idx)
        return logl[:cnt], xbar[:cnt], idx[:cnt]


def _event_arrays(A: EventSet) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([a for a, _ in A], dtype=float)
    hi = np.array([b for _, b in A], dtype=float)
    return lo, hi


def _components(q: Proposal) -> list[tuple[float, DistributionModel]]:
    if isinstance(q, PathMixture):
        return list(zip(q.weights, q.components))
    return [(1.0, q)]


def check_absolute_continuity(p: DistributionModel, q: Proposal) -> None:
    """Structural check supp(p) within supp(q_k) for some path component."""
    if not any(support_contains(c, p) for _, c in _components(q)):
        raise AbsContError("support of the nominal law is not covered by the proposal")


def uses_sufficient_statistic(p: DistributionModel, q: Proposal) -> bool:
    return isinstance(p, (Gaussian, Exponential)) and tilt_pieces(p, q) is not None


def _build_plan(p: DistributionModel, q: Proposal, n: int, A: EventSet) -> _Plan:
    comps = _components(q)
    w = np.array([c[0] for c in comps])
    cum = np.cumsum(w)
    cum[-1] = 1.0
    logw = np.log(w)
    alo, ahi = _event_arrays(A)
    pieces = tilt_pieces(p, q) if isinstance(p, (Gaussian, Exponential)) else None
    if pieces is not None:
        theta = np.array([t for t, _ in pieces])
        lam = np.array([l for _, l in pieces])
        if isinstance(p, Gaussian):
            loc = np.array([n * c.mu for _, c in comps])
            scale = np.full(len(comps), math.sqrt(n * p.sigma2))
            zlo = (alo[None, :] * n - loc[:, None]) / scale[:, None]
            zhi = (ahi[None, :] * n - loc[:, None]) / scale[:, None]
            ulo, uhi = ndtr(zlo), ndtr(zhi)
            return _Plan("gauss", (cum, logw, theta, lam, loc, scale, np.ascontiguousarray(ulo), np.ascontiguousarray(uhi), alo, ahi))
        rate = np.array([c.rate for _, c in comps])
        return _Plan("gamma", (cum, logw, theta, lam, rate, alo, ahi))
    if p.is_discrete:
        dt = DiscreteTable(atom_grid(p))
        log_pi = [dt.add_sampling(c)[1] for _, c in comps]
        dens = np.vstack([dt.density_row(p)] + [dt.density_row(c) for _, c in comps])
        a = dt.arrays()
        return _Plan(
            "discrete",
            (
                cum, logw, np.array(log_pi), a["samp_first"], a["samp_count"], a["cumw"],
                a["doff"], a["dlen"], a["didx"], a["dcdf"], a["atoms"], np.ascontiguousarray(dens), alo, ahi,
            ),
        )
    ct = ContinuousTable()
    ct.add_density(p)
    for _, c in comps:
        ct.add_density(c)
    window = p.support()
    log_pi = [ct.add_sampling(c, window)[1] for _, c in comps]
    a = ct.arrays()
    return _Plan(
        "direct",
        (
            cum, logw, np.array(log_pi),
            a["dens_first"], a["dens_count"], a["samp_first"], a["samp_count"],
            a["logw"], a["cumw"], a["kind"], a["pa"], a["pb"], a["tlo"], a["flo"], a["fhi"], a["upper"],
            alo, ahi,
        ),
    )


def _stream(plan: _Plan, seed: int, n: int, m_total: int, cuts: Sequence[int], xis, threads: int, chunk: int):
    """Run replications [0, m_total) and snapshot the accumulator at each cut.

    Chunks are reduced strictly in order; a cut inside a chunk is served by a
    copy of the running accumulator plus the chunk's leading hits, which is
    exactly what a standalone run of that size would compute.
    """
    seed64 = np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cuts = sorted(set(int(c) for c in cuts))
    acc = _Accumulator(xis)
    snaps: dict[int, _Accumulator] = {}
    starts = list(range(0, m_total, chunk))
    ci = 0

    def consume(j0, j1, result):
        nonlocal ci
        logl, xbar, idx = result
        while ci < len(cuts) and cuts[ci] <= j1:
            c = cuts[ci]
            if c == j1:
                break
            k = int(np.searchsorted(idx, c))
            snap = acc.copy()
            snap.add(logl[:k], xbar[:k])
            snaps[c] = snap
            ci += 1
        acc.add(logl, xbar)
        while ci < len(cuts) and cuts[ci] == j1:
            snaps[j1] = acc.copy()
            ci += 1

    if threads <= 1 or len(starts) <= 1:
        for j0 in starts:
            j1 = min(j0 + chunk, m_total)
            consume(j0, j1, plan.run(seed64, n, j0, j1))
        return snaps
    window = 2 * threads
    with ThreadPoolExecutor(max_workers=threads) as ex:
        pending: deque = deque()
        it = iter(starts)
        for j0 in it:
            j1 = min(j0 + chunk, m_total)
            pending.append((j0, j1, ex.submit(plan.run, seed64, n, j0, j1)))
            if len(pending) >= window:
                a, b, fut = pending.popleft()
                consume(a, b, fut.result())
        while pending:
            a, b, fut = pending.popleft()
            consume(a, b, fut.result())
    return snaps


def _moment_xis(xis: Sequence[float]) -> tuple[float, ...]:
    out = []
    for xi in list(xis) + [1.0, 2.0]:
        xi = float(xi)
        if not xi > 0:
            raise DomainError("moment orders must be positive")
        if xi not in out:
            out.append(xi)
    return tuple(out)


def _output_xis(xis) -> list[float]:
    out = [1.0]
    for xi in xis:
        if float(xi) not in out:
            out.append(float(xi))
    return out


def _cell_from(acc: _Accumulator, n: int, m: int, xis, trace: SrvTrace) -> CellResult:
    moments = []
    for xi in xis:
        k = acc.xis.index(float(xi))
        moments.append(MomentEstimate(float(xi), acc.log_mean(k, m), acc.hits, m, acc.mx[k]))
    order = sorted(moments, key=lambda mo: (mo.xi != 1.0, mo.xi))
    return CellResult(
        n=n,
        m=m,
        moments=tuple(order),
        srv=trace,
        weighted_mean=acc.weighted_mean(),
        mean_log_lr=acc.sum_logl / acc.hits if acc.hits else None,
    )


def _trace(snaps, points: Sequence[int], eps: float) -> SrvTrace:
    pts = tuple(_srv_point(snaps[c], c) for c in sorted(set(points)))
    flags = tuple(pt.m for pt in pts if pt.srv is not None and pt.srv < eps)
    return SrvTrace(pts, eps, flags)


def default_checkpoints(m: int) -> list[int]:
    """Powers of two below m, then m itself."""
    out, k = [], 1
    while k < m:
        out.append(k)
        k *= 2
    return out + [m]


def run_cell(
    p: DistributionModel,
    q: Proposal,
    n: int,
    m: int,
    A: EventSet,
    xis: Sequence[float] = (1.0, 2.0),
    seed: int = 0,
    checkpoints: Sequence[int] | None = None,
    *,
    cap: int | None = None,
    threads: int | None = None,
    chunk: int = DEFAULT_CHUNK,
    srv_eps: float = DEFAULT_SRV_EPS,
) -> CellResult:
    """Estimate the xi-moments of the IS estimator from m replications."""
    if n < 1 or m < 1:
        raise DomainError("n and m must be positive")
    if cap is not None and m > cap:
        raise BudgetError(f"m = {m} exceeds cap {cap}")
    check_absolute_continuity(p, q)
    all_xis = _moment_xis(xis)
    points = sorted({int(c) for c in (checkpoints if checkpoints is not None else default_checkpoints(m)) if 1 <= c <= m} | {m})
    plan = _build_plan(p, q, n, A)
    snaps = _stream(plan, seed, n, m, points, all_xis, threads or default_threads(), chunk)
    return _cell_from(snaps[m], n, m, _output_xis(xis), _trace(snaps, points, srv_eps))


def mixture_run(
    components: Sequence[tuple[float, DistributionModel]],
    p: DistributionModel,
    n: int,
    m: int,
    A: EventSet,
    xis: Sequence[float] = (1.0, 2.0),
    seed: int = 0,
    **kwargs,
) -> CellResult:
    """run_cell with a path-level mixture proposal given as (weight, model) pairs."""
    q = PathMixture(tuple(w for w, _ in components), tuple(c for _, c in components))
    return run_cell(p, q, n, m, A, xis, seed, **kwargs)


# sweeps and reports


def _jsonable(v):
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.generic):
        return _jsonable(v.item())
    return v


CSV_COLUMNS = (
    "seed", "n", "grid", "value", "rate", "m", "status", "xi", "hits",
    "log_mean", "y", "label", "weighted_mean", "srv", "empirical_lra",
)


@dataclass
class ExperimentReport:
    config: dict
    seed: int
    records: list = field(default_factory=list)
    wall_time: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        """Everything except timing, so reruns compare byte for byte."""
        return _jsonable({"version": REPORT_VERSION, "config": self.config, "seed": self.seed, "records": self.records})

    def to_json(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, indent=1, allow_nan=False) + "\n"

    def csv_rows(self):
        for rec in self.records:
            moments = rec.get("moments") or [{"xi": x} for x in rec.get("xis", [1.0])]
            srv = rec.get("srv_final")
            for mo in moments:
                yield (
                    self.seed, rec["n"], rec["grid"], rec["value"], rec["rate"], rec["m"], rec["status"],
                    mo["xi"], rec.get("hits"),
                    mo.get("log_mean"),
                    -mo["log_mean"] / rec["n"] if "log_mean" in mo else None,
                    rec.get("label", "over-budget"),
                    rec.get("weighted_mean"),
                    srv if mo["xi"] == 1.0 else None,
                    rec.get("empirical_lra") if mo["xi"] == 1.0 else None,
                )

    def to_csv(self) -> str:
        return csv_text(CSV_COLUMNS, self.csv_rows())

    def cell(self, n: int, value: float) -> dict:
        for rec in self.records:
            if rec["n"] == n and rec["value"] == value:
                return rec
        raise KeyError((n, value))


def empirical_lra_value(log_alpha_hat: float, log_alpha: float, n: int) -> tuple[float, str]:
    """-(1/n) log |alpha_hat / alpha - 1| with its regime label."""
    if log_alpha_hat == -math.inf:
        return 0.0, "zero-hit"
    d = abs(math.expm1(log_alpha_hat - log_alpha))
    if d == 0.0:
        return math.inf, "exact"
    return -math.log(d) / n, "finite"


def _log_alpha_of(provider, n: int) -> float:
    v = provider(n)
    return float(getattr(v, "log_value", v))


def _record(cell: CellResult, schedule: SampleSchedule, value: float, srv_points=True) -> dict:
    rec = {
        "n": cell.n,
        "grid": schedule.kind,
        "value": value,
        "rate": schedule.effective_rate(value),
        "m": cell.m,
        "status": "ok",
        "hits": cell.hit_count,
        "label": cell.label,
        "y": cell.y,
        "moments": [
            {"xi": mo.xi, "log_mean": mo.log_mean, "log_max_term": mo.log_max_term} for mo in cell.moments
        ],
        "weighted_mean": cell.weighted_mean,
        "mean_log_lr": cell.mean_log_lr,
        "srv_final": cell.srv.points[-1].srv,
    }
    if srv_points:
        rec["srv_trace"] = {
            "eps": cell.srv.eps,
            "points": [
                {"m": pt.m, "log_mean": pt.log_mean, "log_var": pt.log_var, "srv": pt.srv if pt.defined else "undefined"}
                for pt in cell.srv.points
            ],
            "stop_flags": list(cell.srv.stop_flags),
        }
    return rec


def sweep(
    schedule: SampleSchedule,
    p: DistributionModel,
    q: Proposal,
    A: EventSet,
    xis: Sequence[float] = (1.0, 2.0),
    seed: int = 0,
    *,
    threads: int | None = None,
    chunk: int = DEFAULT_CHUNK,
    srv_eps: float = DEFAULT_SRV_EPS,
    alpha_provider: Callable | None = None,
    over_budget: str = "skip",
    config: dict | None = None,
) -> ExperimentReport:
    """Y_n over the schedule's grid, reusing one replication stream per n.

    Cells whose m exceeds the cap are recorded as "over-budget" when
    ``over_budget == "skip"`` and raise BudgetError when it is "error".
    """
    import time

    check_absolute_continuity(p, q)
    all_xis = _moment_xis(xis)
    out_xis = _output_xis(xis)
    cfg = dict(config or {})
    cfg.setdefault("schedule", schedule.to_config())
    cfg.setdefault("event", A.to_text())
    cfg.setdefault("base", p.to_config())
    cfg.setdefault("importance", q.to_config())
    cfg.setdefault("xis", out_xis)
    cfg.setdefault("srv_eps", srv_eps)
    cfg.setdefault("chunk", chunk)
    report = ExperimentReport(config=cfg, seed=int(seed))
    nthreads = threads or default_threads()
    for n in schedule.n_values:
        sizes = {}
        for v in schedule.rates:
            raw = schedule.raw_size(n, v)
            if raw > schedule.cap:
                if over_budget == "error":
                    schedule.size(n, v)
                sizes[v] = None
            else:
                sizes[v] = max(1, math.floor(raw))
        ms = sorted({s for s in sizes.values() if s is not None})
        t0 = time.perf_counter()
        snaps = {}
        if ms:
            m_max = ms[-1]
            cps = set(default_checkpoints(m_max)) | set(ms)
            plan = _build_plan(p, q, n, A)
            snaps = _stream(plan, seed, n, m_max, sorted(cps), all_xis, nthreads, chunk)
        report.wall_time[str(n)] = time.perf_counter() - t0
        log_alpha = _log_alpha_of(alpha_provider, n) if alpha_provider is not None else None
        for v in schedule.rates:
            m = sizes[v]
            if m is None:
                report.records.append(
                    {
                        "n": n, "grid": schedule.kind, "value": v, "rate": schedule.effective_rate(v),
                        "m": math.floor(schedule.raw_size(n, v)) if math.isfinite(schedule.raw_size(n, v)) else None,
                        "status": "over-budget", "xis": out_xis,
                    }
                )
                continue
            pts = [c for c in sorted(snaps) if c <= m and (c in default_checkpoints(m))]
            cell = _cell_from(snaps[m], n, m, out_xis, _trace(snaps, pts, srv_eps))
            rec = _record(cell, schedule, v)
            if log_alpha is not None:
                val, lab = empirical_lra_value(cell.log_alpha_hat, log_alpha, n)
                rec["log_alpha"] = log_alpha
                rec["empirical_lra"] = val
                rec["lra_label"] = lab
            report.records.append(rec)
    return report


def empirical_lra(report: ExperimentReport, true_alpha_provider: Callable | None) -> list[tuple[int, float, float, str]]:
    """(n, grid value, LRA, label) for every simulated cell of the report."""
    if true_alpha_provider is None:
        raise OracleUnavailable("no exact probability for this scenario")
    out = []
    cache: dict[int, float] = {}
    for rec in report.records:
        if rec["status"] != "ok":
            continue
        n = rec["n"]
        if n not in cache:
            cache[n] = _log_alpha_of(true_alpha_provider, n)
        la_hat = rec["moments"][0]["log_mean"]
        val, lab = empirical_lra_value(la_hat, cache[n], n)
        out.append((n, rec["value"], val, lab))
    return out


__all__ = [
    "SampleSchedule",
    "MomentEstimate",
    "SrvPoint",
    "SrvTrace",
    "CellResult",
    "ExperimentReport",
    "run_cell",
    "mixture_run",
    "sweep",
    "empirical_lra",
    "empirical_lra_value",
    "two_pass_log_mean",
    "check_absolute_continuity",
    "default_threads",
]
