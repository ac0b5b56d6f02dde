"""Asymptotic quantities of the importance-sampling estimator.

For a proposal q and budget m = exp(r n) replications this module gives the
reachable set A_r, the limiting moment exponent y(r), the relative-accuracy
curve LRA(r) and efficiency diagnostics.  Proposals that are exponential
tilts of p (or path-level mixtures of tilts) are handled in closed form;
other proposals go through the entropy-constrained variational solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from ._solvers import Unreachable, golden_minimize, safeguarded_newton
from .distributions import DistributionModel, kl_divergence, support_interval, tilt_parameter
from .errors import DomainError, InfeasibleError, UnsupportedError
from .events import EventSet
from .rate_functions import legendre, rate, reachable_entropy_min

ZERO_HIT = -math.inf
DEFAULT_R_GRID = tuple(np.geomspace(1e-3, 4.0, 400).tolist())
EFFICIENCY_TOL = 1e-6
BREAKPOINT_XTOL = 1e-10
LRA_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class PathMixture:
    """Proposal that draws one component per replication, then a whole
    path from it: Q = sum_k w_k q_k^n."""

    weights: tuple[float, ...]
    components: tuple[DistributionModel, ...]

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", tuple(self.components))
        if len(w) == 0 or len(w) != len(self.components):
            raise DomainError("weights and components must match")
        if any(v <= 0 for v in w) or abs(math.fsum(w) - 1.0) > 1e-12:
            raise DomainError("path-mixture weights must be positive and sum to 1")

    def to_config(self):
        return {
            "kind": "path_mixture",
            "weights": list(self.weights),
            "components": [c.to_config() for c in self.components],
        }


Proposal = Union[DistributionModel, PathMixture]


def _components(q: Proposal) -> list[tuple[float, DistributionModel]]:
    if isinstance(q, PathMixture):
        return list(zip(q.weights, q.components))
    return [(1.0, q)]


def tilt_pieces(p: DistributionModel, q: Proposal) -> list[tuple[float, float]] | None:
    """[(theta_k, log_mgf(theta_k))] when every component of q is a tilt of p."""
    out = []
    for _, c in _components(q):
        th = tilt_parameter(p, c)
        if th is None:
            return None
        out.append((th, p.log_mgf(th)))
    return out


# reachable set


def _sublevel(q: DistributionModel, r: float) -> tuple[float, float]:
    """{x : I_q(x) <= r} as a closed interval."""
    lo, hi = support_interval(q)
    if math.isinf(r):
        return lo, hi
    m = q.mean()
    if r <= 0:
        return m, m
    dom = q.mgf_domain()

    def edge(sign):
        # I along the tilt path, eta = sign * t, is increasing in t > 0
        def g(t):
            eta = sign * t
            return eta * q.dlog_mgf(eta) - q.log_mgf(eta) - r

        def dg(t):
            eta = sign * t
            return t * q.d2log_mgf(eta)

        tdom = (0.0, dom[1]) if sign > 0 else (0.0, -dom[0])
        t0 = min(1.0, 0.5 * tdom[1])
        res = safeguarded_newton(g, dg, t0, tdom, tol=1e-14)
        if isinstance(res, Unreachable):
            bound = hi if sign > 0 else lo
            if math.isinf(bound) or rate(q, bound) <= r:
                return bound
            return _bisect_rate(q, m, bound, r)
        return q.dlog_mgf(sign * res.root)

    return edge(-1), edge(+1)


def _bisect_rate(q, inside, outside, r):
    for _ in range(200):
        mid = 0.5 * (inside + outside)
        if rate(q, mid) <= r:
            inside = mid
        else:
            outside = mid
    return inside


def a_r_set(p: DistributionModel, q: Proposal, r: float, A: EventSet) -> EventSet:
    """Points of A reachable under q within entropy budget r."""
    out = EventSet(())
    for _, c in _components(q):
        lo, hi = _sublevel(c, r)
        out = out.union(A.intersect(EventSet(((lo, hi),))))
    return out


# dominating points and required rate


def dominating_points(p: DistributionModel, A: EventSet, tol: float = 1e-12) -> tuple[list[float], float]:
    """Minimizers of I_p over A and the minimum value."""
    m = p.mean()
    cands = []
    for lo, hi in A:
        x = min(max(m, lo), hi)
        cands.append((rate(p, x), x))
    best = min(v for v, _ in cands)
    return [x for v, x in cands if v <= best + tol], best


def entropy_of_tilt(p: DistributionModel, q: Proposal, x: float) -> float:
    """D_q(x) = H(tilt(p, eta(x)) | q), minimized over path-mixture components."""
    pieces = tilt_pieces(p, q)
    i = rate(p, x)
    if math.isinf(i):
        return math.inf
    if pieces is not None:
        return i - max(th * x - lam for th, lam in pieces)
    eta = legendre(p, x).tilt_param
    nu = p.tilt(eta)
    return min(kl_divergence(nu, c) for _, c in _components(q))


def required_rate(p: DistributionModel, q: Proposal, A: EventSet) -> float:
    """Smallest r for which the dominating point of A is reachable under q."""
    xs, _ = dominating_points(p, A)
    return min(entropy_of_tilt(p, q, x) for x in xs)


# limiting moment exponent


def _piecewise_min(p, pieces, xi, lo, hi) -> float:
    """min over [lo, hi] of I(x) + (xi - 1) max_k (theta_k x - lam_k)."""

    def g(x):
        i = rate(p, x)
        if math.isinf(i):
            return math.inf
        return i + (xi - 1.0) * max(th * x - lam for th, lam in pieces)

    dom = p.mgf_domain()
    cands = [lo, hi]
    for th, _ in pieces:
        t = (1.0 - xi) * th
        if dom[0] < t < dom[1]:
            cands.append(p.dlog_mgf(t))
        elif xi != 1.0:
            # piece is monotone on the whole support
            cands.append(hi if t >= dom[1] else lo)
    for a in range(len(pieces)):
        for b in range(a + 1, len(pieces)):
            (t1, l1), (t2, l2) = pieces[a], pieces[b]
            if t1 != t2:
                cands.append((l1 - l2) / (t1 - t2))
    slo, shi = support_interval(p)
    vals = []
    for x in cands:
        x = min(max(x, lo, slo), hi, shi)
        if math.isinf(x):
            # unbounded direction with decreasing integrand: moment blows up
            if g(math.copysign(1e6, x)) < g(math.copysign(1e3, x)):
                return -math.inf
            continue
        vals.append(g(x))
    return min(vals) if vals else math.inf


def y_limit(p: DistributionModel, q: Proposal, r: float, A: EventSet, xi: float = 1.0) -> float:
    """lim (1/n) log of the xi-th sample moment with exp(r n) replications.

    Returns ZERO_HIT (-inf) when no point of A is reachable.
    """
    pieces = tilt_pieces(p, q)
    if pieces is not None:
        Ar = a_r_set(p, q, r, A)
        if Ar.is_empty():
            return ZERO_HIT
        return -min(_piecewise_min(p, pieces, xi, lo, hi) for lo, hi in Ar)
    if isinstance(q, PathMixture):
        raise UnsupportedError("path mixtures are supported for tilt components only")
    try:
        res = reachable_entropy_min(p, q, r, A, xi)
    except InfeasibleError:
        return ZERO_HIT
    return -res.objective


def is_log_efficient(p: DistributionModel, q: Proposal, A: EventSet, tol: float = EFFICIENCY_TOL) -> bool:
    """Second moment decays at twice the rate of the first."""
    y1 = y_limit(p, q, math.inf, A, 1.0)
    y2 = y_limit(p, q, math.inf, A, 2.0)
    return math.isfinite(y2) and abs(y2 - 2.0 * y1) <= tol


def moment_threshold(p: DistributionModel, q: Proposal, A: EventSet, xi_max: float = 10.0, tol: float = 1e-10) -> float:
    """Largest xi for which the xi-th relative moment stays subexponential."""
    y1 = y_limit(p, q, math.inf, A, 1.0)

    def ok(xi):
        y = y_limit(p, q, math.inf, A, xi)
        return math.isfinite(y) and y <= xi * y1 + 1e-12

    if not ok(1.0 + 1e-9):
        return 1.0
    if ok(xi_max):
        return xi_max
    lo, hi = 1.0, xi_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


def cmc_dominance(p: DistributionModel, q: Proposal, A: EventSet, r: float, points: int = 1000) -> bool:
    """True when q reaches every point of A that crude sampling reaches at rate r."""
    region = A.intersect(EventSet((_sublevel(p, r),)))
    for lo, hi in region:
        if lo == hi:
            xs = [lo]
        else:
            xs = np.linspace(lo, hi, points)
        for x in xs:
            ip = rate(p, float(x))
            if ip < r and entropy_of_tilt(p, q, float(x)) > ip + 1e-12:
                return False
    return True


# relative-accuracy curve


@dataclass
class LraCurve:
    r_grid: np.ndarray
    values: np.ndarray
    labels: list[str]
    breakpoints: list[float] = field(default_factory=list)
    base_rate: float = 0.0
    minimizers: np.ndarray | None = None

    def at(self, r: float) -> float:
        return float(np.interp(r, self.r_grid, self.values))


def _label(value: float, d: float, r: float) -> str:
    if value <= LRA_ZERO_TOL:
        return "zero-hit"
    return "clt" if d < r else "plateau"


class _LraObjective:
    def __init__(self, p, q, A):
        self.p, self.q, self.A = p, q, A
        self.pieces = tilt_pieces(p, q)
        _, self.base = dominating_points(p, A)
        self._d_cache = {}

    def d(self, x):
        if x not in self._d_cache:
            self._d_cache[x] = entropy_of_tilt(self.p, self.q, x)
        return self._d_cache[x]

    def h(self, x, r):
        i = rate(self.p, x)
        if math.isinf(i):
            return math.inf
        return i + 0.5 * max(r - self.d(x), 0.0)

    def _bracket(self, lo, hi, r):
        """Finite window of an interval that contains the minimizer of h."""
        slo, shi = support_interval(self.p)
        lo, hi = max(lo, slo), min(hi, shi)
        if lo > hi:
            return lo, hi
        anchor = min(max(self.p.mean(), lo), hi)
        # h >= I_p, so points where I_p exceeds h(anchor) cannot be optimal
        ceiling = self.h(anchor, r)
        a, b = lo, hi
        for sign in (-1, 1):
            if math.isfinite(lo if sign < 0 else hi):
                continue
            step = max(1.0, math.sqrt(self.p.variance()))
            x = anchor + sign * step
            while rate(self.p, x) <= ceiling:
                step *= 2.0
                x = anchor + sign * step
            if sign < 0:
                a = x
            else:
                b = x
        return a, b

    def minimize(self, r):
        best = (math.inf, math.nan)
        for lo, hi in self.A:
            a, b = self._bracket(lo, hi, r)
            if a > b:
                continue
            f = lambda x: self.h(x, r)
            if a == b:
                x, v = a, f(a)
            elif self.pieces is not None:
                x, v = golden_minimize(f, a, b, tol=1e-13)
            else:
                xs = np.linspace(a, b, 201)
                vs = [f(float(x)) for x in xs]
                k = int(np.argmin(vs))
                x, v = golden_minimize(f, float(xs[max(k - 1, 0)]), float(xs[min(k + 1, len(xs) - 1)]), tol=1e-12)
                if vs[k] < v:
                    x, v = float(xs[k]), vs[k]
            if v < best[0]:
                best = (v, x)
        v, x = best
        return v - self.base, x

    def state(self, r):
        value, x = self.minimize(r)
        label = _label(value, self.d(x), r)
        branch = next((i for i, (lo, hi) in enumerate(self.A) if lo <= x <= hi), -1)
        return value, x, label, branch


def lra_curve(
    p: DistributionModel,
    q: Proposal,
    A: EventSet,
    r_grid: Sequence[float] = DEFAULT_R_GRID,
    refine: bool = True,
) -> LraCurve:
    """LRA(r) = inf_A [I_p + (r - D_q)^+ / 2] - inf_A I_p on a grid of r."""
    obj = _LraObjective(p, q, A)
    r_grid = np.asarray(r_grid, dtype=float)
    states = [obj.state(float(r)) for r in r_grid]
    values = np.array([s[0] for s in states])
    labels = [s[2] for s in states]
    mins = np.array([s[1] for s in states])
    breaks = []
    if refine:
        for k in range(len(r_grid) - 1):
            if (states[k][2], states[k][3]) != (states[k + 1][2], states[k + 1][3]):
                breaks.append(_refine_break(obj, r_grid[k], r_grid[k + 1], states[k]))
    return LraCurve(r_grid, values, labels, breaks, obj.base, mins)


def _refine_break(obj, a, b, left_state):
    key = (left_state[2], left_state[3])
    while b - a > BREAKPOINT_XTOL * max(1.0, a):
        mid = 0.5 * (a + b)
        s = obj.state(mid)
        if (s[2], s[3]) == key:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def mixture_lra(
    components: Sequence[Proposal],
    p: DistributionModel,
    A: EventSet,
    r_grid: Sequence[float] = DEFAULT_R_GRID,
    weights: Sequence[float] | None = None,
    method: str = "max",
) -> LraCurve:
    """LRA of a path mixture.

    method="max" returns the pointwise maximum of the component curves;
    method="joint" evaluates the mixture directly, with D the minimum of
    the component entropies at each point.
    """
    if method == "joint":
        w = tuple(weights) if weights is not None else tuple([1.0 / len(components)] * len(components))
        return lra_curve(p, PathMixture(w, tuple(components)), A, r_grid)
    if method != "max":
        raise DomainError(f"unknown mixture method {method!r}")
    curves = [lra_curve(p, c, A, r_grid) for c in components]
    stack = np.vstack([c.values for c in curves])
    best = np.argmax(stack, axis=0)
    values = stack.max(axis=0)
    labels = [curves[k].labels[i] for i, k in enumerate(best)]
    breaks = sorted({b for c in curves for b in c.breakpoints})
    return LraCurve(np.asarray(r_grid, dtype=float), values, labels, breaks, curves[0].base_rate)


def crossing_points(c1: LraCurve, c2: LraCurve) -> list[float]:
    """r values where two curves on the same grid swap order (linear interp)."""
    d = c1.values - c2.values
    out = []
    for k in range(len(d) - 1):
        if d[k] == 0.0:
            out.append(float(c1.r_grid[k]))
        elif d[k] * d[k + 1] < 0:
            t = d[k] / (d[k] - d[k + 1])
            out.append(float(c1.r_grid[k] + t * (c1.r_grid[k + 1] - c1.r_grid[k])))
    return out


__all__ = [
    "EventSet",
    "LraCurve",
    "PathMixture",
    "ZERO_HIT",
    "DEFAULT_R_GRID",
    "a_r_set",
    "y_limit",
    "required_rate",
    "lra_curve",
    "mixture_lra",
    "is_log_efficient",
    "cmc_dominance",
    "moment_threshold",
    "crossing_points",
    "dominating_points",
    "entropy_of_tilt",
]
