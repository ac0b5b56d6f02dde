"""Rate functions and the entropy-constrained variational problems.

``legendre`` computes I(x) = sup_t [t x - log_mgf(t)] by safeguarded Newton
on the first-order condition.  The general-proposal problems are solved in
the two-parameter family

    w_{s,lam}(y)  proportional to  p(y)^s q(y)^(1-s) exp(lam y)

restricted to supp p and supp q, whose log-partition function K(s, lam) is
computed by quadrature (or exact sums for discrete laws).  For a measure nu
in this family with mean x,

    H(nu|q) = s D + lam x - K,     D = E_nu[log p - log q],
    H(nu|p) = (s - 1) D + lam x - K,

and the xi-weighted entropy H(nu|q) + xi E_nu[log q/p] equals
(s - xi) D + lam x - K.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from ._quadrature import integrate_log
from ._solvers import Unreachable, safeguarded_newton
from .distributions import DistributionModel, support_interval
from .errors import ConvergenceError, InfeasibleError
from .events import EventSet

LEGENDRE_TOL = 1e-12
LEGENDRE_MAXITER = 200
ZERO_CURVATURE = 1e-14
ENTROPY_XTOL = 1e-14


@dataclass(frozen=True)
class RateEvaluation:
    x: float
    value: float
    tilt_param: float
    converged: bool


@dataclass(frozen=True)
class VariationalResult:
    objective: float
    lagrange_mean: float
    lagrange_entropy: float
    minimizer: dict = field(default_factory=dict)
    feasible: bool = True


def _boundary_rate(model: DistributionModel, x: float) -> tuple[float, float]:
    """Rate (and tilt) for x outside the open range of log_mgf'."""
    if model.is_discrete:
        pts = np.array(model.support())
        logp = np.asarray(model.log_density(pts))
        if x == pts[-1]:
            return float(-logp[-1]), math.inf
        if x == pts[0]:
            return float(-logp[0]), -math.inf
    return math.inf, math.nan


def legendre(model: DistributionModel, x: float) -> RateEvaluation:
    """Cramer rate I(x) with the maximizing tilt eta(x)."""
    x = float(x)
    lo, hi = support_interval(model)
    if x < lo or x > hi:
        return RateEvaluation(x, math.inf, math.nan, True)
    if model.is_discrete and (x == lo or x == hi):
        val, eta = _boundary_rate(model, x)
        return RateEvaluation(x, val, eta, True)
    scale = max(1.0, abs(x))
    res = safeguarded_newton(
        lambda t: model.dlog_mgf(t) - x,
        model.d2log_mgf,
        x0=0.0,
        domain=model.mgf_domain(),
        tol=LEGENDRE_TOL * scale,
        maxiter=LEGENDRE_MAXITER,
    )
    if isinstance(res, Unreachable):
        val, eta = _boundary_rate(model, x)
        return RateEvaluation(x, val, eta, True)
    eta = res.root
    value = eta * x - model.log_mgf(eta)
    return RateEvaluation(x, max(value, 0.0), eta, res.converged)


def rate(model: DistributionModel, x: float) -> float:
    return legendre(model, x).value


def tilted_rate(model: DistributionModel, theta: float, x: float) -> float:
    """Rate of the sample mean under tilt(model, theta)."""
    i = rate(model, x)
    if math.isinf(i):
        return math.inf
    return i - theta * x + model.log_mgf(theta)


def moment_rate(model: DistributionModel, theta: float, xi: float, x: float) -> float:
    """Exponent of the xi-th moment of the tilted likelihood ratio near x."""
    i = rate(model, x)
    if math.isinf(i):
        return math.inf
    return i + (xi - 1.0) * (theta * x - model.log_mgf(theta))


# geometric family


class Divergent(ArithmeticError):
    """The family (hence the corresponding moment) is not integrable."""


@dataclass(frozen=True)
class FamilyPoint:
    s: float
    lam: float
    log_k: float
    mean: float
    var: float
    delta: float  # E[log p - log q]

    def entropy_q(self) -> float:
        return self.s * self.delta + self.lam * self.mean - self.log_k

    def entropy_p(self) -> float:
        return (self.s - 1.0) * self.delta + self.lam * self.mean - self.log_k

    def weighted_entropy(self, xi: float) -> float:
        return (self.s - xi) * self.delta + self.lam * self.mean - self.log_k


class GeometricFamily:
    """Measures proportional to p^s q^(1-s) e^(lam y) on supp p and supp q."""

    def __init__(self, p: DistributionModel, q: DistributionModel):
        if p.is_discrete != q.is_discrete:
            raise InfeasibleError("nominal and proposal laws are mutually singular")
        self.p, self.q = p, q
        self.discrete = p.is_discrete
        if self.discrete:
            pts = np.array(sorted(set(p.support()) & set(q.support())))
            if len(pts) == 0:
                raise InfeasibleError("disjoint supports")
            self._pts = pts
            self._lp = np.asarray(p.log_density(pts))
            self._lq = np.asarray(q.log_density(pts))
            self.hull = (float(pts[0]), float(pts[-1]))
        else:
            plo, phi = p.support()
            qlo, qhi = q.support()
            self.hull = (max(plo, qlo), min(phi, qhi))
            if not self.hull[0] < self.hull[1]:
                raise InfeasibleError("disjoint supports")
            self._open = (math.isinf(plo) and math.isinf(qlo), math.isinf(phi) and math.isinf(qhi))
            self._scale = 0.25 * min(p.std(), q.std())
        self._hint = min(max(q.mean(), self.hull[0]), self.hull[1])
        self._point = lru_cache(maxsize=4096)(self._compute_point)

    def lam_domain(self, s: float) -> tuple[float, float]:
        if self.discrete:
            return (-math.inf, math.inf)
        lo, hi = -math.inf, math.inf
        for side in (0, 1):
            if not self._open[side]:
                continue
            tp, tq = self.p.tails()[side], self.q.tails()[side]
            a2 = s * tp[0] + (1.0 - s) * tq[0]
            a1 = s * tp[1] + (1.0 - s) * tq[1]
            if a2 < -ZERO_CURVATURE:
                continue
            if a2 > ZERO_CURVATURE:
                raise Divergent(f"p^s q^(1-s) not integrable at s={s}")
            if side == 1:
                hi = -a1
            else:
                lo = -a1
        if not lo < hi:
            raise Divergent(f"empty tilt domain at s={s}")
        return lo, hi

    def _logf(self, s, lam):
        p, q = self.p, self.q

        def f(y):
            return s * p.log_density(y) + (1.0 - s) * q.log_density(y) + lam * y

        return f

    def _compute_point(self, s: float, lam: float) -> FamilyPoint:
        if self.discrete:
            y, lp, lq = self._pts, self._lp, self._lq
            f = s * lp + (1.0 - s) * lq + lam * y
            log_k = float(logsumexp(f))
            w = np.exp(f - log_k)
        else:
            lo, hi = self.lam_domain(s)
            if not lo < lam < hi:
                raise Divergent(f"lam={lam} outside ({lo}, {hi})")
            nodes = integrate_log(self._logf(s, lam), *self.hull, center=self._hint, scale=self._scale)
            y = nodes.y
            w = nodes.normalized()
            live = w > 0
            y, w = y[live], w[live]
            lp = np.asarray(self.p.log_density(y))
            lq = np.asarray(self.q.log_density(y))
            log_k = nodes.log_integral
        m = float(np.dot(w, y))
        var = float(np.dot(w, (y - m) ** 2))
        delta = float(np.dot(w, lp - lq))
        if math.isfinite(m):
            self._hint = min(max(m, self.hull[0]), self.hull[1])
        return FamilyPoint(s, lam, log_k, m, var, delta)

    def point(self, s: float, lam: float) -> FamilyPoint:
        return self._point(float(s), float(lam))

    def edge_point(self, s: float, x: float) -> FamilyPoint:
        """Degenerate member concentrated on a discrete hull endpoint."""
        i = int(np.searchsorted(self._pts, x))
        lp, lq = float(self._lp[i]), float(self._lq[i])
        # point mass: H(.|q) = -lq, D = lp - lq; pick lam = 0 and K accordingly
        return FamilyPoint(s, 0.0, s * lp + (1.0 - s) * lq, x, 0.0, lp - lq)

    def solve_mean(self, s: float, x: float, lam0: float = 0.0) -> FamilyPoint:
        if self.discrete and x in self.hull:
            return self.edge_point(s, x)
        lo, hi = self.lam_domain(s)
        if lo < lam0 < hi:
            start = lam0
        elif math.isfinite(lo) and math.isfinite(hi):
            start = 0.5 * (lo + hi)
        elif math.isfinite(hi):
            start = hi - 1.0
        else:
            start = lo + 1.0
        res = safeguarded_newton(
            lambda t: self.point(s, t).mean - x,
            lambda t: self.point(s, t).var,
            x0=start,
            domain=(lo, hi),
            tol=1e-12 * max(1.0, abs(x)),
        )
        if isinstance(res, Unreachable):
            raise InfeasibleError(f"mean {x} unreachable in the family at s={s}")
        if not res.converged:
            raise ConvergenceError(f"mean matching failed at s={s}, x={x}")
        return self.point(s, res.root)

    def projected_point(self, s: float, lo: float, hi: float) -> FamilyPoint:
        """Member minimizing the family rate over means in [lo, hi]."""
        dlo, dhi = self.lam_domain(s)
        if dlo < 0.0 < dhi:
            free = self.point(s, 0.0)
            x = min(max(free.mean, lo), hi)
            if x == free.mean:
                return free
        elif dhi <= 0.0:
            x = hi
        else:
            x = lo
        if math.isinf(x):
            raise Divergent("family mass escapes to infinity inside the event")
        return self.solve_mean(s, x)


def family_functionals(p: DistributionModel, q: DistributionModel, s: float, lam: float) -> dict:
    """Entropies of the family member (s, lam) relative to p and q."""
    pt = GeometricFamily(p, q).point(s, lam)
    return {
        "mean": pt.mean,
        "entropy_q": pt.entropy_q(),
        "entropy_p": pt.entropy_p(),
        "log_ratio_qp": -pt.delta,
    }


def xi_moment_exponent_general(
    p: DistributionModel, q: DistributionModel, xi: float, x: float
) -> VariationalResult:
    """inf over nu with mean x of H(nu|q) + xi E_nu[log q/p]."""
    fam = GeometricFamily(p, q)
    try:
        pt = fam.solve_mean(xi, x)
    except Divergent:
        return VariationalResult(-math.inf, math.nan, 0.0, {"s": xi, "mean": x}, True)
    return VariationalResult(
        objective=pt.weighted_entropy(xi),
        lagrange_mean=pt.lam,
        lagrange_entropy=0.0,
        minimizer={"s": xi, "mean": pt.mean, "entropy_q": pt.entropy_q()},
    )


def _interval_min(fam: GeometricFamily, xi: float, r: float, lo: float, hi: float):
    def at(s):
        return fam.projected_point(s, lo, hi)

    try:
        top = at(xi)
    except Divergent:
        return VariationalResult(-math.inf, math.nan, 0.0, {"s": xi, "interval": (lo, hi)})
    if top.entropy_q() <= r:
        return VariationalResult(
            top.weighted_entropy(xi),
            top.lam,
            0.0,
            {"s": xi, "mean": top.mean, "entropy_q": top.entropy_q(), "interval": (lo, hi)},
        )
    bottom = at(0.0)
    if bottom.entropy_q() > r:
        return None
    s_star = brentq(lambda s: at(s).entropy_q() - r, 0.0, xi, xtol=ENTROPY_XTOL, rtol=1e-15, maxiter=200)
    pt = at(s_star)
    beta = math.inf if s_star == 0.0 else xi / s_star - 1.0
    return VariationalResult(
        pt.weighted_entropy(xi),
        pt.lam,
        beta,
        {"s": s_star, "mean": pt.mean, "entropy_q": pt.entropy_q(), "interval": (lo, hi)},
    )


def reachable_entropy_min(
    p: DistributionModel,
    q: DistributionModel,
    r: float,
    A: EventSet,
    xi: float = 1.0,
) -> VariationalResult:
    """inf of H(nu|q) + xi E_nu[log q/p] over nu << p with mean in A and
    H(nu|q) <= r.  Raises InfeasibleError when the constraint set is empty."""
    fam = GeometricFamily(p, q)
    hlo, hhi = fam.hull
    best = None
    for lo, hi in A:
        lo2, hi2 = max(lo, hlo), min(hi, hhi)
        if lo2 > hi2 or (lo2 == hi2 and not fam.discrete):
            continue
        res = _interval_min(fam, xi, r, lo2, hi2)
        if res is not None and (best is None or res.objective < best.objective):
            best = res
    if best is None:
        raise InfeasibleError(f"no measure with mean in {A.to_text()} within entropy budget {r}")
    return best
