"""Exact answers for small or closed-form problems.

These routines are deliberately independent of the simulation and
rate-function code paths: cumulants are re-derived here in closed form and
tail probabilities come from special functions or exhaustive enumeration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import log_ndtr, logsumexp

from .errors import BudgetError, DomainError, OracleUnavailable
from .events import EventSet

ENUMERATION_CAP = 10**7
GAMMA_EPS = 1e-16
GAMMA_ITMAX = 100000
_FPMIN = 1e-300


@dataclass(frozen=True)
class OracleResult:
    value: float
    log_value: float
    method: str
    work: int = 0


def _log_diff(la: float, lb: float) -> float:
    """log(exp(la) - exp(lb)) for la >= lb."""
    if lb == -math.inf:
        return la
    if lb >= la:
        return -math.inf
    return la + math.log1p(-math.exp(lb - la))


def _log_interval_prob(log_cdf: Callable, log_sf: Callable, lo: float, hi: float, center: float) -> float:
    # work on whichever tail keeps the subtraction well conditioned
    if lo >= center:
        return _log_diff(log_sf(lo), log_sf(hi))
    if hi <= center:
        return _log_diff(log_cdf(hi), log_cdf(lo))
    left = log_cdf(lo)
    right = log_sf(hi)
    tails = np.logaddexp(left, right)
    return math.log1p(-math.exp(tails)) if tails < 0 else -math.inf


def _result(logs: list[float], method: str, work: int = 0) -> OracleResult:
    la = float(logsumexp(logs)) if logs else -math.inf
    return OracleResult(math.exp(la), la, method, work)


def exact_alpha_gaussian(n: int, A: EventSet | float, mu: float = 0.0, sigma2: float = 1.0) -> OracleResult:
    """P(S_n / n in A) for i.i.d. Gaussian(mu, sigma2) summands.

    A bare float b means the ray [b, inf).
    """
    A = EventSet.above(A) if not isinstance(A, EventSet) else A
    sd = math.sqrt(sigma2 / n)

    def z(v):
        return (v - mu) / sd

    def log_cdf(v):
        return float(log_ndtr(z(v))) if math.isfinite(v) else (0.0 if v > 0 else -math.inf)

    def log_sf(v):
        return float(log_ndtr(-z(v))) if math.isfinite(v) else (-math.inf if v > 0 else 0.0)

    logs = [_log_interval_prob(log_cdf, log_sf, lo, hi, mu) for lo, hi in A]
    return _result([v for v in logs if v > -math.inf], "gaussian-tail")


# regularized incomplete gamma, log scale


def _log_prefix(a: float, x: float) -> float:
    return a * math.log(x) - x - math.lgamma(a)


def _gamma_series(a: float, x: float) -> float:
    """log P(a, x) by the power series (good for x < a + 1)."""
    ap, term = a, 1.0 / a
    total = term
    for _ in range(GAMMA_ITMAX):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * GAMMA_EPS:
            return _log_prefix(a, x) + math.log(total)
    raise OracleUnavailable(f"incomplete gamma series did not converge (a={a}, x={x})")


def _gamma_cf(a: float, x: float) -> float:
    """log Q(a, x) by the modified Lentz continued fraction (x >= a + 1)."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, GAMMA_ITMAX):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < GAMMA_EPS:
            return _log_prefix(a, x) + math.log(h)
    raise OracleUnavailable(f"incomplete gamma fraction did not converge (a={a}, x={x})")


def log_gamma_q(a: float, x: float) -> float:
    """log of the regularized upper incomplete gamma Q(a, x)."""
    if a <= 0:
        raise DomainError("shape must be positive")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return -math.inf
    if x < a + 1.0:
        lp = _gamma_series(a, x)
        return math.log1p(-math.exp(lp)) if lp < 0 else -math.inf
    return _gamma_cf(a, x)


def log_gamma_p(a: float, x: float) -> float:
    """log of the regularized lower incomplete gamma P(a, x)."""
    if a <= 0:
        raise DomainError("shape must be positive")
    if x <= 0:
        return -math.inf
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    lq = _gamma_cf(a, x)
    return math.log1p(-math.exp(lq)) if lq < 0 else -math.inf


def exact_alpha_exponential(n: int, A: EventSet | float, rate: float = 1.0) -> OracleResult:
    """P(S_n / n in A) for i.i.d. Exponential(rate); S_n is Gamma(n, rate)."""
    A = EventSet.above(A) if not isinstance(A, EventSet) else A
    mean = 1.0 / rate

    def arg(v):
        return max(v, 0.0) * n * rate

    def log_cdf(v):
        return log_gamma_p(n, arg(v))

    def log_sf(v):
        return log_gamma_q(n, arg(v))

    logs = [_log_interval_prob(log_cdf, log_sf, lo, hi, mean) for lo, hi in A]
    return _result([v for v in logs if v > -math.inf], "incomplete-gamma")


# exhaustive enumeration over type classes


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _atoms(model) -> tuple[np.ndarray, np.ndarray]:
    pts = np.array(model.support() if model.is_discrete else [], dtype=float)
    if not model.is_discrete:
        raise OracleUnavailable("enumeration needs finite-support laws")
    return pts, np.asarray(model.log_density(pts), dtype=float)


def _in_event(A: EventSet, x: float, slack: float = 1e-12) -> bool:
    # sample means are sums of floats; let them land on closed endpoints
    return any(lo - slack * max(1.0, abs(lo)) <= x <= hi + slack * max(1.0, abs(hi)) for lo, hi in A)


def enumerate_exact(p, q, n: int, A: EventSet, xi: float = 1.0, proposal_weights: Sequence[float] | None = None) -> OracleResult:
    """E_Q[Z^xi] by summing over type classes of length-n sequences.

    ``q`` is a single discrete law or a sequence of them; with a sequence,
    Q is the path-level mixture with ``proposal_weights``.  With xi = 1 the
    result is alpha = P(S_n / n in A).
    """
    comps = list(q) if isinstance(q, (list, tuple)) else [q]
    weights = list(proposal_weights) if proposal_weights is not None else [1.0 / len(comps)] * len(comps)
    pts, lp = _atoms(p)
    k = len(pts)
    work = k**n
    if work > ENUMERATION_CAP:
        raise BudgetError(f"{k}^{n} = {work} sequences exceeds enumeration cap {ENUMERATION_CAP}")
    probs_p = np.exp(lp)
    probs_q = []
    for c in comps:
        _atoms(c)
        probs_q.append(np.exp(np.asarray(c.log_density(pts), dtype=float)))
    log_terms, values = [], []
    for counts in _compositions(n, k):
        mean = math.fsum(c * x for c, x in zip(counts, pts)) / n
        if not _in_event(A, mean):
            continue
        mult = math.factorial(n)
        for c in counts:
            mult //= math.factorial(c)
        p_path = math.prod(float(probs_p[i]) ** c for i, c in enumerate(counts))
        q_path = math.fsum(
            w * math.prod(float(pq[i]) ** c for i, c in enumerate(counts)) for w, pq in zip(weights, probs_q)
        )
        if q_path == 0.0:
            raise OracleUnavailable("nominal law is not absolutely continuous w.r.t. the proposal")
        term = mult * p_path if xi == 1.0 else mult * q_path * (p_path / q_path) ** xi
        values.append(term)
        log_terms.append(math.log(term) if term > 0 else -math.inf)
    if not values:
        return OracleResult(0.0, -math.inf, "enumeration", work)
    return OracleResult(math.fsum(values), float(logsumexp(log_terms)), "enumeration", work)


# brute-force minimization


def grid_minimize(
    f: Callable[[float], float],
    A: EventSet,
    points_per_interval: int = 10**4,
    clip: float = 50.0,
    vectorized: bool = False,
) -> tuple[float, float]:
    """Minimize f over A on a dense grid, then polish with golden section.

    Unbounded ends are clipped to +-clip around the finite end (or 0).
    """
    best_x, best_v = math.nan, math.inf
    for lo, hi in A:
        a = lo if math.isfinite(lo) else (hi if math.isfinite(hi) else 0.0) - clip
        b = hi if math.isfinite(hi) else (lo if math.isfinite(lo) else 0.0) + clip
        if a == b:
            xs = np.array([a])
        else:
            xs = np.linspace(a, b, points_per_interval)
        vals = np.asarray(f(xs)) if vectorized else np.array([f(float(x)) for x in xs])
        i = int(np.argmin(vals))
        x0, v0 = float(xs[i]), float(vals[i])
        if len(xs) > 2 and math.isfinite(v0):
            l = float(xs[max(i - 1, 0)])
            r = float(xs[min(i + 1, len(xs) - 1)])
            g = (lambda t: float(np.asarray(f(np.array([t])))[0])) if vectorized else f
            invphi = (math.sqrt(5) - 1) / 2
            for _ in range(100):
                c, d = r - invphi * (r - l), l + invphi * (r - l)
                if g(c) <= g(d):
                    r = d
                else:
                    l = c
            xm = 0.5 * (l + r)
            vm = g(xm)
            if vm < v0:
                x0, v0 = xm, vm
        if v0 < best_v:
            best_x, best_v = x0, v0
    return best_x, best_v


def log_mgf_closed_form(model_cfg: dict, theta: np.ndarray) -> np.ndarray:
    """Cumulant generating function from a config record, vectorized."""
    theta = np.asarray(theta, dtype=float)
    kind = model_cfg["kind"]
    if kind == "gaussian":
        return model_cfg["mean"] * theta + 0.5 * model_cfg["variance"] * theta**2
    if kind == "exponential":
        lam = model_cfg["rate"]
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(theta < lam, -np.log1p(-theta / lam), np.inf)
    if kind == "discrete":
        pts = np.array(model_cfg["points"], dtype=float)
        with np.errstate(divide="ignore"):
            lp = np.log(np.array(model_cfg["probs"], dtype=float))
        return logsumexp(lp[None, :] + theta[:, None] * pts[None, :], axis=1)
    raise OracleUnavailable(f"no closed-form cumulant for {kind}")


def grid_legendre(model_cfg: dict, x: float, lam_max: float = 50.0, points: int = 10**5) -> float:
    """sup over a lambda grid of lambda x - log_mgf(lambda), the grid
    spanning the cumulant domain clipped to |lambda| <= lam_max."""
    hi = min(lam_max, model_cfg["rate"]) if model_cfg["kind"] == "exponential" else lam_max
    lam = np.linspace(-lam_max, hi, points)
    vals = lam * x - log_mgf_closed_form(model_cfg, lam)
    return float(np.max(vals[np.isfinite(vals)]))


def type_class_alpha_rademacher(n: int, A: EventSet) -> OracleResult:
    """P(S_n / n in A) for fair +-1 steps, by binomial sums."""
    logs = []
    for k in range(n + 1):
        mean = (2 * k - n) / n
        if A.contains(mean):
            logs.append(math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1) - n * math.log(2.0))
    return _result(logs, "binomial", n + 1)


__all__ = [
    "OracleResult",
    "exact_alpha_gaussian",
    "exact_alpha_exponential",
    "enumerate_exact",
    "grid_minimize",
    "grid_legendre",
    "log_gamma_q",
    "log_gamma_p",
]
