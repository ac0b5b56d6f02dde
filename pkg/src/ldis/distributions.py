"""One-dimensional laws used as nominal and proposal distributions.

Four kinds are supported: Gaussian, Exponential, FiniteDiscrete and Mixture
(a per-coordinate mixture density).  Every model knows its log-density, its
cumulant generating function with first two derivatives, its exponential
tilts where they stay in the family, and its tail behaviour (used to decide
integrability of geometric combinations).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Union

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, UnsupportedError

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
PROB_SUM_TOL = 1e-12

# (quadratic, linear) coefficients of log-density as y -> -inf / +inf,
# None when the support is bounded on that side
Tail = Union[tuple[float, float], None]


def _as_array(x):
    return np.asarray(x, dtype=float)


def _scalar_or_array(out, x):
    return float(out) if np.ndim(x) == 0 else out


class _Model:
    is_discrete = False

    def mgf_domain(self) -> tuple[float, float]:
        raise NotImplementedError

    def _check_theta(self, theta: float) -> None:
        lo, hi = self.mgf_domain()
        if not (lo < theta < hi):
            raise DomainError(f"theta={theta} outside cumulant domain ({lo}, {hi}) of {self}")

    def std(self) -> float:
        return math.sqrt(self.variance())


@dataclass(frozen=True)
class Gaussian(_Model):
    mu: float = 0.0
    sigma2: float = 1.0

    def __post_init__(self):
        if not (self.sigma2 > 0 and math.isfinite(self.sigma2) and math.isfinite(self.mu)):
            raise DomainError(f"invalid Gaussian({self.mu}, {self.sigma2})")

    def log_density(self, x):
        x = _as_array(x)
        out = -0.5 * (x - self.mu) ** 2 / self.sigma2 - 0.5 * math.log(self.sigma2) - LOG_SQRT_2PI
        return _scalar_or_array(out, x)

    def mgf_domain(self):
        return (-math.inf, math.inf)

    def log_mgf(self, theta):
        return self.mu * theta + 0.5 * self.sigma2 * theta * theta

    def dlog_mgf(self, theta):
        return self.mu + self.sigma2 * theta

    def d2log_mgf(self, theta):
        return self.sigma2

    def tilt(self, theta):
        return Gaussian(self.mu + self.sigma2 * theta, self.sigma2)

    def mean(self):
        return self.mu

    def variance(self):
        return self.sigma2

    def support(self):
        return (-math.inf, math.inf)

    def tails(self) -> tuple[Tail, Tail]:
        c = (-0.5 / self.sigma2, self.mu / self.sigma2)
        return c, c

    def to_config(self):
        return {"kind": "gaussian", "mean": self.mu, "variance": self.sigma2}


@dataclass(frozen=True)
class Exponential(_Model):
    rate: float = 1.0

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise DomainError(f"invalid Exponential rate {self.rate}")

    def log_density(self, x):
        x = _as_array(x)
        with np.errstate(invalid="ignore"):
            out = np.where(x >= 0, math.log(self.rate) - self.rate * x, -np.inf)
        return _scalar_or_array(out, x)

    def mgf_domain(self):
        return (-math.inf, self.rate)

    def log_mgf(self, theta):
        self._check_theta(theta)
        return -math.log1p(-theta / self.rate)

    def dlog_mgf(self, theta):
        self._check_theta(theta)
        return 1.0 / (self.rate - theta)

    def d2log_mgf(self, theta):
        self._check_theta(theta)
        return 1.0 / (self.rate - theta) ** 2

    def tilt(self, theta):
        self._check_theta(theta)
        return Exponential(self.rate - theta)

    def mean(self):
        return 1.0 / self.rate

    def variance(self):
        return 1.0 / self.rate**2

    def support(self):
        return (0.0, math.inf)

    def tails(self):
        return None, (0.0, -self.rate)

    def to_config(self):
        return {"kind": "exponential", "rate": self.rate}


@dataclass(frozen=True)
class FiniteDiscrete(_Model):
    points: tuple[float, ...]
    probs: tuple[float, ...]

    is_discrete = True

    def __post_init__(self):
        pts = tuple(float(v) for v in self.points)
        pr = tuple(float(v) for v in self.probs)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", pr)
        if len(pts) == 0 or len(pts) != len(pr):
            raise DomainError("points and probs must be non-empty and of equal length")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("points must be strictly increasing")
        if any(p < 0 or not math.isfinite(p) for p in pr):
            raise DomainError("probabilities must be finite and non-negative")
        if abs(math.fsum(pr) - 1.0) > PROB_SUM_TOL:
            raise DomainError(f"probabilities sum to {math.fsum(pr)!r}, not 1")

    @property
    def _pts(self):
        return np.array(self.points)

    @property
    def _logp(self):
        with np.errstate(divide="ignore"):
            return np.log(np.array(self.probs))

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        """Points with positive mass and their log-probabilities."""
        keep = np.array(self.probs) > 0
        return self._pts[keep], self._logp[keep]

    def log_density(self, x):
        x = _as_array(x)
        pts = self._pts
        idx = np.clip(np.searchsorted(pts, x), 0, len(pts) - 1)
        out = np.where(pts[idx] == x, self._logp[idx], -np.inf)
        return _scalar_or_array(out, x)

    def mgf_domain(self):
        return (-math.inf, math.inf)

    def log_mgf(self, theta):
        pts, lp = self.atoms()
        return float(logsumexp(lp + theta * pts))

    def _tilted_weights(self, theta):
        pts, lp = self.atoms()
        v = lp + theta * pts
        w = np.exp(v - logsumexp(v))
        return pts, w

    def dlog_mgf(self, theta):
        pts, w = self._tilted_weights(theta)
        return float(np.dot(w, pts))

    def d2log_mgf(self, theta):
        pts, w = self._tilted_weights(theta)
        m = np.dot(w, pts)
        return float(max(np.dot(w, (pts - m) ** 2), 0.0))

    def tilt(self, theta):
        lp = self._logp + theta * self._pts
        lp = lp - logsumexp(lp)
        probs = np.exp(lp)
        probs = probs / math.fsum(probs)
        return FiniteDiscrete(self.points, tuple(probs.tolist()))

    def mean(self):
        return math.fsum(p * x for p, x in zip(self.probs, self.points))

    def variance(self):
        m = self.mean()
        return math.fsum(p * (x - m) ** 2 for p, x in zip(self.probs, self.points))

    def support(self):
        return tuple(x for x, p in zip(self.points, self.probs) if p > 0)

    def tails(self):
        return None, None

    def to_config(self):
        return {"kind": "discrete", "points": list(self.points), "probs": list(self.probs)}


@dataclass(frozen=True)
class Mixture(_Model):
    """Per-coordinate mixture density sum_i w_i f_i."""

    weights: tuple[float, ...]
    components: tuple[Any, ...]

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        comps = tuple(self.components)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", comps)
        if len(w) < 2 or len(w) != len(comps):
            raise DomainError("a mixture needs at least two weighted components")
        if any(not (v > 0) for v in w) or abs(math.fsum(w) - 1.0) > PROB_SUM_TOL:
            raise DomainError("mixture weights must be positive and sum to 1")
        if any(isinstance(c, Mixture) for c in comps):
            raise DomainError("nested mixtures are not supported")
        kinds = {c.is_discrete for c in comps}
        if len(kinds) > 1:
            raise DomainError("cannot mix discrete and continuous components")
        object.__setattr__(self, "is_discrete", kinds.pop())

    @property
    def _logw(self):
        return np.log(np.array(self.weights))

    def log_density(self, x):
        x = _as_array(x)
        terms = np.array([lw + np.asarray(c.log_density(x)) for lw, c in zip(self._logw, self.components)])
        out = logsumexp(terms, axis=0)
        return _scalar_or_array(out, x)

    def mgf_domain(self):
        lo = max(c.mgf_domain()[0] for c in self.components)
        hi = min(c.mgf_domain()[1] for c in self.components)
        return lo, hi

    def _component_cgf(self, theta):
        self._check_theta(theta)
        return np.array([c.log_mgf(theta) for c in self.components])

    def log_mgf(self, theta):
        return float(logsumexp(self._logw + self._component_cgf(theta)))

    def _posterior(self, theta):
        v = self._logw + self._component_cgf(theta)
        return np.exp(v - logsumexp(v))

    def dlog_mgf(self, theta):
        pi = self._posterior(theta)
        return float(np.dot(pi, [c.dlog_mgf(theta) for c in self.components]))

    def d2log_mgf(self, theta):
        pi = self._posterior(theta)
        d1 = np.array([c.dlog_mgf(theta) for c in self.components])
        d2 = np.array([c.d2log_mgf(theta) for c in self.components])
        m = np.dot(pi, d1)
        return float(np.dot(pi, d2 + d1 * d1) - m * m)

    def tilt(self, theta):
        raise UnsupportedError("tilting a mixture leaves the model family")

    def mean(self):
        return math.fsum(w * c.mean() for w, c in zip(self.weights, self.components))

    def variance(self):
        m = self.mean()
        second = math.fsum(w * (c.variance() + c.mean() ** 2) for w, c in zip(self.weights, self.components))
        return second - m * m

    def support(self):
        if self.is_discrete:
            return tuple(sorted({x for c in self.components for x in c.support()}))
        lo = min(c.support()[0] for c in self.components)
        hi = max(c.support()[1] for c in self.components)
        return lo, hi

    def tails(self):
        out = []
        for side in (0, 1):
            present = [c.tails()[side] for c in self.components if c.tails()[side] is not None]
            out.append(max(present) if present else None)
        return tuple(out)

    def to_config(self):
        return {
            "kind": "mixture",
            "weights": list(self.weights),
            "components": [c.to_config() for c in self.components],
        }


DistributionModel = Union[Gaussian, Exponential, FiniteDiscrete, Mixture]


# functional API


def log_density(model: DistributionModel, x):
    return model.log_density(x)


def log_mgf(model: DistributionModel, theta: float) -> float:
    return model.log_mgf(theta)


def tilt(model: DistributionModel, theta: float) -> DistributionModel:
    """Exponential tilt p_theta(dx) = exp(theta x - log_mgf(theta)) p(dx)."""
    return model.tilt(theta)


def mean(model: DistributionModel) -> float:
    return model.mean()


def variance(model: DistributionModel) -> float:
    return model.variance()


def tilt_parameter(p: DistributionModel, q: DistributionModel, tol: float = 1e-12) -> float | None:
    """theta with q == tilt(p, theta), or None when q is not a tilt of p."""
    if isinstance(p, Gaussian) and isinstance(q, Gaussian):
        if abs(p.sigma2 - q.sigma2) <= tol * p.sigma2:
            return (q.mu - p.mu) / p.sigma2
        return None
    if isinstance(p, Exponential) and isinstance(q, Exponential):
        return p.rate - q.rate
    if isinstance(p, FiniteDiscrete) and isinstance(q, FiniteDiscrete):
        if p.points != q.points:
            return None
        if any((a > 0) != (b > 0) for a, b in zip(p.probs, q.probs)):
            return None
        pts, lp = p.atoms()
        _, lq = q.atoms()
        if len(pts) < 2:
            return 0.0
        d = lq - lp
        theta = (d[-1] - d[0]) / (pts[-1] - pts[0])
        resid = d - theta * pts
        if np.ptp(resid) > 1e-9:
            return None
        return float(theta)
    return None


def support_interval(model: DistributionModel) -> tuple[float, float]:
    """Closed hull of the support."""
    s = model.support()
    if model.is_discrete:
        return (min(s), max(s))
    return s


def support_contains(outer: DistributionModel, inner: DistributionModel) -> bool:
    """True when supp(inner) is contained in supp(outer)."""
    if outer.is_discrete != inner.is_discrete:
        return False
    if inner.is_discrete:
        return set(inner.support()) <= set(outer.support())
    a, b = inner.support()
    c, d = outer.support()
    return c <= a and b <= d


def from_config(cfg: dict) -> DistributionModel:
    kind = cfg.get("kind")
    try:
        if kind == "gaussian":
            return Gaussian(float(cfg["mean"]), float(cfg["variance"]))
        if kind == "exponential":
            return Exponential(float(cfg["rate"]))
        if kind == "discrete":
            return FiniteDiscrete(tuple(cfg["points"]), tuple(cfg["probs"]))
        if kind == "mixture":
            return Mixture(tuple(cfg["weights"]), tuple(from_config(c) for c in cfg["components"]))
    except KeyError as exc:
        raise DomainError(f"missing field {exc} for {kind} model") from exc
    raise DomainError(f"unknown model kind {kind!r}")


# Kullback-Leibler divergence

KL_RTOL = 1e-9
TAIL_SDS = 12.0


def _kl_closed_form(nu, mu) -> float | None:
    if isinstance(nu, Gaussian) and isinstance(mu, Gaussian):
        return 0.5 * (
            math.log(mu.sigma2 / nu.sigma2) + (nu.sigma2 + (nu.mu - mu.mu) ** 2) / mu.sigma2 - 1.0
        )
    if isinstance(nu, Exponential) and isinstance(mu, Exponential):
        ratio = mu.rate / nu.rate
        return ratio - 1.0 - math.log(ratio)
    if isinstance(nu, FiniteDiscrete) and isinstance(mu, FiniteDiscrete):
        pts, lp = nu.atoms()
        lq = np.asarray(mu.log_density(pts))
        if np.isneginf(lq).any():
            return math.inf
        return float(math.fsum((np.exp(lp) * (lp - lq)).tolist()))
    return None


def _discrete_kl(nu, mu) -> float:
    pts = np.array(nu.support())
    lp = np.asarray(nu.log_density(pts))
    lq = np.asarray(mu.log_density(pts))
    keep = np.isfinite(lp)
    if np.isneginf(lq[keep]).any():
        return math.inf
    return float(math.fsum((np.exp(lp[keep]) * (lp[keep] - lq[keep])).tolist()))


def kl_divergence(nu: DistributionModel, mu: DistributionModel) -> float:
    """H(nu | mu) = E_nu[log dnu/dmu]; +inf unless nu << mu.

    Closed forms for Gaussian/Gaussian, Exponential/Exponential and
    discrete/discrete pairs; composite quadrature otherwise.
    """
    from ._quadrature import integrate_log

    closed = _kl_closed_form(nu, mu)
    if closed is not None:
        return max(closed, 0.0)
    if nu.is_discrete != mu.is_discrete:
        return math.inf
    if nu.is_discrete:
        return _discrete_kl(nu, mu)
    if not support_contains(mu, nu):
        return math.inf
    lo, hi = nu.support()
    m, sd = nu.mean(), nu.std()

    def integrand(y):
        return nu.log_density(y)

    nodes = integrate_log(integrand, lo, hi, center=m, scale=sd / 4.0, rtol=KL_RTOL * 1e-3)
    lq = np.asarray(mu.log_density(nodes.y))
    dens = np.exp(nodes.logw + nodes.logf)
    live = dens > 0
    if np.isneginf(lq[live]).any():
        return math.inf
    val = float(np.sum(dens[live] * (nodes.logf[live] - lq[live])))
    return max(val, 0.0)
