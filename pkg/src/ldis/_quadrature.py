"""Composite Gauss-Legendre quadrature for log-integrands on an interval.

The integrand is handled through its logarithm.  A coarse probe locates the
region where it is within DROP nats of its maximum, then panels of
Gauss-Legendre nodes are doubled until successive log-integrals agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from .errors import QuadratureError

RTOL = 1e-12
DROP = 80.0  # nats below the peak that are ignored (exp(-80) ~ 1.8e-35)
PROBE_HALFWIDTH = 64.0
PROBE_POINTS = 1025
MIN_PANELS = 16
MAX_PANELS = 8192
_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


@dataclass
class Nodes:
    y: np.ndarray
    logw: np.ndarray  # log of quadrature weights
    logf: np.ndarray  # integrand log-values at y
    log_integral: float

    def normalized(self) -> np.ndarray:
        """Weights of the probability measure proportional to the integrand."""
        return np.exp(self.logw + self.logf - self.log_integral)


def _probe(logf, lo, hi, center, scale):
    c = min(max(center, lo), hi) if math.isfinite(center) else 0.0
    h = scale if scale > 0 and math.isfinite(scale) else 1.0
    for _ in range(80):
        a = max(lo, c - PROBE_HALFWIDTH * h)
        b = min(hi, c + PROBE_HALFWIDTH * h)
        ys = np.linspace(a, b, PROBE_POINTS)
        with np.errstate(all="ignore"):
            fs = np.asarray(logf(ys), dtype=float)
        fs = np.where(np.isnan(fs), -np.inf, fs)
        if not np.isfinite(fs).any():
            h *= 2.0
            continue
        k = int(np.argmax(fs))
        fmax = fs[k]
        if fmax == np.inf:
            raise QuadratureError("integrand is infinite on the probe grid")
        left_ok = a == lo or fs[0] < fmax - DROP
        right_ok = b == hi or fs[-1] < fmax - DROP
        if left_ok and right_ok:
            keep = np.nonzero(fs >= fmax - DROP)[0]
            i0 = max(keep[0] - 1, 0)
            i1 = min(keep[-1] + 1, len(ys) - 1)
            return ys[i0], ys[i1]
        if k in (0, len(ys) - 1) and not (left_ok and right_ok):
            c = ys[k]
        h *= 2.0
    raise QuadratureError("could not isolate the integrand's mass")


def _panels(logf, a, b, n_panels):
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    y = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    logw = (np.log(half)[:, None] + np.log(_GL_W)[None, :]).ravel()
    with np.errstate(all="ignore"):
        fy = np.asarray(logf(y), dtype=float)
    fy = np.where(np.isnan(fy), -np.inf, fy)
    return y, logw, fy


def integrate_log(
    logf: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    center: float = 0.0,
    scale: float = 1.0,
    rtol: float = RTOL,
) -> Nodes:
    """log of the integral of exp(logf) over [lo, hi], with the final nodes."""
    if not lo < hi:
        raise QuadratureError(f"empty integration range [{lo}, {hi}]")
    a, b = _probe(logf, lo, hi, center, scale)
    if not a < b:
        raise QuadratureError("integrand mass collapsed to a point")
    n = MIN_PANELS
    y, logw, fy = _panels(logf, a, b, n)
    prev = logsumexp(logw + fy)
    while n < MAX_PANELS:
        n *= 2
        y, logw, fy = _panels(logf, a, b, n)
        cur = logsumexp(logw + fy)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return Nodes(y, logw, fy, float(cur))
        prev = cur
    raise QuadratureError(f"no convergence with {MAX_PANELS} panels on [{a}, {b}]")
