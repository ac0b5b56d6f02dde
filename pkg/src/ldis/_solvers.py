"""Scalar solvers shared by the rate-function code.

Everything here works on increasing functions of one variable defined on an
open interval that may be unbounded on either side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError

NEWTON_TOL = 1e-12
NEWTON_MAXITER = 200
MAX_EXPANSIONS = 200
# |argument| beyond which an unbounded side is treated as unreachable
FAR = 1e8


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class Unreachable:
    """Target lies beyond the range of the function on one side."""

    side: int  # +1: target above sup f, -1: below inf f


def _toward(x: float, edge: float, step: float) -> float:
    if math.isinf(edge):
        return x + math.copysign(step, edge)
    return x + 0.5 * (edge - x)


def bracket_increasing(
    f: Callable[[float], float],
    x0: float,
    domain: tuple[float, float],
) -> tuple[float, float, float, float] | Unreachable:
    """Find a <= b with f(a) <= 0 <= f(b) by walking out from x0.

    On a finite edge the walk halves the distance to the edge, on an
    infinite one the step doubles.  Returns Unreachable if the sign change
    never appears.
    """
    lo_edge, hi_edge = domain
    fx = f(x0)
    if fx == 0.0:
        return x0, x0, fx, fx
    edge = hi_edge if fx < 0 else lo_edge
    want_positive = fx < 0
    a, fa = x0, fx
    step = max(1.0, abs(x0))
    for _ in range(MAX_EXPANSIONS):
        b = _toward(a, edge, step)
        step *= 2.0
        if b == a or abs(b) > FAR:
            break
        fb = f(b)
        if (fb >= 0) if want_positive else (fb <= 0):
            return (a, b, fa, fb) if want_positive else (b, a, fb, fa)
        a, fa = b, fb
    return Unreachable(side=1 if want_positive else -1)


def safeguarded_newton(
    f: Callable[[float], float],
    df: Callable[[float], float],
    x0: float,
    domain: tuple[float, float] = (-math.inf, math.inf),
    tol: float = NEWTON_TOL,
    maxiter: int = NEWTON_MAXITER,
) -> RootResult | Unreachable:
    """Root of an increasing f: Newton steps, bisection whenever Newton
    leaves the current bracket."""
    br = bracket_increasing(f, x0, domain)
    if isinstance(br, Unreachable):
        return br
    a, b, fa, fb = br
    if fa == 0.0:
        return RootResult(a, 0.0, 0, True)
    if fb == 0.0:
        return RootResult(b, 0.0, 0, True)
    x = a if abs(fa) < abs(fb) else b
    fx = fa if x == a else fb
    for it in range(1, maxiter + 1):
        d = df(x)
        step_ok = d > 0 and math.isfinite(d)
        xn = x - fx / d if step_ok else math.nan
        if not (a < xn < b):
            xn = 0.5 * (a + b)
        fn = f(xn)
        if fn < 0:
            a = xn
        else:
            b = xn
        scale = max(1.0, abs(xn))
        if abs(fn) <= tol or (b - a) <= 4e-16 * scale:
            return RootResult(xn, fn, it, True)
        if abs(xn - x) <= tol * scale and abs(fn) <= math.sqrt(tol):
            return RootResult(xn, fn, it, True)
        x, fx = xn, fn
    return RootResult(x, fx, maxiter, False)


def require(result: RootResult | Unreachable, what: str) -> RootResult:
    if isinstance(result, Unreachable):
        raise ConvergenceError(f"{what}: target outside the reachable range")
    if not result.converged:
        raise ConvergenceError(
            f"{what}: no convergence after {result.iterations} iterations "
            f"(residual {result.residual:.3e})"
        )
    return result


def golden_minimize(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-12, maxiter: int = 300
) -> tuple[float, float]:
    """Golden-section search for a unimodal f on [a, b]; endpoints included."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    cands = [(fc, c), (fd, d), (f(a), a), (f(b), b)]
    best = min(cands)
    return best[1], best[0]
