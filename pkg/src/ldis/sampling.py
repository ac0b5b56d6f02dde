"""Flat array encodings of per-coordinate models for the compiled samplers.

Continuous laws (Gaussian and Exponential components) become rows of a
component table; a model is a run of consecutive rows.  Sampling rows may be
truncated to the support of the nominal law, which is how proposals that put
mass outside supp(p) are thinned.  Finite-support laws live on a shared atom
grid, so a draw is an atom index and densities are table lookups.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import log_ndtr, logsumexp, ndtr

from ._kernels import EXPO, GAUSS, sample_continuous, sample_discrete
from .distributions import DistributionModel, Exponential, Gaussian, Mixture
from .errors import AbsContError
from .rng import RandomStream

_FLOAT_FIELDS = ("logw", "cumw", "pa", "pb", "tlo", "flo", "fhi")
_INT_FIELDS = ("kind", "upper")


def parts(model: DistributionModel) -> list[tuple[float, DistributionModel]]:
    if isinstance(model, Mixture):
        return list(zip(model.weights, model.components))
    return [(1.0, model)]


def _log_sub(la: float, lb: float) -> float:
    if lb == -math.inf:
        return la
    if lb >= la:
        return -math.inf
    return la + math.log1p(-math.exp(lb - la))


def _normalize(log_masses: list[float]) -> tuple[np.ndarray, np.ndarray, float]:
    """Renormalized log weights, their cumulative sums and the total log mass."""
    total = float(logsumexp(log_masses))
    logw = np.array(log_masses) - total
    cum = np.cumsum(np.exp(logw))
    cum[-1] = 1.0
    return logw, cum, total


def _clip_log_pi(log_pi: float) -> float:
    # rounding must not turn an untruncated proposal into a thinned one
    return 0.0 if log_pi > -1e-15 else log_pi


@dataclass
class ContinuousTable:
    rows: dict = field(default_factory=lambda: {k: [] for k in _FLOAT_FIELDS + _INT_FIELDS})
    dens_first: list = field(default_factory=list)
    dens_count: list = field(default_factory=list)
    samp_first: list = field(default_factory=list)
    samp_count: list = field(default_factory=list)

    def _row(self, comp, logw: float, window=None) -> float | None:
        """Append one component, truncated to ``window`` if given.
        Returns the log of the retained mass, or None if nothing is kept."""
        rec = dict(logw=logw, cumw=0.0, tlo=-math.inf, flo=0.0, fhi=1.0, upper=0)
        lo, hi = window if window is not None else (-math.inf, math.inf)
        if isinstance(comp, Gaussian):
            sd = math.sqrt(comp.sigma2)
            a, b = (lo - comp.mu) / sd, (hi - comp.mu) / sd
            if math.isinf(a) and math.isinf(b):
                log_mass = 0.0
            elif a > 0:
                rec.update(flo=float(ndtr(-a)), fhi=float(ndtr(-b)), upper=1)
                log_mass = _log_sub(float(log_ndtr(-a)), float(log_ndtr(-b)))
            else:
                rec.update(flo=float(ndtr(a)), fhi=float(ndtr(b)))
                log_mass = _log_sub(float(log_ndtr(b)), float(log_ndtr(a)))
            rec.update(kind=GAUSS, pa=comp.mu, pb=sd)
        elif isinstance(comp, Exponential):
            lo = max(lo, 0.0)
            if hi <= lo:
                return None
            frac = -math.expm1(-comp.rate * (hi - lo)) if math.isfinite(hi) else 1.0
            log_mass = -comp.rate * lo + math.log(frac)
            rec.update(kind=EXPO, pa=comp.rate, pb=0.0, tlo=lo, fhi=frac)
        else:
            raise AbsContError("finite-support component in a continuous model")
        if log_mass == -math.inf:
            return None
        for k, v in rec.items():
            self.rows[k].append(v)
        return log_mass

    def add_density(self, model: DistributionModel) -> int:
        first = len(self.rows["kind"])
        ps = parts(model)
        for w, c in ps:
            self._row(c, math.log(w))
        self.dens_first.append(first)
        self.dens_count.append(len(ps))
        return len(self.dens_first) - 1

    def add_sampling(self, model: DistributionModel, window=None) -> tuple[int, float]:
        """Sampling model for ``model`` restricted to ``window``.
        Returns (index, log of the retained mass)."""
        first = len(self.rows["kind"])
        kept = []
        for w, c in parts(model):
            lm = self._row(c, 0.0, window)
            if lm is not None:
                kept.append(math.log(w) + lm)
        self.samp_first.append(first)
        self.samp_count.append(len(kept))
        if not kept:
            return len(self.samp_first) - 1, -math.inf
        logw, cum, total = _normalize(kept)
        self.rows["logw"][first:] = logw.tolist()
        self.rows["cumw"][first:] = cum.tolist()
        return len(self.samp_first) - 1, _clip_log_pi(min(total, 0.0))

    def arrays(self) -> dict:
        out = {k: np.array(self.rows[k], dtype=np.float64) for k in _FLOAT_FIELDS}
        out.update({k: np.array(self.rows[k], dtype=np.int64) for k in _INT_FIELDS})
        for k in ("dens_first", "dens_count", "samp_first", "samp_count"):
            out[k] = np.array(getattr(self, k), dtype=np.int64)
        return out


@dataclass
class DiscreteTable:
    """Sampling rows over a fixed atom grid; ``didx`` maps row entries to atoms."""

    atoms: np.ndarray
    cumw: list = field(default_factory=list)
    doff: list = field(default_factory=list)
    dlen: list = field(default_factory=list)
    didx: list = field(default_factory=list)
    dcdf: list = field(default_factory=list)
    samp_first: list = field(default_factory=list)
    samp_count: list = field(default_factory=list)

    def density_row(self, model: DistributionModel) -> np.ndarray:
        return np.asarray(model.log_density(self.atoms), dtype=float)

    def add_sampling(self, model: DistributionModel) -> tuple[int, float]:
        """Sampling model for ``model`` restricted to the atom grid."""
        first = len(self.doff)
        kept = []
        for w, c in parts(model):
            lp = np.asarray(c.log_density(self.atoms), dtype=float)
            live = np.flatnonzero(lp > -np.inf)
            if len(live) == 0:
                continue
            lm = float(logsumexp(lp[live]))
            cdf = np.cumsum(np.exp(lp[live] - lm))
            cdf[-1] = 1.0
            self.doff.append(len(self.didx))
            self.dlen.append(len(live))
            self.didx.extend(live.tolist())
            self.dcdf.extend(cdf.tolist())
            kept.append(math.log(w) + lm)
        self.samp_first.append(first)
        self.samp_count.append(len(kept))
        if not kept:
            return len(self.samp_first) - 1, -math.inf
        _, cum, total = _normalize(kept)
        self.cumw.extend(cum.tolist())
        return len(self.samp_first) - 1, _clip_log_pi(min(total, 0.0))

    def arrays(self) -> dict:
        out = {
            "atoms": np.asarray(self.atoms, dtype=np.float64),
            "cumw": np.array(self.cumw or [1.0], dtype=np.float64),
            "dcdf": np.array(self.dcdf or [1.0], dtype=np.float64),
        }
        for k in ("doff", "dlen", "didx", "samp_first", "samp_count"):
            out[k] = np.array(getattr(self, k) or [0], dtype=np.int64)
        return out


def atom_grid(model: DistributionModel) -> np.ndarray:
    return np.array(sorted(model.support()), dtype=float)


def uniforms_per_draw(model: DistributionModel) -> int:
    return 2 if isinstance(model, Mixture) else 1


def sample_many(model: DistributionModel, stream: RandomStream, size: int) -> np.ndarray:
    """``size`` draws; each consumes uniforms_per_draw(model) uniforms."""
    per = uniforms_per_draw(model)
    u = stream.uniforms(per * size)
    u_pick, u_val = (u, u) if per == 1 else (np.ascontiguousarray(u[0::2]), np.ascontiguousarray(u[1::2]))
    if model.is_discrete:
        table = DiscreteTable(atom_grid(model))
        table.add_sampling(model)
        a = table.arrays()
        return sample_discrete(u_pick, u_val, 0, int(a["samp_count"][0]), a["cumw"], a["doff"], a["dlen"], a["didx"], a["dcdf"], a["atoms"])
    table = ContinuousTable()
    table.add_sampling(model)
    a = table.arrays()
    return sample_continuous(u_pick, u_val, 0, int(a["samp_count"][0]), a["cumw"], a["kind"], a["pa"], a["pb"], a["tlo"], a["flo"], a["fhi"], a["upper"])


def sample(model: DistributionModel, stream: RandomStream) -> float:
    return float(sample_many(model, stream, 1)[0])
