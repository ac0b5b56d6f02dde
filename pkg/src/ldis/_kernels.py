"""Compiled inner loops: one call simulates replications j0 <= j < j1.

Each kernel writes only the hits (log-likelihood ratio, sample mean and
replication index) in replication order and returns how many it wrote.  Replication j reads its
randomness from its own counter space, so results do not depend on how the
index range is split.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from .rng import STREAM_COMPONENT, STREAM_PATH, STREAM_THIN, fill_uniforms, gamma_variate, make_tag, ndtri, uniform_pair

GAUSS, EXPO, DISC = 0, 1, 2
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@njit(cache=True, nogil=True)
def _pick(cum, first, count, u):
    i = 0
    while i < count - 1 and u > cum[first + i]:
        i += 1
    return first + i


@njit(cache=True, nogil=True)
def _in_event(x, alo, ahi):
    for a in range(alo.shape[0]):
        if alo[a] <= x <= ahi[a]:
            return True
    return False


@njit(cache=True, nogil=True)
def _mixture_log_lr(s, n, logw, theta, lam):
    # -log sum_k w_k exp(theta_k s - n lam_k)
    m = -np.inf
    for k in range(theta.shape[0]):
        v = logw[k] + theta[k] * s - n * lam[k]
        if v > m:
            m = v
    acc = 0.0
    for k in range(theta.shape[0]):
        acc += math.exp(logw[k] + theta[k] * s - n * lam[k] - m)
    return -(m + math.log(acc))


@njit(cache=True, nogil=True)
def chunk_gauss(seed, n, j0, j1, cum, logw, theta, lam, loc, scale, ulo, uhi, alo, ahi, out_logl, out_xbar, out_j):
    """S_n drawn directly: component k gives S_n ~ N(loc_k, scale_k^2).

    Hits are decided on the uniform itself (u in [ulo, uhi]), so the
    quantile transform runs only for replications that land in A.
    """
    L = theta.shape[0]
    tag0 = make_tag(n, STREAM_PATH)
    tag1 = make_tag(n, STREAM_COMPONENT)
    cnt = 0
    for j in range(j0, j1):
        i = 0
        if L > 1:
            uc, _ = uniform_pair(seed, j, tag1, 0)
            i = _pick(cum, 0, L, uc)
        u, _ = uniform_pair(seed, j, tag0, 0)
        hit = False
        for a in range(ulo.shape[1]):
            if ulo[i, a] <= u <= uhi[i, a]:
                hit = True
                break
        if not hit:
            continue
        s = loc[i] + scale[i] * ndtri(u)
        xbar = s / n
        if not _in_event(xbar, alo, ahi):
            continue
        out_logl[cnt] = _mixture_log_lr(s, n, logw, theta, lam)
        out_xbar[cnt] = xbar
        out_j[cnt] = j
        cnt += 1
    return cnt


@njit(cache=True, nogil=True)
def chunk_gamma(seed, n, j0, j1, cum, logw, theta, lam, rate, alo, ahi, out_logl, out_xbar, out_j):
    """S_n drawn directly: component k gives S_n ~ Gamma(n, rate_k)."""
    L = theta.shape[0]
    tag0 = make_tag(n, STREAM_PATH)
    tag1 = make_tag(n, STREAM_COMPONENT)
    cnt = 0
    for j in range(j0, j1):
        i = 0
        if L > 1:
            uc, _ = uniform_pair(seed, j, tag1, 0)
            i = _pick(cum, 0, L, uc)
        s = gamma_variate(float(n), seed, j, tag0) / rate[i]
        xbar = s / n
        if not _in_event(xbar, alo, ahi):
            continue
        out_logl[cnt] = _mixture_log_lr(s, n, logw, theta, lam)
        out_xbar[cnt] = xbar
        out_j[cnt] = j
        cnt += 1
    return cnt


# per-coordinate models for the direct path
#
# Helpers take scalars only: passing arrays into non-trivial helpers costs a
# reference-count round trip per call, which dominates these loops.


@njit(cache=True, nogil=True)
def _logpdf(kind, pa, pb, x):
    if kind == GAUSS:
        z = (x - pa) / pb
        return -0.5 * z * z - math.log(pb) - LOG_SQRT_2PI
    if x < 0.0:
        return -np.inf
    return math.log(pa) - pa * x


@njit(cache=True, nogil=True)
def _draw(kind, u, pa, pb, tlo, flo, fhi, upper):
    """Inverse-CDF draw from a Gaussian or Exponential truncated to the
    window recorded in (tlo, flo, fhi, upper)."""
    if kind == GAUSS:
        if upper:
            z = -ndtri(flo - u * (flo - fhi))
        else:
            z = ndtri(flo + u * (fhi - flo))
        return pa + pb * z
    return tlo - math.log1p(-u * fhi) / pa


@njit(cache=True, nogil=True)
def chunk_direct(
    seed, n, j0, j1,
    path_cum, path_logw, log_pi,
    dens_first, dens_count, samp_first, samp_count,
    logw, cumw, kind, pa, pb, tlo, flo, fhi, upper,
    alo, ahi, out_logl, out_xbar, out_j,
):
    """Continuous laws, coordinate by coordinate.  Density model 0 is p and
    models 1..L are the path components; sampling model i draws component i
    restricted to supp p, and a path survives that restriction with
    probability pi_i^n (decided up front on the thinning stream)."""
    L = path_logw.shape[0]
    tag0 = make_tag(n, STREAM_PATH)
    tag1 = make_tag(n, STREAM_COMPONENT)
    tag2 = make_tag(n, STREAM_THIN)
    buf = np.empty(2 * n + 2)
    lq = np.empty(L)
    cnt = 0
    for j in range(j0, j1):
        i = 0
        if L > 1:
            uc, _ = uniform_pair(seed, j, tag1, 0)
            i = _pick(path_cum, 0, L, uc)
        if log_pi[i] < 0.0:
            ut, _ = uniform_pair(seed, j, tag2, 0)
            if math.log(ut) >= n * log_pi[i]:
                continue
        sf = samp_first[i]
        sc = samp_count[i]
        per = 1 if sc == 1 else 2
        fill_uniforms(buf, n * per, seed, j, tag0)
        s = 0.0
        lp = 0.0
        for k in range(L):
            lq[k] = 0.0
        for t in range(n):
            c = sf
            if per == 1:
                u = buf[t]
            else:
                v = buf[2 * t]
                while c < sf + sc - 1 and v > cumw[c]:
                    c += 1
                u = buf[2 * t + 1]
            x = _draw(kind[c], u, pa[c], pb[c], tlo[c], flo[c], fhi[c], upper[c])
            s += x
            for mdl in range(L + 1):
                f = dens_first[mdl]
                if dens_count[mdl] == 1:
                    val = _logpdf(kind[f], pa[f], pb[f], x)
                else:
                    mx = -np.inf
                    for cc in range(f, f + dens_count[mdl]):
                        w = logw[cc] + _logpdf(kind[cc], pa[cc], pb[cc], x)
                        if w > mx:
                            mx = w
                    acc = 0.0
                    if mx > -np.inf:
                        for cc in range(f, f + dens_count[mdl]):
                            acc += math.exp(logw[cc] + _logpdf(kind[cc], pa[cc], pb[cc], x) - mx)
                    val = mx + math.log(acc) if mx > -np.inf else -np.inf
                if mdl == 0:
                    lp += val
                else:
                    lq[mdl - 1] += val
        xbar = s / n
        if not _in_event(xbar, alo, ahi):
            continue
        m = -np.inf
        for k in range(L):
            v = path_logw[k] + lq[k]
            if v > m:
                m = v
        acc = 0.0
        for k in range(L):
            acc += math.exp(path_logw[k] + lq[k] - m)
        logl = lp - (m + math.log(acc))
        if logl == -np.inf:
            continue
        out_logl[cnt] = logl
        out_xbar[cnt] = xbar
        out_j[cnt] = j
        cnt += 1
    return cnt


@njit(cache=True, nogil=True)
def chunk_discrete(
    seed, n, j0, j1,
    path_cum, path_logw, log_pi,
    samp_first, samp_count, cumw, doff, dlen, didx, dcdf,
    atoms, dens,
    alo, ahi, out_logl, out_xbar, out_j,
):
    """Finite-support laws on a shared atom grid: dens[0] holds log p and
    dens[k + 1] the log-probabilities of path component k at each atom."""
    L = path_logw.shape[0]
    K = atoms.shape[0]
    tag0 = make_tag(n, STREAM_PATH)
    tag1 = make_tag(n, STREAM_COMPONENT)
    tag2 = make_tag(n, STREAM_THIN)
    buf = np.empty(2 * n + 2)
    counts = np.zeros(K, dtype=np.int64)
    vals = np.empty(L)
    cnt = 0
    for j in range(j0, j1):
        i = 0
        if L > 1:
            uc, _ = uniform_pair(seed, j, tag1, 0)
            i = _pick(path_cum, 0, L, uc)
        if log_pi[i] < 0.0:
            ut, _ = uniform_pair(seed, j, tag2, 0)
            if math.log(ut) >= n * log_pi[i]:
                continue
        sf = samp_first[i]
        sc = samp_count[i]
        per = 1 if sc == 1 else 2
        fill_uniforms(buf, n * per, seed, j, tag0)
        for a in range(K):
            counts[a] = 0
        for t in range(n):
            c = sf
            if per == 1:
                u = buf[t]
            else:
                v = buf[2 * t]
                while c < sf + sc - 1 and v > cumw[c]:
                    c += 1
                u = buf[2 * t + 1]
            pos = doff[c]
            last = pos + dlen[c] - 1
            while pos < last and u > dcdf[pos]:
                pos += 1
            counts[didx[pos]] += 1
        s = 0.0
        for a in range(K):
            s += counts[a] * atoms[a]
        xbar = s / n
        if not _in_event(xbar, alo, ahi):
            continue
        lp = 0.0
        for a in range(K):
            if counts[a] > 0:
                lp += counts[a] * dens[0, a]
        m = -np.inf
        for k in range(L):
            v = path_logw[k]
            for a in range(K):
                if counts[a] > 0:
                    v += counts[a] * dens[k + 1, a]
            vals[k] = v
            if v > m:
                m = v
        acc = 0.0
        for k in range(L):
            acc += math.exp(vals[k] - m)
        logl = lp - (m + math.log(acc))
        if logl == -np.inf:
            continue
        out_logl[cnt] = logl
        out_xbar[cnt] = xbar
        out_j[cnt] = j
        cnt += 1
    return cnt


@njit(cache=True)
def sample_continuous(u_pick, u_val, first, count, cumw, kind, pa, pb, tlo, flo, fhi, upper):
    out = np.empty(u_val.shape[0])
    for t in range(u_val.shape[0]):
        c = first
        while c < first + count - 1 and u_pick[t] > cumw[c]:
            c += 1
        out[t] = _draw(kind[c], u_val[t], pa[c], pb[c], tlo[c], flo[c], fhi[c], upper[c])
    return out


@njit(cache=True)
def sample_discrete(u_pick, u_val, first, count, cumw, doff, dlen, didx, dcdf, atoms):
    out = np.empty(u_val.shape[0])
    for t in range(u_val.shape[0]):
        c = first
        while c < first + count - 1 and u_pick[t] > cumw[c]:
            c += 1
        pos = doff[c]
        last = pos + dlen[c] - 1
        while pos < last and u_val[t] > dcdf[pos]:
            pos += 1
        out[t] = atoms[didx[pos]]
    return out
