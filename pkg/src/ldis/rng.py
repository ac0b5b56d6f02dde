"""Counter-based uniforms (Philox4x32-10) and inverse-CDF transforms.

A uniform is addressed by (seed, replication j, tag, index): the 64-bit seed
is the Philox key and the counter is (index // 2, j_lo, j_hi, tag).  Each
Philox block yields two 53-bit uniforms in the open interval (0, 1), so any
replication's variates can be regenerated without touching the others.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S5 = np.uint64(5)
_S6 = np.uint64(6)
_TWO26 = np.uint64(67108864)
_INV53 = 1.0 / 9007199254740992.0

TAG_BITS = 24
STREAM_PATH = 0
STREAM_COMPONENT = 1
STREAM_THIN = 2


@njit(cache=True, nogil=True)
def philox4x32(c0, c1, c2, c3, k0, k1):
    c0 = np.uint64(c0)
    c1 = np.uint64(c1)
    c2 = np.uint64(c2)
    c3 = np.uint64(c3)
    k0 = np.uint64(k0)
    k1 = np.uint64(k1)
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0 = p0 >> _S32
        lo0 = p0 & _MASK
        hi1 = p1 >> _S32
        lo1 = p1 & _MASK
        c0, c1, c2, c3 = (hi1 ^ c1 ^ k0), lo1, (hi0 ^ c3 ^ k1), lo0
        k0 = (k0 + _W0) & _MASK
        k1 = (k1 + _W1) & _MASK
    return c0, c1, c2, c3


@njit(cache=True, nogil=True)
def make_tag(n, stream):
    return (np.uint64(n) & np.uint64((1 << TAG_BITS) - 1)) | (np.uint64(stream) << np.uint64(TAG_BITS))


@njit(cache=True, nogil=True)
def uniform_pair(seed, j, tag, block):
    """Two uniforms in (0, 1) from counter block ``block``."""
    s = np.uint64(seed)
    jj = np.uint64(j)
    x0, x1, x2, x3 = philox4x32(np.uint64(block), jj & _MASK, jj >> _S32, tag, s & _MASK, s >> _S32)
    u0 = (float((x0 >> _S5) * _TWO26 + (x1 >> _S6)) + 0.5) * _INV53
    u1 = (float((x2 >> _S5) * _TWO26 + (x3 >> _S6)) + 0.5) * _INV53
    return u0, u1


@njit(cache=True, nogil=True)
def fill_uniforms(out, count, seed, j, tag):
    """Write the first ``count`` uniforms of a (seed, j, tag) stream."""
    b = 0
    k = 0
    while k < count:
        u0, u1 = uniform_pair(seed, j, tag, b)
        out[k] = u0
        if k + 1 < count:
            out[k + 1] = u1
        k += 2
        b += 1


# inverse normal CDF: rational start plus one Halley step

_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


@njit(cache=True, nogil=True)
def _ndtri_lower(p):
    # p in (0, 0.5]
    if p < 0.02425:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    else:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        )
    e = 0.5 * math.erfc(-x / _SQRT2) - p
    u = e * _SQRT2PI * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


@njit(cache=True, nogil=True)
def ndtri(p):
    """Standard normal quantile for p in (0, 1)."""
    if p <= 0.5:
        return _ndtri_lower(p)
    return -_ndtri_lower(1.0 - p)


@njit(cache=True, nogil=True)
def normal_cdf(z):
    return 0.5 * math.erfc(-z / _SQRT2)


@njit(cache=True, nogil=True)
def normal_sf(z):
    return 0.5 * math.erfc(z / _SQRT2)


MT_MAX_ATTEMPTS = 10000


@njit(cache=True, nogil=True)
def gamma_variate(shape, seed, j, tag):
    """Gamma(shape, 1) for shape >= 1 by Marsaglia-Tsang; attempt t uses block t."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    for t in range(MT_MAX_ATTEMPTS):
        u1, u2 = uniform_pair(seed, j, tag, t)
        z = ndtri(u1)
        v = 1.0 + c * z
        if v <= 0.0:
            continue
        v = v * v * v
        if math.log(u2) < 0.5 * z * z + d - d * v + d * math.log(v):
            return d * v
    return d


@njit(cache=True)
def _uniform_array_from(seed, j, tag, first_block, count):
    out = np.empty(count)
    k = 0
    b = first_block
    while k < count:
        u0, u1 = uniform_pair(seed, j, tag, b)
        out[k] = u0
        if k + 1 < count:
            out[k + 1] = u1
        k += 2
        b += 1
    return out


class RandomStream:
    """Sequential view on one (seed, replication, tag) stream."""

    def __init__(self, seed: int, replication: int = 0, n: int = 0, stream: int = STREAM_PATH):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.replication = int(replication)
        self.tag = int(make_tag(n, stream))
        self.position = 0

    def uniforms(self, k: int) -> np.ndarray:
        first = self.position // 2
        off = self.position - 2 * first
        raw = _uniform_array_from(
            np.uint64(self.seed), np.uint64(self.replication), np.uint64(self.tag), first, off + k
        )
        self.position += k
        return raw[off:]

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])
