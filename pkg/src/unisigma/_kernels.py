"""Hot float loops: piecewise sigma over a grid and Bernstein-form evaluation.

Each kernel has a numba and a pure-numpy implementation.  Numba is used when
it imports and ``UNISIGMA_DISABLE_NUMBA`` is unset or ``0``; the public names
``sigma_grid`` and ``bernstein_eval`` point at the selected implementation.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("UNISIGMA_DISABLE_NUMBA", "0") in ("", "0")

# sigma_grid piece table columns
A, B, K, DELTA_R, DELTA_L = range(5)


def log_binomials(n: int) -> np.ndarray:
    return np.array([math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
                     for k in range(n + 1)])


# ---------------------------------------------------------------- numpy path

def _horner_rows_np(coeffs, s):
    acc = np.zeros_like(s)
    for j in range(coeffs.shape[1] - 1, -1, -1):
        acc = acc * s + coeffs[:, j]
    return acc


def _beta_np(near, far, alpha):
    # transition value 1/(1 + exp(1/far - 1/near)) with distances in units of alpha;
    # near = distance past the start, far = distance to the end
    out = np.where(far <= 0, 0.0, 1.0)
    inside = (near > 0) & (far > 0)
    if inside.any():
        x = (1.0 / far[inside] - 1.0 / near[inside]) / alpha
        with np.errstate(over="ignore"):
            out[inside] = 1.0 / (1.0 + np.exp(x))
    return out


def _piece_np(table, coeffs, j, s):
    return table[j, A] + table[j, B] * _horner_rows_np(coeffs[j], s)


def sigma_grid_numpy(kr, f, alpha, table, coeffs):
    kr = np.asarray(kr, dtype=np.int64)
    f = np.asarray(f, dtype=np.float64)
    out = np.empty_like(f)

    odd = kr % 2 == 1
    j = (kr[odd] + 1) // 2
    out[odd] = _piece_np(table, coeffs, j, f[odd])

    at_end = ~odd & (f == 0)
    out[at_end] = _piece_np(table, coeffs, kr[at_end] // 2, np.ones(int(at_end.sum())))

    first = ~odd & (f > 0) & (f <= 0.5)
    j, ff = kr[first] // 2, f[first]
    kv = table[j, K]
    beta = _beta_np(ff, table[j, DELTA_R] - ff, alpha)
    out[first] = kv - beta * (kv - _piece_np(table, coeffs, j, ff + 1))

    second = ~odd & (f > 0.5)
    j, ff = kr[second] // 2, f[second]
    kv = table[j, K]
    g = 1.0 - ff
    beta = _beta_np(table[j + 1, DELTA_L] - g, g, alpha)
    out[second] = kv - (1.0 - beta) * (kv - _piece_np(table, coeffs, j + 1, ff - 1))
    return out


def bernstein_eval_numpy(b, logc, x, chunk: int = 512):
    b = np.asarray(b, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    n = b.size - 1
    out = np.empty_like(x)
    k = np.arange(n + 1)
    for start in range(0, x.size, chunk):
        xs = x[start:start + chunk]
        inner = (xs > 0) & (xs < 1)
        res = np.where(xs <= 0, b[0], b[-1])
        if inner.any():
            xi = xs[inner][:, None]
            w = np.exp(logc[None, :] + k[None, :] * np.log(xi) + (n - k)[None, :] * np.log1p(-xi))
            res[inner] = w @ b
        out[start:start + chunk] = res
    return out


# ---------------------------------------------------------------- numba path

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _horner_jit(coeffs, m, s):
        acc = 0.0
        for j in range(coeffs.shape[1] - 1, -1, -1):
            acc = acc * s + coeffs[m, j]
        return acc

    @njit(cache=True)
    def _beta_jit(near, far, alpha):
        if far <= 0.0:
            return 0.0
        if near <= 0.0:
            return 1.0
        x = (1.0 / far - 1.0 / near) / alpha
        if x > 700.0:
            return 0.0
        return 1.0 / (1.0 + math.exp(x))

    @njit(cache=True)
    def sigma_grid_numba(kr, f, alpha, table, coeffs):
        out = np.empty(f.shape[0])
        for i in range(f.shape[0]):
            k, fi = kr[i], f[i]
            if k % 2 == 1:
                j = (k + 1) // 2
                out[i] = table[j, A] + table[j, B] * _horner_jit(coeffs, j, fi)
                continue
            j = k // 2
            if fi == 0.0:
                out[i] = table[j, A] + table[j, B] * _horner_jit(coeffs, j, 1.0)
                continue
            kv = table[j, K]
            if fi <= 0.5:
                piece = table[j, A] + table[j, B] * _horner_jit(coeffs, j, fi + 1.0)
                beta = _beta_jit(fi, table[j, DELTA_R] - fi, alpha)
                out[i] = kv - beta * (kv - piece)
            else:
                g = 1.0 - fi
                piece = table[j + 1, A] + table[j + 1, B] * _horner_jit(coeffs, j + 1, fi - 1.0)
                beta = _beta_jit(table[j + 1, DELTA_L] - g, g, alpha)
                out[i] = kv - (1.0 - beta) * (kv - piece)
        return out

    @njit(cache=True)
    def bernstein_eval_numba(b, logc, x):
        # one exp at the binomial mode, then weight ratios walking outward
        n = b.shape[0] - 1
        out = np.empty(x.shape[0])
        for j in range(x.shape[0]):
            xj = x[j]
            if xj <= 0.0:
                out[j] = b[0]
                continue
            if xj >= 1.0:
                out[j] = b[n]
                continue
            odds = xj / (1.0 - xj)
            mode = min(int(xj * (n + 1)), n)
            w0 = math.exp(logc[mode] + mode * math.log(xj) + (n - mode) * math.log1p(-xj))
            acc = w0 * b[mode]
            w = w0
            for k in range(mode + 1, n + 1):
                w *= odds * (n - k + 1) / k
                if w == 0.0:
                    break
                acc += w * b[k]
            w = w0
            for k in range(mode, 0, -1):
                w *= k / ((n - k + 1) * odds)
                if w == 0.0:
                    break
                acc += w * b[k - 1]
            out[j] = acc
        return out

else:  # pragma: no cover
    sigma_grid_numba = None
    bernstein_eval_numba = None


def sigma_grid(kr, f, alpha, table, coeffs):
    """Sigma right of ``alpha`` at ``t = alpha (2 base + kr + f)``.

    ``kr`` are integer interval offsets, ``f`` in [0, 1) the position inside
    the interval, and row ``j`` of ``table``/``coeffs`` describes piece
    ``base + j``.  Working relative to ``base`` keeps huge arguments exact.
    """
    kr = np.ascontiguousarray(kr, dtype=np.int64)
    f = np.ascontiguousarray(f, dtype=np.float64)
    if USE_NUMBA:
        return sigma_grid_numba(kr, f, float(alpha), table, coeffs)
    return sigma_grid_numpy(kr, f, float(alpha), table, coeffs)


def bernstein_eval(b, x, logc=None):
    """Evaluate ``sum_k b_k C(n,k) x^k (1-x)^(n-k)`` for ``x`` in [0, 1]."""
    b = np.ascontiguousarray(b, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.size and (x.min() < 0.0 or x.max() > 1.0):
        raise ValueError("Bernstein evaluation needs x in [0, 1]")
    if logc is None:
        logc = log_binomials(b.size - 1)
    if USE_NUMBA:
        return bernstein_eval_numba(b, logc, x)
    return bernstein_eval_numpy(b, logc, x)
