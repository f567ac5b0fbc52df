"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

The public names at the bottom of the module are bound to one of the two
paths at import time (see ``mfdf._accel``). Both implementations stay
importable as ``*_numba`` / ``*_numpy`` so tests and the benchmark can compare
them directly.
"""
from fractions import Fraction
import math

import numpy as np

from ._accel import njit, pick

# Dispersion codes shared by every kernel.
FDF, FDF2, BO, AIRY = 0, 1, 2, 3

# Below this |x| the function g(x) = coth(x) - 1/x and its derivatives are
# summed from their Taylor series; above it the closed forms lose at most a
# factor ~20 to cancellation.
SERIES_SWITCH = 1.0
_SERIES_TERMS = 24
EXP_NEGLIGIBLE = 40.0


def _bernoulli_even(count):
    """Exact B_0, B_2, ..., B_{2*count} via the Akiyama-Tanigawa recurrence."""
    size = 2 * count + 1
    work = [Fraction(0)] * (size + 1)
    out = []
    for m in range(size + 1):
        work[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            work[j - 1] = j * (work[j - 1] - work[j])
        if m % 2 == 0:
            out.append(work[0])
    return out[:count + 1]


def _series_tables():
    bern = _bernoulli_even(_SERIES_TERMS)
    # g(x) = sum_{n>=1} a_n x^(2n-1),  a_n = 4^n B_2n / (2n)!
    a = [Fraction(4 ** n) * bern[n] / math.factorial(2 * n) for n in range(1, _SERIES_TERMS + 1)]
    g0 = np.array([float(c) for c in a])
    g1 = np.array([float((2 * n - 1) * c) for n, c in enumerate(a, start=1)])
    g2 = np.array([float((2 * n - 1) * (2 * n - 2) * c) for n, c in enumerate(a, start=1)][1:])
    return g0, g1, g2


G_SERIES, G1_SERIES, G2_SERIES = _series_tables()


# --------------------------------------------------------------------------
# g(x) = coth(x) - 1/x and derivatives
# --------------------------------------------------------------------------

@njit
def _horner(coeffs, y):
    acc = 0.0
    for i in range(coeffs.shape[0] - 1, -1, -1):
        acc = acc * y + coeffs[i]
    return acc


@njit
def _g_parts_scalar(x, g0, g1, g2):
    """(g, g', g'') at a scalar x, using g odd / g' even / g'' odd."""
    ax = abs(x)
    sgn = 1.0 if x >= 0.0 else -1.0
    if ax < SERIES_SWITCH:
        y = ax * ax
        v0 = ax * _horner(g0, y)
        v1 = _horner(g1, y)
        v2 = ax * _horner(g2, y)
    else:
        # beyond |x| = 40, e < 2e-35 no longer changes any of the sums below
        e = math.exp(-2.0 * ax) if ax < EXP_NEGLIGIBLE else 0.0
        coth = (1.0 + e) / (1.0 - e)
        csch2 = 4.0 * e / ((1.0 - e) * (1.0 - e))
        v0 = coth - 1.0 / ax
        v1 = 1.0 / (ax * ax) - csch2
        v2 = 2.0 * csch2 * coth - 2.0 / (ax * ax * ax)
    return sgn * v0, v1, sgn * v2


def g_parts_numpy(x):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    sgn = np.where(x >= 0.0, 1.0, -1.0)
    small = ax < SERIES_SWITCH
    v0 = np.empty_like(ax)
    v1 = np.empty_like(ax)
    v2 = np.empty_like(ax)
    if small.any():
        xs = ax[small]
        y = xs * xs
        v0[small] = xs * np.polynomial.polynomial.polyval(y, G_SERIES)
        v1[small] = np.polynomial.polynomial.polyval(y, G1_SERIES)
        v2[small] = xs * np.polynomial.polynomial.polyval(y, G2_SERIES)
    big = ~small
    if big.any():
        xb = ax[big]
        e = np.exp(-2.0 * xb)
        coth = (1.0 + e) / (1.0 - e)
        csch2 = 4.0 * e / ((1.0 - e) * (1.0 - e))
        v0[big] = coth - 1.0 / xb
        v1[big] = 1.0 / (xb * xb) - csch2
        v2[big] = 2.0 * csch2 * coth - 2.0 / (xb * xb * xb)
    return sgn * v0, v1, sgn * v2


# --------------------------------------------------------------------------
# dispersion relation
# --------------------------------------------------------------------------

@njit
def _omega_scalar(xi, code, delta, g0, g1, g2):
    if code == BO:
        return xi * abs(xi)
    if code == AIRY:
        return xi * xi * xi
    g, _, _ = _g_parts_scalar(2.0 * math.pi * delta * xi, g0, g1, g2)
    w = g * xi * xi
    if code == FDF2:
        w *= 3.0 / (2.0 * math.pi * delta)
    return w


@njit
def _omega_all_loop(xi, code, delta, g0, g1, g2):
    n = xi.shape[0]
    w = np.empty(n)
    w1 = np.empty(n)
    w2 = np.empty(n)
    for i in range(n):
        x = xi[i]
        if code == BO:
            w[i] = x * abs(x)
            w1[i] = 2.0 * abs(x)
            w2[i] = 2.0 if x > 0.0 else (-2.0 if x < 0.0 else 0.0)
        elif code == AIRY:
            w[i] = x * x * x
            w1[i] = 3.0 * x * x
            w2[i] = 6.0 * x
        else:
            c = 2.0 * math.pi * delta
            g, gp, gpp = _g_parts_scalar(c * x, g0, g1, g2)
            w[i] = g * x * x
            w1[i] = gp * c * x * x + 2.0 * x * g
            w2[i] = gpp * c * c * x * x + 4.0 * c * x * gp + 2.0 * g
            if code == FDF2:
                s = 3.0 / (2.0 * math.pi * delta)
                w[i] *= s
                w1[i] *= s
                w2[i] *= s
    return w, w1, w2


def omega_all_numba(xi, code, delta):
    xi = np.ascontiguousarray(xi, dtype=float).ravel()
    return _omega_all_loop(xi, int(code), float(delta), G_SERIES, G1_SERIES, G2_SERIES)


def omega_all_numpy(xi, code, delta):
    x = np.ascontiguousarray(xi, dtype=float).ravel()
    if code == BO:
        return x * np.abs(x), 2.0 * np.abs(x), 2.0 * np.sign(x)
    if code == AIRY:
        return x ** 3, 3.0 * x * x, 6.0 * x
    c = 2.0 * math.pi * delta
    g, gp, gpp = g_parts_numpy(c * x)
    w = g * x * x
    w1 = gp * c * x * x + 2.0 * x * g
    w2 = gpp * c * c * x * x + 4.0 * c * x * gp + 2.0 * g
    if code == FDF2:
        s = 3.0 / (2.0 * math.pi * delta)
        w, w1, w2 = w * s, w1 * s, w2 * s
    return w, w1, w2


# --------------------------------------------------------------------------
# ETDRK4 stage arithmetic
# --------------------------------------------------------------------------

@njit
def etd_stage_numba(e, v, q, nl):
    out = np.empty_like(v)
    for i in range(v.shape[0]):
        out[i] = e[i] * v[i] + q[i] * nl[i]
    return out


def etd_stage_numpy(e, v, q, nl):
    return e * v + q * nl


@njit
def etd_final_numba(e, v, f1, f2, f3, nv, na, nb, nc):
    out = np.empty_like(v)
    for i in range(v.shape[0]):
        out[i] = e[i] * v[i] + f1[i] * nv[i] + 2.0 * f2[i] * (na[i] + nb[i]) + f3[i] * nc[i]
    return out


def etd_final_numpy(e, v, f1, f2, f3, nv, na, nb, nc):
    return e * v + f1 * nv + 2.0 * f2 * (na + nb) + f3 * nc


@njit
def int_power_numba(u, p):
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        x = u[i]
        acc = x
        for _ in range(p - 1):
            acc *= x
        out[i] = acc
    return out


def int_power_numpy(u, p):
    out = u.copy()
    for _ in range(p - 1):
        out *= u
    return out


# --------------------------------------------------------------------------
# trilinear Duhamel quadrature (ill-posedness probe)
# --------------------------------------------------------------------------

# (e^{itP} - 1)/(iP) switches to its Taylor series below this |tP|.
DUHAMEL_SERIES = 1e-4


@njit
def _duhamel_kernel(t, p):
    th = t * p
    if abs(th) < DUHAMEL_SERIES:
        th2 = th * th
        return complex(t * (1.0 - th2 / 6.0), t * (th / 2.0 - th * th2 / 24.0))
    sh = math.sin(0.5 * th)
    return complex(math.sin(th) / p, 2.0 * sh * sh / p)


@njit
def _probe_loop(xs, windows, m, t, code, delta, g0, g1, g2):
    """Sum over window triples of the (xi1, xi2) Duhamel integral at each xi."""
    nout = xs.shape[0]
    npat = windows.shape[0]
    out = np.zeros(nout, dtype=np.complex128)
    for ix in range(nout):
        x = xs[ix]
        wx = _omega_scalar(x, code, delta, g0, g1, g2)
        acc = 0.0 + 0.0j
        for ip in range(npat):
            a1 = windows[ip, 0]
            b1 = windows[ip, 1]
            a2 = windows[ip, 2]
            b2 = windows[ip, 3]
            a3 = windows[ip, 4]
            b3 = windows[ip, 5]
            if x < a1 + a2 + a3 or x > b1 + b2 + b3:
                continue
            h1 = (b1 - a1) / m
            for i in range(m):
                x1 = a1 + (i + 0.5) * h1
                lo = max(a2, x - x1 - b3)
                hi = min(b2, x - x1 - a3)
                if hi <= lo:
                    continue
                w1 = _omega_scalar(x1, code, delta, g0, g1, g2)
                h2 = (hi - lo) / m
                inner = 0.0 + 0.0j
                for j in range(m):
                    x2 = lo + (j + 0.5) * h2
                    x3 = x - x1 - x2
                    p = (w1 + _omega_scalar(x2, code, delta, g0, g1, g2)
                         + _omega_scalar(x3, code, delta, g0, g1, g2) - wx)
                    inner += _duhamel_kernel(t, p)
                acc += inner * h2 * h1
        out[ix] = acc
    return out


def probe_integral_numba(xs, windows, m, t, code, delta):
    xs = np.ascontiguousarray(xs, dtype=float)
    windows = np.ascontiguousarray(windows, dtype=float)
    return _probe_loop(xs, windows, int(m), float(t), int(code), float(delta),
                       G_SERIES, G1_SERIES, G2_SERIES)


def _duhamel_kernel_numpy(t, p):
    th = t * p
    small = np.abs(th) < DUHAMEL_SERIES
    safe = np.where(small, 1.0, p)
    th2 = th * th
    re = np.where(small, t * (1.0 - th2 / 6.0), np.sin(th) / safe)
    im = np.where(small, t * (th / 2.0 - th * th2 / 24.0), 2.0 * np.sin(0.5 * th) ** 2 / safe)
    return re + 1j * im


def probe_integral_numpy(xs, windows, m, t, code, delta):
    xs = np.asarray(xs, dtype=float)
    windows = np.asarray(windows, dtype=float)
    out = np.zeros(xs.shape[0], dtype=complex)
    mid = (np.arange(m) + 0.5) / m
    for ix, x in enumerate(xs):
        wx = omega_all_numpy(np.array([x]), code, delta)[0][0]
        acc = 0.0 + 0.0j
        for a1, b1, a2, b2, a3, b3 in windows:
            if x < a1 + a2 + a3 or x > b1 + b2 + b3:
                continue
            h1 = (b1 - a1) / m
            x1 = a1 + mid * (b1 - a1)
            lo = np.maximum(a2, x - x1 - b3)
            hi = np.minimum(b2, x - x1 - a3)
            keep = hi > lo
            if not keep.any():
                continue
            x1, lo, hi = x1[keep], lo[keep], hi[keep]
            h2 = (hi - lo) / m
            x2 = lo[:, None] + mid[None, :] * (hi - lo)[:, None]
            x3 = x - x1[:, None] - x2
            w1 = omega_all_numpy(x1, code, delta)[0]
            w2 = omega_all_numpy(x2, code, delta)[0].reshape(x2.shape)
            w3 = omega_all_numpy(x3, code, delta)[0].reshape(x3.shape)
            p = w1[:, None] + w2 + w3 - wx
            inner = _duhamel_kernel_numpy(t, p).sum(axis=1)
            acc += np.sum(inner * h2) * h1
        out[ix] = acc
    return out


omega_all = pick(omega_all_numba, omega_all_numpy)
etd_stage = pick(etd_stage_numba, etd_stage_numpy)
etd_final = pick(etd_final_numba, etd_final_numpy)
int_power = pick(int_power_numba, int_power_numpy)
probe_integral = pick(probe_integral_numba, probe_integral_numpy)
