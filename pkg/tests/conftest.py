import itertools
import math

import numpy as np
import pytest

from mfdf.spectral import make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid_2pi():
    return make_grid(16, 2 * math.pi)


def random_modes(rng, n, jmax):
    """Full FFT-ordered coefficient vector of a real field on modes 1..jmax."""
    c = np.zeros(n, dtype=complex)
    modes = rng.normal(size=jmax) + 1j * rng.normal(size=jmax)
    c[1:jmax + 1] = modes
    c[-jmax:] = np.conj(modes[::-1])
    c[0] = rng.normal()
    return c


def mode_index(n):
    """Integer mode numbers j in FFT ordering, Nyquist positive."""
    j = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    j[n // 2] = n // 2
    return j


def brute_force_power_derivative(coeffs, length, k):
    """Oracle: d/dx u^(k+1) / (k+1) by explicit enumeration of mode tuples.

    Every (k+1)-tuple of non-zero input modes contributes c_a c_b ... to the
    output mode a+b+...; the result is truncated to |m| < n/2 and multiplied by
    i xi_m / (k+1). No FFT is involved.
    """
    n = len(coeffs)
    j = mode_index(n)
    support = [(int(jj), c) for jj, c in zip(j, coeffs) if c != 0 and abs(jj) < n // 2]
    acc = {}
    for combo in itertools.product(support, repeat=k + 1):
        m = sum(a for a, _ in combo)
        prod = 1.0 + 0.0j
        for _, c in combo:
            prod *= c
        acc[m] = acc.get(m, 0.0) + prod
    out = np.zeros(n, dtype=complex)
    for idx, jj in enumerate(j):
        if abs(jj) < n // 2 and jj in acc:
            out[idx] = 1j * (2 * math.pi * jj / length) * acc[jj] / (k + 1)
    return out


# --------------------------------------------------------------------------
# acceptance report: one PASS/FAIL line per criterion in the terminal summary
# --------------------------------------------------------------------------

_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    def report(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
