"""Periodic pseudospectral substrate.

Convention: on a box of length L with points x_j = jL/n - L/2,

    u(x) = sum_j c_j exp(i xi_j x),    xi_j = 2 pi j / L,

with j running over -n/2+1 .. n/2 in FFT ordering (the Nyquist wavenumber
+pi n/L sits at index n/2). Because the grid starts at -L/2 the raw FFT picks
up a (-1)^j phase, which ``transform``/``inverse`` remove.

Internally the stepper works on the *packed* half spectrum
``rfft(u) / n`` (no phase correction, Nyquist entry last). Diagonal
multipliers and pointwise products are insensitive to that phase, so the
packed form is used wherever speed matters.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import math
from typing import Callable

import numpy as np

from . import kernels


class ConfigurationError(ValueError):
    """Invalid grid, equation or run parameters."""


SUPPORTED_POWERS = (1, 2, 3, 4)


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    n: int
    length: float
    points: np.ndarray
    wavenumbers: np.ndarray

    @property
    def dx(self) -> float:
        return self.length / self.n

    @cached_property
    def half_wavenumbers(self) -> np.ndarray:
        """Wavenumbers of the packed (rfft) layout, 0 .. pi n / L."""
        return _frozen(2.0 * np.pi * np.arange(self.n // 2 + 1) / self.length)

    @cached_property
    def phase(self) -> np.ndarray:
        """(-1)^j in FFT ordering."""
        return _frozen(np.where(np.arange(self.n) % 2 == 0, 1.0, -1.0))

    def same_as(self, other: "SpectralGrid") -> bool:
        return self.n == other.n and self.length == other.length


@dataclass(frozen=True, eq=False)
class Field:
    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise ValueError(f"field has {values.shape} values, grid needs ({self.grid.n},)")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", _frozen(values))


@dataclass(frozen=True, eq=False)
class Spectrum:
    grid: SpectralGrid
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.grid.n,):
            raise ValueError(f"spectrum has {coeffs.shape} coefficients, grid needs ({self.grid.n},)")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("spectrum contains non-finite coefficients")
        object.__setattr__(self, "coeffs", _frozen(coeffs))


def make_grid(n: int, length: float) -> SpectralGrid:
    if isinstance(n, bool) or int(n) != n:
        raise ConfigurationError(f"grid size must be an integer, got {n!r}")
    n = int(n)
    if n % 2 or n < 8:
        raise ConfigurationError(f"grid size must be even and >= 8, got {n}")
    length = float(length)
    if not (math.isfinite(length) and length > 0):
        raise ConfigurationError(f"box length must be positive and finite, got {length}")
    j = np.fft.fftfreq(n, d=1.0 / n)
    j[n // 2] = n // 2
    points = np.arange(n) * (length / n) - length / 2
    return SpectralGrid(n, length, _frozen(points), _frozen(2.0 * np.pi * j / length))


def transform(f: Field) -> Spectrum:
    coeffs = np.fft.fft(f.values) * (f.grid.phase / f.grid.n)
    return Spectrum(f.grid, coeffs)


def inverse(s: Spectrum, *, check_real: bool = False) -> Field:
    """Back to physical space; the imaginary residue is dropped.

    With ``check_real`` a residue above 1e-12 max|u| raises instead.
    """
    g = s.grid
    values = np.fft.ifft(s.coeffs * g.phase) * g.n
    if check_real:
        scale = max(np.abs(values.real).max(), np.finfo(float).tiny)
        if np.abs(values.imag).max() > 1e-12 * scale:
            raise ValueError("spectrum does not represent a real field")
    return Field(g, values.real.copy())


def apply_multiplier(s: Spectrum, m: Callable[[np.ndarray], np.ndarray],
                     *, zero_nyquist: bool | None = None) -> Spectrum:
    """Multiply every coefficient by m(xi_j).

    The Nyquist coefficient is zeroed whenever m(xi_{n/2}) is not real (odd
    symbols such as i xi or -i sgn xi), unless ``zero_nyquist`` says otherwise.
    """
    xi = s.grid.wavenumbers
    sym = np.broadcast_to(np.asarray(m(xi), dtype=complex), xi.shape)
    if not np.all(np.isfinite(sym)):
        bad = xi[~np.isfinite(sym)]
        raise ValueError(f"symbol is not finite at wavenumber(s) {bad[:4]}")
    out = s.coeffs * sym
    nyq = s.grid.n // 2
    if zero_nyquist is None:
        zero_nyquist = sym[nyq].imag != 0.0
    if zero_nyquist:
        out[nyq] = 0.0
    return Spectrum(s.grid, out)


# --------------------------------------------------------------------------
# packed (rfft) helpers used by the stepper and observables
# --------------------------------------------------------------------------

def padded_size(n: int, power: int) -> int:
    """Smallest multiple of n that makes a degree-``power`` product alias-free."""
    return n * math.ceil((power + 1) / 2)


def pack(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    c = np.fft.rfft(values) / n
    c[-1] = 0.0
    return c


def unpack(c: np.ndarray, n: int) -> np.ndarray:
    return np.fft.irfft(c, n) * n


def to_padded(c: np.ndarray, n: int, m: int) -> np.ndarray:
    """Physical values on an m-point grid of the band-limited packed field."""
    cp = np.zeros(m // 2 + 1, dtype=complex)
    cp[: n // 2] = c[: n // 2]
    return np.fft.irfft(cp, m) * m


def from_padded(values: np.ndarray, n: int) -> np.ndarray:
    """Packed n-mode projection of an m-point field; Nyquist dropped."""
    m = values.shape[0]
    c = np.fft.rfft(values)[: n // 2 + 1] / m
    c[-1] = 0.0
    return c


def packed_power(c: np.ndarray, n: int, k: int) -> np.ndarray:
    """Dealiased packed spectrum of u^(k+1)."""
    m = padded_size(n, k + 1)
    u = to_padded(c, n, m)
    return from_padded(kernels.int_power(u, k + 1), n)


def dealiased_power_derivative(f: Field, k: int) -> Field:
    """d/dx (f^(k+1)) / (k+1), alias-free for band-limited f.

    f is zero-padded to ``padded_size(n, k+1)`` points, raised to the power
    pointwise, truncated back to n modes and differentiated spectrally.
    """
    if k not in SUPPORTED_POWERS:
        raise ConfigurationError(f"nonlinearity power k must be one of {SUPPORTED_POWERS}, got {k}")
    g = f.grid
    c = packed_power(pack(f.values), g.n, k)
    c *= 1j * g.half_wavenumbers / (k + 1)
    return Field(g, unpack(c, g.n))
