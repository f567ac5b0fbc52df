"""Initial-data library."""
from __future__ import annotations

import numpy as np

from .spectral import Field, SpectralGrid, Spectrum, inverse


def gaussian(grid: SpectralGrid, amplitude: float, sigma: float, center: float = 0.0) -> Field:
    """amplitude * exp(-(x - center)^2 / sigma^2)."""
    return Field(grid, amplitude * np.exp(-((grid.points - center) / sigma) ** 2))


def sech(grid: SpectralGrid, amplitude: float, width: float, center: float = 0.0) -> Field:
    return Field(grid, amplitude / np.cosh((grid.points - center) / width))


def bandlimited(grid: SpectralGrid, seed: int, jmax: int, amplitude: float = 1.0) -> Field:
    """Random real field on modes 1 <= |j| <= jmax, scaled to max|u| = amplitude."""
    if not 1 <= jmax < grid.n // 2:
        raise ValueError(f"jmax must lie in [1, {grid.n // 2 - 1}], got {jmax}")
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(grid.n, dtype=complex)
    modes = rng.normal(size=jmax) + 1j * rng.normal(size=jmax)
    coeffs[1:jmax + 1] = modes
    coeffs[-jmax:] = np.conj(modes[::-1])
    values = inverse(Spectrum(grid, coeffs)).values
    peak = np.max(np.abs(values))
    return Field(grid, values * (amplitude / peak))


def phi_n(grid: SpectralGrid, carrier: float, gamma: float, s: float) -> Field:
    """Two-window data: coefficients N^-s gamma^-1/2 on gamma-wide windows at +-N.

    The continuum Fourier transform is sampled on the grid wavenumbers, so the
    windows must be wider than 2 pi / L to contain any mode.
    """
    xi = grid.wavenumbers
    inside = ((xi >= carrier) & (xi <= carrier + gamma)) | ((xi <= -carrier) & (xi >= -carrier - gamma))
    inside[grid.n // 2] = False
    if not inside.any():
        raise ValueError("window contains no grid wavenumber; enlarge the box or gamma")
    # u(x) = (1/2pi) integral u_hat e^{ix xi} d xi  ->  c_j = u_hat(xi_j) / L
    coeffs = np.where(inside, carrier ** (-s) * gamma ** -0.5, 0.0) / grid.length
    return inverse(Spectrum(grid, coeffs.astype(complex)))
