import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mfdf.spectral import (
    ConfigurationError, Field, Spectrum, apply_multiplier, dealiased_power_derivative,
    inverse, make_grid, padded_size, transform,
)

from conftest import brute_force_power_derivative, mode_index, random_modes


class TestMakeGrid:
    def test_integer_wavenumbers_on_2pi_box(self):
        g = make_grid(8, 2 * math.pi)
        np.testing.assert_allclose(g.wavenumbers, [0, 1, 2, 3, 4, -3, -2, -1], atol=1e-15)

    def test_halved_box_doubles_wavenumbers(self):
        g = make_grid(8, math.pi)
        np.testing.assert_allclose(g.wavenumbers, [0, 2, 4, 6, 8, -6, -4, -2], atol=1e-14)

    @pytest.mark.parametrize("n", [7, 6, 0, -8])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ConfigurationError):
            make_grid(n, 2 * math.pi)

    @pytest.mark.parametrize("length", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_length(self, length):
        with pytest.raises(ConfigurationError):
            make_grid(8, length)

    @given(n=st.integers(4, 256).map(lambda h: 2 * h), length=st.floats(0.1, 1e3))
    def test_invariants(self, n, length):
        g = make_grid(n, length)
        np.testing.assert_allclose(np.diff(g.points), length / n, rtol=1e-9)
        assert g.points[0] == -length / 2
        w = g.wavenumbers
        # +- pairs except 0 and Nyquist
        np.testing.assert_allclose(w[1:n // 2], -w[:n // 2:-1], rtol=1e-12)
        assert w[0] == 0 and w[n // 2] == pytest.approx(math.pi * n / length)

    def test_arrays_are_read_only(self):
        g = make_grid(8, 1.0)
        with pytest.raises(ValueError):
            g.points[0] = 1.0


class TestTransform:
    def test_cosine(self):
        g = make_grid(8, 2 * math.pi)
        c = transform(Field(g, np.cos(g.points))).coeffs
        expected = np.zeros(8)
        expected[[1, 7]] = 0.5
        np.testing.assert_allclose(c, expected, atol=1e-15)

    def test_constant(self):
        g = make_grid(8, 2 * math.pi)
        c = transform(Field(g, np.ones(8))).coeffs
        np.testing.assert_allclose(c, [1, 0, 0, 0, 0, 0, 0, 0], atol=1e-15)

    def test_series_convention_on_shifted_grid(self):
        # u(x) = sum c_j exp(i xi_j x) must hold at the actual points, which start at -L/2
        g = make_grid(16, 5.0)
        x = g.points
        u = np.sin(2 * math.pi * 3 * x / 5.0) + 0.3 * np.cos(2 * math.pi * x / 5.0)
        c = transform(Field(g, u)).coeffs
        rebuilt = (c[None, :] * np.exp(1j * np.outer(x, g.wavenumbers))).sum(axis=1)
        np.testing.assert_allclose(rebuilt.real, u, atol=1e-13)

    @given(seed=st.integers(0, 2 ** 32 - 1), h=st.integers(4, 128), length=st.floats(0.5, 500))
    @settings(max_examples=50)
    def test_roundtrip_and_plancherel(self, seed, h, length):
        g = make_grid(2 * h, length)
        u = np.random.default_rng(seed).normal(size=g.n)
        f = Field(g, u)
        s = transform(f)
        back = inverse(s).values
        assert np.max(np.abs(back - u)) <= 1e-12 * np.max(np.abs(u))
        energy = np.sum(u ** 2) * g.dx
        assert abs(energy - g.length * np.sum(np.abs(s.coeffs) ** 2)) <= 1e-12 * energy

    def test_rejects_non_finite(self):
        g = make_grid(8, 1.0)
        with pytest.raises(ValueError):
            Field(g, np.array([0, 1, 2, np.nan, 0, 0, 0, 0.0]))
        with pytest.raises(ValueError):
            Spectrum(g, np.full(8, np.inf, dtype=complex))

    def test_check_real(self):
        g = make_grid(8, 1.0)
        c = np.zeros(8, dtype=complex)
        c[1] = 1.0
        with pytest.raises(ValueError):
            inverse(Spectrum(g, c), check_real=True)


class TestMultiplier:
    def test_identity(self, rng):
        g = make_grid(16, 3.0)
        s = transform(Field(g, rng.normal(size=16)))
        out = apply_multiplier(s, lambda xi: np.ones_like(xi))
        np.testing.assert_array_equal(out.coeffs, s.coeffs)

    def test_derivative_of_sine(self, grid_2pi):
        g = grid_2pi
        s = transform(Field(g, np.sin(g.points)))
        out = inverse(apply_multiplier(s, lambda xi: 1j * xi)).values
        np.testing.assert_allclose(out, np.cos(g.points), atol=1e-14)

    def test_hilbert_of_cosine(self, grid_2pi):
        g = grid_2pi
        s = transform(Field(g, np.cos(g.points)))
        out = inverse(apply_multiplier(s, lambda xi: -1j * np.sign(xi))).values
        np.testing.assert_allclose(out, np.sin(g.points), atol=1e-14)

    def test_odd_symbol_zeroes_nyquist(self, rng):
        g = make_grid(16, 2 * math.pi)
        s = transform(Field(g, rng.normal(size=16)))
        assert apply_multiplier(s, lambda xi: 1j * xi).coeffs[8] == 0
        assert apply_multiplier(s, lambda xi: xi ** 2).coeffs[8] != 0

    def test_non_finite_symbol(self, grid_2pi):
        s = transform(Field(grid_2pi, np.cos(grid_2pi.points)))
        with pytest.raises(ValueError, match="not finite"):
            with np.errstate(divide="ignore"):
                apply_multiplier(s, lambda xi: 1.0 / xi)

    @given(seed=st.integers(0, 2 ** 32 - 1), power=st.integers(1, 5))
    @settings(max_examples=30)
    def test_odd_imaginary_symbols_keep_fields_real(self, seed, power):
        g = make_grid(64, 7.0)
        u = np.random.default_rng(seed).normal(size=g.n)
        s = transform(Field(g, u))
        out = apply_multiplier(s, lambda xi: 1j * np.sign(xi) * np.abs(xi) ** power / (1 + xi ** 2))
        values = np.fft.ifft(out.coeffs * g.phase) * g.n
        assert np.max(np.abs(values.imag)) <= 1e-12 * np.max(np.abs(u)) * (1 + np.max(np.abs(values.real)))


class TestPowerDerivative:
    def test_cosine_cubed(self):
        g = make_grid(16, 2 * math.pi)
        x = g.points
        out = dealiased_power_derivative(Field(g, np.cos(x)), 2).values
        np.testing.assert_allclose(out, -(np.sin(x) + np.sin(3 * x)) / 4, atol=1e-15)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_constant(self, k):
        g = make_grid(16, 3.0)
        out = dealiased_power_derivative(Field(g, np.full(16, 0.7)), k).values
        np.testing.assert_allclose(out, 0.0, atol=1e-15)

    @pytest.mark.parametrize("k", [0, 5])
    def test_unsupported_power(self, k):
        g = make_grid(16, 3.0)
        with pytest.raises(ConfigurationError):
            dealiased_power_derivative(Field(g, np.ones(16)), k)

    def test_padding_is_two_n_for_cubic(self):
        assert padded_size(64, 3) == 128

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_matches_brute_force_convolution(self, rng, k):
        # full band (|j| < n/2): any aliasing would show up here
        n, length = 16, 4.0
        g = make_grid(n, length)
        for _ in range(3):
            c = random_modes(rng, n, n // 2 - 1)
            u = inverse(Spectrum(g, c))
            got = transform(dealiased_power_derivative(u, k)).coeffs
            want = brute_force_power_derivative(c, length, k)
            scale = np.max(np.abs(want))
            np.testing.assert_allclose(got, want, atol=1e-12 * scale)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_narrow_band_equals_analytic_product(self, rng, k):
        # modes |j| <= n/(k+2): compare with the product on a much finer grid
        n = 48
        g = make_grid(n, 2 * math.pi)
        jmax = n // (k + 2)
        c = random_modes(rng, n, jmax)
        got = dealiased_power_derivative(inverse(Spectrum(g, c)), k)
        fine = make_grid(8 * n, 2 * math.pi)
        cf = np.zeros(8 * n, dtype=complex)
        j = mode_index(n)
        cf[j % (8 * n)] = c
        uf = inverse(Spectrum(fine, cf)).values
        pf = transform(Field(fine, uf ** (k + 1))).coeffs
        jf = mode_index(8 * n)
        keep = np.abs(jf) < n // 2
        want = np.zeros(n, dtype=complex)
        want[jf[keep] % n] = 1j * fine.wavenumbers[keep] * pf[keep] / (k + 1)
        got_c = transform(got).coeffs
        np.testing.assert_allclose(got_c, want, atol=1e-12 * np.max(np.abs(want)))
