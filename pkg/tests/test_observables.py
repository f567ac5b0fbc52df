import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mfdf.dispersion import bo, fdf
from mfdf.dynamics import EquationSpec, default_dt, evolve, steps_for
from mfdf.initdata import bandlimited, gaussian
from mfdf.observables import (
    CSV_HEADER, InvariantRecord, default_quartic_sign, hamiltonian, hs_distance, hs_norm, invariants,
    quadratic_energy,
)
from mfdf.spectral import Field, make_grid

EQ = EquationSpec(fdf(1.0))


def cosine_field(n=16):
    g = make_grid(n, 2 * math.pi)
    return Field(g, np.cos(g.points))


def hamiltonian_drifts(quartic_sign):
    """Relative drift of H over the standard conservation run for a given quartic sign."""
    g = make_grid(1024, 64 * math.pi)
    u0 = gaussian(g, 0.1, 2.0)
    n, dt = steps_for(1.0, default_dt(g, fdf(1.0)))
    vals = []
    evolve(u0, EQ, dt, n, every=n // 4 or 1,
           callback=lambda i, v: vals.append(hamiltonian(Field(g, v), EQ, quartic_sign)))
    h0 = vals[0]
    return max(abs(h - h0) for h in vals) / abs(h0)


def test_hamiltonian_sign_desk_experiment():
    # Both candidate signs on the same run: the right one is conserved to
    # roundoff, the other drifts by orders of magnitude more.
    right = hamiltonian_drifts(+1.0)
    wrong = hamiltonian_drifts(-1.0)
    assert right <= 1e-7
    assert wrong >= 1e-5
    assert default_quartic_sign(EQ) == 1.0
    assert default_quartic_sign(EquationSpec(fdf(1.0, sign="focusing"))) == -1.0


class TestInvariants:
    def test_zero(self):
        g = make_grid(16, 3.0)
        rec = invariants(Field(g, np.zeros(16)), EQ)
        assert rec == InvariantRecord(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def test_cosine_mass_and_l2(self):
        rec = invariants(cosine_field(), EQ)
        assert rec.mass == pytest.approx(0.0, abs=1e-15)
        assert rec.l2 == pytest.approx(math.pi, rel=1e-15)
        assert rec.max_abs == 1.0

    def test_cosine_hamiltonian_closed_form(self):
        # oracle from mpmath: c(1) = coth(2 pi) - 1/(2 pi)
        with mp.workdps(30):
            c1 = mp.coth(2 * mp.pi) - 1 / (2 * mp.pi)
            quad = c1 * mp.pi / 2
            pot = mp.pi / 16  # int cos^4 / 12 = (3 pi / 4) / 12
            h_minus = float(quad - pot)
            h_plus = float(quad + pot)
        assert float(c1) == pytest.approx(0.840852031617140, rel=1e-14)
        f = cosine_field()
        assert hamiltonian(f, EQ, quartic_sign=-1.0) == pytest.approx(h_minus, rel=1e-14)
        assert h_minus == pytest.approx(1.12445774179287, rel=1e-13)
        assert hamiltonian(f, EQ) == pytest.approx(h_plus, rel=1e-14)

    def test_quartic_integral_is_alias_free(self):
        # cos(6x) on n = 16: u^4 has modes up to 24 > n/2; exact integral is 3 pi / 4
        g = make_grid(16, 2 * math.pi)
        f = Field(g, np.cos(6 * g.points))
        pot = hamiltonian(f, EQ, quartic_sign=1.0) - quadratic_energy(f, EQ)
        assert pot == pytest.approx((3 * math.pi / 4) / 12, rel=1e-14)

    def test_quadratic_energy_bo(self):
        # (1/2) int u H u_x = (L/2) sum |xi| |c|^2 for the Benjamin-Ono symbol
        g = make_grid(16, 2 * math.pi)
        f = Field(g, np.cos(3 * g.points))
        assert quadratic_energy(f, EquationSpec(bo())) == pytest.approx(math.pi * 0.25 * 2 * 3, rel=1e-14)

    def test_csv_row(self):
        rec = InvariantRecord(0.1, 0.0, 1.0 / 3.0, -2.0, 1e-300, 5.0)
        assert rec.csv_row() == "0.10000000000000001,0,0.33333333333333331,-2,1e-300,5"
        assert CSV_HEADER.count(",") == rec.csv_row().count(",")


class TestHsNorm:
    def test_cosine_s0(self):
        assert hs_norm(cosine_field(), 0.0) == pytest.approx(math.sqrt(math.pi), rel=1e-15)

    def test_cosine_half(self):
        # L * sum (1 + xi^2)^s |c|^2 = 2 pi * sqrt(2) * (1/4) * 2
        assert hs_norm(cosine_field(), 0.5) == pytest.approx(math.sqrt(math.pi * math.sqrt(2)), rel=1e-15)
        assert hs_norm(cosine_field(), 0.5) == pytest.approx(2.10781473051081, rel=1e-13)

    def test_negative_s(self):
        with pytest.raises(ValueError):
            hs_norm(cosine_field(), -0.1)

    @given(seed=st.integers(0, 2 ** 32 - 1), s1=st.floats(0, 3), s2=st.floats(0, 3))
    @settings(max_examples=50)
    def test_monotone_in_s(self, seed, s1, s2):
        g = make_grid(64, 10.0)
        f = Field(g, np.random.default_rng(seed).normal(size=64))
        lo, hi = sorted((s1, s2))
        assert hs_norm(f, lo) <= hs_norm(f, hi) * (1 + 1e-14)

    @given(seed=st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=50)
    def test_s0_matches_l2(self, seed):
        g = make_grid(64, 10.0)
        f = Field(g, np.random.default_rng(seed).normal(size=64))
        assert hs_norm(f, 0.0) ** 2 == pytest.approx(invariants(f, EQ).l2, rel=1e-13)

    def test_distance_grid_mismatch(self):
        a = cosine_field(16)
        b = cosine_field(32)
        with pytest.raises(ValueError):
            hs_distance(a, b, 0.5)

    def test_hs_half_bounds_l2(self):
        f = bandlimited(make_grid(64, 10.0), 5, 20)
        rec = invariants(f, EQ)
        assert rec.hs_half >= math.sqrt(rec.l2)


@pytest.fixture(scope="module")
def records():
    g = make_grid(1024, 64 * math.pi)
    u0 = gaussian(g, 0.1, 2.0)
    n, dt = steps_for(1.0, default_dt(g, fdf(1.0)))
    out = []
    evolve(u0, EQ, dt, n, every=16, callback=lambda i, v: out.append(invariants(Field(g, v), EQ, i * dt)))
    return out


class TestConservation:
    def test_drifts(self, records):
        first = records[0]
        for r in records[1:]:
            assert abs(r.mass - first.mass) <= 1e-12 * abs(first.mass)
            assert abs(r.l2 - first.l2) <= 1e-10 * first.l2
            assert abs(r.hamiltonian - first.hamiltonian) <= 1e-7 * abs(first.hamiltonian)

    def test_a_priori_boundedness(self, records):
        first = records[0]
        assert max(r.hs_half for r in records) <= 3 * first.hs_half
        # interpolation-style bound from the conserved quantities
        bound = math.sqrt(first.l2 + abs(2 * first.hamiltonian) + first.l2 ** 2)
        assert max(r.hs_half for r in records) <= 3 * bound
