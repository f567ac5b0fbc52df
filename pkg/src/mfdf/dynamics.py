"""Time evolution: exact free flow and a fourth-order ETD Runge-Kutta stepper.

Written as

    u_t = L u + sigma * d/dx (u^(k+1)) / (k+1),    L = F^-1 [i omega(xi)] F,

with sigma = +1 for "defocusing" (the mFDF equation with -u^2 u_x on the left)
and -1 for "focusing".
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
import math

import numpy as np

from . import kernels
from .dispersion import DispersionKind, omega
from .spectral import (
    Field, Spectrum, SpectralGrid, apply_multiplier, dealiased_power_derivative,
    pack, packed_power, unpack,
)


class BlowUpError(RuntimeError):
    """Solution became non-finite or exceeded the amplitude cap."""

    def __init__(self, message, *, time, step_count, max_abs):
        super().__init__(message)
        self.time = time
        self.step_count = step_count
        self.max_abs = max_abs


@dataclass(frozen=True)
class EquationSpec:
    kind: DispersionKind

    @property
    def k(self) -> int:
        return self.kind.k

    @property
    def sign_factor(self) -> float:
        return self.kind.sign_factor


@dataclass(frozen=True, eq=False)
class SimState:
    time: float
    field: Field
    step_count: int = 0


# --------------------------------------------------------------------------
# phi functions
# --------------------------------------------------------------------------

PHI_SWITCH = 0.5
_PHI_TERMS = 24


def phi_functions(z):
    """phi_1, phi_2, phi_3 of z (complex array); Taylor series for |z| < 0.5."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < PHI_SWITCH
    phis = [np.empty_like(z) for _ in range(3)]
    if small.any():
        zs = z[small]
        for k in (1, 2, 3):
            # sum_m z^m / (m+k)!
            acc = np.zeros_like(zs)
            for m in range(_PHI_TERMS, -1, -1):
                acc = acc * zs + 1.0 / math.factorial(m + k)
            phis[k - 1][small] = acc
    big = ~small
    if big.any():
        zb = z[big]
        ez = np.exp(zb)
        p1 = (ez - 1.0) / zb
        p2 = (p1 - 1.0) / zb
        p3 = (p2 - 0.5) / zb
        phis[0][big], phis[1][big], phis[2][big] = p1, p2, p3
    return tuple(phis)


@dataclass(frozen=True, eq=False)
class StepperCoeffs:
    """Per-mode ETDRK4 weights on the packed half spectrum for one dt."""

    dt: float
    grid: SpectralGrid
    kind: DispersionKind
    expo: np.ndarray        # e^{dt L}
    expo_half: np.ndarray   # e^{dt L / 2}
    q: np.ndarray           # (dt/2) phi_1(dt L / 2)
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    dcoef: np.ndarray = dc_field(repr=False)  # sigma i xi / (k+1), Nyquist zeroed


def make_coeffs(grid: SpectralGrid, eq: EquationSpec, dt: float, *,
                nonlinear_scale: float = 1.0) -> StepperCoeffs:
    if not (math.isfinite(dt) and dt != 0.0):
        raise ValueError(f"time step must be finite and non-zero, got {dt}")
    xi = grid.half_wavenumbers
    lin = 1j * omega(xi, eq.kind)
    lin[-1] = 0.0
    z = dt * lin
    p1, p2, p3 = phi_functions(z)
    h1, _, _ = phi_functions(z / 2)
    dcoef = nonlinear_scale * eq.sign_factor * 1j * xi / (eq.k + 1)
    dcoef[-1] = 0.0
    return StepperCoeffs(
        dt=dt, grid=grid, kind=eq.kind,
        expo=np.exp(z), expo_half=np.exp(z / 2), q=0.5 * dt * h1,
        f1=dt * (p1 - 3 * p2 + 4 * p3),
        f2=dt * (p2 - 2 * p3),
        f3=dt * (4 * p3 - p2),
        dcoef=dcoef,
    )


# --------------------------------------------------------------------------
# operators
# --------------------------------------------------------------------------

def linear_propagate(s: Spectrum, t: float, eq: EquationSpec) -> Spectrum:
    """Exact free flow: coefficients times exp(i t omega(xi))."""
    if t == 0:
        return Spectrum(s.grid, s.coeffs.copy())
    kind = eq.kind
    return apply_multiplier(s, lambda xi: np.exp(1j * t * omega(xi, kind)), zero_nyquist=True)


def nonlinear_rhs(f: Field, eq: EquationSpec) -> Field:
    d = dealiased_power_derivative(f, eq.k)
    if eq.sign_factor < 0:
        return Field(f.grid, -d.values)
    return d


def _packed_rhs(c, coeffs: StepperCoeffs, k):
    return coeffs.dcoef * packed_power(c, coeffs.grid.n, k)


def etdrk4_packed(c, coeffs: StepperCoeffs, k):
    """One ETDRK4 step on a packed spectrum."""
    nv = _packed_rhs(c, coeffs, k)
    a = kernels.etd_stage(coeffs.expo_half, c, coeffs.q, nv)
    na = _packed_rhs(a, coeffs, k)
    b = kernels.etd_stage(coeffs.expo_half, c, coeffs.q, na)
    nb = _packed_rhs(b, coeffs, k)
    cc = kernels.etd_stage(coeffs.expo_half, a, coeffs.q, 2.0 * nb - nv)
    nc = _packed_rhs(cc, coeffs, k)
    return kernels.etd_final(coeffs.expo, c, coeffs.f1, coeffs.f2, coeffs.f3, nv, na, nb, nc)


def step(state: SimState, coeffs: StepperCoeffs, eq: EquationSpec, *, cap: float = math.inf) -> SimState:
    g = state.field.grid
    if not g.same_as(coeffs.grid):
        raise ValueError("stepper coefficients were built for a different grid")
    c = etdrk4_packed(pack(state.field.values), coeffs, eq.k)
    values = unpack(c, g.n)
    t = state.time + coeffs.dt
    _check_blowup(values, cap, t, state.step_count + 1)
    return SimState(t, Field(g, values), state.step_count + 1)


def _check_blowup(values, cap, t, count):
    peak = float(np.max(np.abs(values)))
    if not math.isfinite(peak) or peak > cap:
        raise BlowUpError(f"blow-up at t={t:.6g} (step {count}): max|u| = {peak:.6g}",
                          time=t, step_count=count, max_abs=peak)


def evolve(u0: Field, eq: EquationSpec, dt: float, nsteps: int, *,
           cap_factor: float = 1e6, every: int = 0, callback=None,
           nonlinear_scale: float = 1.0) -> Field:
    """Advance ``nsteps`` of size dt (dt may be negative).

    ``callback(step_count, values)`` runs at step 0 and every ``every`` steps.
    """
    g = u0.grid
    coeffs = make_coeffs(g, eq, dt, nonlinear_scale=nonlinear_scale)
    peak0 = float(np.max(np.abs(u0.values)))
    cap = cap_factor * peak0 if peak0 > 0 else math.inf
    c = pack(u0.values)
    if callback is not None:
        callback(0, unpack(c, g.n))
    for i in range(1, nsteps + 1):
        c = etdrk4_packed(c, coeffs, eq.k)
        values = unpack(c, g.n)
        _check_blowup(values, cap, i * dt, i)
        if callback is not None and every and i % every == 0:
            callback(i, values)
    return Field(g, unpack(c, g.n))


def default_dt(grid: SpectralGrid, kind: DispersionKind) -> float:
    """min(0.1 dx^2 L/(2 pi), (pi/4)/max|omega|) on the grid's wavenumbers."""
    accuracy = 0.1 * grid.dx ** 2 * grid.length / (2 * np.pi)
    wmax = float(np.max(np.abs(omega(grid.half_wavenumbers[:-1], kind))))
    phase = (np.pi / 4) / wmax if wmax > 0 else math.inf
    return min(accuracy, phase)


def steps_for(t_end: float, dt: float) -> tuple[int, float]:
    """Step count covering t_end with steps no larger than dt, and the adjusted dt."""
    if t_end == 0:
        return 0, dt
    n = max(1, math.ceil(t_end / dt - 1e-9))
    return n, t_end / n


@dataclass
class RunResult:
    final: SimState
    records: list
    snapshots: list


def run(config) -> RunResult:
    """Integrate ``config`` (a SimConfig) from t = 0 to t_end.

    Invariants are recorded at step 0, every ``output_every`` steps and at the
    final step; snapshots at each of ``snapshot_times``. Raises BlowUpError once
    max|u| exceeds ``blowup_factor`` times its initial value.
    """
    from .observables import invariants

    grid = config.grid()
    eq = config.equation_spec()
    dt = config.step_size()
    nsteps = config.step_count()
    snap_steps = set(config.snapshot_steps())
    u0 = config.initial_field(grid)
    records, snapshots = [], []

    def observe(i, values):
        f = Field(grid, values)
        t = config.t_end if i == nsteps else i * dt
        if i % config.output_every == 0 or i == nsteps:
            records.append(invariants(f, eq, t))
        if i in snap_steps:
            snapshots.append(SimState(t, f, i))

    if nsteps == 0:
        observe(0, u0.values)
        return RunResult(SimState(0.0, u0, 0), records, snapshots)

    every = math.gcd(config.output_every, *(s for s in snap_steps if s), nsteps)
    final = evolve(u0, eq, dt, nsteps, cap_factor=config.blowup_factor, every=every,
                   callback=observe)
    return RunResult(SimState(config.t_end, final, nsteps), records, snapshots)
