"""Conserved quantities and discrete Sobolev norms."""
from __future__ import annotations

from dataclasses import dataclass, astuple
import math

import numpy as np

from . import kernels
from .dispersion import omega
from .dynamics import EquationSpec
from .spectral import Field, pack, to_padded, transform

CSV_HEADER = "t,mass,l2,hamiltonian,hs_half,max_abs"


@dataclass(frozen=True)
class InvariantRecord:
    time: float
    mass: float
    l2: float
    hamiltonian: float
    hs_half: float
    max_abs: float

    def csv_row(self) -> str:
        return ",".join(format(v, ".17g") for v in astuple(self))


def default_quartic_sign(eq: EquationSpec) -> float:
    # Fixed by a conservation-drift desk experiment (tests/test_observables.py::
    # test_hamiltonian_sign_desk_experiment): with the defocusing flow
    # u_t = G u_xx + u^2 u_x the potential term enters with +1/12 and stays
    # conserved to ~1e-12; the -1/12 variant drifts at O(1) relative.
    return eq.sign_factor


def _power_integral(f: Field, p: int) -> float:
    """Integral of u^p over the box on an alias-free padded grid."""
    g = f.grid
    m = g.n * math.ceil(p / 2)
    u = to_padded(pack(f.values), g.n, m)
    return float(np.sum(kernels.int_power(u, p)) * (g.length / m))


def quadratic_energy(f: Field, eq: EquationSpec) -> float:
    """(1/2) * integral u G u_x  generalised to any symbol: (L/2) sum omega/xi |c|^2."""
    g = f.grid
    c = transform(f).coeffs
    xi = g.wavenumbers
    w = omega(xi, eq.kind)
    ratio = np.divide(w, xi, out=np.zeros_like(w), where=xi != 0)
    return 0.5 * g.length * float(np.sum(ratio * np.abs(c) ** 2))


def hamiltonian(f: Field, eq: EquationSpec, quartic_sign: float | None = None) -> float:
    """Quadratic energy + sign * integral u^(k+2) / ((k+1)(k+2)).

    For k = 2 the potential term is sign * u^4 / 12.
    """
    k = eq.k
    sign = default_quartic_sign(eq) if quartic_sign is None else quartic_sign
    pot = _power_integral(f, k + 2) / ((k + 1) * (k + 2))
    return quadratic_energy(f, eq) + sign * pot


def hs_norm(f: Field, s: float) -> float:
    if s < 0:
        raise ValueError(f"Sobolev index must be non-negative, got {s}")
    g = f.grid
    c = transform(f).coeffs
    weight = (1.0 + g.wavenumbers ** 2) ** s
    return math.sqrt(g.length * float(np.sum(weight * np.abs(c) ** 2)))


def hs_distance(a: Field, b: Field, s: float) -> float:
    if not a.grid.same_as(b.grid):
        raise ValueError("fields live on different grids")
    return hs_norm(Field(a.grid, a.values - b.values), s)


def invariants(f: Field, eq: EquationSpec, time: float = 0.0,
               quartic_sign: float | None = None) -> InvariantRecord:
    g = f.grid
    c = transform(f).coeffs
    mass = g.length * c[0].real
    l2 = g.length * float(np.sum(np.abs(c) ** 2))
    return InvariantRecord(
        time=float(time),
        mass=float(mass),
        l2=l2,
        hamiltonian=hamiltonian(f, eq, quartic_sign),
        hs_half=hs_norm(f, 0.5),
        max_abs=float(np.max(np.abs(f.values))) if g.n else 0.0,
    )
