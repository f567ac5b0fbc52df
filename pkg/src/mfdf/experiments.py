"""Studies: delta -> infinity limit, scaling and depth transforms, ill-posedness probe."""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .dispersion import bo, fdf, fdf2, omega
from .dynamics import EquationSpec, evolve, steps_for
from .observables import hs_distance, hs_norm
from .spectral import ConfigurationError, Field, make_grid, transform


# --------------------------------------------------------------------------
# limit study
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LimitStudyResult:
    deltas: list
    errors: list
    fitted_rate: float  # errors ~ delta^(-fitted_rate); nan when undefined
    s: float
    T: float

    def csv(self) -> str:
        rows = ["delta,error"] + [f"{d:.17g},{e:.17g}" for d, e in zip(self.deltas, self.errors)]
        return "\n".join(rows) + "\n"


def fit_rate(deltas, errors) -> float:
    """Minus the least-squares slope of log(error) on log(delta), largest half of the list."""
    d = np.asarray(deltas, dtype=float)
    e = np.asarray(errors, dtype=float)
    keep = slice(len(d) // 2, None)
    d, e = d[keep], e[keep]
    if len(d) < 2 or np.any(e <= 0):
        return math.nan
    return float(-np.polyfit(np.log(d), np.log(e), 1)[0])


def _trajectory(u0, eq, dt, nsteps, every, nonlinear_scale):
    out = []
    evolve(u0, eq, dt, nsteps, every=every, nonlinear_scale=nonlinear_scale,
           callback=lambda i, v: out.append(v.copy()))
    return out


def limit_study(config, deltas, s: float = 0.5, T: float | None = None, *,
                nonlinear: bool = True) -> LimitStudyResult:
    """sup_t ||u_delta(t) - v(t)||_{H^s} for mFDF(delta) against mBO.

    All runs share the grid, dt, initial data and nonlinearity of ``config``;
    errors are sampled every ``output_every`` steps and at T.
    """
    deltas = [float(d) for d in deltas]
    if len(deltas) < 3:
        raise ConfigurationError("limit study needs at least three deltas")
    if any(b <= a for a, b in zip(deltas, deltas[1:])) or deltas[0] <= 0:
        raise ConfigurationError("deltas must be positive and strictly increasing")
    T = config.t_end if T is None else float(T)
    grid = config.grid()
    u0 = config.initial_field(grid)
    dt = config.step_size()
    nsteps = config.step_count(T)
    every = math.gcd(config.output_every, nsteps) if nsteps else 1
    scale = 1.0 if nonlinear else 0.0
    ref_kind = bo(config.k, config.sign)
    ref = _trajectory(u0, EquationSpec(ref_kind), dt, nsteps, every, scale)
    errors = []
    for d in deltas:
        eq = EquationSpec(fdf(d, config.k, config.sign))
        run = _trajectory(u0, eq, dt, nsteps, every, scale)
        errors.append(max(hs_distance(Field(grid, a), Field(grid, b), s) for a, b in zip(run, ref)))
    return LimitStudyResult(deltas, errors, fit_rate(deltas, errors), s, T)


def linear_limit_error(u0: Field, delta: float, times, s: float) -> float:
    """Closed form of the linear-only study: sup_t ||(e^{it w_delta} - e^{it xi|xi|}) c||_{H^s}."""
    g = u0.grid
    c = transform(u0).coeffs.copy()
    c[g.n // 2] = 0.0
    xi = g.wavenumbers
    wd = omega(xi, fdf(delta))
    wb = xi * np.abs(xi)
    weight = g.length * (1.0 + xi ** 2) ** s
    best = 0.0
    for t in times:
        diff = np.exp(1j * t * wd) - np.exp(1j * t * wb)
        best = max(best, math.sqrt(float(np.sum(weight * np.abs(diff * c) ** 2))))
    return best


# --------------------------------------------------------------------------
# symmetry checks
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    discrepancy: float
    rows: list  # (label, box length, delta, t_end, steps, l2 of initial data, H^s of final)

    def csv(self) -> str:
        out = ["run,length,delta,t_end,steps,l2_initial,hs_final"]
        for label, length, delta, t_end, steps, l2, hs in self.rows:
            out.append(f"{label},{length:.17g},{delta:.17g},{t_end:.17g},{steps},{l2:.17g},{hs:.17g}")
        return "\n".join(out) + "\n"


def _relative(a: Field, b: Field, s: float) -> float:
    num = hs_distance(a, b, s)
    den = hs_norm(b, s)
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def scaling_runs(config, lam: float, s: float = 0.5) -> CheckResult:
    """u0 under delta to T versus u0_lambda under lambda*delta to lambda^2 T.

    The scaled run uses a box lambda*L with the same number of modes (so the
    collocation points are the originals stretched by lambda) and the same
    physical step size, i.e. lambda^2 times as many steps.
    """
    if not (math.isfinite(lam) and lam > 0):
        raise ConfigurationError(f"lambda must be positive, got {lam}")
    kind = config.kind()
    if kind.tag != "FDF":
        raise ConfigurationError("scaling invariance holds for the mFDF/gFDF family only")
    k = kind.k
    grid = config.grid()
    u0 = config.initial_field(grid)
    dt = config.step_size()
    T = config.t_end
    n1 = config.step_count()
    u1 = evolve(u0, EquationSpec(kind), dt, n1)

    grid_l = make_grid(grid.n, lam * grid.length)
    amp = lam ** (-1.0 / k)
    v0 = Field(grid_l, amp * u0.values)
    kind_l = fdf(lam * kind.delta, k, kind.sign)
    n2, dt2 = steps_for(lam ** 2 * T, dt)
    v1 = evolve(v0, EquationSpec(kind_l), dt2, n2)
    rescaled = Field(grid_l, amp * u1.values)
    rows = [
        ("original", grid.length, kind.delta, T, n1, hs_norm(u0, 0) ** 2, hs_norm(u1, s)),
        ("scaled", grid_l.length, kind_l.delta, lam ** 2 * T, n2, hs_norm(v0, 0) ** 2, hs_norm(v1, s)),
    ]
    return CheckResult(_relative(rescaled, v1, s), rows)


def scaling_check(config, lam: float, s: float = 0.5) -> float:
    return scaling_runs(config, lam, s).discrepancy


def transform_runs(config, delta: float | None = None, s: float = 0.5) -> CheckResult:
    """mFDF(delta) to a*T versus mFDF2(delta) from a^(1/2) u0 to T, a = 3/(2 pi delta)."""
    delta = config.delta if delta is None else float(delta)
    if delta is None:
        raise ConfigurationError("transform check needs delta")
    k, sign = config.k, config.sign
    if k != 2:
        raise ConfigurationError("the mFDF -> mFDF2 transform is for the cubic equation")
    a = 3.0 / (2.0 * math.pi * delta)
    grid = config.grid()
    u0 = config.initial_field(grid)
    dt = config.step_size()
    T = config.t_end
    n1, dt1 = steps_for(a * T, dt)
    u1 = evolve(u0, EquationSpec(fdf(delta, k, sign)), dt1, n1)
    v0 = Field(grid, math.sqrt(a) * u0.values)
    n2, dt2 = steps_for(T, dt)
    v1 = evolve(v0, EquationSpec(fdf2(delta, k, sign)), dt2, n2)
    mapped = Field(grid, math.sqrt(a) * u1.values)
    rows = [
        ("mfdf", grid.length, delta, a * T, n1, hs_norm(u0, 0) ** 2, hs_norm(u1, s)),
        ("mfdf2", grid.length, delta, T, n2, hs_norm(v0, 0) ** 2, hs_norm(v1, s)),
    ]
    return CheckResult(_relative(mapped, v1, s), rows)


def transform_check(config, delta: float | None = None, s: float = 0.5) -> float:
    return transform_runs(config, delta, s).discrepancy


# --------------------------------------------------------------------------
# ill-posedness probe
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    N: float
    gamma: float
    s: float
    t: float
    hs_value: float

    def csv_row(self) -> str:
        return f"{self.N:.17g},{self.gamma:.17g},{self.s:.17g},{self.t:.17g},{self.hs_value:.17g}"


PROBE_HEADER = "N,gamma,s,t,hs_value"


def _windows(carrier, gamma):
    plus = (carrier, carrier + gamma)
    minus = (-carrier - gamma, -carrier)
    rows = []
    for s1 in (plus, minus):
        for s2 in (plus, minus):
            for s3 in (plus, minus):
                rows.append(s1 + s2 + s3)
    return np.array(rows)


_trapezoid = getattr(np, "trapezoid", None) or np.trapz


def _check_probe_args(carrier, gamma, s, t, delta):
    if carrier < 64:
        raise ConfigurationError(f"carrier N must be >= 64, got {carrier}")
    if gamma <= 0 or t < 0 or gamma * t > 0.1:
        raise ConfigurationError(f"need gamma > 0, t >= 0 and gamma*t <= 0.1 (got {gamma}, {t})")
    if delta < 1:
        raise ConfigurationError(f"delta must be >= 1, got {delta}")
    if not 0 < s < 1:
        raise ConfigurationError(f"s must lie in (0, 1), got {s}")


def probe_spectrum(carrier, gamma, s, t, delta, xi, nodes=128):
    """Fourier transform at xi > 0 of the trilinear Duhamel term

        int_0^t U(t - tau) d/dx [ (U(tau) phi_N)^3 ] d tau

    for the two-window datum phi_N (transform N^-s gamma^-1/2 on [N, N+gamma]
    and [-N-gamma, -N]), by midpoint quadrature over (xi1, xi2)."""
    xi = np.asarray(xi, dtype=float)
    amp = carrier ** (-s) * gamma ** -0.5
    integral = kernels.probe_integral(xi, _windows(carrier, gamma), nodes, t, kernels.FDF, delta)
    w = omega(xi, fdf(delta))
    return 1j * xi * np.exp(1j * t * w) * amp ** 3 * integral / (2 * math.pi) ** 2


def _supports(carrier, gamma):
    # positive-frequency supports of sums of three window frequencies
    return [(carrier - gamma, carrier + 2 * gamma), (3 * carrier, 3 * carrier + 3 * gamma)]


def illposed_probe(N, gamma, s, t, delta, *, nodes: int = 128, out_nodes: int = 32) -> ProbeResult:
    """H^s norm of the trilinear Duhamel term at time t.

    ``out_nodes`` trapezoid intervals per gamma resolve |u_hat|^2 on each
    output support; the norm uses (1/2pi) int (1 + xi^2)^s |u_hat|^2 over both
    signs of xi (|u_hat| is even for real data).
    """
    _check_probe_args(N, gamma, s, t, delta)
    if t == 0:
        return ProbeResult(N, gamma, s, t, 0.0)
    total = 0.0
    for lo, hi in _supports(N, gamma):
        count = int(round((hi - lo) / gamma)) * out_nodes + 1
        xi = np.linspace(lo, hi, count)
        spec = probe_spectrum(N, gamma, s, t, delta, xi, nodes)
        dens = (1.0 + xi ** 2) ** s * np.abs(spec) ** 2
        total += _trapezoid(dens, xi)
    return ProbeResult(N, gamma, s, t, math.sqrt(2.0 * total / (2 * math.pi)))


def phase_corners(N, gamma, delta):
    """|P| at the corners of the near-resonant window triple (+N, +N, -N).

    P(xi, xi1, xi2) = w(xi1) + w(xi2) + w(xi - xi1 - xi2) - w(xi); the O(N gamma)
    parts cancel, leaving -2(a - c)(b - c) + O(gamma^2/N) for offsets a, b, c.
    """
    kind = fdf(delta)
    vals = []
    for a in (0.0, gamma):
        for b in (0.0, gamma):
            for c in (0.0, gamma):
                x1, x2, x3 = N + a, N + b, -N - c
                p = omega(x1, kind) + omega(x2, kind) + omega(x3, kind) - omega(x1 + x2 + x3, kind)
                vals.append(abs(p))
    return np.array(vals)
