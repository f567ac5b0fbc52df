"""Dispersion relations of the mFDF family and empirical checks of their bounds."""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from . import kernels
from .spectral import ConfigurationError, SUPPORTED_POWERS

TAGS = {"FDF": kernels.FDF, "FDF2": kernels.FDF2, "BO": kernels.BO, "AIRY": kernels.AIRY}
SIGNS = ("defocusing", "focusing")


@dataclass(frozen=True)
class DispersionKind:
    """Which linear symbol, with depth, nonlinearity power and sign.

    ``delta`` is required for FDF/FDF2 and must be None for BO/AIRY.
    """

    tag: str
    delta: float | None = None
    k: int = 2
    sign: str = "defocusing"

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ConfigurationError(f"unknown dispersion tag {self.tag!r}")
        if self.tag in ("FDF", "FDF2"):
            if self.delta is None or not (math.isfinite(self.delta) and self.delta > 0):
                raise ConfigurationError(f"{self.tag} needs a positive finite delta, got {self.delta!r}")
            object.__setattr__(self, "delta", float(self.delta))
        elif self.delta is not None:
            raise ConfigurationError(f"{self.tag} takes no delta")
        if self.k not in SUPPORTED_POWERS:
            raise ConfigurationError(f"k must be one of {SUPPORTED_POWERS}, got {self.k}")
        if self.sign not in SIGNS:
            raise ConfigurationError(f"sign must be one of {SIGNS}, got {self.sign!r}")

    @property
    def code(self) -> int:
        return TAGS[self.tag]

    @property
    def depth(self) -> float:
        return 0.0 if self.delta is None else self.delta

    @property
    def sign_factor(self) -> float:
        return 1.0 if self.sign == "defocusing" else -1.0


def fdf(delta, k=2, sign="defocusing"):
    return DispersionKind("FDF", delta, k, sign)


def fdf2(delta, k=2, sign="defocusing"):
    return DispersionKind("FDF2", delta, k, sign)


def bo(k=2, sign="defocusing"):
    return DispersionKind("BO", None, k, sign)


def airy(k=2, sign="defocusing"):
    return DispersionKind("AIRY", None, k, sign)


def omega(xi, kind: DispersionKind, derivatives: int = 0):
    """omega(xi) for ``kind``; with ``derivatives`` = 1 or 2 also omega', omega''.

    Scalars in give floats out, arrays give arrays of the same shape.
    """
    arr = np.asarray(xi, dtype=float)
    w, w1, w2 = kernels.omega_all(arr.ravel(), kind.code, kind.depth)
    parts = [p.reshape(arr.shape) for p in (w, w1, w2)[: derivatives + 1]]
    if arr.ndim == 0:
        parts = [float(p) for p in parts]
    return parts[0] if derivatives == 0 else tuple(parts)


def linear_symbol(kind: DispersionKind):
    """xi -> i omega(xi): the generator of the free flow, d/dt u_hat = i omega u_hat."""

    def symbol(xi):
        return 1j * omega(xi, kind)

    return symbol


def resonance(xi1, xi2, xi3, kind: DispersionKind):
    xi1, xi2, xi3 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (xi1, xi2, xi3)))
    total = omega(xi1 + xi2 + xi3, kind)
    return omega(xi1, kind) + omega(xi2, kind) + omega(xi3, kind) - total


# --------------------------------------------------------------------------
# empirical bound checks
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioReport:
    regime: str
    quantity: str
    min_ratio: float
    max_ratio: float
    sample_count: int

    @property
    def spread(self) -> float:
        return self.max_ratio / self.min_ratio

    def csv_row(self) -> str:
        return f"{self.regime},{self.quantity},{self.min_ratio:.17g},{self.max_ratio:.17g},{self.sample_count}"


RATIO_HEADER = "regime,quantity,min_ratio,max_ratio,samples"


def _dyadic_points(lo, hi, per_octave):
    octaves = math.log2(hi / lo)
    count = max(2, int(math.ceil(octaves * per_octave)) + 1)
    return np.exp2(np.linspace(math.log2(lo), math.log2(hi), count))


def _report(regime, xi, kind):
    w, w1, w2 = omega(xi, kind, derivatives=2)
    d = kind.delta
    if regime == "high":
        scales = (xi ** 2, xi, np.ones_like(xi))
    else:
        scales = (d * xi ** 3, d * xi ** 2, d * xi)
    out = []
    for name, q, scale in zip(("omega", "omega'", "omega''"), (w, w1, w2), scales):
        r = np.abs(q) / scale
        out.append(RatioReport(regime, name, float(r.min()), float(r.max()), int(r.size)))
    return out


def verify_dispersion_bounds(kind: DispersionKind, xi_min: float, xi_max: float,
                             per_octave: int = 16, guard: float = 2.0):
    """Min/max of |omega^(m)(xi)| against its comparison scale on dyadic samples.

    The sample range is split at 1/delta; points within a factor ``guard`` of
    the crossover belong to neither regime. Regimes left empty are omitted.
    """
    if kind.tag != "FDF":
        raise ConfigurationError("dispersion bounds are checked for FDF kinds only")
    if not (0 < xi_min < xi_max):
        raise ConfigurationError(f"empty sampling range [{xi_min}, {xi_max}]")
    if per_octave < 4:
        raise ConfigurationError("need at least 4 samples per octave")
    xi = _dyadic_points(xi_min, xi_max, per_octave)
    cross = 1.0 / kind.delta
    reports = []
    high = xi[xi >= guard * cross]
    low = xi[xi <= cross / guard]
    if high.size:
        reports += _report("high", high, kind)
    if low.size:
        reports += _report("low", low, kind)
    if not reports:
        raise ConfigurationError("sampling range lies entirely inside the crossover guard band")
    return reports


def sample_admissible_triples(count, rng, *, xi_max=4096.0, separation=64.0, xi3_min=64.0,
                              max_tries=200):
    """Draw triples with |x1| <= |x2| <= |x3|, |x1| <= |x3|/separation,
    |x1+x2+x3| in [|x3|/2, 2|x3|] and |x3| >= xi3_min. Returns an (m, 3) array."""
    kept = []
    have = 0
    for _ in range(max_tries):
        need = count - have
        if need <= 0:
            break
        batch = max(4 * need, 64)
        mag3 = np.exp(rng.uniform(math.log(xi3_min), math.log(xi_max), batch))
        mag1 = mag3 / separation * rng.uniform(0.0, 1.0, batch)
        mag2 = mag1 + (mag3 - mag1) * rng.uniform(0.0, 1.0, batch)
        signs = rng.choice([-1.0, 1.0], size=(batch, 3))
        tri = np.stack([mag1, mag2, mag3], axis=1) * signs
        ok = admissible(tri, separation=separation, xi3_min=xi3_min)
        kept.append(tri[ok][:need])
        have += int(min(ok.sum(), need))
    out = np.concatenate(kept) if kept else np.empty((0, 3))
    return out[:count]


def admissible(triples, *, separation=64.0, xi3_min=64.0):
    t = np.atleast_2d(np.asarray(triples, dtype=float))
    a = np.abs(t)
    s = np.abs(t.sum(axis=1))
    return ((a[:, 0] <= a[:, 1]) & (a[:, 1] <= a[:, 2])
            & (a[:, 0] <= a[:, 2] / separation)
            & (s >= a[:, 2] / 2) & (s <= 2 * a[:, 2])
            & (a[:, 2] >= xi3_min))


def resonance_ratio(triples, kind):
    t = np.atleast_2d(np.asarray(triples, dtype=float))
    om = resonance(t[:, 0], t[:, 1], t[:, 2], kind)
    return np.abs(om) / (np.abs(t[:, 0] + t[:, 1]) * np.abs(t[:, 2]))


def verify_resonance_bounds(kind: DispersionKind, count: int = 10_000, seed: int = 0,
                            triples=None, **sampler):
    """|Omega| / (|x1+x2| |x3|) over admissible triples (seeded sample or given)."""
    if triples is None:
        triples = sample_admissible_triples(count, np.random.default_rng(seed), **sampler)
    else:
        triples = np.atleast_2d(np.asarray(triples, dtype=float))
        triples = triples[admissible(triples, **sampler)]
    if len(triples) == 0:
        raise ValueError("no admissible triple to evaluate")
    r = resonance_ratio(triples, kind)
    return RatioReport("resonance", "Omega", float(r.min()), float(r.max()), int(r.size))
