"""Flat ``key = value`` run configuration.

Example::

    equation = mfdf
    delta = 1
    t_end = 1
    init = gaussian
    init.amplitude = 0.1
    init.sigma = 2
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
import math


from . import initdata
from .dispersion import DispersionKind, SIGNS
from .dynamics import EquationSpec, default_dt
from .spectral import ConfigurationError, SpectralGrid, make_grid, SUPPORTED_POWERS


class ConfigError(ConfigurationError):
    def __init__(self, message, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.key = key
        self.line = line


EQUATIONS = {"mfdf": "FDF", "mfdf2": "FDF2", "mbo": "BO", "mkdv": "AIRY", "gfdf": "FDF"}
NEEDS_DELTA = {"mfdf", "mfdf2", "gfdf"}

# descriptor -> (required params, optional params with defaults)
INIT_PARAMS = {
    "gaussian": (("amplitude", "sigma"), {"center": 0.0}),
    "sech": (("amplitude", "width"), {"center": 0.0}),
    "bandlimited": (("jmax",), {"amplitude": 1.0}),
    "phin": (("carrier", "gamma", "s"), {}),
}

DEFAULT_LENGTH = 64 * math.pi


@dataclass(frozen=True)
class SimConfig:
    equation: str
    t_end: float
    init: str
    init_params: dict = field(default_factory=dict)
    delta: float | None = None
    k: int = 2
    sign: str = "defocusing"
    grid_n: int = 1024
    grid_length: float = DEFAULT_LENGTH
    dt: float | None = None
    output_every: int = 100
    snapshot_times: tuple = ()
    seed: int = 0
    blowup_factor: float = 1e6

    def __post_init__(self):
        _validate(self)

    def kind(self) -> DispersionKind:
        return DispersionKind(EQUATIONS[self.equation], self.delta, self.k, self.sign)

    def equation_spec(self) -> EquationSpec:
        return EquationSpec(self.kind())

    def grid(self) -> SpectralGrid:
        return make_grid(self.grid_n, self.grid_length)

    def initial_field(self, grid: SpectralGrid | None = None):
        grid = grid or self.grid()
        p = self.init_params
        if self.init == "gaussian":
            return initdata.gaussian(grid, p["amplitude"], p["sigma"], p["center"])
        if self.init == "sech":
            return initdata.sech(grid, p["amplitude"], p["width"], p["center"])
        if self.init == "bandlimited":
            return initdata.bandlimited(grid, self.seed, int(p["jmax"]), p["amplitude"])
        return initdata.phi_n(grid, p["carrier"], p["gamma"], p["s"])

    def step_size(self) -> float:
        """The configured dt, or the default rule shrunk to divide t_end."""
        if self.dt is not None:
            return self.dt
        dt = default_dt(self.grid(), self.kind())
        if self.t_end > 0:
            dt = self.t_end / math.ceil(self.t_end / dt - 1e-9)
        return dt

    def step_count(self, t_end: float | None = None) -> int:
        t_end = self.t_end if t_end is None else t_end
        return _multiple(t_end, self.step_size(), "t_end")

    def snapshot_steps(self) -> list[int]:
        return [_multiple(t, self.step_size(), "snapshot_times") for t in self.snapshot_times]

    def with_(self, **changes) -> "SimConfig":
        return replace(self, **changes)


def _multiple(t, dt, key):
    n = round(t / dt)
    if abs(n * dt - t) > 1e-9 * max(abs(t), abs(dt)):
        raise ConfigError(f"{t} is not an integer multiple of dt = {dt}", key)
    return int(n)


def _validate(c: SimConfig):
    if c.equation not in EQUATIONS:
        raise ConfigError(f"unknown equation {c.equation!r}; choose from {sorted(EQUATIONS)}", "equation")
    if c.equation in NEEDS_DELTA:
        if c.delta is None:
            raise ConfigError(f"{c.equation} requires delta", "delta")
        if not (math.isfinite(c.delta) and c.delta > 0):
            raise ConfigError(f"delta must be positive, got {c.delta}", "delta")
    elif c.delta is not None:
        raise ConfigError(f"delta is incompatible with {c.equation}", "delta")
    if c.equation != "gfdf" and c.k != 2:
        raise ConfigError("k is only configurable for gfdf", "k")
    if c.k not in SUPPORTED_POWERS:
        raise ConfigError(f"k must be one of {SUPPORTED_POWERS}", "k")
    if c.sign not in SIGNS:
        raise ConfigError(f"sign must be one of {SIGNS}", "sign")
    if c.grid_n % 2 or c.grid_n < 8:
        raise ConfigError(f"grid_n must be even and >= 8, got {c.grid_n}", "grid_n")
    if not (math.isfinite(c.grid_length) and c.grid_length > 0):
        raise ConfigError("grid_length must be positive", "grid_length")
    if c.dt is not None and not (math.isfinite(c.dt) and c.dt > 0):
        raise ConfigError("dt must be positive", "dt")
    if not (math.isfinite(c.t_end) and c.t_end >= 0):
        raise ConfigError("t_end must be non-negative", "t_end")
    if c.output_every < 1:
        raise ConfigError("output_every must be a positive integer", "output_every")
    for t in c.snapshot_times:
        if not (math.isfinite(t) and 0 <= t <= c.t_end):
            raise ConfigError(f"snapshot time {t} outside [0, t_end]", "snapshot_times")
    if not 0 <= c.seed < 2 ** 64:
        raise ConfigError("seed must be a 64-bit unsigned integer", "seed")
    if not c.blowup_factor > 0:
        raise ConfigError("blowup_factor must be positive", "blowup_factor")
    if c.init not in INIT_PARAMS:
        raise ConfigError(f"unknown init {c.init!r}; choose from {sorted(INIT_PARAMS)}", "init")
    required, optional = INIT_PARAMS[c.init]
    for name in required:
        if name not in c.init_params:
            raise ConfigError(f"init {c.init} requires init.{name}", f"init.{name}")
    for name in c.init_params:
        if name not in required and name not in optional:
            raise ConfigError(f"init {c.init} takes no parameter {name!r}", f"init.{name}")
    for name, value in c.init_params.items():
        if not math.isfinite(value):
            raise ConfigError("init parameters must be finite", f"init.{name}")
    for name, value in optional.items():
        c.init_params.setdefault(name, value)


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

def _float(v):
    return float(v)


def _int(v):
    try:
        return int(v)
    except ValueError:
        f = float(v)
        if not f.is_integer():
            raise ValueError(f"{v!r} is not an integer") from None
        return int(f)


def _times(v):
    return tuple(float(x) for x in v.split(",") if x.strip())


def _str(v):
    return v


FIELDS = {
    "equation": _str, "delta": _float, "k": _int, "sign": _str,
    "grid_n": _int, "grid_length": _float, "dt": _float, "t_end": _float,
    "output_every": _int, "snapshot_times": _times, "init": _str, "seed": _int,
    "blowup_factor": _float,
}
REQUIRED = ("equation", "t_end", "init")


def parse_config(text: str) -> SimConfig:
    values = {}
    init_params = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key in lines:
            raise ConfigError("duplicate key", key, lineno)
        lines[key] = lineno
        if key.startswith("init."):
            target, name, conv = init_params, key[5:], _float
        elif key in FIELDS:
            target, name, conv = values, key, FIELDS[key]
        else:
            raise ConfigError("unknown key", key, lineno)
        try:
            target[name] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"bad value {value!r}: {exc}", key, lineno) from None
    for key in REQUIRED:
        if key not in values:
            raise ConfigError("missing required key", key)
    try:
        return SimConfig(init_params=init_params, **values)
    except ConfigError as exc:
        if exc.line is None and exc.key in lines:
            raise ConfigError(str(exc).rsplit(" (", 1)[0], exc.key, lines[exc.key]) from None
        raise


def load_config(path) -> SimConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def config_to_text(c: SimConfig) -> str:
    rows = [f"equation = {c.equation}"]
    if c.delta is not None:
        rows.append(f"delta = {c.delta!r}")
    if c.equation == "gfdf":
        rows.append(f"k = {c.k}")
    rows += [
        f"sign = {c.sign}",
        f"grid_n = {c.grid_n}",
        f"grid_length = {c.grid_length!r}",
    ]
    if c.dt is not None:
        rows.append(f"dt = {c.dt!r}")
    rows += [f"t_end = {c.t_end!r}", f"output_every = {c.output_every}"]
    if c.snapshot_times:
        rows.append("snapshot_times = " + ",".join(repr(t) for t in c.snapshot_times))
    rows += [f"init = {c.init}"]
    rows += [f"init.{k} = {v!r}" for k, v in c.init_params.items()]
    rows.append(f"seed = {c.seed}")
    rows.append(f"blowup_factor = {c.blowup_factor!r}")
    return "\n".join(rows) + "\n"
