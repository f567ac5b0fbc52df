"""Pseudospectral simulator for the modified finite-depth-fluid equation family."""
from .config import SimConfig, load_config, parse_config
from .dispersion import DispersionKind, bo, airy, fdf, fdf2, omega, resonance
from .dynamics import EquationSpec, SimState, evolve, run
from .observables import InvariantRecord, hs_norm, invariants
from .spectral import ConfigurationError, Field, Spectrum, SpectralGrid, make_grid

__version__ = "0.1.0"

__all__ = [
    "SimConfig", "load_config", "parse_config",
    "DispersionKind", "bo", "airy", "fdf", "fdf2", "omega", "resonance",
    "EquationSpec", "SimState", "evolve", "run",
    "InvariantRecord", "hs_norm", "invariants",
    "ConfigurationError", "Field", "Spectrum", "SpectralGrid", "make_grid",
]
