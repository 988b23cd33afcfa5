"""Optical gain of molecules aligned by dc or ac control fields."""

__version__ = "0.1.0"

from .errors import ConfigError, ConvergenceError, DomainError
from .gain import (
    AlignmentParams,
    ControlField,
    GainResult,
    Geometry,
    MolecularSpecies,
    Populations,
    alignment_params,
    gain_ac_orthogonal,
    gain_ac_parallel,
    gain_dc_orthogonal,
    gain_dc_parallel,
    gain_general,
)
from .specfun import dawson, gen_langevin, langevin, langevin_over_p, mean_cos2_dc

__all__ = [
    "AlignmentParams",
    "ConfigError",
    "ControlField",
    "ConvergenceError",
    "DomainError",
    "GainResult",
    "Geometry",
    "MolecularSpecies",
    "Populations",
    "alignment_params",
    "dawson",
    "gain_ac_orthogonal",
    "gain_ac_parallel",
    "gain_dc_orthogonal",
    "gain_dc_parallel",
    "gain_general",
    "gen_langevin",
    "langevin",
    "langevin_over_p",
    "mean_cos2_dc",
]
