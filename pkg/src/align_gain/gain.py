"""
Scaled amplification index of field-aligned two-level molecules.

All gains are returned as ``alpha / (sigma0 n_g)``: the population-weighted
difference of the orientation averages of ``cos^2`` (axis to probe) in the
upper and lower levels,

    scaled_gain = eta_n <cos^2>_m - <cos^2>_g,     eta_n = n_m / n_g.

The four closed forms cover pure permanent-dipole (dc) or pure induced-dipole
(ac) alignment with the probe parallel or orthogonal to the control field.
Anything else goes through :func:`gain_general`, which integrates the full
Boltzmann weight numerically.
"""

import enum
import math
from dataclasses import dataclass

from . import constants, oracle
from .errors import DomainError
from .specfun import gen_langevin, langevin_over_p, mean_cos2_dc


class FieldKind(str, enum.Enum):
    DC = "dc"
    AC = "ac"


@dataclass(frozen=True)
class MolecularSpecies:
    """Level-resolved dipole moments (Debye) and polarizability anisotropies (cm^3)."""

    name: str
    mu_g: float
    mu_m: float
    dalpha_g: float = 0.0
    dalpha_m: float = 0.0

    def __post_init__(self):
        for attr in ("mu_g", "mu_m", "dalpha_g", "dalpha_m"):
            if not math.isfinite(getattr(self, attr)):
                raise DomainError(f"{attr} must be finite")
        if self.mu_g < 0 or self.mu_m < 0:
            raise DomainError("dipole moments are magnitudes and must be >= 0")


@dataclass(frozen=True)
class ControlField:
    kind: FieldKind
    amplitude_E0: float  # V/m
    temperature_T: float  # K

    def __post_init__(self):
        object.__setattr__(self, "kind", FieldKind(self.kind))
        if not math.isfinite(self.amplitude_E0) or self.amplitude_E0 < 0:
            raise DomainError(f"E0 must be finite and >= 0, got {self.amplitude_E0!r}")
        if not math.isfinite(self.temperature_T) or self.temperature_T <= 0:
            raise DomainError(f"temperature must be > 0 K, got {self.temperature_T!r}")


@dataclass(frozen=True)
class AlignmentParams:
    p_g: float = 0.0
    p_m: float = 0.0
    q_g: float = 0.0
    q_m: float = 0.0

    def __post_init__(self):
        for attr in ("p_g", "p_m", "q_g", "q_m"):
            val = getattr(self, attr)
            if not math.isfinite(val):
                raise DomainError(f"{attr} must be finite, got {val!r}")
        if self.p_g < 0 or self.p_m < 0:
            raise DomainError("p_g and p_m must be >= 0")

    @property
    def has_p(self):
        return self.p_g != 0.0 or self.p_m != 0.0

    @property
    def has_q(self):
        return self.q_g != 0.0 or self.q_m != 0.0


@dataclass(frozen=True)
class Populations:
    n_g: float
    n_m: float

    def __post_init__(self):
        if not self.n_g > 0:
            raise DomainError("n_g must be > 0")
        if not self.n_m >= 0:
            raise DomainError("n_m must be >= 0")

    @property
    def eta_n(self):
        return self.n_m / self.n_g


@dataclass(frozen=True)
class Geometry:
    """Angle ``psi`` between probe polarization and control field."""

    psi: float

    def __post_init__(self):
        if not 0.0 <= self.psi <= math.pi / 2 + 1e-15:
            raise DomainError(f"psi must lie in [0, pi/2], got {self.psi!r}")

    @classmethod
    def parallel(cls):
        return cls(0.0)

    @classmethod
    def orthogonal(cls):
        return cls(math.pi / 2)


@dataclass(frozen=True)
class GainResult:
    scaled_gain: float
    branch: str
    absolute_gain: float | None = None
    est_error: float = 0.0


def alignment_params(species, field):
    """Dimensionless alignment parameters for both levels.

    ``p = mu E0 / kT`` and ``q = dalpha E0^2 / 2kT`` with ``mu`` converted from
    Debye and ``dalpha`` from a Gaussian polarizability volume. An ac field
    does not orient permanent dipoles, so ``p = 0`` for ``kind = ac``.
    """
    kT = constants.BOLTZMANN * field.temperature_T
    e0 = field.amplitude_E0
    if field.kind is FieldKind.DC:
        p_g = species.mu_g * constants.DEBYE * e0 / kT
        p_m = species.mu_m * constants.DEBYE * e0 / kT
    else:
        p_g = p_m = 0.0
    scale = e0 * e0 / (2.0 * kT)
    q_g = constants.polarizability_volume_to_si(species.dalpha_g) * scale
    q_m = constants.polarizability_volume_to_si(species.dalpha_m) * scale
    return AlignmentParams(p_g=p_g, p_m=p_m, q_g=q_g, q_m=q_m)


def field_for_p(p, mu_debye, temperature):
    """Inverse of ``p = mu E0 / kT``: dc field strength (V/m) giving ``p``."""
    if temperature <= 0:
        raise DomainError("temperature must be > 0 K")
    if mu_debye <= 0:
        raise DomainError("mu must be > 0 to invert for E0")
    return p * constants.BOLTZMANN * temperature / (mu_debye * constants.DEBYE)


def field_for_q(q, dalpha_cm3, temperature):
    """Inverse of ``q = dalpha E0^2 / 2kT``: field amplitude (V/m) giving ``q``."""
    if temperature <= 0:
        raise DomainError("temperature must be > 0 K")
    if dalpha_cm3 == 0 or q / dalpha_cm3 < 0:
        raise DomainError("q and dalpha must be nonzero and share a sign")
    a_si = constants.polarizability_volume_to_si(dalpha_cm3)
    return math.sqrt(2.0 * constants.BOLTZMANN * temperature * q / a_si)


def _check_eta(eta_n):
    if not math.isfinite(eta_n) or eta_n < 0:
        raise DomainError(f"eta_n must be finite and >= 0, got {eta_n!r}")


def _finish(value, branch, eta_n, sigma0, n_g, est_error=0.0):
    bound = max(1.0, eta_n)
    if abs(value) > bound + 1e-9:
        raise ArithmeticError(f"scaled gain {value} outside physical bound {bound}")
    absolute = None
    if sigma0 is not None and n_g is not None:
        absolute = sigma0 * n_g * value
    return GainResult(scaled_gain=value, branch=branch, absolute_gain=absolute,
                      est_error=est_error)


def _require_pure_dc(params):
    if params.has_q:
        raise DomainError(
            "dc closed forms need q_g = q_m = 0; use gain_general for mixed alignment"
        )


def _require_pure_ac(params):
    if params.has_p:
        raise DomainError(
            "ac closed forms need p_g = p_m = 0; use gain_general for mixed alignment"
        )


def gain_dc_orthogonal(params, eta_n, sigma0=None, n_g=None):
    """Permanent-dipole alignment, probe orthogonal to the control field."""
    _require_pure_dc(params)
    _check_eta(eta_n)
    value = eta_n * langevin_over_p(params.p_m) - langevin_over_p(params.p_g)
    return _finish(value, "dc-orth", eta_n, sigma0, n_g)


def gain_dc_parallel(params, eta_n, sigma0=None, n_g=None):
    """Permanent-dipole alignment, probe parallel to the control field."""
    _require_pure_dc(params)
    _check_eta(eta_n)
    value = eta_n * mean_cos2_dc(params.p_m) - mean_cos2_dc(params.p_g)
    return _finish(value, "dc-par", eta_n, sigma0, n_g)


def gain_ac_orthogonal(params, eta_n, sigma0=None, n_g=None):
    """Induced-dipole alignment, probe orthogonal to the control field.

    The azimuthal average of ``cos^2 phi`` contributes the overall 1/2:
    ``0.5 * (eta_n (1 - L2(q_m)) - (1 - L2(q_g)))``. See
    :func:`gain_ac_orthogonal_unhalved` for the form without it.
    """
    _require_pure_ac(params)
    _check_eta(eta_n)
    value = 0.5 * (eta_n * (1.0 - gen_langevin(params.q_m)) - (1.0 - gen_langevin(params.q_g)))
    return _finish(value, "ac-orth", eta_n, sigma0, n_g)


def gain_ac_orthogonal_unhalved(params, eta_n):
    """``eta_n (1 - L2(q_m)) - (1 - L2(q_g))``, kept only for comparison.

    Twice the orthogonal-probe average; it does not reduce to ``(eta_n - 1)/3``
    at zero field.
    """
    _require_pure_ac(params)
    _check_eta(eta_n)
    return eta_n * (1.0 - gen_langevin(params.q_m)) - (1.0 - gen_langevin(params.q_g))


def gain_ac_parallel(params, eta_n, sigma0=None, n_g=None):
    """Induced-dipole alignment, probe parallel to the control field."""
    _require_pure_ac(params)
    _check_eta(eta_n)
    value = eta_n * gen_langevin(params.q_m) - gen_langevin(params.q_g)
    return _finish(value, "ac-par", eta_n, sigma0, n_g)


def gain_general(params, eta_n, geometry, tolerance=oracle.DEFAULT_TOLERANCE,
                 sigma0=None, n_g=None):
    """Any alignment mix and probe angle, by quadrature of the full weight."""
    _check_eta(eta_n)
    if not isinstance(geometry, Geometry):
        geometry = Geometry(float(geometry))
    request = oracle.OracleRequest(
        p_g=params.p_g, q_g=params.q_g, p_m=params.p_m, q_m=params.q_m,
        eta_n=eta_n, psi=geometry.psi,
    )
    res = oracle.oracle_gain(request, tolerance)
    return _finish(res.value, "oracle", eta_n, sigma0, n_g, est_error=res.est_error)


CLOSED_FORMS = {
    "dc-orth": gain_dc_orthogonal,
    "dc-par": gain_dc_parallel,
    "ac-orth": gain_ac_orthogonal,
    "ac-par": gain_ac_parallel,
}

MODES = (*CLOSED_FORMS, "general")

MODE_GEOMETRY = {
    "dc-orth": Geometry.orthogonal(),
    "dc-par": Geometry.parallel(),
    "ac-orth": Geometry.orthogonal(),
    "ac-par": Geometry.parallel(),
}


def evaluate(mode, params, eta_n, psi=None, tolerance=oracle.DEFAULT_TOLERANCE):
    """Dispatch on a mode name; ``psi`` (radians) is used only by ``general``."""
    if mode in CLOSED_FORMS:
        return CLOSED_FORMS[mode](params, eta_n)
    if mode == "general":
        return gain_general(params, eta_n, Geometry(0.0 if psi is None else psi), tolerance)
    raise DomainError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
