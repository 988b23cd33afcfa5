"""
Sum-over-states polarizability from a list of transitions.

    alpha = (2/hbar) sum_l w_l |d_l|^2 / (w_l^2 - w0^2)
          = (e^2/m)  sum_l f_l / (w_l^2 - w0^2)

Inputs are angular frequencies in rad/s and dipoles in Debye; the result is
a Gaussian polarizability volume in cm^3. With ``reduced=True`` the constants
hbar, e, m are set to 1 and dipoles are used as given.
"""

import math
from dataclasses import dataclass

from . import constants
from .errors import DomainError

RESONANCE_GUARD = 1e-3

_AXES = ("parallel", "perpendicular")


@dataclass(frozen=True)
class TransitionEntry:
    """One transition out of the level of interest.

    Give either dipole components or oscillator strengths, not both.
    """

    omega_lj: float
    dipole_parallel: float | None = None
    dipole_perp: float | None = None
    f_parallel: float | None = None
    f_perp: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.omega_lj) and self.omega_lj > 0):
            raise DomainError(f"omega_lj must be > 0, got {self.omega_lj!r}")
        has_d = self.dipole_parallel is not None or self.dipole_perp is not None
        has_f = self.f_parallel is not None or self.f_perp is not None
        if has_d == has_f:
            raise DomainError("give exactly one of the dipole pair or the oscillator-strength pair")

    def _component(self, axis):
        if self.f_parallel is not None or self.f_perp is not None:
            val = self.f_parallel if axis == "parallel" else self.f_perp
            return "f", 0.0 if val is None else val
        val = self.dipole_parallel if axis == "parallel" else self.dipole_perp
        return "d", 0.0 if val is None else val


def oscillator_strength(omega_lj, dipole_debye, reduced=False):
    """Convert a transition dipole to its oscillator strength ``2 m w |d|^2 / (hbar e^2)``."""
    if reduced:
        return 2.0 * omega_lj * dipole_debye ** 2
    d = dipole_debye * constants.DEBYE_CGS
    return (2.0 * constants.ELECTRON_MASS_CGS * omega_lj * d * d
            / (constants.HBAR_CGS * constants.ELEMENTARY_CHARGE_CGS ** 2))


def polarizability_component(entries, omega0, axis, reduced=False,
                             resonance_guard=RESONANCE_GUARD):
    """One principal component of the polarizability tensor (cm^3).

    ``axis`` is ``"parallel"`` (alpha_33, along the symmetry axis) or
    ``"perpendicular"`` (alpha_11). ``omega0 = 0`` gives the static value.

    Raises
    ------
    DomainError
        Empty list, unknown axis, or ``omega0`` within ``resonance_guard``
        (relative) of a transition frequency.
    """
    if axis not in _AXES:
        raise DomainError(f"axis must be one of {_AXES}, got {axis!r}")
    entries = list(entries)
    if not entries:
        raise DomainError("transition list is empty")
    omega0 = abs(float(omega0))
    if reduced:
        hbar, e2_over_m, dscale = 1.0, 1.0, 1.0
    else:
        hbar = constants.HBAR_CGS
        e2_over_m = constants.ELEMENTARY_CHARGE_CGS ** 2 / constants.ELECTRON_MASS_CGS
        dscale = constants.DEBYE_CGS

    terms = []
    for i, entry in enumerate(entries):
        w = entry.omega_lj
        if abs(omega0 - w) / w <= resonance_guard:
            raise DomainError(
                f"omega0 = {omega0:.6e} rad/s is within {resonance_guard:g} of transition "
                f"{i} (omega_lj = {w:.6e} rad/s); damping is not modelled"
            )
        kind, val = entry._component(axis)
        denom = w * w - omega0 * omega0
        if kind == "d":
            d = val * dscale
            terms.append(2.0 * w * d * d / (hbar * denom))
        else:
            terms.append(e2_over_m * val / denom)
    return math.fsum(terms)


def anisotropy(entries, omega0, reduced=False, resonance_guard=RESONANCE_GUARD):
    """``alpha_33 - alpha_11`` in cm^3; positive for rod-like, negative for disc-like."""
    entries = list(entries)
    return (polarizability_component(entries, omega0, "parallel", reduced, resonance_guard)
            - polarizability_component(entries, omega0, "perpendicular", reduced,
                                       resonance_guard))
