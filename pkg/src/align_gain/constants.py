"""Physical constants and unit conversions (SI unless noted)."""

from scipy import constants as _c

BOLTZMANN = _c.k  # J/K, exact
EPSILON_0 = _c.epsilon_0  # F/m
HBAR = _c.hbar  # J s
ELEMENTARY_CHARGE = _c.e  # C
ELECTRON_MASS = _c.m_e  # kg
SPEED_OF_LIGHT = _c.c  # m/s

# 1 D = 1e-18 statC cm = 1e-21 / c  C m  (3.33564095e-30)
DEBYE = 1e-21 / SPEED_OF_LIGHT

# Gaussian-unit counterparts used by the sum-over-states polarizability.
HBAR_CGS = HBAR * 1e7  # erg s
DEBYE_CGS = 1e-18  # statC cm
ELEMENTARY_CHARGE_CGS = ELEMENTARY_CHARGE * SPEED_OF_LIGHT * 10.0  # statC
ELECTRON_MASS_CGS = ELECTRON_MASS * 1e3  # g

KV_PER_MM = 1e6  # V/m


def polarizability_volume_to_si(alpha_cm3):
    """Gaussian polarizability volume (cm^3) -> SI polarizability (C m^2 / V)."""
    return 4.0 * _c.pi * EPSILON_0 * alpha_cm3 * 1e-6
