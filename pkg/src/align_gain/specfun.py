"""
Orientation-averaging special functions.

Every function here is a scalar, pure float-to-float map. Accuracy target is
1e-12 relative unless a docstring says otherwise.

For a dipole in a field with weight ``exp(p cos t)`` over the sphere,
``<cos t> = L(p)`` and ``<cos^2 t> = 1 - 2 L(p)/p``. For an induced dipole with
weight ``exp(q cos^2 t)``, ``<cos^2 t> = L2(q)``.
"""

import math
from dataclasses import dataclass

from scipy import special

from .errors import DomainError

# Below this |p| the Taylor series of L(p) is used; the next omitted term
# (p^7/4725) is ~2e-19 at the crossover.
LANGEVIN_SERIES_CUTOFF = 1e-2

# |q| below this uses the power-series ratio form of L2(q).
GEN_LANGEVIN_SERIES_CUTOFF = 1.0
_GEN_LANGEVIN_TERMS = 30


@dataclass(frozen=True)
class OrientationMoment:
    mean_cos: float
    mean_cos2: float


def _finite(x, name):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def _nonnegative(x, name):
    x = _finite(x, name)
    if x < 0.0:
        raise DomainError(f"{name} must be >= 0, got {x!r}")
    return x


def langevin(p):
    """Langevin function ``coth(p) - 1/p``.

    Odd in ``p``; a three-term Taylor series is used for
    ``|p| < LANGEVIN_SERIES_CUTOFF``.
    """
    p = _finite(p, "p")
    if abs(p) < LANGEVIN_SERIES_CUTOFF:
        p2 = p * p
        return p * (1.0 / 3.0 - p2 * (1.0 / 45.0 - p2 * (2.0 / 945.0)))
    return 1.0 / math.tanh(p) - 1.0 / p


def langevin_over_p(p):
    """``L(p)/p`` for ``p >= 0``, equal to 1/3 at ``p = 0``.

    Strictly decreasing, range (0, 1/3].
    """
    p = _nonnegative(p, "p")
    if p < LANGEVIN_SERIES_CUTOFF:
        p2 = p * p
        return 1.0 / 3.0 - p2 * (1.0 / 45.0 - p2 * (2.0 / 945.0))
    return langevin(p) / p


def mean_cos2_dc(p):
    """``<cos^2>`` under the weight ``exp(p cos t)``, i.e. ``1 - 2 L(p)/p``."""
    return 1.0 - 2.0 * langevin_over_p(p)


def orientation_moment(p):
    """Both orientation moments of the permanent-dipole Boltzmann family."""
    return OrientationMoment(mean_cos=langevin(p), mean_cos2=mean_cos2_dc(abs(float(p))))


def dawson(x):
    """Dawson integral ``exp(-x^2) * int_0^x exp(t^2) dt`` for ``x >= 0``."""
    x = _nonnegative(x, "x")
    return float(special.dawsn(x))


def _gen_langevin_series(q):
    # ratio of sum q^n/(n!(2n+3)) to sum q^n/(n!(2n+1))
    num = 0.0
    den = 0.0
    term = 1.0
    for n in range(_GEN_LANGEVIN_TERMS):
        num += term / (2 * n + 3)
        den += term / (2 * n + 1)
        term *= q / (n + 1)
    return num / den


def gen_langevin(q):
    """Generalized Langevin function ``L2(q) = <cos^2>`` under ``exp(q cos^2 t)``.

    Defined for any finite ``q``; monotone increasing with range (0, 1).

    Notes
    -----
    Three branches:

    * ``|q| < 1``: power-series ratio of the two moment integrals.
    * ``q >= 1``: ``1/(2 sqrt(q) D(sqrt(q))) - 1/(2q)`` with ``D`` the Dawson
      integral.
    * ``q <= -1``: with ``a = -q``,
      ``1/(2a) - exp(-a) sqrt(a) / (a sqrt(pi) erf(sqrt(a)))``.
    """
    q = _finite(q, "q")
    if abs(q) < GEN_LANGEVIN_SERIES_CUTOFF:
        return _gen_langevin_series(q)
    if q > 0.0:
        s = math.sqrt(q)
        return 1.0 / (2.0 * s * dawson(s)) - 1.0 / (2.0 * q)
    a = -q
    s = math.sqrt(a)
    return 1.0 / (2.0 * a) - math.exp(-a) * s / (a * math.sqrt(math.pi) * math.erf(s))
