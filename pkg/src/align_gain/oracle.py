"""
Quadrature oracle for orientation averages.

The gain of a probe polarized at angle ``psi`` to the control field is an
average of ``cos^2`` of the angle between the molecular axis and the probe,
weighted by the Boltzmann factor ``exp(p cos t0 + q cos^2 t0)`` over the
sphere. Integrating the azimuth analytically leaves

    <cos^2> = int sin t0 w(t0) [cos^2 psi cos^2 t0 + 1/2 sin^2 psi sin^2 t0] dt0
              / int sin t0 w(t0) dt0

which is evaluated here by adaptive Gauss-Kronrod bisection on ``t0``. None
of the closed forms in :mod:`align_gain.specfun` are used, so the results
serve as an independent check on them.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

DEFAULT_TOLERANCE = 1e-10
MIN_TOLERANCE = 1e-12
MAX_TOLERANCE = 1e-4
MAX_PANELS = 4000

# Alignment strength above which the initial partition is refined around the
# peak of the Boltzmann weight.
LAPLACE_THRESHOLD = 500.0

# 15-point Kronrod extension of the 7-point Gauss rule, on [-1, 1].
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (0.949, 0.742, 0.406, 0, ...).
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class OracleRequest:
    p_g: float = 0.0
    q_g: float = 0.0
    p_m: float = 0.0
    q_m: float = 0.0
    eta_n: float = 1.0
    psi: float = 0.0

    def __post_init__(self):
        for name in ("p_g", "q_g", "p_m", "q_m", "eta_n", "psi"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        _check_psi(self.psi)


@dataclass(frozen=True)
class OracleResult:
    value: float
    est_error: float
    evaluations: int
    normalization_residual: float = 0.0


def _check_psi(psi):
    if not 0.0 <= psi <= math.pi / 2 + 1e-15:
        raise DomainError(f"psi must lie in [0, pi/2], got {psi!r}")


def _check_tolerance(tolerance):
    if not MIN_TOLERANCE <= tolerance <= MAX_TOLERANCE:
        raise DomainError(
            f"tolerance must lie in [{MIN_TOLERANCE:g}, {MAX_TOLERANCE:g}], got {tolerance!r}"
        )


def gk15_panel(f, a, b):
    """Apply the G7/K15 pair on ``[a, b]``.

    ``f`` maps an array of abscissae to an array of shape ``(ncomp, n)``.
    Returns ``(kronrod, gauss)`` estimates, each of shape ``(ncomp,)``.
    """
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * NODES
    fx = np.atleast_2d(f(x))
    return half * (fx @ KRONROD_WEIGHTS), half * (fx @ GAUSS_WEIGHTS)


def adaptive_gk15(f, breakpoints, accept, max_panels=None):
    """Globally adaptive bisection with a G7/K15 rule per panel.

    Parameters
    ----------
    f : callable
        Vectorized integrand returning shape ``(ncomp, n)``.
    breakpoints : sequence of float
        Increasing initial partition (at least two points).
    accept : callable
        ``accept(total, error) -> bool`` with per-component arrays; the loop
        stops as soon as it returns True.
    max_panels : int, optional
        Subdivision budget, ``MAX_PANELS`` by default.

    Returns
    -------
    total, error, evaluations, panels, converged
        ``panels`` is a list of ``(-err, id, a, b, kronrod, gauss)`` sorted by ``a``.
    """
    max_panels = MAX_PANELS if max_panels is None else max_panels
    heap = []
    evaluations = 0
    for counter, (a, b) in enumerate(zip(breakpoints[:-1], breakpoints[1:])):
        k, g = gk15_panel(f, a, b)
        evaluations += 15
        heapq.heappush(heap, (-float(np.max(np.abs(k - g))), counter, a, b, k, g))
    counter = len(heap)

    def totals():
        ordered = sorted(heap, key=lambda item: item[2])
        ncomp = ordered[0][4].shape[0]
        tot = np.array([math.fsum(item[4][i] for item in ordered) for i in range(ncomp)])
        err = np.array([math.fsum(abs(item[4][i] - item[5][i]) for item in ordered)
                        for i in range(ncomp)])
        return tot, err, ordered

    total, error, ordered = totals()
    while not accept(total, error):
        if len(heap) >= max_panels:
            return total, error, evaluations, ordered, False
        _, _, a, b, _, _ = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        for lo, hi in ((a, mid), (mid, b)):
            k, g = gk15_panel(f, lo, hi)
            evaluations += 15
            heapq.heappush(heap, (-float(np.max(np.abs(k - g))), counter, lo, hi, k, g))
            counter += 1
        total, error, ordered = totals()
    return total, error, evaluations, ordered, True


def _log_weight_peak(p, q):
    """Maximum of ``p u + q u^2`` on ``u in [-1, 1]`` and the maximizing ``u``."""
    candidates = [(p + q, 1.0), (-p + q, -1.0)]
    if q < 0.0:
        u_star = -p / (2.0 * q)
        if -1.0 < u_star < 1.0:
            candidates.append((p * u_star + q * u_star * u_star, u_star))
    return max(candidates)


def _initial_breakpoints(p, q, u_peak):
    points = set(np.linspace(0.0, math.pi, 5).tolist())
    strength = max(abs(p), 2.0 * abs(q))
    if strength > LAPLACE_THRESHOLD:
        center = math.acos(min(1.0, max(-1.0, u_peak)))
        width = 1.0 / math.sqrt(strength)
        points.add(center)
        k = 1.0
        while k * width < math.pi:
            for pt in (center - k * width, center + k * width):
                if 0.0 < pt < math.pi:
                    points.add(pt)
            k *= 2.0
    return sorted(points)


def _moment_1d(p, q, psi, tolerance):
    log_peak, u_peak = _log_weight_peak(p, q)
    c2, s2 = math.cos(psi) ** 2, math.sin(psi) ** 2

    def integrand(t):
        u = np.cos(t)
        s = np.sin(t)
        w = s * np.exp(p * u + q * u * u - log_peak)
        proj = c2 * u * u + 0.5 * s2 * s * s
        return np.vstack([w, w * proj])

    # ratio N/Z with N <= Z, so its error is bounded by (eN + eZ)/Z
    def accept(total, error):
        return total[0] > 0.0 and (error[0] + error[1]) <= tolerance * total[0]

    total, error, nev, panels, ok = adaptive_gk15(
        integrand, _initial_breakpoints(p, q, u_peak), accept
    )
    return total, error, nev, panels, ok


def _moment_2d(p, q, psi, tolerance):
    # Debug path: brute-force azimuth integral, no analytic reduction.
    log_peak, u_peak = _log_weight_peak(p, q)
    cpsi, spsi = math.cos(psi), math.sin(psi)
    inner_tol = 0.1 * tolerance
    evaluations = 0

    def inner(t0):
        u0, s0 = math.cos(t0), math.sin(t0)

        def f(phi):
            c = cpsi * u0 + spsi * s0 * np.cos(phi)
            return np.vstack([c * c])

        tot, err, nev, _, _ = adaptive_gk15(
            f, [0.0, math.pi / 2, math.pi, 1.5 * math.pi, 2.0 * math.pi],
            lambda t, e: e[0] <= inner_tol * max(abs(t[0]), 1e-300),
        )
        return tot[0], nev

    def integrand(t):
        nonlocal evaluations
        values = np.empty((2, t.size))
        for i, t0 in enumerate(t):
            proj, nev = inner(t0)
            evaluations += nev
            w = math.sin(t0) * math.exp(p * math.cos(t0) + q * math.cos(t0) ** 2 - log_peak)
            values[0, i] = 2.0 * math.pi * w
            values[1, i] = w * proj
        return values

    def accept(total, error):
        return total[0] > 0.0 and (error[0] + error[1]) <= 0.5 * tolerance * total[0]

    total, error, nev, panels, ok = adaptive_gk15(
        integrand, _initial_breakpoints(p, q, u_peak), accept
    )
    return total, error, nev + evaluations, panels, ok


def projection_moment(p, q, psi, tolerance=DEFAULT_TOLERANCE, full_2d=False):
    """Orientation average of ``cos^2`` of the axis-probe angle.

    Parameters
    ----------
    p, q : float
        Permanent- and induced-dipole alignment parameters.
    psi : float
        Angle between probe polarization and control field, in ``[0, pi/2]``.
    tolerance : float
        Absolute tolerance on the returned average, in ``[1e-12, 1e-4]``.
    full_2d : bool
        Integrate the azimuth numerically as well. Slow; for validation only.

    Raises
    ------
    ConvergenceError
        If the subdivision budget runs out before ``tolerance`` is met.
    """
    for name, val in (("p", p), ("q", q), ("psi", psi)):
        if not math.isfinite(val):
            raise DomainError(f"{name} must be finite, got {val!r}")
    _check_psi(psi)
    _check_tolerance(tolerance)
    p, q, psi = float(p), float(q), float(psi)

    solver = _moment_2d if full_2d else _moment_1d
    total, error, nev, panels, ok = solver(p, q, psi, tolerance)
    value = float(total[1] / total[0])
    est = float((error[0] + error[1]) / total[0])
    if not ok:
        raise ConvergenceError(
            f"projection_moment(p={p}, q={q}, psi={psi}) reached {est:.3e} "
            f"with {len(panels)} panels; requested {tolerance:.1e}",
            best_estimate=value, est_error=est,
        )

    # Normalization constant A = 1/Z; the normalized weight must sum to 1.
    norm = 1.0 / float(total[0])
    residual = abs(math.fsum(float(panel[4][0]) * norm for panel in panels) - 1.0)
    if not residual <= 1e-10:
        raise ConvergenceError(
            f"weight normalization off by {residual:.3e}", best_estimate=value, est_error=est
        )
    return OracleResult(value=value, est_error=est, evaluations=nev,
                        normalization_residual=residual)


def oracle_gain(request, tolerance=DEFAULT_TOLERANCE):
    """Scaled gain ``eta_n <cos^2>_m - <cos^2>_g`` by quadrature."""
    _check_tolerance(tolerance)
    eta = abs(request.eta_n)
    # split the budget so the combined bound stays within tolerance
    tol_m = max(MIN_TOLERANCE, tolerance / (2.0 * max(eta, 1.0)))
    tol_g = max(MIN_TOLERANCE, tolerance / 2.0)
    upper = projection_moment(request.p_m, request.q_m, request.psi, tol_m)
    lower = projection_moment(request.p_g, request.q_g, request.psi, tol_g)
    return OracleResult(
        value=request.eta_n * upper.value - lower.value,
        est_error=eta * upper.est_error + lower.est_error,
        evaluations=upper.evaluations + lower.evaluations,
        normalization_residual=max(upper.normalization_residual, lower.normalization_residual),
    )
