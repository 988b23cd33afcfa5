"""
Transparency thresholds, gain maxima, and parameter sweeps.

A :class:`GainModel` couples a gain mode with a set of fixed parameters. Sweep
variables are resolved into level parameters as follows:

* ``p_m`` directly, else ``eta_mu * p_g``, else ``p_g / inv_eta_mu``, else 0;
* ``q_m`` directly, else ``eta_q * q_g``, else 0;
* ``psi`` in radians, used by the ``general`` mode only.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from . import gain
from .errors import ConfigError, DomainError

PREGRID_POINTS = 256
THRESHOLD_RESIDUAL = 1e-10

SWEEP_PARAMETERS = ("p_g", "eta_mu", "inv_eta_mu", "eta_n", "q_g", "eta_q")
FIXED_PARAMETERS = SWEEP_PARAMETERS + ("p_m", "q_m", "psi")


@dataclass(frozen=True)
class GainModel:
    mode: str
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in gain.MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {', '.join(gain.MODES)}")
        for name in self.fixed:
            if name not in FIXED_PARAMETERS:
                raise ConfigError(f"unknown parameter {name!r}")

    def resolve(self, **overrides):
        """Return ``(AlignmentParams, eta_n, psi)`` for one evaluation point."""
        for name in overrides:
            if name not in FIXED_PARAMETERS:
                raise ConfigError(f"unknown parameter {name!r}")
        v = {**self.fixed, **overrides}
        dc = self.mode.startswith("dc") or self.mode == "general"
        ac = self.mode.startswith("ac") or self.mode == "general"

        p_g = v.get("p_g", 0.0) if dc else 0.0
        if not dc:
            p_m = 0.0
        elif "p_m" in v:
            p_m = v["p_m"]
        elif "eta_mu" in v:
            p_m = v["eta_mu"] * p_g
        elif "inv_eta_mu" in v:
            if v["inv_eta_mu"] <= 0:
                raise DomainError("inv_eta_mu must be > 0")
            p_m = p_g / v["inv_eta_mu"]
        else:
            p_m = 0.0

        q_g = v.get("q_g", 0.0) if ac else 0.0
        if not ac:
            q_m = 0.0
        elif "q_m" in v:
            q_m = v["q_m"]
        else:
            q_m = v.get("eta_q", 0.0) * q_g

        params = gain.AlignmentParams(p_g=float(p_g), p_m=float(p_m),
                                      q_g=float(q_g), q_m=float(q_m))
        return params, float(v.get("eta_n", 1.0)), float(v.get("psi", 0.0))

    def __call__(self, **overrides):
        params, eta_n, psi = self.resolve(**overrides)
        return gain.evaluate(self.mode, params, eta_n, psi).scaled_gain


@dataclass(frozen=True)
class ThresholdResult:
    crossing: float
    bracket: tuple
    residual: float
    iterations: int


@dataclass(frozen=True)
class MaxResult:
    argmax: float
    max_value: float


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.name not in SWEEP_PARAMETERS:
            raise ConfigError(
                f"unknown sweep parameter {self.name!r}; expected one of {', '.join(SWEEP_PARAMETERS)}"
            )
        if self.count < 2:
            raise ConfigError("axis count must be >= 2")
        if not self.min < self.max:
            raise ConfigError(f"axis {self.name}: min must be < max")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and self.min <= 0:
            raise ConfigError("log spacing needs min > 0")

    def points(self):
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepGrid:
    axis1: Axis
    mode: str
    fixed: dict = field(default_factory=dict)
    axis2: Axis | None = None
    preset: str | None = None
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.values is not None:
            shape = (self.axis1.count,) if self.axis2 is None else (self.axis1.count, self.axis2.count)
            if np.shape(self.values) != shape:
                raise ConfigError(f"values shape {np.shape(self.values)} does not match axes {shape}")

    @property
    def model(self):
        return GainModel(self.mode, dict(self.fixed))


def _pregrid(model, sweep_var, lo, hi, points):
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError(f"range must be finite with lo < hi, got ({lo}, {hi})")
    xs = np.linspace(lo, hi, points)
    ys = np.array([model(**{sweep_var: float(x)}) for x in xs])
    return xs, ys


def find_threshold(model, sweep_var, lo, hi, points=PREGRID_POINTS):
    """All zero crossings of the gain in ``sweep_var`` on ``[lo, hi]``.

    A ``points``-point grid is scanned for strict sign changes, and each
    bracket is refined by Brent's method. A function that is identically zero
    has no crossings.
    """
    xs, ys = _pregrid(model, sweep_var, lo, hi, points)
    f = lambda x: model(**{sweep_var: x})
    brackets = []
    for i in range(len(xs) - 1):
        if ys[i] * ys[i + 1] < 0:
            brackets.append((xs[i], xs[i + 1]))
        elif ys[i + 1] == 0 and 0 < i + 1 < len(xs) - 1 and ys[i] * ys[i + 2] < 0:
            brackets.append((xs[i], xs[i + 2]))

    results = []
    for a, b in brackets:
        root, info = optimize.brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                                     full_output=True)
        residual = abs(f(root))
        if residual > THRESHOLD_RESIDUAL:
            raise ArithmeticError(f"root refinement left residual {residual:.3e} at {root}")
        results.append(ThresholdResult(crossing=float(root), bracket=(float(a), float(b)),
                                       residual=float(residual), iterations=info.iterations))
    return results


def find_max_gain(model, sweep_var, lo, hi, points=PREGRID_POINTS):
    """Location and value of the largest gain on ``[lo, hi]``.

    The best pre-grid point and its neighbours bound a bounded Brent search
    (golden section with parabolic steps).
    """
    xs, ys = _pregrid(model, sweep_var, lo, hi, points)
    i = int(np.argmax(ys))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, len(xs) - 1)]
    f = lambda x: -model(**{sweep_var: x})
    res = optimize.minimize_scalar(f, bounds=(a, b), method="bounded",
                                   options={"xatol": 1e-7 * (hi - lo)})
    x_best, y_best = float(res.x), float(-res.fun)
    # endpoint maxima: the bounded search stays strictly inside [a, b]
    for x_end in (lo, hi):
        if abs(x_end - x_best) <= (b - a):
            y_end = model(**{sweep_var: x_end})
            if y_end > y_best:
                x_best, y_best = float(x_end), float(y_end)
    return MaxResult(argmax=x_best, max_value=y_best)


def sweep_threads():
    """Worker count from ``ALIGN_GAIN_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("ALIGN_GAIN_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"ALIGN_GAIN_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError("ALIGN_GAIN_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def run_sweep(grid, threads=None):
    """Evaluate the grid's model at every point and return a filled copy.

    Rows are computed independently and written back by index, so the result
    does not depend on the worker schedule.
    """
    model = grid.model
    xs = grid.axis1.points()
    ys = grid.axis2.points() if grid.axis2 is not None else None

    def row(x):
        if ys is None:
            return model(**{grid.axis1.name: float(x)})
        return [model(**{grid.axis1.name: float(x), grid.axis2.name: float(y)}) for y in ys]

    threads = sweep_threads() if threads is None else threads
    if threads > 1 and len(xs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, xs))
    else:
        rows = [row(x) for x in xs]
    return replace(grid, values=np.array(rows, dtype=float))


_P_AXIS = dict(name="p_g", min=0.01, max=20.0)
_RATIO = dict(min=0.01, max=1.0, count=100)

PRESETS = {
    "fig1": SweepGrid(Axis(**_P_AXIS, count=200), "dc-orth",
                      {"eta_n": 0.8, "eta_mu": 0.25}, preset="fig1"),
    "fig2": SweepGrid(Axis(**_P_AXIS, count=200), "dc-orth", {"eta_n": 0.8},
                      axis2=Axis("eta_mu", **_RATIO), preset="fig2"),
    "fig3": SweepGrid(Axis("eta_mu", **_RATIO), "dc-orth", {"p_g": 8.0},
                      axis2=Axis("eta_n", **_RATIO), preset="fig3"),
    "fig4": SweepGrid(Axis(**_P_AXIS, count=200), "dc-par",
                      {"eta_n": 0.8, "inv_eta_mu": 0.25}, preset="fig4"),
    "fig5": SweepGrid(Axis(**_P_AXIS, count=200), "dc-par", {"eta_n": 0.8},
                      axis2=Axis("inv_eta_mu", **_RATIO), preset="fig5"),
    "fig6": SweepGrid(Axis("inv_eta_mu", **_RATIO), "dc-par", {"p_g": 2.0},
                      axis2=Axis("eta_n", **_RATIO), preset="fig6"),
}

# Search ranges for the threshold/optimize presets (1D figures only).
PRESET_SEARCH_RANGES = {
    "fig1": {"threshold": (0.1, 20.0), "optimize": (0.1, 50.0)},
    "fig4": {"threshold": (0.1, 20.0), "optimize": (0.1, 20.0)},
}


def preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}") from None
