"""Species config files, CSV datasets, and plot-data emission."""

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError
from .gain import MolecularSpecies
from .polarizability import TransitionEntry

_SCALAR_KEYS = {
    "name": str,
    "mu_g_debye": float,
    "mu_m_debye": float,
    "dalpha_g_cm3": float,
    "dalpha_m_cm3": float,
}
_TRANSITION_KEYS = {
    "level": str,
    "omega_lj_rad_s": float,
    "d_par_debye": float,
    "d_perp_debye": float,
}


@dataclass(frozen=True)
class SpeciesConfig:
    species: MolecularSpecies
    transitions: dict = field(default_factory=lambda: {"g": [], "m": []})


def _convert(kind, key, raw, lineno):
    if kind is str:
        return raw
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects a number, got {raw!r}") from None
    if not math.isfinite(val):
        raise ConfigError(f"line {lineno}: {key} must be finite")
    return val


def _finish_transition(block, lineno):
    missing = {"level", "omega_lj_rad_s"} - block.keys()
    if missing:
        raise ConfigError(f"transition block ending at line {lineno} lacks {sorted(missing)}")
    if block["level"] not in ("g", "m"):
        raise ConfigError(f"transition level must be 'g' or 'm', got {block['level']!r}")
    entry = TransitionEntry(
        omega_lj=block["omega_lj_rad_s"],
        dipole_parallel=block.get("d_par_debye", 0.0),
        dipole_perp=block.get("d_perp_debye", 0.0),
    )
    return block["level"], entry


def parse_species(text):
    """Parse ``key = value`` species text.

    Scalar keys come first; each ``[transition]`` line opens a block of
    transition keys. ``#`` starts a comment. Unknown and duplicate keys are
    errors.
    """
    scalars = {}
    transitions = {"g": [], "m": []}
    block = None
    block_start = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[transition]":
            if block is not None:
                level, entry = _finish_transition(block, lineno)
                transitions[level].append(entry)
            block, block_start = {}, lineno
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        table, target = (_SCALAR_KEYS, scalars) if block is None else (_TRANSITION_KEYS, block)
        if key not in table:
            where = "species" if block is None else f"transition block (line {block_start})"
            raise ConfigError(f"line {lineno}: unknown {where} key {key!r}")
        if key in target:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        target[key] = _convert(table[key], key, raw, lineno)
    if block is not None:
        level, entry = _finish_transition(block, lineno)
        transitions[level].append(entry)

    for key in ("mu_g_debye", "mu_m_debye"):
        if key not in scalars:
            raise ConfigError(f"species file lacks required key {key!r}")
    species = MolecularSpecies(
        name=scalars.get("name", "unnamed"),
        mu_g=scalars["mu_g_debye"],
        mu_m=scalars["mu_m_debye"],
        dalpha_g=scalars.get("dalpha_g_cm3", 0.0),
        dalpha_m=scalars.get("dalpha_m_cm3", 0.0),
    )
    return SpeciesConfig(species=species, transitions=transitions)


def bundled_species():
    """Names of the species files shipped with the package."""
    data = resources.files("align_gain") / "data"
    return sorted(p.name for p in data.iterdir() if p.name.endswith(".cfg"))


def load_species(path):
    """Read a species file; a bare bundled name (``phtalimide.cfg``) also works."""
    path = Path(path)
    if path.is_file():
        return parse_species(path.read_text(encoding="utf-8"))
    if path.name in bundled_species() and not path.parent.parts:
        text = (resources.files("align_gain") / "data" / path.name).read_text(encoding="utf-8")
        return parse_species(text)
    raise FileNotFoundError(f"species file not found: {path}")


def format_number(x):
    """Scientific notation with 12 significant digits; locale-independent."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # no "-0"
    return f"{x:.11e}"


def _grid_rows(grid):
    xs = grid.axis1.points()
    if grid.axis2 is None:
        return [grid.axis1.name, "scaled_gain"], [(x, v) for x, v in zip(xs, grid.values)]
    ys = grid.axis2.points()
    rows = [(x, y, grid.values[i, j]) for i, x in enumerate(xs) for j, y in enumerate(ys)]
    return [grid.axis1.name, grid.axis2.name, "scaled_gain"], rows


def _axis_note(axis):
    return f"{axis.name} {axis.spacing} {axis.min!r} {axis.max!r} {axis.count}"


def provenance(grid):
    lines = [
        f"preset: {grid.preset or 'custom'}",
        f"mode: {grid.mode}",
        "fixed: " + " ".join(f"{k}={grid.fixed[k]!r}" for k in sorted(grid.fixed)),
        f"axis1: {_axis_note(grid.axis1)}",
    ]
    if grid.axis2 is not None:
        lines.append(f"axis2: {_axis_note(grid.axis2)}")
    lines.append(f"tool: align-gain {__version__}")
    return lines


def grid_to_csv(grid):
    if grid.values is None:
        raise ValueError("sweep grid has no values; run it first")
    header, rows = _grid_rows(grid)
    out = [f"# {line}" for line in provenance(grid)]
    out.append(",".join(header))
    out.extend(",".join(format_number(v) for v in row) for row in rows)
    return "\n".join(out) + "\n"


def grid_to_gnuplot(grid):
    """Whitespace-separated two-column data for 1D grids."""
    if grid.axis2 is not None:
        raise ValueError("gnuplot two-column output is for 1D grids")
    header, rows = _grid_rows(grid)
    out = [f"# {line}" for line in provenance(grid)]
    out.append("# " + " ".join(header))
    out.extend(" ".join(format_number(v) for v in row) for row in rows)
    return "\n".join(out) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_csv(path):
    """Return ``(comments, header, data)`` from a CSV written by :func:`grid_to_csv`."""
    comments, header, rows = [], None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif header is None:
                header = line.split(",")
            elif line:
                cells = line.split(",")
                if len(cells) != len(header):
                    raise ConfigError(f"row has {len(cells)} cells, header has {len(header)}")
                rows.append([float(c) for c in cells])
    return comments, header, np.array(rows, dtype=float)


def grid_to_svg(grid, width=640, height=400):
    """Plain line plot of a grid. 2D grids plot a handful of axis2 slices."""
    if grid.values is None:
        raise ValueError("sweep grid has no values; run it first")
    xs = grid.axis1.points()
    if grid.axis2 is None:
        curves = [(None, np.asarray(grid.values))]
    else:
        ys = grid.axis2.points()
        picks = sorted(set(np.linspace(0, len(ys) - 1, 5).round().astype(int).tolist()))
        curves = [(ys[j], grid.values[:, j]) for j in picks]

    margin = 50
    x_lo, x_hi = float(xs[0]), float(xs[-1])
    all_y = np.concatenate([c for _, c in curves])
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0

    def sx(x):
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
        f'height="{height - 2 * margin}" fill="none" stroke="black"/>',
    ]
    if y_lo < 0.0 < y_hi:
        parts.append(f'<line x1="{margin}" y1="{sy(0.0):.2f}" x2="{width - margin}" '
                     f'y2="{sy(0.0):.2f}" stroke="gray" stroke-dasharray="4 3"/>')
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    for k, (label, ys_curve) in enumerate(curves):
        pts = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys_curve))
        parts.append(f'<polyline fill="none" stroke="{colors[k % len(colors)]}" '
                     f'stroke-width="1.5" points="{pts}"/>')
        if label is not None:
            parts.append(f'<text x="{width - margin + 4}" y="{sy(float(ys_curve[-1])):.2f}" '
                         f'font-size="10">{grid.axis2.name}={label:.3g}</text>')
    parts += [
        f'<text x="{width / 2:.0f}" y="{height - 12}" font-size="12" '
        f'text-anchor="middle">{grid.axis1.name}</text>',
        f'<text x="{margin}" y="{margin - 8}" font-size="12">scaled gain '
        f'[{y_lo:.4g}, {y_hi:.4g}]</text>',
        f'<text x="{margin}" y="{height - margin + 14}" font-size="10">{x_lo:.4g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 14}" font-size="10" '
        f'text-anchor="end">{x_hi:.4g}</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"
