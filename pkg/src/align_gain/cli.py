"""Command-line front end.

Exit codes: 0 success, 2 domain/config error, 64 usage error, 74 I/O error.
"""

import argparse
import math
import sys
from pathlib import Path

from . import __version__, analysis, gain, io, oracle, polarizability
from .constants import KV_PER_MM
from .errors import ConfigError, ConvergenceError, DomainError

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_USAGE = 64
EXIT_IO = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_param_flags(p):
    p.add_argument("--mode", required=True, choices=gain.MODES)
    p.add_argument("--pg", type=float)
    p.add_argument("--pm", type=float)
    p.add_argument("--qg", type=float)
    p.add_argument("--qm", type=float)
    p.add_argument("--species", metavar="FILE", help="species config (path or bundled name)")
    p.add_argument("--E0-kv-mm", dest="e0_kv_mm", type=float, help="control field, kV/mm")
    p.add_argument("--T-kelvin", dest="t_kelvin", type=float, help="temperature, K")
    p.add_argument("--field-kind", choices=("dc", "ac"),
                   help="control field kind for --species (default from --mode)")
    p.add_argument("--eta-n", dest="eta_n", type=float, default=1.0,
                   help="population ratio n_m/n_g (default 1)")
    p.add_argument("--psi-deg", dest="psi_deg", type=float,
                   help="probe-control angle in degrees (general mode only)")


def _add_model_flags(p):
    p.add_argument("--preset", choices=sorted(analysis.PRESET_SEARCH_RANGES))
    p.add_argument("--mode", choices=gain.MODES)
    p.add_argument("--var", default="p_g", help="sweep variable (default p_g)")
    p.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--fixed", nargs="*", default=[], metavar="NAME=VALUE")
    p.add_argument("--points", type=int, default=analysis.PREGRID_POINTS)


def build_parser():
    parser = _Parser(prog="align-gain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gain", help="scaled gain at one parameter point")
    _add_param_flags(p)
    p.add_argument("--sigma0", type=float, help="cross-section, for the absolute gain")
    p.add_argument("--n-g", dest="n_g", type=float, help="lower-level density, for the absolute gain")

    p = sub.add_parser("oracle", help="closed form versus quadrature")
    _add_param_flags(p)
    p.add_argument("--tolerance", type=float, default=oracle.DEFAULT_TOLERANCE)

    p = sub.add_parser("figure", help="write a figure dataset as CSV")
    p.add_argument("preset", choices=sorted(analysis.PRESETS))
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", help="also write a line plot to this path")

    p = sub.add_parser("sweep", help="custom 1D/2D sweep to CSV")
    p.add_argument("--mode", required=True, choices=gain.MODES)
    p.add_argument("--axis1", required=True, metavar="NAME:MIN:MAX:COUNT[:log]")
    p.add_argument("--axis2", metavar="NAME:MIN:MAX:COUNT[:log]")
    p.add_argument("--fixed", nargs="*", default=[], metavar="NAME=VALUE")
    p.add_argument("--out", required=True)

    p = sub.add_parser("threshold", help="transparency crossings")
    _add_model_flags(p)

    p = sub.add_parser("optimize", help="maximum gain along one variable")
    _add_model_flags(p)

    p = sub.add_parser("polarizability", help="sum-over-states polarizability from a species file")
    p.add_argument("--species", required=True, metavar="FILE")
    p.add_argument("--omega0", type=float, default=0.0, help="control frequency, rad/s")
    p.add_argument("--level", choices=("g", "m", "both"), default="both")
    return parser


def _fmt(x):
    return io.format_number(x)


def _resolve_params(args):
    explicit = [v is not None for v in (args.pg, args.pm, args.qg, args.qm)]
    if args.psi_deg is not None and args.mode != "general":
        raise UsageError("--psi-deg is only valid with --mode general")
    if args.species is not None:
        if any(explicit):
            raise UsageError("give either --pg/--pm/--qg/--qm or --species, not both")
        if args.e0_kv_mm is None or args.t_kelvin is None:
            raise UsageError("--species needs --E0-kv-mm and --T-kelvin")
        cfg = io.load_species(args.species)
        kind = args.field_kind or ("ac" if args.mode.startswith("ac") else "dc")
        field = gain.ControlField(kind, args.e0_kv_mm * KV_PER_MM, args.t_kelvin)
        return gain.alignment_params(cfg.species, field), True
    if args.e0_kv_mm is not None or args.t_kelvin is not None or args.field_kind is not None:
        raise UsageError("--E0-kv-mm/--T-kelvin/--field-kind need --species")
    params = gain.AlignmentParams(
        p_g=args.pg or 0.0, p_m=args.pm or 0.0, q_g=args.qg or 0.0, q_m=args.qm or 0.0
    )
    return params, False


def _psi(args):
    return math.radians(args.psi_deg) if args.psi_deg is not None else 0.0


def _params_note(params):
    return f"p_g={_fmt(params.p_g)} p_m={_fmt(params.p_m)} q_g={_fmt(params.q_g)} q_m={_fmt(params.q_m)}"


def cmd_gain(args, out):
    params, from_species = _resolve_params(args)
    result = gain.evaluate(args.mode, params, args.eta_n, _psi(args))
    line = _fmt(result.scaled_gain)
    if args.sigma0 is not None and args.n_g is not None:
        line += f" absolute={_fmt(args.sigma0 * args.n_g * result.scaled_gain)}"
    if from_species:
        line += " " + _params_note(params)
    print(line, file=out)


def cmd_oracle(args, out):
    params, _ = _resolve_params(args)
    if args.mode == "general":
        geometry = gain.Geometry(_psi(args))
    else:
        geometry = gain.MODE_GEOMETRY[args.mode]
    request = oracle.OracleRequest(p_g=params.p_g, q_g=params.q_g, p_m=params.p_m,
                                   q_m=params.q_m, eta_n=args.eta_n, psi=geometry.psi)
    res = oracle.oracle_gain(request, args.tolerance)
    print(f"oracle        {_fmt(res.value)}  est_error={res.est_error:.3e} "
          f"evaluations={res.evaluations}", file=out)
    if args.mode in gain.CLOSED_FORMS:
        closed = gain.CLOSED_FORMS[args.mode](params, args.eta_n).scaled_gain
        print(f"closed_form   {_fmt(closed)}", file=out)
        print(f"abs_diff      {abs(closed - res.value):.3e}", file=out)
        if args.mode == "ac-orth":
            unhalved = gain.gain_ac_orthogonal_unhalved(params, args.eta_n)
            ratio = unhalved / res.value if res.value != 0 else float("nan")
            print(f"unhalved_form {_fmt(unhalved)}  ratio_to_oracle={ratio:.6f}", file=out)
    else:
        par = oracle.oracle_gain(
            oracle.OracleRequest(params.p_g, params.q_g, params.p_m, params.q_m, args.eta_n, 0.0),
            args.tolerance).value
        orth = oracle.oracle_gain(
            oracle.OracleRequest(params.p_g, params.q_g, params.p_m, params.q_m, args.eta_n,
                                 math.pi / 2), args.tolerance).value
        mixed = math.cos(geometry.psi) ** 2 * par + math.sin(geometry.psi) ** 2 * orth
        print(f"decomposition {_fmt(mixed)}", file=out)
        print(f"abs_diff      {abs(mixed - res.value):.3e}", file=out)


def _parse_fixed(items):
    fixed = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--fixed expects NAME=VALUE, got {item!r}")
        name, raw = item.split("=", 1)
        try:
            fixed[name.strip()] = float(raw)
        except ValueError:
            raise UsageError(f"--fixed {name}: not a number: {raw!r}") from None
    return fixed


def _parse_axis(spec):
    parts = spec.split(":")
    if len(parts) not in (4, 5):
        raise UsageError(f"axis spec must be NAME:MIN:MAX:COUNT[:log], got {spec!r}")
    try:
        lo, hi, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise UsageError(f"bad numbers in axis spec {spec!r}") from None
    spacing = parts[4] if len(parts) == 5 else "linear"
    return analysis.Axis(parts[0], lo, hi, count, spacing)


def _write_grid(grid, out_path, svg_path=None, out=sys.stdout):
    io.write_text(out_path, io.grid_to_csv(grid))
    print(f"wrote {out_path}", file=out)
    if grid.axis2 is None:
        dat = Path(out_path).with_suffix(".dat")
        io.write_text(dat, io.grid_to_gnuplot(grid))
        print(f"wrote {dat}", file=out)
    if svg_path:
        io.write_text(svg_path, io.grid_to_svg(grid))
        print(f"wrote {svg_path}", file=out)


def cmd_figure(args, out):
    grid = analysis.run_sweep(analysis.preset(args.preset))
    _write_grid(grid, args.out, args.svg, out)


def cmd_sweep(args, out):
    axis1 = _parse_axis(args.axis1)
    axis2 = _parse_axis(args.axis2) if args.axis2 else None
    grid = analysis.SweepGrid(axis1, args.mode, _parse_fixed(args.fixed), axis2=axis2)
    _write_grid(analysis.run_sweep(grid), args.out, out=out)


def _model_and_range(args, kind):
    if args.preset:
        if args.mode or args.fixed:
            raise UsageError("--preset cannot be combined with --mode/--fixed")
        grid = analysis.preset(args.preset)
        lo, hi = args.range or analysis.PRESET_SEARCH_RANGES[args.preset][kind]
        return grid.model, grid.axis1.name, lo, hi
    if not args.mode or not args.range:
        raise UsageError("give --preset, or --mode with --range")
    return analysis.GainModel(args.mode, _parse_fixed(args.fixed)), args.var, *args.range


def cmd_threshold(args, out):
    model, var, lo, hi = _model_and_range(args, "threshold")
    results = analysis.find_threshold(model, var, lo, hi, args.points)
    print(f"crossings {len(results)} on [{lo:g}, {hi:g}]", file=out)
    for r in results:
        print(f"{var}={_fmt(r.crossing)} bracket=({r.bracket[0]:.6g}, {r.bracket[1]:.6g}) "
              f"residual={r.residual:.2e} iterations={r.iterations}", file=out)


def cmd_optimize(args, out):
    model, var, lo, hi = _model_and_range(args, "optimize")
    r = analysis.find_max_gain(model, var, lo, hi, args.points)
    print(f"argmax {var}={_fmt(r.argmax)} max_gain={_fmt(r.max_value)}", file=out)


def cmd_polarizability(args, out):
    cfg = io.load_species(args.species)
    levels = ("g", "m") if args.level == "both" else (args.level,)
    for level in levels:
        entries = cfg.transitions[level]
        if not entries:
            print(f"level {level}: no transitions", file=out)
            continue
        a33 = polarizability.polarizability_component(entries, args.omega0, "parallel")
        a11 = polarizability.polarizability_component(entries, args.omega0, "perpendicular")
        print(f"level {level}: alpha33={_fmt(a33)} alpha11={_fmt(a11)} "
              f"dalpha={_fmt(a33 - a11)} cm^3", file=out)


COMMANDS = {
    "gain": cmd_gain,
    "oracle": cmd_oracle,
    "figure": cmd_figure,
    "sweep": cmd_sweep,
    "threshold": cmd_threshold,
    "optimize": cmd_optimize,
    "polarizability": cmd_polarizability,
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"align-gain: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ConfigError, ConvergenceError) as exc:
        print(f"align-gain: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"align-gain: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
