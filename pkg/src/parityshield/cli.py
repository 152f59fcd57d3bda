"""Command line front end.

Subcommands map onto the canonical comparison runs (fig1, fig2, fig3), a
free-form run (custom), parameter sweeps (sweep), and the closed-form vs
integrator check suite (validate).  Every run writes a CSV table first and
renders the SVG strictly from that CSV, so plots can always be regenerated
from shipped data alone.

Exit codes: 0 success, 1 usage or configuration problem, 2 a physics
ordering or validation check failed, 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ._version import __version__
from .errors import (ConfigError, DegeneracyError, ParameterError, StateError,
                     ValidationFailure)
from .oracle import DIRECT_QUADRATURE, EXACT_AUGMENTED
from .output import render_svg, write_csv
from .scenarios import (build_scenario, check_fig2_ordering,
                        check_fig3_ordering, compute_trace, load_config,
                        run_sweep)
from .validation import run_validation

OUT_DIR_ENV = "PARITYSHIELD_OUT"

_ORDERING_CHECKS = {"fig2": check_fig2_ordering, "fig3": check_fig3_ordering}

# argparse dest -> scenario option key
_OPTION_KEYS = ("lam", "omega", "r_rate", "tau", "delta_t", "n_duty",
                "t_max", "samples_per_unit_time", "initial_state",
                "run_id", "schedules")


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_model_options(sub, n_duty_help):
    sub.add_argument("--config", help="INI file with one section per scenario")
    sub.add_argument("--lambda", dest="lam",
                     help="reservoir correlation decay rate")
    sub.add_argument("--omega", help="effective mode splitting")
    sub.add_argument("--r-rate", dest="r_rate",
                     help="collective coupling rate (alternative to --omega)")
    sub.add_argument("--tau", help="pulse repetition interval")
    sub.add_argument("--delta-t", dest="delta_t",
                     help="measurement interval (defaults to --tau)")
    sub.add_argument("--n-duty", dest="n_duty", help=n_duty_help)
    sub.add_argument("--t-max", dest="t_max", help="evolution horizon")
    sub.add_argument("--samples-per-unit-time", dest="samples_per_unit_time",
                     help="uniform sampling density of the output table")
    sub.add_argument("--initial-state", dest="initial_state",
                     help="dark | superradiant | mixed(b1,b2)")
    sub.add_argument("--run-id", dest="run_id",
                     help="identifier recorded in the output metadata")
    sub.add_argument("--out", help="output CSV path (default under "
                     f"${OUT_DIR_ENV} or the working directory)")


def _collect_options(args, section: str,
                     rename: dict[str, str] | None = None) -> dict[str, str]:
    """Merge config-file section and explicit CLI flags (flags win)."""
    options: dict[str, str] = {}
    if getattr(args, "config", None):
        sections = load_config(args.config)
        if section not in sections:
            raise ConfigError(
                f"config {args.config} has no [{section}] section")
        options.update(sections[section])
    rename = rename or {}
    for key in _OPTION_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            options[rename.get(key, key)] = value
    return options


def _out_paths(args, default_name: str) -> tuple[Path, Path]:
    if args.out:
        path = Path(args.out)
        if path.is_dir() or str(args.out).endswith(os.sep):
            path = path / f"{default_name}.csv"
    else:
        path = Path(os.environ.get(OUT_DIR_ENV, ".")) / f"{default_name}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    return path, path.with_suffix(".svg")


def _run_scenario(args) -> int:
    scenario = args.scenario
    options = _collect_options(
        args, scenario,
        rename={"n_duty": "n_duty_values"} if scenario == "fig3" else None)
    cfg = build_scenario(scenario, options)
    trace = compute_trace(cfg)
    csv_path, svg_path = _out_paths(args, scenario)
    write_csv(csv_path, trace.metadata, trace.header, trace.rows)
    render_svg(csv_path, svg_path)
    print(f"wrote {csv_path}")
    print(f"wrote {svg_path}")
    # outputs land on disk before the ordering gate so a failed check
    # still leaves the data inspectable
    check = _ORDERING_CHECKS.get(scenario)
    if check is not None:
        check(trace)
        print(f"{scenario} ordering check passed")
    return 0


def _run_sweep(args) -> int:
    options = _collect_options(args, "sweep")
    trace = run_sweep(options, max_cells=args.max_cells)
    csv_path, _ = _out_paths(args, "sweep")
    write_csv(csv_path, trace.metadata, trace.header, trace.rows)
    print(f"wrote {csv_path} ({len(trace.rows)} cells)")
    return 0


def _run_validate(args) -> int:
    overrides: dict[str, float] = {}
    for item in args.tolerance or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(
                f"tolerance override must look like name=value, got {item!r}")
        try:
            overrides[name.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value in {item!r}") from exc
    modes = {"both": (EXACT_AUGMENTED, DIRECT_QUADRATURE),
             EXACT_AUGMENTED: (EXACT_AUGMENTED,),
             DIRECT_QUADRATURE: (DIRECT_QUADRATURE,)}[args.oracle_mode]
    report = run_validation(tolerance_overrides=overrides or None,
                            dt_num=float(args.dt_num),
                            oracle_modes=modes)
    text = "\n".join(report.lines())
    print(text)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n")
        print(f"wrote {out}")
    if not report.ok:
        print("validation failed", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="parityshield",
        description="Decay protection protocols for odd-parity two-qubit "
                    "states in a common structured reservoir.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    for scenario, blurb in (
            ("fig1", "instantaneous pulses vs repeated measurement"),
            ("fig2", "free decay vs measurement vs pulses, ordering checked"),
            ("fig3", "finite-duration pulses vs the instantaneous limit"),
            ("custom", "free-form schedule comparison")):
        sub = subs.add_parser(scenario, help=blurb)
        n_help = ("comma-separated duty parameters (fig3)"
                  if scenario == "fig3" else argparse.SUPPRESS)
        _add_model_options(sub, n_help)
        if scenario == "custom":
            sub.add_argument("--schedules",
                             help="pipe-separated descriptors, e.g. "
                                  "'none|zeno(0.1)|dd(0.1)|dd-finite(0.2,10)'")
        sub.set_defaults(handler=_run_scenario, scenario=scenario)

    sub = subs.add_parser("sweep", help="terminal-fidelity parameter sweep")
    _add_model_options(sub, "duty parameter (single value or axis list)")
    sub.add_argument("--max-cells", dest="max_cells", type=int, default=200,
                     help="refuse grids larger than this many cells")
    sub.set_defaults(handler=_run_sweep)

    sub = subs.add_parser("validate",
                          help="run the closed-form vs integrator checks")
    sub.add_argument("--dt-num", dest="dt_num", default="1e-4",
                     help="integrator step size")
    sub.add_argument("--oracle-mode", dest="oracle_mode", default="both",
                     choices=["both", EXACT_AUGMENTED, DIRECT_QUADRATURE],
                     help="restrict the integrator backends exercised")
    sub.add_argument("--tolerance", action="append", metavar="NAME=VALUE",
                     help="override one check tolerance (repeatable)")
    sub.add_argument("--out", help="also write the report to this file")
    sub.set_defaults(handler=_run_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ConfigError, ParameterError, StateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    except DegeneracyError as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
