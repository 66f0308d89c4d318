"""Command-line front end.

Subcommands:
  simulate  integrate a configured scenario; writes <prefix>.csv,
            <prefix>_events.json, and <prefix>.png
  audit     run randomized law checks; writes a JSON report
  plotdata  extract (t, value) series from a trajectory CSV; writes a
            delimited file and a figure alongside

Exit codes: 0 success, 1 audit found failures, 2 bad configuration or
usage, 3 runtime (integration) error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .audit import CHECK_TOLERANCES, LAW_CHECKS, SamplerConfig, run_all, run_check
from .integrator import IntegrationError, integrate
from .laws import resolve_law
from .scenarios import (ConfigError, build_scenario, config_dict,
                        integrator_options, load_config)
from .trajfile import (attach_gaps, read_trajectory_csv, table_from_trajectory,
                       write_events_json, write_plotdata, write_trajectory_csv)

EXIT_OK = 0
EXIT_AUDIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slidefield",
        description="Sliding vector fields: simulation, law audits, plot data.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate a configured scenario")
    p_sim.add_argument("--config", required=True, help="JSON run configuration")
    p_sim.add_argument("--out-prefix", required=True,
                       help="output path prefix for .csv/_events.json/.png")
    p_sim.add_argument("--no-fig", action="store_true",
                       help="skip the figure")
    p_sim.set_defaults(func=cmd_simulate)

    p_aud = sub.add_parser("audit", help="randomized checks of a sliding law")
    p_aud.add_argument("--law", required=True,
                       help="filippov, mean, or scaled_filippov(<c>)")
    p_aud.add_argument("--check", required=True,
                       help=f"one of: all, {', '.join(CHECK_TOLERANCES)}")
    p_aud.add_argument("--trials", type=int, default=1000)
    p_aud.add_argument("--seed", type=int, default=0)
    p_aud.add_argument("--dim", type=int, default=2,
                       help="ambient dimension of sampled configurations")
    p_aud.add_argument("--out", default=None, help="report JSON path (default stdout)")
    p_aud.set_defaults(func=cmd_audit)

    p_pd = sub.add_parser("plotdata", help="extract plot series from a trajectory CSV")
    p_pd.add_argument("--in", dest="infile", required=True, help="trajectory CSV")
    p_pd.add_argument("--cols", default=None,
                      help="comma-separated coordinate names (default: all)")
    p_pd.add_argument("--out", required=True, help="delimited output path")
    p_pd.add_argument("--no-fig", action="store_true", help="skip the figure")
    p_pd.set_defaults(func=cmd_plotdata)
    return parser


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    pf, labels = build_scenario(cfg)
    law = resolve_law(cfg.law)
    opts = integrator_options(cfg)
    prefix = Path(args.out_prefix)
    if prefix.parent and not prefix.parent.exists():
        prefix.parent.mkdir(parents=True, exist_ok=True)

    partial = None
    try:
        traj = integrate(pf, law, np.array(cfg.x0), cfg.t0, opts)
    except IntegrationError as exc:
        print(f"slidefield: integration failed: {exc}", file=sys.stderr)
        if exc.trajectory is None:
            return EXIT_RUNTIME
        traj, partial = exc.trajectory, str(exc)

    echo = config_dict(cfg)
    table = attach_gaps(table_from_trajectory(traj, labels, echo, cfg.seed),
                        pf.surface)
    write_trajectory_csv(table, Path(str(prefix) + ".csv"))
    write_events_json(traj, echo, cfg.seed, Path(str(prefix) + "_events.json"))
    if not args.no_fig:
        from .plotting import render_trajectory_figure
        render_trajectory_figure(table, Path(str(prefix) + ".png"))
    if partial is not None:
        print("slidefield: wrote the partial trajectory", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_audit(args) -> int:
    if args.trials < 1:
        raise ConfigError(f"--trials must be at least 1, got {args.trials}")
    if args.dim < 1:
        raise ConfigError(f"--dim must be at least 1, got {args.dim}")
    try:
        law = resolve_law(args.law)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cfg = SamplerConfig(seed=args.seed, trials=args.trials, dim=args.dim)

    if args.check == "all":
        reports = run_all(law, cfg)
        payload = [r.to_dict() for r in reports]
    elif args.check in CHECK_TOLERANCES:
        reports = [run_check(args.check, law, cfg)]
        payload = reports[0].to_dict()
    else:
        raise ConfigError(f"unknown check {args.check!r}; "
                          f"available: all, {', '.join(CHECK_TOLERANCES)}")

    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.law} {r.check}: failures {r.failures}/{r.trials}, "
              f"worst {r.worst_violation:.3e} (tol {r.tolerance:g})")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_AUDIT_FAILED


def cmd_plotdata(args) -> int:
    path = Path(args.infile)
    if not path.exists():
        raise ConfigError(f"no such trajectory file: {path}")
    try:
        table = read_trajectory_csv(path)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    cols = list(table.labels) if args.cols is None else \
        [c.strip() for c in args.cols.split(",") if c.strip()]
    for c in cols:
        if c not in table.labels and c != "gap":
            raise ConfigError(f"no such column {c!r}; available: "
                              f"{', '.join(table.labels)}, gap")
    series = write_plotdata(table, cols, args.out)
    if not args.no_fig:
        from .plotting import render_series_figure
        render_series_figure(series, Path(args.out).with_suffix(".png"))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"slidefield: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"slidefield: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
