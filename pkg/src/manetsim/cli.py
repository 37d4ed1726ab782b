"""Command line front end.

Subcommands:
  run                          one seeded simulation -> series.csv + summary.json
  sweep <param> <v1,v2,...>    replicated sweep -> sweep.csv + sweep.json
  critical-rates <lo> <hi>     bisect the three congestion boundaries -> critical_rates.json

Model flags mirror SimConfig; a flat key=value file passed with --config
supplies defaults and explicit flags override it. Exit codes: 0 success,
2 configuration/usage error, 3 insufficient data, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import SimConfig
from .errors import BracketError, ConfigurationError, InsufficientDataError, OutputError
from .harness import SWEEPABLE, run_replicas, run_simulation, sweep
from .metrics import DEFAULT_THRESHOLDS, find_critical_rates
from .output import _jsonable, _write_text, emit_outputs

# flag name -> (SimConfig field, type)
_FLAG_FIELDS = {
    "nodes": ("n_nodes", int),
    "area": ("area_side", float),
    "radius": ("comm_radius", float),
    "speed": ("speed", float),
    "alpha": ("alpha", float),
    "rate": ("gen_rate", float),
    "capacity": ("capacity", int),
    "energy": ("init_energy", float),
    "hop-cost": ("hop_cost", float),
    "seed": ("seed", int),
    "max-steps": ("max_steps", int),
}


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    for flag, (field, typ) in _FLAG_FIELDS.items():
        parser.add_argument(f"--{flag}", dest=field, type=typ, default=None)
    parser.add_argument("--config", type=str, default=None,
                        help="flat key=value file; flags override it")
    parser.add_argument("--runs", type=int, default=None,
                        help="replica count for sweep (default 100)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker threads for replicated runs")
    parser.add_argument("--out", type=str, default="out",
                        help="output directory")


def _parse_config_file(path: str) -> dict:
    """key=value per line; '#' starts a comment; keys use the flag spellings."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _FLAG_FIELDS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        field, typ = _FLAG_FIELDS[key]
        try:
            values[field] = typ(val.strip())
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return values


def _build_config(args: argparse.Namespace) -> SimConfig:
    values = _parse_config_file(args.config) if args.config else {}
    for _, (field, _typ) in _FLAG_FIELDS.items():
        flag_value = getattr(args, field)
        if flag_value is not None:
            values[field] = flag_value
    return SimConfig(**values).validate()


def _cmd_run(args: argparse.Namespace) -> int:
    config = _build_config(args)
    series, summary = run_simulation(config)
    paths = emit_outputs(series, args.out) + emit_outputs(summary, args.out)
    life = summary.lifetime if summary.died else "not reached (max_steps hit)"
    state = summary.state.name if summary.state is not None else "UNCLASSIFIED"
    print(f"lifetime: {life}  state: {state}  delta_s: {summary.delta_s}  tau0: {summary.tau0}")
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _build_config(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigurationError(f"bad sweep values {args.values!r}") from exc
    n_runs = args.runs if args.runs is not None else 100
    table = sweep(config, args.parameter, values, n_runs, jobs=args.jobs)
    paths = emit_outputs(table, args.out)
    for row in table.rows():
        print(
            f"{args.parameter}={row['value']}: T_mean={row['lifetime_mean']} "
            f"tau0_mean={row['tau0_mean']} delta_s_mean={row['delta_s_mean']} "
            f"state={row['state_majority']}"
        )
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_critical_rates(args: argparse.Namespace) -> int:
    config = _build_config(args)
    rho_s, rho_f, rho_a = find_critical_rates(
        config, args.lo, args.hi, replicas=args.replicas, tolerance=args.tolerance
    )
    payload = {
        "rho_s": rho_s,
        "rho_f": rho_f,
        "rho_a": rho_a,
        "bracket": [args.lo, args.hi],
        "replicas": args.replicas,
        "tolerance": args.tolerance,
        "config": config.as_dict(),
        "thresholds": DEFAULT_THRESHOLDS.as_dict(),
    }
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {out}: {exc}") from exc
    path = _write_text(out / "critical_rates.json",
                       json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n")
    print(f"rho_s={rho_s} rho_f={rho_f} rho_a={rho_a}")
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manetsim",
        description="Energy-limited mobile network simulator: congestion states and lifetime",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one seeded simulation")
    _add_model_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="replicated sweep over one parameter")
    p_sweep.add_argument("parameter", choices=sorted(SWEEPABLE))
    p_sweep.add_argument("values", help="comma-separated parameter values")
    _add_model_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_crit = sub.add_parser("critical-rates", help="bisect the congestion-state boundaries")
    p_crit.add_argument("lo", type=float)
    p_crit.add_argument("hi", type=float)
    p_crit.add_argument("--replicas", type=int, default=11)
    p_crit.add_argument("--tolerance", type=float, default=0.1)
    _add_model_flags(p_crit)
    p_crit.set_defaults(func=_cmd_critical_rates)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, BracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OutputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
