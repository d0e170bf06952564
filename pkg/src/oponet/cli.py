"""Command-line interface.

Subcommands: ``steady``, ``wigner``, ``sweep``, ``classical``,
``preset <name>``. Parameters come from a JSON or YAML config file
(``--config``), overridden by flags. Exit codes: 0 success, 2 config error,
3 solver failure. ``OPONET_WORKERS`` sets the sweep worker-pool size.
"""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from .experiment import ConfigError, ExperimentConfig, load_preset, run
from .presets import preset_names
from .steady import SteadyStateError


def _load_config_file(path) -> dict:
    with open(path) as f:
        text = f.read()
    try:
        if path.endswith(".json"):
            return json.loads(text)
        return yaml.safe_load(text) or {}
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"config file {path}: {e}") from e


def _add_common(p):
    p.add_argument("--config", help="JSON or YAML config file")
    p.add_argument("--num-modes", type=int, dest="num_modes")
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--loss", type=float)
    p.add_argument("--saturation", type=float)
    p.add_argument("--coupling", dest="coupling")
    p.add_argument("--coupling-strength", type=float, dest="coupling_strength")
    p.add_argument("--pump", type=float)
    p.add_argument("--pump-rel", type=float, dest="pump_rel")
    p.add_argument("--solver-method", dest="solver_method")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--seed", type=int)
    p.add_argument("--name", dest="name")


def _config_from_args(args, forced_outputs=None) -> ExperimentConfig:
    raw = {}
    if args.config:
        raw.update(_load_config_file(args.config))
    for key in (
        "num_modes",
        "n_max",
        "loss",
        "saturation",
        "coupling",
        "coupling_strength",
        "pump",
        "pump_rel",
        "solver_method",
        "output_dir",
        "seed",
        "name",
    ):
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    if getattr(args, "sweep", None):
        raw["pump_rel_sweep"] = [float(x) for x in args.sweep.split(",")]
        raw.pop("pump_rel", None)
        raw.pop("pump", None)
    if forced_outputs is not None:
        raw["outputs"] = forced_outputs
    for key in ("num_modes", "n_max", "loss", "saturation"):
        if key not in raw:
            raise ConfigError(f"config key {key!r}: required (flag or config file)")
    return ExperimentConfig.from_dict(raw)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="oponet", description="Coupled-OPO network steady-state simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_steady = sub.add_parser("steady", help="solve one steady state")
    _add_common(p_steady)

    p_wigner = sub.add_parser("wigner", help="steady state plus Wigner grid")
    _add_common(p_wigner)
    p_wigner.add_argument("--wigner-range", type=float, dest="wigner_range")
    p_wigner.add_argument("--wigner-step", type=float, dest="wigner_step")
    p_wigner.add_argument(
        "--wigner-modes",
        dest="wigner_modes",
        help="comma-separated 1-based modes varying on the grid",
    )

    p_sweep = sub.add_parser("sweep", help="pump sweep with negativity records")
    _add_common(p_sweep)
    p_sweep.add_argument(
        "--sweep", help="comma-separated pump values relative to threshold"
    )

    p_classical = sub.add_parser("classical", help="mean-field diagnostics only")
    _add_common(p_classical)

    p_preset = sub.add_parser("preset", help="run a named preset")
    p_preset.add_argument("preset_name", choices=preset_names() + ["list"])
    p_preset.add_argument("--n-max", type=int, dest="n_max")
    p_preset.add_argument("--output-dir", dest="output_dir")
    p_preset.add_argument("--solver-method", dest="solver_method")

    args = parser.parse_args(argv)
    try:
        if args.command == "preset":
            if args.preset_name == "list":
                for name in preset_names():
                    print(name)
                return 0
            for cfg in load_preset(args.preset_name):
                if args.n_max is not None:
                    cfg.n_max = args.n_max
                if args.output_dir is not None:
                    cfg.output_dir = args.output_dir
                if args.solver_method is not None:
                    cfg.solver_method = args.solver_method
                cfg.validate()
                manifest = run(cfg)
                print(json.dumps(manifest))
            return 0

        forced = {
            "steady": ["steady"],
            "wigner": ["steady", "wigner", "classical"],
            "sweep": ["steady", "negativity"],
            "classical": ["classical"],
        }[args.command]
        cfg = _config_from_args(args, forced_outputs=forced)
        if args.command == "wigner":
            if args.wigner_range is not None:
                cfg.wigner_range = args.wigner_range
            if args.wigner_step is not None:
                cfg.wigner_step = args.wigner_step
            if args.wigner_modes:
                cfg.wigner_modes = [int(m) for m in args.wigner_modes.split(",")]
        if args.command == "sweep" and cfg.pump_rel_sweep is None:
            raise ConfigError("config key 'pump_rel_sweep': required for sweep")
        if args.command == "classical" and cfg.pump_rel_sweep is not None:
            raise ConfigError("config key 'pump_rel_sweep': not valid for classical")
        manifest = run(cfg)
        print(json.dumps(manifest))
        return 0
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except SteadyStateError as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
