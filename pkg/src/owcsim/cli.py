"""Command-line entry point: config handling, sweep execution, outputs.

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
Precedence for every setting: command-line flag, then config file, then the
OWCSIM_OUT environment variable (output directory only), then built-in
defaults.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import config as config_mod
from . import optics, report, runner
from .errors import ConfigError
from .rng import drop_seed
from .scenario import Scenario, SystemKind, place_users, validate_config
from .channel import build_channel_matrix

# Reference 1/e^2 footprint the computed spot area is reported against; the
# stated nominal figure for this transmitter geometry. Diagnostic only:
# disagreement is reported, never corrected for.
NOMINAL_SPOT_AREA_M2 = 1.5


def parse_users_spec(spec: str) -> list[int]:
    """Expand 'A:B:STEP' (inclusive) or a single 'N' into a user-count list."""
    parts = spec.split(":")
    try:
        numbers = [int(p) for p in parts]
    except ValueError:
        raise ConfigError(f"invalid user range {spec!r}") from None
    if len(numbers) == 1:
        counts = numbers
    elif len(numbers) == 2:
        counts = list(range(numbers[0], numbers[1] + 1))
    elif len(numbers) == 3:
        if numbers[2] < 1:
            raise ConfigError(f"invalid user range {spec!r} (step must be >= 1)")
        counts = list(range(numbers[0], numbers[1] + 1, numbers[2]))
    else:
        raise ConfigError(f"invalid user range {spec!r}")
    if not counts or any(c < 1 for c in counts):
        raise ConfigError("empty user range")
    return counts


def _systems_from_name(name: str) -> list[SystemKind]:
    if name == "both":
        return [SystemKind.LED, SystemKind.VCSEL]
    return [SystemKind(name)]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="owcsim",
        description="Monte Carlo simulator comparing VCSEL-array and LED "
        "optical wireless access points under zero-forcing precoding.",
    )
    p.add_argument("--config", metavar="PATH", help="config file (sectioned key=value)")
    p.add_argument("--system", choices=["vcsel", "led", "both"], help="system(s) to simulate")
    p.add_argument("--users", metavar="A:B:STEP", help="user counts, e.g. 2:12:2")
    p.add_argument("--drops", type=int, metavar="N", help="Monte Carlo drops per user count")
    p.add_argument("--seed", type=int, metavar="S", help="base seed for the run")
    p.add_argument("--rate-model", choices=["shannon", "ook"], help="SINR-to-rate mapping")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--plots", action="store_true", help="render SVG plots")
    p.add_argument("--dump-channel", action="store_true", help="dump per-drop channel matrices")
    p.add_argument("--workers", type=int, metavar="N", help="worker threads (1 = sequential)")
    return p


def _resolve(args) -> tuple[dict, Scenario, dict]:
    """Merge flags over config over defaults into (raw, scenario, run opts)."""
    raw = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
        raw = config_mod.parse_config(text)

    if args.rate_model:
        raw["system.rate_model"] = args.rate_model
    if args.system:
        raw["run.systems"] = args.system
    if args.users:
        raw["run.users"] = args.users
    if args.drops is not None:
        raw["run.drops"] = args.drops
    if args.seed is not None:
        raw["run.seed"] = args.seed
    if args.workers is not None:
        raw["run.workers"] = args.workers
    if args.out:
        raw["run.out"] = args.out
    elif "run.out" not in raw and os.environ.get("OWCSIM_OUT"):
        raw["run.out"] = os.environ["OWCSIM_OUT"]
    if args.plots:
        raw["run.plots"] = True
    if args.dump_channel:
        raw["run.dump_channel"] = True

    resolved = config_mod.resolved_config(raw)
    scenario = validate_config(resolved)
    run_opts = {
        "systems": _systems_from_name(resolved["run.systems"]),
        "user_counts": parse_users_spec(str(resolved["run.users"])),
        "n_drops": int(resolved["run.drops"]),
        "base_seed": int(resolved["run.seed"]),
        "out_dir": str(resolved["run.out"]),
        "plots": bool(resolved["run.plots"]),
        "dump_channel": bool(resolved["run.dump_channel"]),
        "overload": str(resolved["run.overload"]),
        "workers": int(resolved["run.workers"]),
    }
    if run_opts["n_drops"] < 1:
        raise ConfigError(f"run.drops must be >= 1, got {run_opts['n_drops']}")
    if run_opts["workers"] < 1:
        raise ConfigError(f"run.workers must be >= 1, got {run_opts['workers']}")
    return raw, scenario, run_opts


def _dump_channels(scenario, opts) -> None:
    chan_dir = os.path.join(opts["out_dir"], "channels")
    os.makedirs(chan_dir, exist_ok=True)
    for system in opts["systems"]:
        for n in opts["user_counts"]:
            for d in range(opts["n_drops"]):
                seed = drop_seed(opts["base_seed"], d)
                scen = scenario.with_users(place_users(scenario.room, n, seed))
                H = build_channel_matrix(scen, system)
                path = os.path.join(chan_dir, f"{system.value}_u{n}_d{d}.csv")
                report.dump_channel_csv(H.entries, path)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw, scenario, opts = _resolve(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        spot = optics.array_spot_area(scenario.vcsel, scenario.room.link_distance)
        print(
            f"diagnostic: vcsel array spot area {spot:.6g} m^2 at "
            f"{scenario.room.link_distance:g} m (nominal {NOMINAL_SPOT_AREA_M2:g} m^2)"
        )
        sweep = runner.sweep_users(
            scenario,
            opts["systems"],
            opts["user_counts"],
            opts["n_drops"],
            opts["base_seed"],
            overload=opts["overload"],
            workers=opts["workers"],
        )
        os.makedirs(opts["out_dir"], exist_ok=True)
        drops_path, summary_path = report.write_csv(sweep, opts["out_dir"])
        resolved_path = os.path.join(opts["out_dir"], "config_resolved.txt")
        with open(resolved_path, "w", newline="") as fh:
            fh.write(config_mod.serialize_config(config_mod.resolved_config(raw)))
        if opts["dump_channel"]:
            _dump_channels(scenario, opts)
        if opts["plots"]:
            report.render_plots(sweep, opts["out_dir"])
        for cell in sweep.cells:
            print(
                f"{cell.system.value:>5s} users={cell.n_users:<3d} "
                f"sum_rate={cell.sum_rate_mean * 1e-9:.4f} Gb/s "
                f"cf={cell.cf_mean * 1e-12:.6f} Gb/mJ "
                f"power={cell.consumed_power:g} W failed={cell.n_failed}"
            )
        print(f"wrote {drops_path}, {summary_path}")
    except Exception as exc:  # runtime failure, distinct from config errors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
