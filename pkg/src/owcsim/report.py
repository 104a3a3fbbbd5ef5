"""CSV serialization and static plot rendering for sweep results.

Output files are deterministic byte-for-byte: rows follow the sweep's
deterministic record order, floats are printed with 17 significant digits,
newlines are always '\\n', and SVG output is stripped of timestamps and
salted with a fixed hash salt.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .runner import SweepResult

DROPS_HEADER = (
    "system,n_users,drop,seed,sum_rate_bps,consumed_power_w,cf_bits_per_joule,"
    "min_sinr_db,max_sinr_db,failed,thermal_var,preamp_var,rin_var_mean,bg_shot_var"
)

SUMMARY_HEADER = (
    "system,n_users,n_drops,n_failed,sum_rate_mean_bps,sum_rate_std_bps,"
    "cf_mean_bits_per_joule,cf_std_bits_per_joule,consumed_power_w"
)


def _fmt(x: float) -> str:
    """17-significant-digit float field; NaN serializes as an empty field."""
    if math.isnan(x):
        return ""
    return "%.17g" % x


def _sinr_db_bounds(per_user_sinr) -> tuple[float, float]:
    if not per_user_sinr:
        return math.nan, math.nan
    lo, hi = min(per_user_sinr), max(per_user_sinr)
    to_db = lambda s: 10.0 * math.log10(s) if s > 0 else -math.inf
    return to_db(lo), to_db(hi)


def write_csv(sweep: SweepResult, out_dir: str) -> tuple[str, str]:
    """Write drops.csv and summary.csv under out_dir; returns their paths."""
    os.makedirs(out_dir, exist_ok=True)
    drops_path = os.path.join(out_dir, "drops.csv")
    summary_path = os.path.join(out_dir, "summary.csv")

    lines = [DROPS_HEADER]
    for d in sweep.drops:
        if d.failed:
            metric_fields = [""] * 4 + ["1"] + [""] * 4
        else:
            min_db, max_db = _sinr_db_bounds(d.per_user_sinr)
            metric_fields = [
                _fmt(d.sum_rate),
                _fmt(d.cf_bits_per_joule),
                _fmt(min_db),
                _fmt(max_db),
                "0",
                _fmt(d.thermal_var),
                _fmt(d.preamp_var),
                _fmt(d.rin_var_mean),
                _fmt(d.bg_shot_var),
            ]
        row = [
            d.system.value,
            str(d.n_users),
            str(d.drop_index),
            str(d.seed),
            metric_fields[0],
            _fmt(d.consumed_power),
            *metric_fields[1:],
        ]
        lines.append(",".join(row))
    with open(drops_path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")

    lines = [SUMMARY_HEADER]
    for c in sweep.cells:
        lines.append(
            ",".join(
                [
                    c.system.value,
                    str(c.n_users),
                    str(c.n_drops),
                    str(c.n_failed),
                    _fmt(c.sum_rate_mean),
                    _fmt(c.sum_rate_std),
                    _fmt(c.cf_mean),
                    _fmt(c.cf_std),
                    _fmt(c.consumed_power),
                ]
            )
        )
    with open(summary_path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return drops_path, summary_path


def dump_channel_csv(entries: np.ndarray, path: str) -> None:
    """One debugging channel matrix: row = user, column = AP."""
    with open(path, "w", newline="") as fh:
        for row in np.atleast_2d(entries):
            fh.write(",".join("%.17g" % v for v in row) + "\n")


def render_plots(sweep: SweepResult, out_dir: str) -> tuple[str, str]:
    """Sum-rate and consumption-factor curves vs user count, as SVG.

    One errorbar line per system (std over non-failed drops); axes in the
    conventional units Gb/s and Gb/mJ.
    """
    if not sweep.cells:
        raise ValueError("nothing to plot")
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "owcsim"
    os.makedirs(out_dir, exist_ok=True)

    systems = sorted({c.system for c in sweep.cells}, key=lambda s: s.value)
    specs = [
        ("sum_rate_mean", "sum_rate_std", 1e-9, "Sum rate (Gb/s)", "rate_vs_users.svg"),
        ("cf_mean", "cf_std", 1e-12, "Consumption factor (Gb/mJ)", "cf_vs_users.svg"),
    ]
    paths = []
    for mean_attr, std_attr, scale, ylabel, fname in specs:
        fig, ax = plt.subplots(figsize=(5.0, 3.5))
        for system in systems:
            cells = [c for c in sweep.cells if c.system == system]
            xs = [c.n_users for c in cells]
            ys = [getattr(c, mean_attr) * scale for c in cells]
            errs = [getattr(c, std_attr) * scale for c in cells]
            ax.errorbar(xs, ys, yerr=errs, marker="o", capsize=3, label=system.value)
        ax.set_xlabel("Number of users")
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = os.path.join(out_dir, fname)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return tuple(paths)
