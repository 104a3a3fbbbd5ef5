"""Monte Carlo orchestration: user drops, sweeps, per-cell aggregation.

Every drop is a pure function of (scenario, system, n_users, drop_index,
base_seed), so the whole sweep is reproducible bit-for-bit and drops may be
evaluated concurrently without changing any output. User positions are
derived from (base_seed, n_users, drop_index) only, never from the system,
which keeps VCSEL and LED runs on identical geometry drop by drop.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import metrics, precoding
from .channel import build_channel_matrix
from .errors import RankDeficientChannelError
from .noise import noise_components
from .rng import drop_seed
from .scenario import Scenario, SystemKind, Vec3, place_users


@dataclass(frozen=True)
class DropResult:
    """Outcome of one Monte Carlo user drop for one system."""

    system: SystemKind
    n_users: int
    drop_index: int
    seed: int
    user_positions: tuple[Vec3, ...]
    per_user_sinr: tuple[float, ...]
    per_user_rate: tuple[float, ...]
    sum_rate: float
    consumed_power: float
    cf_bits_per_joule: float
    thermal_var: float
    preamp_var: float
    rin_var_mean: float
    bg_shot_var: float
    failed: bool = False
    fail_reason: str = ""


@dataclass(frozen=True)
class CellSummary:
    """Aggregates over the non-failed drops of one (system, n_users) cell."""

    system: SystemKind
    n_users: int
    n_drops: int
    n_failed: int
    sum_rate_mean: float
    sum_rate_std: float
    cf_mean: float
    cf_std: float
    consumed_power: float


@dataclass(frozen=True)
class SweepResult:
    drops: tuple[DropResult, ...]
    cells: tuple[CellSummary, ...]


def _rin_db(scenario: Scenario, system: SystemKind):
    """RIN density for the system's source; None disables the term (LED)."""
    return scenario.vcsel.rin_db_per_hz if system is SystemKind.VCSEL else None


def _evaluate_group(scenario, system, H_rows, responsivity, bandwidth):
    """SINRs for one jointly precoded user set (strict full-rank ZF)."""
    G = precoding.zf_precoder(H_rows)
    g_eff = precoding.effective_gains(H_rows, G)
    p = precoding.allocate_power(scenario, H_rows.shape[0], system)
    i_sig = responsivity * p * np.diag(g_eff)
    sigma = np.empty_like(i_sig)
    rins = np.empty_like(i_sig)
    for u, i_u in enumerate(i_sig):
        nb = noise_components(
            scenario.receiver_for(system),
            bandwidth,
            _rin_db(scenario, system),
            float(i_u),
            scenario.include_signal_shot,
        )
        sigma[u] = nb.total_std
        rins[u] = nb.rin_var
    report = precoding.sinr_per_user(g_eff, p, responsivity, sigma)
    return report.per_user_sinr, rins


def run_drop(
    scenario: Scenario,
    system: SystemKind,
    n_users: int,
    drop_index: int,
    base_seed: int,
    overload: str = "joint",
) -> DropResult:
    """One random user placement pushed through the full signal chain.

    overload selects how user counts beyond the AP count (or users with
    dead channel rows) are handled: "joint" uses the truncated-SVD
    min-norm precoder over everyone at once, splitting AP power over the
    served subset; "timeshare" runs strict ZF on round-robin groups of at
    most n_aps users at equal duty factors, and records the drop as failed
    if any group's channel is rank deficient.
    """
    if overload not in ("joint", "timeshare"):
        raise ValueError(f"unknown overload policy {overload!r}")
    seed = drop_seed(base_seed, drop_index)
    users = place_users(scenario.room, n_users, seed)
    scen = scenario.with_users(users)
    H = build_channel_matrix(scen, system)
    receiver = scen.receiver_for(system)
    bandwidth = scen.bandwidth_for(system)
    responsivity = receiver.responsivity
    cp = metrics.consumed_power(scen, system)
    idle = noise_components(receiver, bandwidth, None, 0.0)

    def failed(reason: str) -> DropResult:
        return DropResult(
            system=system,
            n_users=n_users,
            drop_index=drop_index,
            seed=seed,
            user_positions=tuple(users),
            per_user_sinr=(),
            per_user_rate=(),
            sum_rate=math.nan,
            consumed_power=cp,
            cf_bits_per_joule=math.nan,
            thermal_var=idle.thermal_var,
            preamp_var=idle.preamp_var,
            rin_var_mean=math.nan,
            bg_shot_var=idle.background_shot_var,
            failed=True,
            fail_reason=reason,
        )

    sinr = np.zeros(n_users)
    rin_vars = np.zeros(n_users)
    duty = np.ones(n_users)

    if overload == "joint":
        G, _, served = precoding.min_norm_precoder(H.entries)
        n_served = int(served.sum())
        if n_served > 0:
            g_eff = precoding.effective_gains(H.entries, G)
            p_each = precoding.allocate_power(scen, n_served, system)
            p_vec = np.where(served, p_each, 0.0)
            i_sig = responsivity * p_vec * np.diag(g_eff)
            sigma = np.empty(n_users)
            for u, i_u in enumerate(i_sig):
                nb = noise_components(
                    receiver, bandwidth, _rin_db(scen, system), float(i_u),
                    scen.include_signal_shot,
                )
                sigma[u] = nb.total_std
                rin_vars[u] = nb.rin_var
            report = precoding.sinr_per_user(g_eff, p_vec, responsivity, sigma)
            sinr = report.per_user_sinr
    else:
        groups = precoding.schedule_groups(n_users, len(scen.aps))
        try:
            for members, d in groups:
                idx = np.array(members)
                group_sinr, group_rins = _evaluate_group(
                    scen, system, H.entries[idx], responsivity, bandwidth
                )
                sinr[idx] = group_sinr
                rin_vars[idx] = group_rins
                duty[idx] = d
        except RankDeficientChannelError as exc:
            return failed(str(exc))

    rates = metrics.rate_report(
        sinr, bandwidth, scen.rate_model, scen.fec_ber_limit, duty
    )
    energy = metrics.consumption_factor(rates.sum_rate, cp)
    return DropResult(
        system=system,
        n_users=n_users,
        drop_index=drop_index,
        seed=seed,
        user_positions=tuple(users),
        per_user_sinr=tuple(float(s) for s in sinr),
        per_user_rate=tuple(float(r) for r in rates.per_user_rate),
        sum_rate=rates.sum_rate,
        consumed_power=cp,
        cf_bits_per_joule=energy.consumption_factor,
        thermal_var=idle.thermal_var,
        preamp_var=idle.preamp_var,
        rin_var_mean=float(np.mean(rin_vars)),
        bg_shot_var=idle.background_shot_var,
    )


def _summarize(drops: list[DropResult]) -> list[CellSummary]:
    cells = []
    seen = []
    for d in drops:
        key = (d.system, d.n_users)
        if key not in seen:
            seen.append(key)
    for system, n_users in seen:
        cell = [d for d in drops if d.system == system and d.n_users == n_users]
        ok = [d for d in cell if not d.failed]
        if ok:
            rates = np.array([d.sum_rate for d in ok])
            cfs = np.array([d.cf_bits_per_joule for d in ok])
            stats = (
                float(rates.mean()), float(rates.std()),
                float(cfs.mean()), float(cfs.std()),
            )
        else:
            stats = (math.nan, math.nan, math.nan, math.nan)
        cells.append(
            CellSummary(
                system=system,
                n_users=n_users,
                n_drops=len(cell),
                n_failed=len(cell) - len(ok),
                sum_rate_mean=stats[0],
                sum_rate_std=stats[1],
                cf_mean=stats[2],
                cf_std=stats[3],
                consumed_power=cell[0].consumed_power,
            )
        )
    return cells


def sweep_users(
    scenario: Scenario,
    systems,
    user_counts,
    n_drops: int,
    base_seed: int,
    overload: str = "joint",
    workers: int = 1,
) -> SweepResult:
    """Every (system, n_users, drop) combination, in deterministic order.

    Records are ordered by (system name, n_users, drop) no matter how many
    workers execute them; with workers > 1 drops run on a thread pool and
    are merged back in task order, so concurrent and sequential runs yield
    identical results.
    """
    counts = list(user_counts)
    if not counts:
        raise ValueError("user_counts must be non-empty")
    if n_drops < 1:
        raise ValueError(f"n_drops must be >= 1, got {n_drops!r}")
    ordered_systems = sorted(set(systems), key=lambda s: s.value)
    tasks = [
        (system, n, d)
        for system in ordered_systems
        for n in counts
        for d in range(n_drops)
    ]

    def one(task):
        system, n, d = task
        return run_drop(scenario, system, n, d, base_seed, overload)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            drops = list(pool.map(one, tasks))
    else:
        drops = [one(t) for t in tasks]
    return SweepResult(drops=tuple(drops), cells=tuple(_summarize(drops)))
