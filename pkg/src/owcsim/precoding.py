"""Zero-forcing precoding, power allocation, and electrical SINR.

Two precoder constructions live here. `zf_precoder` is the strict textbook
right pseudo-inverse and demands a numerically full-rank channel; it backs
the null-depth guarantees. `min_norm_precoder` is the tolerant variant the
Monte Carlo runner uses: it truncates near-zero singular values, so users
whose rows are essentially dead (out of every beam) simply come back
unserved instead of poisoning the whole drop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficientChannelError
from .scenario import Scenario, SystemKind

# Relative rank threshold: smallest/largest singular value below this is
# treated as rank deficiency (strict path) or truncated (min-norm path).
RANK_TOL_FACTOR = 1e-10

# Null-depth guarantee of the strict precoder: off-diagonals of H @ G stay
# below this fraction of the smallest diagonal entry.
ZF_NULL_TOL = 1e-9

# A genuine pseudo-inverse column has norm >= 1/sigma_max, so the product
# norm * sigma_max is >= 1 for any served user and collapses to rounding
# noise for users wiped out by singular-value truncation.
SERVE_TOL = 1e-6


@dataclass(frozen=True)
class PrecoderMatrix:
    """n_aps x n_users ZF precoder with unit-norm columns.

    column_norms holds the pre-normalization Euclidean norms; the effective
    per-user channel gain after precoding is 1/column_norms[u].
    """

    entries: np.ndarray
    column_norms: np.ndarray

    def __post_init__(self):
        norms = np.linalg.norm(self.entries, axis=0)
        assert np.all(np.abs(norms - 1.0) <= 1e-12), "precoder columns must be unit norm"
        assert self.entries.shape[0] >= self.entries.shape[1]


@dataclass(frozen=True)
class SinrReport:
    """Per-user electrical SINR with its signal/interference/noise parts."""

    per_user_sinr: np.ndarray
    signal_photocurrent: np.ndarray
    residual_interference_power: np.ndarray
    noise_std: np.ndarray


def _near_dependent_rows(u_null: np.ndarray) -> list[int]:
    """Rows carrying significant weight in the near-null combination.

    The cutoff is half the largest magnitude; a pair of parallel rows with
    scale factor 2 lands exactly on it, so leave a little slack below.
    """
    mags = np.abs(u_null)
    cutoff = mags.max() * 0.5 * (1.0 - 1e-9)
    return [int(i) for i in np.flatnonzero(mags >= cutoff)]


def zf_precoder(H) -> PrecoderMatrix:
    """Right pseudo-inverse G = H^T (H H^T)^-1 with unit-norm columns.

    Computed from the SVD rather than the normal equations for stability.
    Raises RankDeficientChannelError naming the near-dependent user rows
    when the channel is too close to row-rank deficiency.
    """
    H = np.asarray(getattr(H, "entries", H), dtype=float)
    n_users, n_aps = H.shape
    if n_users > n_aps:
        raise ValueError(f"ZF needs n_users <= n_aps, got {n_users} > {n_aps}")
    u, s, vt = np.linalg.svd(H, full_matrices=False)
    if s[0] == 0.0 or s[-1] <= RANK_TOL_FACTOR * s[0]:
        rows = _near_dependent_rows(u[:, -1]) if s[0] > 0 else list(range(n_users))
        raise RankDeficientChannelError(rows, detail=f"sigma_min/sigma_max = {s[-1] / s[0] if s[0] else 0:.3e}")
    pinv = (vt.T / s) @ u.T
    norms = np.linalg.norm(pinv, axis=0)
    return PrecoderMatrix(entries=pinv / norms, column_norms=norms)


def min_norm_precoder(H, rcond: float = RANK_TOL_FACTOR):
    """Truncated-SVD pseudo-inverse precoder tolerating dead user rows.

    Returns (entries, column_norms, served). Singular values below
    rcond * sigma_max are truncated; a user whose pseudo-inverse column
    survives truncation (norm * sigma_max >= SERVE_TOL) is marked served
    and gets a unit-norm column, the rest are zeroed outright so that
    truncation residue never radiates as interference.
    """
    H = np.asarray(getattr(H, "entries", H), dtype=float)
    n_users, n_aps = H.shape
    s = np.linalg.svd(H, compute_uv=False)
    smax = float(s[0])
    if smax == 0.0:
        zeros = np.zeros((n_aps, n_users))
        return zeros, np.zeros(n_users), np.zeros(n_users, dtype=bool)
    pinv = np.linalg.pinv(H, rcond=rcond)
    norms = np.linalg.norm(pinv, axis=0)
    served = norms * smax >= SERVE_TOL
    entries = np.zeros_like(pinv)
    entries[:, served] = pinv[:, served] / norms[served]
    return entries, np.where(served, norms, 0.0), served


def effective_gains(H, G) -> np.ndarray:
    """H @ G: diagonal = per-user effective gains, off-diagonal = leakage."""
    H = np.asarray(getattr(H, "entries", H), dtype=float)
    G = np.asarray(getattr(G, "entries", G), dtype=float)
    return H @ G


def allocate_power(scenario: Scenario, n_active_users: int, system: SystemKind) -> float:
    """Equal split of one AP's total optical output over the active users."""
    if n_active_users < 1:
        raise ValueError(f"n_active_users must be >= 1, got {n_active_users!r}")
    return scenario.ap_total_optical_power(system) / n_active_users


def sinr_per_user(effective, power_per_user, responsivity: float, noise_std) -> SinrReport:
    """Electrical SINR: squared signal photocurrent over interference + noise.

    power_per_user may be a scalar or a per-user vector of optical watts;
    noise_std likewise (per-user noise is needed when RIN is active, since
    RIN scales with each user's own signal photocurrent).
    """
    g = np.asarray(effective, dtype=float)
    n = g.shape[0]
    p = np.broadcast_to(np.asarray(power_per_user, dtype=float), (n,))
    sigma = np.broadcast_to(np.asarray(noise_std, dtype=float), (n,))
    assert np.all(sigma > 0), "noise_std must be positive"
    currents = responsivity * g * p[np.newaxis, :]  # entry (u, j): user u's current from stream j
    i_sig = np.diag(currents).copy()
    off = currents - np.diag(i_sig)
    interference = np.sum(off * off, axis=1)
    sinr = (i_sig * i_sig) / (interference + sigma * sigma)
    return SinrReport(
        per_user_sinr=sinr,
        signal_photocurrent=i_sig,
        residual_interference_power=interference,
        noise_std=np.array(sigma, dtype=float),
    )


def schedule_groups(n_users: int, n_aps: int) -> list[tuple[tuple[int, ...], float]]:
    """Partition users in index order into ceil(n/n_aps) equal-duty groups."""
    if n_users < 1 or n_aps < 1:
        raise ValueError("n_users and n_aps must be >= 1")
    n_groups = -(-n_users // n_aps)
    duty = 1.0 / n_groups
    groups = []
    for g in range(n_groups):
        members = tuple(range(g * n_aps, min((g + 1) * n_aps, n_users)))
        groups.append((members, duty))
    return groups
