"""Per-RB MTD selection and conflict-free assignment across resource blocks.

The interference matrix holds, per (RB, MTD) pair, the post-beamformer
interference power the MTD would inject on that RB. Each RB wants the MTD it
hears least; conflicts are settled in favor of the RB that hears its claimed
MTD at lower power, and losers move on to their next-quietest unclaimed MTD.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .phy import LinkBudget

#: enumeration guard for the brute-force optimal assignment
_ORACLE_MAX = 8


@dataclass
class Assignment:
    """RB -> MTD map; ``None`` marks an RB left without an MTD (K < N)."""

    rb_to_mtd: list[int | None]

    def __post_init__(self):
        taken = [m for m in self.rb_to_mtd if m is not None]
        if len(taken) != len(set(taken)):
            raise ValueError(f"assignment reuses an MTD: {self.rb_to_mtd}")

    @property
    def n_assigned(self) -> int:
        return sum(m is not None for m in self.rb_to_mtd)

    def total_interference(self, matrix: np.ndarray) -> float:
        """Sum of matrix entries over assigned (RB, MTD) pairs, in RB order."""
        matrix = as_interference_matrix(matrix)
        return float(
            sum(matrix[n, m] for n, m in enumerate(self.rb_to_mtd) if m is not None)
        )


def as_interference_matrix(matrix) -> np.ndarray:
    """Validate and return an (N, K) matrix of nonnegative finite watts."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"interference matrix must be 2-D and nonempty, got shape {m.shape}")
    if not np.all(np.isfinite(m)) or np.any(m < 0):
        raise ValueError("interference matrix entries must be finite and nonnegative")
    return m


def select_min_interference(row) -> int:
    """Index of the least-interfering MTD in one RB's row; ties -> lowest index."""
    row = np.asarray(row, dtype=float)
    if row.ndim != 1 or row.size == 0:
        raise ValueError(f"expected a nonempty 1-D row, got shape {row.shape}")
    if not np.all(np.isfinite(row)) or np.any(row < 0):
        raise ValueError("row entries must be finite and nonnegative")
    return int(np.argmin(row))


def build_interference_matrix(beamformers, mtd_channels, powers) -> np.ndarray:
    """Interference power of MTD k on RB n after RB n's beamformer.

    Parameters
    ----------
    beamformers:
        (N, M) complex — one combining vector per RB.
    mtd_channels:
        (N, K, M) complex — MTD-to-BS channel per RB and MTD.
    powers:
        (K,) — MTD transmit powers in watts.

    Returns
    -------
    (N, K) float: entry (n, k) = powers[k] * |beamformers[n] @ mtd_channels[n, k]|^2.
    """
    w = np.asarray(beamformers)
    h = np.asarray(mtd_channels)
    p = np.asarray(powers, dtype=float)
    if w.ndim != 2 or h.ndim != 3 or p.ndim != 1:
        raise ValueError(
            f"expected beamformers (N,M), channels (N,K,M), powers (K,); "
            f"got {w.shape}, {h.shape}, {p.shape}"
        )
    if h.shape[0] != w.shape[0] or h.shape[2] != w.shape[1] or h.shape[1] != p.size:
        raise ValueError(
            f"dimension mismatch: beamformers {w.shape}, channels {h.shape}, powers {p.shape}"
        )
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("powers must be finite and nonnegative")
    return p[None, :] * np.abs(np.einsum("nm,nkm->nk", w, h)) ** 2


def match_assignments(matrix) -> Assignment:
    """Resolve per-RB minimum-interference claims into an injective assignment.

    Round-based greedy: every unassigned RB proposes its least-interfering MTD
    among those not yet claimed; each contested MTD goes to the proposer that
    hears it at lower power (value ties -> lower RB index); losers re-propose
    against the shrinking unclaimed pool. Claims are never revoked, so at least
    one MTD settles per round. With K < N, the leftover RBs end unassigned.
    """
    m = as_interference_matrix(matrix)
    n_rb, n_mtd = m.shape
    work = m.copy()
    assigned: list[int | None] = [None] * n_rb
    active = list(range(n_rb))
    while active:
        proposals: dict[int, list[int]] = {}
        for rb in active:
            col = int(np.argmin(work[rb]))
            if np.isinf(work[rb, col]):
                continue  # every MTD already claimed; this RB stays empty
            proposals.setdefault(col, []).append(rb)
        if not proposals:
            break
        losers = []
        for col, rbs in proposals.items():
            winner = min(rbs, key=lambda r: (m[r, col], r))
            assigned[winner] = col
            work[:, col] = np.inf
            losers.extend(r for r in rbs if r != winner)
        active = sorted(losers)
    return Assignment(assigned)


def optimal_assignment_oracle(matrix) -> Assignment:
    """Minimum-total-interference injective assignment by full enumeration.

    Test oracle only: requires N <= 8, K <= 8, and K >= N. Ties are broken by
    lexicographic enumeration order (first minimum found is kept).
    """
    m = as_interference_matrix(matrix)
    n_rb, n_mtd = m.shape
    if n_rb > _ORACLE_MAX or n_mtd > _ORACLE_MAX:
        raise ValueError(
            f"oracle limited to {_ORACLE_MAX}x{_ORACLE_MAX}, got {n_rb}x{n_mtd}"
        )
    if n_mtd < n_rb:
        raise ValueError(f"need at least as many MTDs as RBs, got {n_rb}x{n_mtd}")
    best = None
    best_total = np.inf
    rows = range(n_rb)
    for perm in itertools.permutations(range(n_mtd), n_rb):
        total = sum(m[r, perm[r]] for r in rows)
        if total < best_total:
            best_total = total
            best = perm
    return Assignment(list(best))


def mtd_power_control(h_k, budget: LinkBudget, target_sinr, p_max):
    """MTD power that hits ``target_sinr`` at the MTA, capped at ``p_max``:

        min(p_max, target_sinr * (i0 + n0) / |h_k|^2)
    """
    gain = np.abs(np.asarray(h_k)) ** 2
    needed = np.asarray(target_sinr) * (np.asarray(budget.i0) + np.asarray(budget.n0)) / gain
    return np.minimum(np.asarray(p_max, dtype=float), needed)


def cu_power_control(h_c, n0, target_sinr, p_max):
    """CU power that hits the no-interference SINR target, capped at ``p_max``:

        min(p_max, target_sinr * n0 / ||h_c||^2)
    """
    h_c = np.asarray(h_c)
    norm_sq = np.einsum("...m,...m->...", h_c, np.conj(h_c)).real
    needed = np.asarray(target_sinr) * np.asarray(n0) / norm_sq
    return np.minimum(np.asarray(p_max, dtype=float), needed)
