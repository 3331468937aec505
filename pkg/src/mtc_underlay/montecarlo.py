"""Monte Carlo experiments: drops, sweeps, outage and order-statistics checks.

One *drop* is a single channel/CU-position realization on a fixed deployment.
Every drop owns an RNG substream keyed by (seed, drop index) only, so results
are bit-reproducible for any worker count and any power mode shares the same
randomness — sweeps differ only where the physics differs.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import (
    Deployment,
    gen_channel_block,
    linear_gain,
    sample_cu_position,
    sample_deployment,
)
from .config import SimConfig
from .phy import (
    LinkBudget,
    mrc_weights,
    outage_indicator,
    sinr_cellular,
    sinr_mta,
    throughput,
)
from .scheduler import (
    Assignment,
    build_interference_matrix,
    cu_power_control,
    match_assignments,
    mtd_power_control,
)

# substream namespaces under the root seed
_NS_DEPLOYMENT = 0
_NS_DROP = 1
_NS_BASELINE = 2
_NS_ASYMPTOTIC = 3

#: drops per task when running on a process pool
_POOL_CHUNK = 256


def _generator(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=key)))


@dataclass
class DropResult:
    """Outcome of one drop. Vectors are indexed by resource block; an RB with
    no MTD carries selected_mtd -1, zero interference, and NaN MTA SINR."""

    sinr_db: np.ndarray
    selected_mtd: np.ndarray
    eff_interference_w: np.ndarray
    mta_sinr_db: np.ndarray
    throughput_bps: float
    outage: np.ndarray
    baseline_throughput_bps: float | None = None


@dataclass
class ExperimentSummary:
    """Aggregate table of one experiment: one row per sweep point."""

    experiment: str
    columns: list[str]
    rows: list[tuple]
    n_drops: int
    seed: int

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_format_cell(v) for v in row))
        return "\n".join(lines) + "\n"


@dataclass
class AsymptoticResult:
    """Empirical vs closed-form probability that the quietest of K MTDs falls
    below the harmless-interference threshold."""

    k_values: list[int]
    p_empirical: list[float]
    p_closed_form: list[float]
    phi: float  # single-MTD CDF value at the threshold


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.9g}"


def run_drop(
    config: SimConfig,
    deployment: Deployment,
    rng: np.random.Generator,
    baseline_rng: np.random.Generator | None = None,
) -> DropResult:
    """Simulate one drop: move the CU, fade every link, assign MTDs, score.

    Draw order (fixed for reproducibility): CU position, CU channels,
    MTD-to-BS channels, MTD-to-MTA channels. When ``baseline_rng`` is given, a
    uniformly random injective assignment is scored alongside for comparison.
    """
    n_rb, m, k = config.n_rb, config.antennas, deployment.n_mtds
    n0, i0 = config.noise_power_w, config.i0_w

    cu = sample_cu_position(config, deployment.mta, rng)
    h_c = gen_channel_block(cu.r, n_rb, m, rng, config.min_distance_m)[:, 0, :]
    h_kb = gen_channel_block(
        deployment.mtd_bs_distances(), n_rb, m, rng, config.min_distance_m
    )
    # MTA links: one draw per MTD; distances floored to the model's validity
    d_mta = np.maximum(deployment.mtd_mta_distances(), config.min_distance_m)
    h_mta = gen_channel_block(d_mta, 1, 1, rng, config.min_distance_m)[0, :, 0]

    if config.mtd_power_mode == "fixed":
        p_mtd = np.full(k, config.mtd_fixed_power_w)
    else:
        p_mtd = mtd_power_control(
            h_mta,
            LinkBudget(p_c=0.0, p_k=0.0, n0=n0, i0=i0),
            config.mtd_target_sinr,
            config.p_max_w,
        )

    # unit-norm MRC combiners make matrix entries physical (comparable) watts
    w = mrc_weights(h_c)
    w = w / np.linalg.norm(w, axis=-1, keepdims=True)
    matrix = build_interference_matrix(w, h_kb, p_mtd)
    assignment = match_assignments(matrix)

    p_c = cu_power_control(h_c, n0, config.cu_target_sinr, config.p_max_w)

    idx = np.array([-1 if a is None else a for a in assignment.rb_to_mtd], dtype=int)
    sinr = _cellular_sinr_per_rb(h_c, w, h_kb, p_c, p_mtd, idx, n0)
    eff_int = np.where(idx >= 0, matrix[np.arange(n_rb), np.maximum(idx, 0)], 0.0)

    mta_sinr_db = np.full(n_rb, np.nan)
    served = idx >= 0
    if np.any(served):
        mta_budget = LinkBudget(p_c=0.0, p_k=p_mtd[idx[served]], n0=n0, i0=i0)
        with np.errstate(divide="ignore"):  # zero-power MTD -> -inf dB
            mta_sinr_db[served] = 10.0 * np.log10(sinr_mta(h_mta[idx[served]], mta_budget))

    baseline_bps = None
    if baseline_rng is not None:
        b_idx = np.full(n_rb, -1, dtype=int)
        order = baseline_rng.permutation(k)
        take = min(n_rb, k)
        b_idx[:take] = order[:take]
        b_sinr = _cellular_sinr_per_rb(h_c, w, h_kb, p_c, p_mtd, b_idx, n0)
        baseline_bps = throughput(b_sinr, config.rb_bandwidth_hz)

    return DropResult(
        sinr_db=10.0 * np.log10(sinr),
        selected_mtd=idx,
        eff_interference_w=eff_int,
        mta_sinr_db=mta_sinr_db,
        throughput_bps=throughput(sinr, config.rb_bandwidth_hz),
        outage=outage_indicator(sinr, config.delta_th),
        baseline_throughput_bps=baseline_bps,
    )


def _cellular_sinr_per_rb(h_c, w, h_kb, p_c, p_mtd, idx, n0) -> np.ndarray:
    """Per-RB CU SINR for an RB->MTD index vector (-1 = no sharing MTD)."""
    n_rb = h_c.shape[0]
    served = idx >= 0
    safe_idx = np.maximum(idx, 0)
    h_int = h_kb[np.arange(n_rb), safe_idx]
    h_int = np.where(served[:, None], h_int, 0.0 + 0.0j)
    p_k = np.where(served, p_mtd[safe_idx], 0.0)
    budget = LinkBudget(p_c=p_c, p_k=p_k, n0=n0)
    return sinr_cellular(h_c, w, h_int, budget)


# ---------------------------------------------------------------------------
# drop execution (serial or process pool)
# ---------------------------------------------------------------------------


def _drop_chunk(args) -> list[DropResult]:
    config, deployment, start, stop, with_baseline = args
    out = []
    for i in range(start, stop):
        rng = _generator(config.seed, _NS_DROP, i)
        b_rng = _generator(config.seed, _NS_BASELINE, i) if with_baseline else None
        out.append(run_drop(config, deployment, rng, b_rng))
    return out


def _run_drops(
    config: SimConfig,
    deployment: Deployment,
    with_baseline: bool = False,
    workers: int = 1,
) -> list[DropResult]:
    n = config.n_drops
    if workers <= 1:
        return _drop_chunk((config, deployment, 0, n, with_baseline))
    bounds = list(range(0, n, _POOL_CHUNK)) + [n]
    tasks = [
        (config, deployment, lo, hi, with_baseline)
        for lo, hi in zip(bounds[:-1], bounds[1:])
    ]
    results: list[DropResult] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(_drop_chunk, tasks):
            results.extend(chunk)
    return results


def _ci_halfwidth(values: np.ndarray) -> float:
    """Normal-approximation 95% half-width for the mean of ``values``."""
    if values.size < 2:
        return 0.0
    return float(1.96 * np.std(values, ddof=1) / math.sqrt(values.size))


def _check_k_values(k_values) -> list[int]:
    ks = [int(k) for k in k_values]
    if not ks or any(k < 1 for k in ks) or sorted(set(ks)) != ks:
        raise ValueError(f"k_values must be ascending unique positive integers, got {k_values}")
    return ks


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def experiment_single_rb(
    config: SimConfig,
    k_values,
    power_values=None,
    workers: int = 1,
) -> ExperimentSummary:
    """Cellular SINR statistics on one shared RB, swept over K (and, in fixed
    power mode, over MTD transmit power in dBm).

    The deployment is sampled once at max(K) and sliced per point, so larger K
    means a strictly richer selection pool. In controlled power mode the
    power column is NaN (power is per-MTD, set by the control law).
    """
    ks = _check_k_values(k_values)
    base = replace(config, n_rb=1)
    if config.mtd_power_mode == "fixed":
        powers = list(power_values) if power_values is not None else [config.mtd_fixed_power_dbm]
    else:
        powers = [None]
    full = sample_deployment(
        replace(base, k=ks[-1]), _generator(config.seed, _NS_DEPLOYMENT)
    )
    rows = []
    for k in ks:
        deployment = full.subset(k)
        for p_dbm in powers:
            cfg = replace(base, k=k)
            if p_dbm is not None:
                cfg = replace(cfg, mtd_fixed_power_dbm=float(p_dbm))
            drops = _run_drops(cfg, deployment, workers=workers)
            sinr_db = np.array([d.sinr_db[0] for d in drops])
            out_rate = float(np.mean([d.outage[0] for d in drops]))
            assert 0.0 <= out_rate <= 1.0
            rows.append(
                (
                    k,
                    float("nan") if p_dbm is None else float(p_dbm),
                    float(np.mean(sinr_db)),
                    float(np.median(sinr_db)),
                    out_rate,
                    _ci_halfwidth(sinr_db),
                )
            )
    return ExperimentSummary(
        experiment="single-rb",
        columns=[
            "k",
            "mtd_power_dbm",
            "mean_sinr_db",
            "median_sinr_db",
            "outage_rate",
            "ci_halfwidth_db",
        ],
        rows=rows,
        n_drops=config.n_drops,
        seed=config.seed,
    )


def experiment_throughput(
    config: SimConfig,
    k_values,
    workers: int = 1,
) -> ExperimentSummary:
    """Mean CU throughput over ``n_rb`` shared RBs vs K, with the random-
    assignment baseline scored on the same drops."""
    ks = _check_k_values(k_values)
    full = sample_deployment(
        replace(config, k=ks[-1]), _generator(config.seed, _NS_DEPLOYMENT)
    )
    rows = []
    for k in ks:
        cfg = replace(config, k=k)
        drops = _run_drops(cfg, full.subset(k), with_baseline=True, workers=workers)
        mean_bps = float(np.mean([d.throughput_bps for d in drops]))
        base_bps = float(np.mean([d.baseline_throughput_bps for d in drops]))
        rows.append((k, mean_bps, config.target_rate_bps, base_bps))
    return ExperimentSummary(
        experiment="throughput",
        columns=["k", "mean_throughput_bps", "target_rate_bps", "baseline_throughput_bps"],
        rows=rows,
        n_drops=config.n_drops,
        seed=config.seed,
    )


def estimate_outage(config: SimConfig, k: int, workers: int = 1) -> float:
    """Monte Carlo CU outage probability on one shared RB with K MTDs."""
    cfg = replace(config, n_rb=1, k=int(k))
    deployment = sample_deployment(cfg, _generator(config.seed, _NS_DEPLOYMENT))
    drops = _run_drops(cfg, deployment, workers=workers)
    rate = float(np.mean([d.outage[0] for d in drops]))
    assert 0.0 <= rate <= 1.0
    return rate


def experiment_outage(config: SimConfig, k_values, workers: int = 1) -> ExperimentSummary:
    """Outage probability vs K (one row per K value)."""
    ks = _check_k_values(k_values)
    rows = [(k, config.delta_th_db, estimate_outage(config, k, workers)) for k in ks]
    return ExperimentSummary(
        experiment="outage",
        columns=["k", "delta_th_db", "outage_rate"],
        rows=rows,
        n_drops=config.n_drops,
        seed=config.seed,
    )


def verify_asymptotic(
    config: SimConfig,
    k_values,
    delta_i: float | None = None,
    n_samples: int | None = None,
    mtd_distance_m: float | None = None,
) -> AsymptoticResult:
    """Check the min-interference order statistic against its product form.

    With all K MTD channels i.i.d. (common BS distance), the probability that
    the quietest MTD projects below ``delta_i`` on the serving direction obeys
    P(X_min < delta_i) = 1 - (1 - Phi(delta_i))^K, Phi being the single-MTD
    CDF. Monte Carlo estimates (nested prefix minima, hence monotone in K) are
    returned next to the closed form evaluated at the pooled empirical Phi.
    """
    ks = _check_k_values(k_values)
    delta = config.delta_i_w if delta_i is None else float(delta_i)
    n = int(n_samples) if n_samples is not None else config.n_drops
    distance = (
        config.mta_cluster_radius_m if mtd_distance_m is None else float(mtd_distance_m)
    )
    m = config.antennas
    g = float(linear_gain(distance, config.min_distance_m))
    rng = _generator(config.seed, _NS_ASYMPTOTIC)

    # serving direction per sample; its own gain cancels in the projection ratio
    h_c = (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / math.sqrt(2)
    u = np.conj(h_c) / np.linalg.norm(h_c, axis=1, keepdims=True)

    running_min = np.full(n, np.inf)
    below = 0
    total = 0
    p_emp = []
    chunk_cap = max(1, 2_000_000 // n)
    done = 0
    for k in ks:
        while done < k:
            c = min(chunk_cap, k - done)
            h = math.sqrt(g) * (
                (rng.standard_normal((n, c, m)) + 1j * rng.standard_normal((n, c, m)))
                / math.sqrt(2)
            )
            x = np.abs(np.einsum("sm,scm->sc", u, h)) ** 2
            below += int(np.count_nonzero(x < delta))
            total += x.size
            running_min = np.minimum(running_min, x.min(axis=1))
            done += c
        p_emp.append(float(np.mean(running_min < delta)))

    phi = below / total
    p_closed = [1.0 - (1.0 - phi) ** k for k in ks]
    return AsymptoticResult(
        k_values=ks, p_empirical=p_emp, p_closed_form=p_closed, phi=phi
    )
