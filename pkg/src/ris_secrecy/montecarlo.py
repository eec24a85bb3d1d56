"""Monte-Carlo estimation of the secrecy metrics by direct channel sampling.

This module is the independent ground truth for the analytic formulas. All
randomness is blocked: the trial index space is cut into fixed 8192-trial
blocks and block i draws from a generator seeded by (seed, i). Estimates are
therefore bit-identical for a given (trials, seed) regardless of the batch
size used for dispatch or the number of worker threads.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import channels
from .channels import FadingKind
from .secrecy import Link, Model, SystemParams, snr_scale

THREADS_ENV_VAR = "RIS_SECRECY_THREADS"

_BLOCK_TRIALS = 8192  # randomness granularity; independent of McConfig.batch


@dataclass(frozen=True)
class McConfig:
    """Trial budget and reproducibility knobs for a Monte-Carlo run.

    ``batch`` only groups blocks per executor task; it never changes the
    drawn samples or the estimates.
    """

    trials: int = 100_000
    seed: int = 42
    batch: int = _BLOCK_TRIALS

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class McEstimate:
    """Point estimate with its standard error and the trial count behind it."""

    value: float
    std_error: float
    trials: int

    def __post_init__(self):
        if self.std_error < 0.0:
            raise ValueError("std_error must be >= 0")


def default_threads() -> int:
    """Worker-thread default, overridable via the RIS_SECRECY_THREADS variable."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return 1
    n = int(raw)
    if n < 1:
        raise ValueError(f"{THREADS_ENV_VAR} must be >= 1")
    return n


def _block_rng(seed: int, block_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block_index,)))


def sample_gain_sums(params: SystemParams, rng: np.random.Generator, n: int, *,
                     shared_source_channel: bool = True,
                     shared_receiver_channel: bool = False):
    """Draw n trials of the summed per-element gains for both links.

    Returns (sum_d, sum_e) arrays: sums over the N cells of the destination
    and eavesdropper gains. For the relay model the source-leg draws are
    reused on both links by default (both receivers see the same
    source-to-RIS reflection); ``shared_receiver_channel`` additionally reuses
    the receiver-leg draws across links, a coupling useful only for
    variance-reduced difference estimates.
    """
    shape = (n, params.n_cells)
    if params.model is Model.V2V_RIS_AP:
        gd = channels.sample(FadingKind.DOUBLE_RAYLEIGH, rng, shape)
        ge = gd if shared_receiver_channel else channels.sample(FadingKind.DOUBLE_RAYLEIGH, rng, shape)
        return gd.sum(axis=1), ge.sum(axis=1)
    gs = channels.sample(FadingKind.RAYLEIGH, rng, shape)
    gd = channels.sample(FadingKind.DOUBLE_RAYLEIGH, rng, shape)
    ge = gd if shared_receiver_channel else channels.sample(FadingKind.DOUBLE_RAYLEIGH, rng, shape)
    gs_e = gs if shared_source_channel else channels.sample(FadingKind.RAYLEIGH, rng, shape)
    return (gs * gd).sum(axis=1), (gs_e * ge).sum(axis=1)


def sample_snr_pairs(params: SystemParams, rng: np.random.Generator, n: int, *,
                     shared_source_channel: bool = True,
                     shared_receiver_channel: bool = False):
    """Draw n trials of the instantaneous SNR pair (gamma_d, gamma_e)."""
    sum_d, sum_e = sample_gain_sums(
        params, rng, n,
        shared_source_channel=shared_source_channel,
        shared_receiver_channel=shared_receiver_channel,
    )
    return snr_scale(params, Link.DESTINATION) * sum_d, snr_scale(params, Link.EAVESDROPPER) * sum_e


def sample_snr_pair(params: SystemParams, rng: np.random.Generator, *,
                    shared_source_channel: bool = True,
                    shared_receiver_channel: bool = False):
    """Single-trial form of sample_snr_pairs."""
    gd, ge = sample_snr_pairs(
        params, rng, 1,
        shared_source_channel=shared_source_channel,
        shared_receiver_channel=shared_receiver_channel,
    )
    return float(gd[0]), float(ge[0])


def _blocks(trials: int):
    n_blocks = (trials + _BLOCK_TRIALS - 1) // _BLOCK_TRIALS
    return [(i, min(_BLOCK_TRIALS, trials - i * _BLOCK_TRIALS)) for i in range(n_blocks)]


def _map_blocks(block_fn, cfg: McConfig, threads):
    """Run block_fn(block_index, block_size) over all blocks, returning results
    in block order regardless of scheduling. ``cfg.batch`` only sets how many
    blocks one executor task covers."""
    if threads is None:
        threads = default_threads()
    blocks = _blocks(cfg.trials)
    if threads <= 1 or len(blocks) == 1:
        return [block_fn(i, n) for i, n in blocks]
    per_task = max(1, cfg.batch // _BLOCK_TRIALS)
    chunks = [blocks[i:i + per_task] for i in range(0, len(blocks), per_task)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        nested = pool.map(lambda chunk: [block_fn(i, n) for i, n in chunk], chunks)
        return [res for group in nested for res in group]


def mc_asc(params: SystemParams, cfg: McConfig, *,
           shared_source_channel: bool = True,
           shared_receiver_channel: bool = False,
           threads: int | None = None):
    """Estimate the average secrecy capacity by simulation.

    Returns (difference_estimate, positive_part_estimate): the first averages
    log2(1+gamma_d) - log2(1+gamma_e) (can be negative, matches the analytic
    difference form), the second averages max(.., 0). Both are computed from
    the same trials.
    """

    def work(i, n):
        rng = _block_rng(cfg.seed, i)
        gd, ge = sample_snr_pairs(
            params, rng, n,
            shared_source_channel=shared_source_channel,
            shared_receiver_channel=shared_receiver_channel,
        )
        cs = np.log2(1.0 + gd) - np.log2(1.0 + ge)
        pos = np.maximum(cs, 0.0)
        return (cs.sum(), (cs * cs).sum(), pos.sum(), (pos * pos).sum())

    parts = _map_blocks(work, cfg, threads)
    sd = sd2 = sp = sp2 = 0.0
    for a, b, c, d in parts:
        sd += a
        sd2 += b
        sp += c
        sp2 += d
    return (_moment_estimate(sd, sd2, cfg.trials), _moment_estimate(sp, sp2, cfg.trials))


def _moment_estimate(total: float, total_sq: float, n: int) -> McEstimate:
    mean = total / n
    if n > 1:
        var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
        se = math.sqrt(var / n)
    else:
        se = 0.0
    return McEstimate(value=mean, std_error=se, trials=n)


def mc_sop(params: SystemParams, c_th: float, cfg: McConfig, *,
           shared_source_channel: bool = True,
           shared_receiver_channel: bool = False,
           threads: int | None = None) -> McEstimate:
    """Estimate the secrecy outage probability Pr[max(Cs, 0) < c_th]."""
    if not c_th > 0.0:
        raise ValueError("c_th must be > 0")

    def work(i, n):
        rng = _block_rng(cfg.seed, i)
        gd, ge = sample_snr_pairs(
            params, rng, n,
            shared_source_channel=shared_source_channel,
            shared_receiver_channel=shared_receiver_channel,
        )
        cs = np.maximum(np.log2(1.0 + gd) - np.log2(1.0 + ge), 0.0)
        return int((cs < c_th).sum())

    outages = sum(_map_blocks(work, cfg, threads))
    p = outages / cfg.trials
    se = math.sqrt(p * (1.0 - p) / cfg.trials)
    return McEstimate(value=p, std_error=se, trials=cfg.trials)


def mc_gain_sum_stats(params: SystemParams, cfg: McConfig, *,
                      link: Link = Link.DESTINATION,
                      shared_source_channel: bool = True,
                      threads: int | None = None):
    """Mean and variance of the summed per-element gains on one link.

    Returns (mean_estimate, variance_estimate); the variance standard error
    uses the fourth central moment, so the estimates can adjudicate between
    candidate closed-form constants.
    """

    def work(i, n):
        rng = _block_rng(cfg.seed, i)
        sum_d, sum_e = sample_gain_sums(params, rng, n, shared_source_channel=shared_source_channel)
        x = sum_d if link is Link.DESTINATION else sum_e
        return (x.sum(), (x ** 2).sum(), (x ** 3).sum(), (x ** 4).sum())

    parts = _map_blocks(work, cfg, threads)
    s1 = s2 = s3 = s4 = 0.0
    for a, b, c, d in parts:
        s1 += a
        s2 += b
        s3 += c
        s4 += d
    n = cfg.trials
    mean = s1 / n
    m2 = s2 / n - mean ** 2
    var = m2 * n / (n - 1) if n > 1 else 0.0
    # central fourth moment from raw sums
    m4 = (s4 - 4.0 * mean * s3 + 6.0 * mean ** 2 * s2 - 3.0 * n * mean ** 4) / n
    var_of_var = max(0.0, (m4 - (n - 3) / (n - 1) * m2 ** 2) / n) if n > 3 else 0.0
    mean_est = _moment_estimate(s1, s2, n)
    var_est = McEstimate(value=var, std_error=math.sqrt(var_of_var), trials=n)
    return mean_est, var_est
