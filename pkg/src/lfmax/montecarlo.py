"""Seeded, parallelizable Monte Carlo experiments on ensemble statistics.

Trials are chunked; chunk c of a run with root seed r is seeded by
SeedSequence((r, c)), so results are bit-identical for any worker count
and nested in the trial count (a longer run extends a shorter one).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .ensembles import (
    Kind,
    im_log_at_zero_batch,
    log_abs_at_zero_batch,
    sample_angles_batch,
    sample_verblunsky,
    szego_at_one,
)
from .errors import DomainError, ResourceError
from .mathfn import prime_sieve

CHUNK = 1024
DIRECT_SIM_CAP = 10_000_000
TWO_PI = 2.0 * math.pi


class Statistic(enum.Enum):
    MAX_OVER_THETA = "max_over_theta"
    AT_POINT_ZERO = "at_point_zero"
    IM_LOG_AT_ZERO = "im_log_at_zero"
    CHARPOLY_AT_ONE = "charpoly_at_one"


@dataclass(frozen=True)
class ExperimentConfig:
    kind: Kind
    N: int
    trials: int
    root_seed: int
    statistic: Statistic
    log_k: Optional[float] = None  # threshold, natural-log scale
    lam: Optional[float] = None  # alternative threshold: log K = N^lam

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if self.N < 1:
            raise DomainError("N must be >= 1")
        if (self.log_k is None) == (self.lam is None):
            raise DomainError("give exactly one of log_k or lam")
        if self.lam is not None and not 0.0 < self.lam < 1.0:
            raise DomainError(f"lambda must lie in (0, 1), got {self.lam}")
        if self.statistic is Statistic.CHARPOLY_AT_ONE and self.kind is Kind.UNITARY:
            raise DomainError("charpoly_at_one applies to Sp/SO only")

    @property
    def threshold_log_k(self) -> float:
        if self.log_k is not None:
            return self.log_k
        return float(self.N) ** self.lam


@dataclass(frozen=True)
class TailEstimate:
    threshold_log_k: float
    trials: int
    hits: int
    p_hat: float
    log_p_hat: float
    std_err_log: float
    predicted_log_p: float

    @property
    def std_err_usable(self) -> bool:
        return self.hits > 0


def predicted_log_tail(kind: Kind, statistic: Statistic, N: int, log_k: float) -> float:
    """Large-deviation prediction for log P{statistic >= threshold}.

    Unitary |Lambda| and Im log Lambda share -tau^2/(log N - log tau)
    with tau the log-scale threshold; the Sp/SO rate carries the extra
    factor of 2 in the denominator.
    """
    tau = log_k
    if tau <= 0.0:
        return 0.0
    log_n = math.log(N)
    if kind is Kind.UNITARY:
        denom = log_n - math.log(tau)
    else:
        denom = 2.0 * (log_n - math.log(tau))
    if denom <= 0:
        return -math.inf
    return -tau * tau / denom


def _statistic_batch(cfg_kind: Kind, statistic: Statistic, stored: np.ndarray) -> np.ndarray:
    """Per-trial statistic values, log scale for |Lambda|-type statistics."""
    if statistic is Statistic.AT_POINT_ZERO:
        return log_abs_at_zero_batch(stored, cfg_kind)
    if statistic is Statistic.CHARPOLY_AT_ONE:
        return log_abs_at_zero_batch(stored, cfg_kind)
    if statistic is Statistic.IM_LOG_AT_ZERO:
        if cfg_kind is Kind.UNITARY:
            full = stored
        else:
            full = np.concatenate([stored, (-stored) % TWO_PI], axis=-1)
        return im_log_at_zero_batch(full)
    if statistic is Statistic.MAX_OVER_THETA:
        return _max_over_theta_batch(cfg_kind, stored)
    raise DomainError(f"unknown statistic {statistic!r}")


def _max_over_theta_batch(kind: Kind, stored: np.ndarray) -> np.ndarray:
    if kind is Kind.UNITARY:
        full = stored
    else:
        full = np.concatenate([stored, (-stored) % TWO_PI], axis=-1)
    return kernels.max_logabs_charpoly_batch(full, 8, 1e-10)


def _chunk_rng(root_seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((root_seed, chunk_index)))


def _tail_chunk(args) -> tuple[int, float]:
    kind, N, statistic, root_seed, chunk_index, take, log_k = args
    rng = _chunk_rng(root_seed, chunk_index)
    if kind is Kind.UNITARY and statistic in (
        Statistic.AT_POINT_ZERO,
        Statistic.MAX_OVER_THETA,
    ):
        # the Szego recurrence on Verblunsky coefficients gives
        # log |Lambda| without eigendecomposition
        alphas = sample_verblunsky(N, CHUNK, rng)[:take]
        if statistic is Statistic.AT_POINT_ZERO:
            with np.errstate(divide="ignore"):
                vals = np.log(np.abs(szego_at_one(alphas)))
        else:
            vals = kernels.max_logabs_szego_batch(alphas, 8, 1e-10)
    else:
        stored = sample_angles_batch(kind, N, CHUNK, rng)[:take]
        vals = _statistic_batch(kind, statistic, stored)
    hits = int(np.count_nonzero(vals >= log_k))
    return hits, float(np.max(vals))


def _run_chunks(cfg: ExperimentConfig, trials: int, workers: int):
    n_chunks = (trials + CHUNK - 1) // CHUNK
    tasks = [
        (
            cfg.kind,
            cfg.N,
            cfg.statistic,
            cfg.root_seed,
            c,
            min(CHUNK, trials - c * CHUNK),
            cfg.threshold_log_k,
        )
        for c in range(n_chunks)
    ]
    if workers <= 1:
        return [_tail_chunk(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_tail_chunk, tasks, chunksize=1))


def estimate_tail(cfg: ExperimentConfig, workers: int = 1) -> TailEstimate:
    """Monte Carlo tail probability with its large-deviation prediction."""
    results = _run_chunks(cfg, cfg.trials, workers)
    hits = sum(h for h, _ in results)
    p_hat = hits / cfg.trials
    if hits > 0:
        log_p_hat = math.log(p_hat)
        std_err_log = math.sqrt((1.0 - p_hat) / hits)
    else:
        log_p_hat = -math.inf
        std_err_log = math.nan  # unusable: raise trials or lower the threshold
    return TailEstimate(
        threshold_log_k=cfg.threshold_log_k,
        trials=cfg.trials,
        hits=hits,
        p_hat=p_hat,
        log_p_hat=log_p_hat,
        std_err_log=std_err_log,
        predicted_log_p=predicted_log_tail(
            cfg.kind, cfg.statistic, cfg.N, cfg.threshold_log_k
        ),
    )


def max_over_ensemble(
    kind: Kind,
    N: int,
    M: int,
    statistic: Statistic,
    root_seed: int,
    workers: int = 1,
) -> float:
    """log-scale maximum of the statistic over M independent spectra."""
    if M < 1:
        raise DomainError("M must be >= 1")
    if M > DIRECT_SIM_CAP:
        raise ResourceError(
            f"M={M} exceeds the direct-simulation cap {DIRECT_SIM_CAP}; "
            "use estimate_tail and invert the rate function instead"
        )
    cfg = ExperimentConfig(
        kind=kind, N=N, trials=M, root_seed=root_seed, statistic=statistic, log_k=0.0
    )
    results = _run_chunks(cfg, M, workers)
    return max(v for _, v in results)


@dataclass(frozen=True)
class MomentSummary:
    trials: int
    mean: float
    variance: float
    excess_kurtosis: float


def _prime_phase_chunk(args) -> tuple[int, float, float, float, float]:
    weights, root_seed, chunk_index, take = args
    rng = _chunk_rng(root_seed, chunk_index)
    phases = rng.random((CHUNK, weights.size)) * TWO_PI
    y = np.cos(phases[:take]) @ weights
    return (
        take,
        float(np.sum(y)),
        float(np.sum(y**2)),
        float(np.sum(y**3)),
        float(np.sum(y**4)),
    )


def prime_phase_sample(
    X: int, trials: int, root_seed: int, workers: int = 1
) -> MomentSummary:
    """Moments of Y = Re sum_{p<=X} z_p / sqrt(p) with i.i.d. uniform phases.

    The Gaussian model for the prime part: the limit law has mean 0 and
    variance (1/2) sum_{p<=X} 1/p.
    """
    if X < 2:
        raise DomainError(f"X must be >= 2, got {X}")
    if trials < 2:
        raise DomainError("trials must be >= 2")
    weights = 1.0 / np.sqrt(prime_sieve(X).astype(np.float64))
    n_chunks = (trials + CHUNK - 1) // CHUNK
    tasks = [
        (weights, root_seed, c, min(CHUNK, trials - c * CHUNK)) for c in range(n_chunks)
    ]
    if workers <= 1:
        parts = [_prime_phase_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_prime_phase_chunk, tasks, chunksize=1))
    n = sum(p[0] for p in parts)
    s1 = math.fsum(p[1] for p in parts)
    s2 = math.fsum(p[2] for p in parts)
    s3 = math.fsum(p[3] for p in parts)
    s4 = math.fsum(p[4] for p in parts)
    mean = s1 / n
    m2 = s2 / n - mean**2
    m3 = s3 / n - 3 * mean * s2 / n + 2 * mean**3
    m4 = s4 / n - 4 * mean * s3 / n + 6 * mean**2 * s2 / n - 3 * mean**4
    return MomentSummary(
        trials=n,
        mean=mean,
        variance=m2 * n / (n - 1),
        excess_kurtosis=m4 / (m2 * m2) - 3.0,
    )


def gaussian_sampling_max(variance: float, log_sample_count: float) -> float:
    """Extreme-value location sqrt(2 V L) of the naive Gaussian model.

    Deterministic formula only; the variance constant and the sampling
    exponent are the caller's to choose.
    """
    if variance <= 0 or log_sample_count <= 0:
        raise DomainError("variance and log_sample_count must be positive")
    return math.sqrt(2.0 * variance * log_sample_count)
