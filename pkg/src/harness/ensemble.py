"""
Monte-Carlo ensembles.

Replicates are simulated in fixed chunks of CHUNK_SIZE ids, independent of the
thread count, and reduced in replicate-id order with a pairwise tree sum, so
the summary is a pure function of the config.
"""
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

import src
from src.harness.config import ExperimentConfig
from src.harness.engine import simulate_chunk
from src.utils.errors import ConfigurationError, EnsembleError
from src.utils.log import get_logger

logger = get_logger("Ensemble")

CHUNK_SIZE = 32
THREADS_ENV = "TTSA_THREADS"


@dataclass
class CheckpointStat:
    k: int
    mean_V: float
    stderr_V: float
    n_alive: int
    mean_xhat_sq: float = float("nan")
    mean_yhat_sq: float = float("nan")


@dataclass
class EnsembleSummary:
    checkpoints: List[CheckpointStat]
    config: Optional[ExperimentConfig] = None
    wall_time_s: float = 0.0
    version: str = field(default=src.__version__)

    @property
    def ks(self) -> np.ndarray:
        return np.array([cp.k for cp in self.checkpoints], dtype=np.int64)

    @property
    def mean_v(self) -> np.ndarray:
        return np.array([cp.mean_V for cp in self.checkpoints], dtype=np.float64)

    @property
    def diverged(self) -> int:
        if not self.checkpoints or self.config is None:
            return 0
        return self.config.replicates - self.checkpoints[-1].n_alive

    @classmethod
    def from_series(cls, ks: Sequence[int], mean_v: Sequence[float], n_alive: int = 1) -> "EnsembleSummary":
        """Summary over a bare (k, mean_V) series, e.g. for fitting synthetic laws."""
        return cls(checkpoints=[
            CheckpointStat(k=int(k), mean_V=float(v), stderr_V=0.0, n_alive=n_alive) for k, v in zip(ks, mean_v)
        ])


def resolve_threads(threads: Optional[int] = None) -> int:
    """Explicit value, else $TTSA_THREADS, else the number of cores."""
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError as exc:
                raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {env!r}") from exc
        else:
            threads = os.cpu_count() or 1
    if threads < 1:
        raise ConfigurationError(f"thread count must be at least 1, got {threads}")
    return threads


def tree_sum(values: np.ndarray) -> float:
    """Pairwise summation with a fixed split, independent of the platform's reduction."""
    n = values.size
    if n == 0:
        return 0.0
    if n == 1:
        return float(values[0])
    mid = n // 2
    return tree_sum(values[:mid]) + tree_sum(values[mid:])


def reduce_checkpoint(values: np.ndarray):
    """(mean, stderr, n) over the finite entries, taken in the given order."""
    alive = values[np.isfinite(values)]
    n = alive.size
    if n == 0:
        return float("nan"), float("nan"), 0
    mean = tree_sum(alive) / n
    if n == 1:
        return mean, 0.0, 1
    var = tree_sum((alive - mean) ** 2) / (n - 1)
    return mean, float(np.sqrt(var / n)), n


def run_ensemble(config: ExperimentConfig, threads: Optional[int] = None) -> EnsembleSummary:
    threads = resolve_threads(threads)
    problem = config.build_problem()
    ids = np.arange(config.replicates, dtype=np.int64)
    chunks = [ids[i:i + CHUNK_SIZE] for i in range(0, ids.size, CHUNK_SIZE)]
    logger.info(
        f"running {config.replicates} replicates x {config.iterations} iterations "
        f"on {problem.name} ({len(chunks)} chunks, {threads} threads)"
    )

    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        records = list(pool.map(lambda chunk: simulate_chunk(config, problem, chunk), chunks))
    wall = time.perf_counter() - start

    v = np.concatenate([r.v for r in records], axis=1)
    xs = np.concatenate([r.x_hat_sq for r in records], axis=1)
    ys = np.concatenate([r.y_hat_sq for r in records], axis=1)
    diverged_at = np.concatenate([r.diverged_at for r in records])

    n_diverged = int(np.sum(diverged_at >= 0))
    if n_diverged == config.replicates:
        raise EnsembleError(f"all {config.replicates} replicates diverged")
    if n_diverged:
        first = int(diverged_at[diverged_at >= 0].min())
        logger.warning(f"{n_diverged} replicates diverged (first at iteration {first}); excluded from moments")

    stats = []
    single_alive = False
    for i, k in enumerate(config.checkpoints):
        mean_v, stderr_v, n_alive = reduce_checkpoint(v[i])
        single_alive |= n_alive == 1
        mean_xs, _, _ = reduce_checkpoint(xs[i])
        mean_ys, _, _ = reduce_checkpoint(ys[i])
        stats.append(CheckpointStat(
            k=int(k), mean_V=mean_v, stderr_V=stderr_v, n_alive=n_alive,
            mean_xhat_sq=mean_xs, mean_yhat_sq=mean_ys,
        ))
    if single_alive:
        logger.warning("only one replicate alive at some checkpoints; stderr reported as 0")

    logger.info(f"ensemble finished in {wall:.2f}s, final mean V {stats[-1].mean_V:.6g}")
    return EnsembleSummary(checkpoints=stats, config=config, wall_time_s=wall)
