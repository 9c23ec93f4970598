"""
Vectorised simulation of a batch of replicates.

Each row of the (R, d) state arrays is one replicate driven by its own
RngStream, so a row's arithmetic and draws do not depend on which other
replicates share the batch. Standard normals are drawn per replicate in
blocks of NOISE_BLOCK iterations.
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.core.lyapunov import coupling_constant, lyapunov_from_norms
from src.core.iteration import DIVERGENCE_THRESHOLD
from src.noise.rng import RngStream
from src.noise.sampler import scale_standard, state_variances, time_variances
from src.noise.spec import NoiseKind
from src.utils.log import get_logger

logger = get_logger("Engine")

NOISE_BLOCK = 4096
_THRESHOLD_SQ = DIVERGENCE_THRESHOLD ** 2


@dataclass
class ChunkRecord:
    """Checkpoint values of a batch; arrays are (n_checkpoints, R), NaN once diverged."""
    replicate_ids: np.ndarray
    checkpoints: np.ndarray
    v: np.ndarray
    x_hat_sq: np.ndarray
    y_hat_sq: np.ndarray
    diverged_at: np.ndarray  # iteration of divergence, -1 when alive


@dataclass
class TrajectoryRecord:
    replicate_id: int
    checkpoints: np.ndarray
    v: np.ndarray
    x_hat_sq: np.ndarray
    y_hat_sq: np.ndarray
    diverged_at: Optional[int] = None

    @property
    def diverged(self) -> bool:
        return self.diverged_at is not None


def _squared_norms(v: np.ndarray) -> np.ndarray:
    return np.sum(v * v, axis=-1)


def simulate_chunk(config, problem, replicate_ids: Sequence[int]) -> ChunkRecord:
    """Run the coupled updates for the given replicates of ``config``."""
    ids = np.asarray(replicate_ids, dtype=np.int64)
    n_rep = ids.size
    d1, d2 = problem.d1, problem.d2
    sched, noise = config.schedule, config.noise
    c = coupling_constant(problem.consts)
    ks = np.asarray(config.checkpoints, dtype=np.int64)

    streams = [RngStream(config.master_seed, int(r)) for r in ids]
    draw_noise = noise.kind is not NoiseKind.NONE
    draw_psi = draw_noise and problem.slow_noise

    x0, y0 = config.init
    x = np.full((n_rep, d1), x0)
    y = np.full((n_rep, d2), y0)
    alive = np.ones(n_rep, dtype=bool)
    diverged_at = np.full(n_rep, -1, dtype=np.int64)

    shape = (ks.size, n_rep)
    v_rec, xs_rec, ys_rec = np.full(shape, np.nan), np.full(shape, np.nan), np.full(shape, np.nan)
    next_cp = 0

    zero_xi = np.zeros((n_rep, d1))
    zero_psi = np.zeros((n_rep, d2))

    k = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while True:
            block = min(NOISE_BLOCK, config.iterations - k)
            if draw_noise and block > 0:
                z_xi = np.stack([s.standard_xi((block, d1)) for s in streams], axis=1)
                z_psi = np.stack([s.standard_psi((block, d2)) for s in streams], axis=1) if draw_psi else None
            alpha_k, beta_k = sched.arrays(k, max(block, 1))
            for j in range(max(block, 1)):
                x_hat = x - problem.lambda_map(y)
                y_hat = y - problem.y_star
                xs, ys = _squared_norms(x_hat), _squared_norms(y_hat)

                if next_cp < ks.size and ks[next_cp] == k:
                    v = lyapunov_from_norms(xs, ys, sched.ratio(k), c)
                    v_rec[next_cp] = np.where(alive, v, np.nan)
                    xs_rec[next_cp] = np.where(alive, xs, np.nan)
                    ys_rec[next_cp] = np.where(alive, ys, np.nan)
                    next_cp += 1
                if k >= config.iterations:
                    break

                if noise.kind in (NoiseKind.STATE, NoiseKind.QUADRATIC):
                    s_xi, s_psi = state_variances(noise, xs, ys)
                elif noise.kind is NoiseKind.TIME:
                    s_xi, s_psi = time_variances(noise, k, sched.k0)
                    s_xi, s_psi = np.full(n_rep, s_xi), np.full(n_rep, s_psi)
                xi = scale_standard(z_xi[j], s_xi, d1) if draw_noise else zero_xi
                psi = scale_standard(z_psi[j], s_psi, d2) if draw_psi else zero_psi

                x_next = x - alpha_k[j] * (problem.f(x, y) + xi)
                y = y - beta_k[j] * (problem.g(x, y) + psi)
                x = x_next
                k += 1

                bad = alive & ~((_squared_norms(x) <= _THRESHOLD_SQ) & (_squared_norms(y) <= _THRESHOLD_SQ))
                if bad.any():
                    diverged_at[bad] = k
                    alive &= ~bad
                    x[bad] = 0.0
                    y[bad] = 0.0
                    logger.debug(f"replicates {ids[bad].tolist()} diverged at iteration {k}")
            if k >= config.iterations and next_cp >= ks.size:
                break

    return ChunkRecord(
        replicate_ids=ids, checkpoints=ks, v=v_rec, x_hat_sq=xs_rec, y_hat_sq=ys_rec, diverged_at=diverged_at,
    )


def run_trajectory(config, replicate_id: int, problem=None) -> TrajectoryRecord:
    """Simulate one replicate; a diverged run keeps the checkpoints reached before divergence."""
    problem = problem or config.build_problem()
    chunk = simulate_chunk(config, problem, [replicate_id])
    at = int(chunk.diverged_at[0])
    return TrajectoryRecord(
        replicate_id=int(replicate_id),
        checkpoints=chunk.checkpoints,
        v=chunk.v[:, 0],
        x_hat_sq=chunk.x_hat_sq[:, 0],
        y_hat_sq=chunk.y_hat_sq[:, 0],
        diverged_at=None if at < 0 else at,
    )
