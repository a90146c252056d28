"""Deterministic multi-start maximin search over products of simplices."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from . import kernels
from ._accel import USE_NUMBA, is_compiled
from .errors import OutOfRange


@dataclass(frozen=True)
class OptimizerConfig:
    max_starts: int = 200
    max_iters_per_start: int = 2000
    seed: int = 0
    convergence_tol: float = 1e-10
    smoothing_beta: float = 50.0

    def __post_init__(self):
        if self.max_starts < 1 or self.max_iters_per_start < 1:
            raise OutOfRange("max_starts and max_iters_per_start must be >= 1")
        if not 0 <= int(self.seed) <= kernels.MASK64:
            raise OutOfRange("seed must be an unsigned 64-bit integer")
        if self.convergence_tol <= 0 or self.smoothing_beta <= 0:
            raise OutOfRange("convergence_tol and smoothing_beta must be positive")


@dataclass(frozen=True)
class SimplexBlockSpec:
    blocks: tuple

    def __init__(self, blocks: Sequence[int]):
        blocks = tuple(int(b) for b in blocks)
        if not blocks or any(b < 1 for b in blocks):
            raise OutOfRange("blocks must be a nonempty list of positive sizes")
        object.__setattr__(self, "blocks", blocks)

    @property
    def size(self) -> int:
        return sum(self.blocks)

    @property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.blocks)[:-1]]).astype(np.int64)

    def split(self, x):
        """Views of ``x`` block by block."""
        return [x[o:o + b] for o, b in zip(self.offsets, self.blocks)]


class MaximinResult(NamedTuple):
    value: float
    x: np.ndarray
    starts_used: int
    stalled: bool
    start_index: int


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection of ``v`` onto the probability simplex."""
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.size == 0:
        raise OutOfRange("cannot project an empty vector")
    return kernels.project_simplex(np.ascontiguousarray(v))


def beta_schedule(cfg: OptimizerConfig, ncells: int) -> np.ndarray:
    """Soft-min temperatures followed by the hard-min polish (beta = 0)."""
    if ncells <= 1:
        return np.zeros(1)
    soft = cfg.smoothing_beta * kernels.SOFT_GROWTH ** np.arange(kernels.SOFT_PHASES)
    return np.concatenate([soft, [0.0]])


def _start_runner(objective, args, spec, cfg, betas):
    offsets = spec.offsets
    sizes = np.asarray(spec.blocks, dtype=np.int64)
    if USE_NUMBA and is_compiled(objective):
        fn = kernels.search_start
        seed = np.uint64(cfg.seed)
    else:
        # plain-python objective: run the interpreted search
        fn = getattr(kernels.search_start, "py_func", kernels.search_start)
        seed = int(cfg.seed)

    def run(start):
        return fn(objective, args, offsets, sizes, seed, start,
                  cfg.max_iters_per_start, cfg.convergence_tol, betas)

    return run


def maximize(objective: Callable, spec: SimplexBlockSpec, cfg: OptimizerConfig,
             args=None, stop_at: Optional[float] = None,
             workers: int = 1) -> MaximinResult:
    """Maximize ``min(objective(x, args))`` over the product of simplices.

    ``objective`` maps a feasible parameter vector to a 1-D array of cells; the
    maximized quantity is the smallest cell. Compiled objectives run inside the
    compiled search; anything else runs in the interpreted search.

    Starts are independent; the reduction keeps the strictly best value and
    breaks ties by the lowest start index, so the result does not depend on
    ``workers``. With ``stop_at`` the search ends at the first start (in index
    order) reaching that value.
    """
    args = np.zeros(0) if args is None else np.ascontiguousarray(args, dtype=np.float64)
    probe = np.concatenate([np.full(b, 1.0 / b) for b in spec.blocks])
    ncells = np.asarray(objective(probe, args)).shape[0]
    betas = beta_schedule(cfg, ncells)
    run = _start_runner(objective, args, spec, cfg, betas)

    best = None
    used = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        start = 0
        while start < cfg.max_starts:
            if pool is None or start == 0:
                batch = [run(start)]
            else:
                hi = min(start + workers, cfg.max_starts)
                batch = list(pool.map(run, range(start, hi)))
            done = False
            for out in batch:
                value, x, _, _, stalled = out
                if best is None or value > best.value:
                    best = MaximinResult(float(value), np.array(x), 0, bool(stalled), start)
                used = start + 1
                start += 1
                if stop_at is not None and value >= stop_at:
                    done = True
                    break
            if done:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return best._replace(starts_used=used)


def run_single_start(objective, spec, cfg, start, args=None):
    """Full output of one start, including the per-phase history."""
    args = np.zeros(0) if args is None else np.ascontiguousarray(args, dtype=np.float64)
    probe = np.concatenate([np.full(b, 1.0 / b) for b in spec.blocks])
    betas = beta_schedule(cfg, np.asarray(objective(probe, args)).shape[0])
    return _start_runner(objective, args, spec, cfg, betas)(start)
