"""Local stochastic maps acting on coin states.

Matrices are column-stochastic: column ``l`` is the output distribution for
input symbol ``l``, so a local map acts on a probability column vector by
plain matrix multiplication.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .coinspace import JointDist, alpha_correlated
from .errors import (ColumnNotNormalized, DecompositionNotFound, DimensionMismatch,
                     NegativeEntry, NotNormalized, OutOfRange)
from .maximin import OptimizerConfig, SimplexBlockSpec, maximize

DECOMPOSE_TOL = 1e-7
DIAGONAL_PENALTY = 1e3


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    s: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=np.float64)
        if s.ndim != 2 or s.size == 0:
            raise DimensionMismatch("stochastic matrix must be a nonempty 2-D array")
        if s.min() < -1e-12:
            raise NegativeEntry(f"entry {s.min():.3e} < 0")
        colsum = s.sum(axis=0)
        bad = np.abs(colsum - 1.0) > 1e-9
        if bad.any():
            raise ColumnNotNormalized(f"column {int(np.argmax(bad))} sums to {colsum[bad][0]:.12g}")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def n_out(self) -> int:
        return self.s.shape[0]

    @property
    def n_in(self) -> int:
        return self.s.shape[1]

    def __matmul__(self, other: "StochasticMatrix") -> "StochasticMatrix":
        return StochasticMatrix(self.s @ other.s)

    def __repr__(self):
        return f"StochasticMatrix({self.n_out}x{self.n_in}, {self.s.tolist()!r})"


def make_stochastic(cols) -> StochasticMatrix:
    return StochasticMatrix(np.asarray(cols, dtype=np.float64))


def identity(n: int) -> StochasticMatrix:
    return StochasticMatrix(np.eye(n))


def swap() -> StochasticMatrix:
    return StochasticMatrix([[0.0, 1.0], [1.0, 0.0]])


def apply_local(s_a: StochasticMatrix, s_b: StochasticMatrix, j: JointDist) -> JointDist:
    """``p'(x', y') = sum_{x,y} S_A[x', x] S_B[y', y] p(x, y)``."""
    if s_a.n_in != j.n_a or s_b.n_in != j.n_b:
        raise DimensionMismatch(
            f"maps take {s_a.n_in}x{s_b.n_in} inputs, state is {j.n_a}x{j.n_b}")
    out = kernels.apply_local_array(np.ascontiguousarray(s_a.s),
                                    np.ascontiguousarray(s_b.s),
                                    np.ascontiguousarray(j.p))
    return JointDist(out)


def random_stochastic(n_out: int, n_in: int, seed=None) -> StochasticMatrix:
    """Columns drawn uniformly from the simplex (normalized exponentials).

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    if n_out < 1 or n_in < 1:
        raise OutOfRange("dimensions must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    e = rng.exponential(size=(n_out, n_in))
    return StochasticMatrix(e / e.sum(axis=0, keepdims=True))


@dataclass(frozen=True)
class Lemma1Decomposition:
    alpha: float
    s_a: StochasticMatrix
    s_b: StochasticMatrix
    residual: float

    def reconstruct(self) -> JointDist:
        return apply_local(self.s_a, self.s_b, alpha_correlated(self.alpha))


def _two_state_map(c0: float, c1: float) -> StochasticMatrix:
    c0 = min(max(c0, 0.0), 1.0)
    c1 = min(max(c1, 0.0), 1.0)
    return StochasticMatrix([[c0, c1], [1.0 - c0, 1.0 - c1]])


def lemma1_decompose(target: JointDist, cfg: Optional[OptimizerConfig] = None) -> Lemma1Decomposition:
    """Write a 2x2 coin state as ``(S_A x S_B) C_alpha(2)``.

    Multi-start search over ``alpha, a1, a2, b1, b2`` in ``[0, 1]`` minimizing
    the squared reconstruction error; stops at the first start whose
    max-abs residual is below ``DECOMPOSE_TOL``.
    """
    cfg = cfg or OptimizerConfig()
    if target.shape != (2, 2):
        raise DimensionMismatch(f"target must be 2x2, got {target.shape}")
    spec = SimplexBlockSpec([2] * 5)
    res = maximize(kernels.edge_fit_cells, spec, cfg, args=target.flat(),
                   stop_at=-(0.1 * DECOMPOSE_TOL) ** 2)
    alpha, a1, a2, b1, b2 = (float(res.x[2 * k]) for k in range(5))
    alpha = min(max(alpha, 0.0), 1.0)
    dec = Lemma1Decomposition(alpha, _two_state_map(a1, a2), _two_state_map(b1, b2), 0.0)
    residual = float(np.max(np.abs(dec.reconstruct().p - target.p)))
    if residual > DECOMPOSE_TOL:
        raise DecompositionNotFound(
            f"best residual {residual:.3e} after {res.starts_used} starts")
    return Lemma1Decomposition(alpha, dec.s_a, dec.s_b, residual)


def alpha_edge_spec(n: int) -> SimplexBlockSpec:
    return SimplexBlockSpec([2] + [n] * 4)


def unpack_alpha_edge(x, n: int):
    """(alpha, S_A, S_B) from an alpha-edge parameter vector."""
    x = np.asarray(x, dtype=np.float64)
    alpha = float(x[0])
    sa = np.column_stack([x[2:2 + n], x[2 + n:2 + 2 * n]])
    sb = np.column_stack([x[2 + 2 * n:2 + 3 * n], x[2 + 3 * n:2 + 4 * n]])
    return alpha, StochasticMatrix(sa / sa.sum(axis=0)), StochasticMatrix(sb / sb.sum(axis=0))


def verify_lemma2(n: int, cfg: Optional[OptimizerConfig] = None,
                  penalty: float = DIAGONAL_PENALTY) -> float:
    """Best penalized payoff reachable from the alpha-edge.

    Maximizes ``min_{i != j} q(ij) - penalty * sum_i q(ii)`` over ``alpha`` and
    two 2 -> n maps. A not-alpha-correlated target would need the payoff term
    positive with the penalty term zero; values staying at or below the
    classical optimum corroborate that it cannot be reached.
    """
    if int(n) != n or n < 3:
        raise OutOfRange(f"n={n} must be an integer >= 3")
    if penalty < 0:
        raise OutOfRange("penalty must be nonnegative")
    cfg = cfg or OptimizerConfig()
    res = maximize(kernels.edge_penalized_cells, alpha_edge_spec(int(n)), cfg,
                   args=np.array([float(n), float(penalty)]))
    return res.value
