"""Classical shared-randomness states: joint distributions of paired coins."""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NegativeEntry, NotNormalized, NotSquare, OutOfRange

NEG_TOL = 1e-12
SUM_TOL = 1e-9


def _readonly(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class JointDist:
    """Joint distribution ``p[x, y]`` of Alice's and Bob's outcomes."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 2:
            raise DimensionMismatch("joint distribution must be a 2-D table")
        if p.size == 0:
            raise NotNormalized("empty table")
        if not np.all(np.isfinite(p)):
            raise NotNormalized("non-finite probability")
        if p.min() < -NEG_TOL:
            raise NegativeEntry(f"entry {p.min():.3e} < 0")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise NotNormalized(f"entries sum to {p.sum():.12g}")
        object.__setattr__(self, "p", _readonly(p))

    @property
    def n_a(self) -> int:
        return self.p.shape[0]

    @property
    def n_b(self) -> int:
        return self.p.shape[1]

    @property
    def shape(self):
        return self.p.shape

    def flat(self) -> np.ndarray:
        """Alice-major column vector, e.g. ``(hh, ht, th, tt)`` for two coins."""
        return self.p.ravel().copy()

    def allclose(self, other, atol=1e-12) -> bool:
        other = other.p if isinstance(other, JointDist) else np.asarray(other)
        return self.p.shape == other.shape and float(np.max(np.abs(self.p - other))) <= atol

    def __repr__(self):
        return f"JointDist({self.n_a}x{self.n_b}, {self.p.tolist()!r})"


@dataclass(frozen=True, eq=False)
class MarginalDist:
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64).ravel()
        if p.size == 0:
            raise NotNormalized("empty distribution")
        if p.min() < -NEG_TOL:
            raise NegativeEntry(f"entry {p.min():.3e} < 0")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise NotNormalized(f"entries sum to {p.sum():.12g}")
        object.__setattr__(self, "p", _readonly(p))

    @property
    def n(self) -> int:
        return self.p.shape[0]


def make_joint(rows) -> JointDist:
    return JointDist(np.asarray(rows, dtype=np.float64))


def product(pa, pb) -> JointDist:
    """Free state ``P(X) Q(Y)``."""
    return JointDist(np.outer(np.asarray(pa, float), np.asarray(pb, float)))


def marginals(j: JointDist) -> Tuple[MarginalDist, MarginalDist]:
    ra = j.p.sum(axis=1)
    cb = j.p.sum(axis=0)
    return MarginalDist(ra / ra.sum()), MarginalDist(cb / cb.sum())


def shannon_entropy(m) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    p = m.p if isinstance(m, MarginalDist) else np.asarray(m, dtype=np.float64)
    return kernels._plogp_sum_np(p.ravel())


def binary_entropy(x: float) -> float:
    return shannon_entropy(np.array([x, 1.0 - x]))


def mutual_information(j: JointDist) -> float:
    """``H(X) + H(Y) - H(X, Y)`` in bits."""
    mi = float(kernels.mutual_information_array(np.ascontiguousarray(j.p)))
    if -1e-12 <= mi < 0.0:
        mi = 0.0
    return mi


def is_product(j: JointDist, tol: float = 1e-9) -> bool:
    if tol <= 0:
        raise OutOfRange("tol must be positive")
    pa = j.p.sum(axis=1)
    pb = j.p.sum(axis=0)
    return float(np.max(np.abs(j.p - np.outer(pa, pb)))) <= tol


def alpha_correlated(alpha: float) -> JointDist:
    """``alpha hh + (1 - alpha) tt``."""
    if not 0.0 <= alpha <= 1.0:
        raise OutOfRange(f"alpha={alpha} outside [0, 1]")
    return JointDist([[alpha, 0.0], [0.0, 1.0 - alpha]])


def alpha_anticorrelated(alpha: float) -> JointDist:
    """``alpha ht + (1 - alpha) th``."""
    if not 0.0 <= alpha <= 1.0:
        raise OutOfRange(f"alpha={alpha} outside [0, 1]")
    return JointDist([[0.0, alpha], [1.0 - alpha, 0.0]])


def vertex(x: int, y: int, n: int = 2) -> JointDist:
    p = np.zeros((n, n))
    p[x, y] = 1.0
    return JointDist(p)


def eq_not_alpha(n: int) -> JointDist:
    """Zero diagonal, every off-diagonal cell ``1 / (n (n - 1))``."""
    if int(n) != n or n < 2:
        raise OutOfRange(f"n={n} must be an integer >= 2")
    n = int(n)
    p = np.full((n, n), 1.0 / (n * (n - 1)))
    np.fill_diagonal(p, 0.0)
    return JointDist(p)


def is_not_alpha_correlated(j: JointDist, tol: float = 1e-9) -> bool:
    """Empty diagonal and strictly populated off-diagonal."""
    if j.n_a != j.n_b:
        raise NotSquare(f"{j.n_a}x{j.n_b} table is not square")
    if tol <= 0:
        raise OutOfRange("tol must be positive")
    d = np.diag(j.p)
    off = j.p[~np.eye(j.n_a, dtype=bool)]
    return bool(np.all(d <= tol) and np.all(off > tol))


def random_joint(rng: np.random.Generator, n_a: int, n_b: int) -> JointDist:
    """Uniform draw from the simplex of ``n_a x n_b`` tables."""
    e = rng.exponential(size=(n_a, n_b))
    return JointDist(e / e.sum())
