"""Two-qubit coin states, qubit POVMs and their joint statistics.

Tensor index order is Alice-major: basis ``|00>, |01>, |10>, |11>``.
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from . import kernels
from .coinspace import JointDist
from .errors import (DimensionMismatch, IncompletePovm, NegativeEntry, NonrealProbability,
                     NotHermitian, NotNormalized, NotPositive, OutOfRange)
from .freeops import StochasticMatrix

HERM_TOL = 1e-10
TRACE_TOL = 1e-9
STATE_PSD_TOL = 1e-8
POVM_PSD_TOL = 1e-10

I2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def hermitian_eigh(h) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and eigenvectors (columns) by cyclic Jacobi."""
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T), initial=0.0) > 1e-8:
        raise NotHermitian("matrix is not Hermitian within 1e-8")
    h = 0.5 * (h + h.conj().T)
    w, v, _ = kernels.jacobi_eigh(np.ascontiguousarray(h))
    return np.asarray(w), np.asarray(v)


def hermitian_eigenvalues(h) -> np.ndarray:
    return hermitian_eigh(h)[0]


def _check_density(m: np.ndarray, what: str):
    if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
        raise NotHermitian(f"{what} is not Hermitian")
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotNormalized(f"{what} has trace {tr:.12g}")
    lo = hermitian_eigenvalues(m)[0]
    if lo < -STATE_PSD_TOL:
        raise NotPositive(f"{what} has eigenvalue {lo:.3e}")


@dataclass(frozen=True, eq=False)
class QuoinState:
    """Two-qubit density operator."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=np.complex128)
        if m.shape != (4, 4):
            raise DimensionMismatch(f"two-qubit state must be 4x4, got {m.shape}")
        _check_density(m, "state")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def allclose(self, other, atol=1e-12) -> bool:
        other = other.m if isinstance(other, QuoinState) else np.asarray(other)
        return float(np.max(np.abs(self.m - other))) <= atol


@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple

    def __post_init__(self):
        els = tuple(np.array(e, dtype=np.complex128) for e in self.elements)
        if not els:
            raise IncompletePovm("POVM has no elements")
        total = np.zeros((2, 2), dtype=np.complex128)
        for k, e in enumerate(els):
            if e.shape != (2, 2):
                raise DimensionMismatch(f"element {k} has shape {e.shape}")
            if np.max(np.abs(e - e.conj().T)) > HERM_TOL:
                raise NotHermitian(f"element {k} is not Hermitian")
            if hermitian_eigenvalues(e)[0] < -POVM_PSD_TOL:
                raise NotPositive(f"element {k} is not positive semidefinite")
            e.setflags(write=False)
            total = total + e
        if np.max(np.abs(total - I2)) > 1e-9:
            raise IncompletePovm("elements do not sum to the identity")
        object.__setattr__(self, "elements", els)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True, eq=False)
class CcState:
    """Weights ``p_uv`` of a computational-basis classically correlated state."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).reshape(2, 2)
        if w.min() < -1e-12:
            raise NegativeEntry("negative weight")
        if abs(w.sum() - 1.0) > 1e-9:
            raise NotNormalized(f"weights sum to {w.sum():.12g}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def ket(*amps) -> np.ndarray:
    return np.asarray(amps, dtype=np.complex128)


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    return np.outer(v, v.conj())


def singlet() -> QuoinState:
    """``|psi^-> = (|01> - |10>) / sqrt 2``."""
    return QuoinState(projector(ket(0, 1, -1, 0) / np.sqrt(2)))


def psi_plus() -> QuoinState:
    return QuoinState(projector(ket(0, 1, 1, 0) / np.sqrt(2)))


def maximally_mixed() -> QuoinState:
    return QuoinState(np.eye(4) / 4)


def werner(p: float) -> QuoinState:
    """Singlet with weight ``p`` mixed with white noise."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p={p} outside [0, 1]")
    return QuoinState(p * singlet().m + (1 - p) * np.eye(4) / 4)


def product_state(rho_a, rho_b) -> QuoinState:
    return QuoinState(np.kron(rho_a, rho_b))


def cc_state(w: CcState) -> QuoinState:
    if not isinstance(w, CcState):
        w = CcState(w)
    return QuoinState(np.diag(w.weights.ravel()).astype(np.complex128))


def _real_angle_povm(d: int) -> Povm:
    theta = 2 * np.pi / d
    vecs = [ket(np.cos(k * theta), np.sin(k * theta)) for k in range(d)]
    return Povm(tuple((2.0 / d) * projector(v) for v in vecs))


def trine_povm() -> Povm:
    """Three subnormalized projectors at 120 degrees, weight 2/3 each."""
    return _real_angle_povm(3)


def sic_vectors() -> List[np.ndarray]:
    vs = [ket(1, 0)]
    for k in range(3):
        vs.append(ket(np.sqrt(1 / 3), np.exp(2j * k * np.pi / 3) * np.sqrt(2 / 3)))
    return vs


def sic_povm() -> Povm:
    """Tetrahedral qubit SIC measurement, elements ``|phi_k><phi_k| / 2``."""
    return Povm(tuple(0.5 * projector(v) for v in sic_vectors()))


def uniform_angle_povm(d: int) -> Povm:
    """``d`` real projectors at angles ``k 2 pi / d`` weighted by ``2 / d``."""
    if int(d) != d or d < 2:
        raise OutOfRange(f"d={d} must be an integer >= 2")
    return _real_angle_povm(int(d))


def computational_povm() -> Povm:
    return Povm((projector(ket(1, 0)), projector(ket(0, 1))))


def measure_joint(rho: QuoinState, a: Povm, b: Povm) -> JointDist:
    """Outcome table ``p(ij) = Tr[(A_i (x) B_j) rho]``."""
    r = rho.m.reshape(2, 2, 2, 2)  # (a, b, a', b')
    ea = np.stack(a.elements)
    eb = np.stack(b.elements)
    # Tr[(A (x) B) rho] = sum A[a', a] B[b', b] rho[a, b, a', b']
    p = np.einsum("iya,jzb,abyz->ij", ea, eb, r)
    if np.max(np.abs(p.imag)) > 1e-8:
        raise NonrealProbability(f"imaginary part {np.max(np.abs(p.imag)):.3e}")
    p = p.real
    # PSD slack on states lets rounding push cells a hair below zero
    p = np.where((p < 0) & (p > -STATE_PSD_TOL), 0.0, p)
    return JointDist(p / p.sum())


def theorem5_reduce(w: CcState, a: Povm, b: Povm) -> Tuple[JointDist, StochasticMatrix, StochasticMatrix]:
    """Classical coin plus local maps reproducing a CC state's statistics.

    ``S[k, l] = <l|M_k|l>``: only the diagonal of each element matters on a
    state diagonal in the product basis.
    """
    if not isinstance(w, CcState):
        w = CcState(w)
    sa = np.array([np.diag(e).real for e in a.elements])
    sb = np.array([np.diag(e).real for e in b.elements])
    return JointDist(w.weights), StochasticMatrix(sa), StochasticMatrix(sb)


def partial_transpose_b(rho) -> np.ndarray:
    m = rho.m if isinstance(rho, QuoinState) else np.asarray(rho, dtype=np.complex128)
    return m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def min_pt_eigenvalue(rho) -> float:
    return float(hermitian_eigenvalues(partial_transpose_b(rho))[0])


def is_ppt(rho, tol: float = 1e-9) -> bool:
    return min_pt_eigenvalue(rho) >= -tol


def random_density(rng: np.random.Generator, dim: int = 4, rank: int = None) -> np.ndarray:
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_povm(rng: np.random.Generator, d: int) -> Povm:
    """``d``-outcome qubit POVM from a random positive decomposition of I."""
    gs = [projector(rng.normal(size=2) + 1j * rng.normal(size=2)) * rng.uniform(0.1, 1.0)
          for _ in range(d)]
    s = sum(gs)
    w, v = np.linalg.eigh(s)
    s_inv_half = v @ np.diag(w ** -0.5) @ v.conj().T
    els = [s_inv_half @ g @ s_inv_half for g in gs]
    els = [0.5 * (e + e.conj().T) for e in els]
    # absorb rounding so the elements sum to the identity exactly
    els[-1] = els[-1] + (I2 - sum(els))
    return Povm(tuple(els))


def random_cc_state(rng: np.random.Generator) -> CcState:
    e = rng.exponential(size=4)
    return CcState(e / e.sum())


def povm_from_name(name: str, d: int = None) -> Povm:
    if name == "trine":
        return trine_povm()
    if name == "sic":
        return sic_povm()
    if name == "uniform":
        return uniform_angle_povm(d)
    raise OutOfRange(f"unknown POVM {name!r}")
