"""Qubit channels and shared-randomness distribution through them."""
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from .coinspace import binary_entropy
from .errors import NoCrossing, NotTracePreserving, OutOfRange
from .quoin import (I2, SX, SY, SZ, QuoinState, hermitian_eigenvalues, measure_joint,
                    partial_transpose_b, sic_povm, singlet, trine_povm)

PHASE_FLIP = "phase_flip"
DEPOLARIZING = "depolarizing"
_ALIASES = {"phase_flip": PHASE_FLIP, "phaseflip": PHASE_FLIP, "phase-flip": PHASE_FLIP,
            "depolarizing": DEPOLARIZING, "depolarising": DEPOLARIZING}

# best two-coin payoffs in G(3), G(4)
CLASSICAL_BENCHMARK = {3: 1.0 / 8.0, 4: 1.0 / 15.0}
EB_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QubitChannel:
    kraus: tuple

    def __post_init__(self):
        ks = tuple(np.array(k, dtype=np.complex128) for k in self.kraus)
        s = sum(k.conj().T @ k for k in ks)
        if np.max(np.abs(s - I2)) > 1e-9:
            raise NotTracePreserving("sum of K^dag K differs from the identity")
        object.__setattr__(self, "kraus", ks)

    def __call__(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.complex128)
        return sum(k @ rho @ k.conj().T for k in self.kraus)


class ThresholdResult(NamedTuple):
    family: str
    n: int
    p_star: float
    classical_benchmark: float
    bracket_width: float


class CurveRow(NamedTuple):
    p: float
    payoff: float
    classical_benchmark: float
    capacity: Optional[float]


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p={p} outside [0, 1]")


def family_name(family: str) -> str:
    try:
        return _ALIASES[family.lower()]
    except (KeyError, AttributeError):
        raise OutOfRange(f"unknown channel family {family!r}") from None


def identity_channel() -> QubitChannel:
    return QubitChannel((I2,))


def phase_flip(p: float) -> QubitChannel:
    """``p rho + (1 - p) Z rho Z``."""
    _check_p(p)
    return QubitChannel((np.sqrt(p) * I2, np.sqrt(1 - p) * SZ))


def depolarizing(p: float) -> QubitChannel:
    """``p rho + (1 - p) I / 2`` in Pauli-Kraus form."""
    _check_p(p)
    a = np.sqrt((1 + 3 * p) / 4)
    b = np.sqrt((1 - p) / 4)
    return QubitChannel((a * I2, b * SX, b * SY, b * SZ))


def make_channel(family: str, p: float) -> QubitChannel:
    return phase_flip(p) if family_name(family) == PHASE_FLIP else depolarizing(p)


def apply_to_b(ch: QubitChannel, rho: QuoinState) -> QuoinState:
    """``(I (x) Lambda)[rho]``."""
    out = sum(np.kron(I2, k) @ rho.m @ np.kron(I2, k).conj().T for k in ch.kraus)
    return QuoinState(0.5 * (out + out.conj().T))


def payoff_povm(n: int):
    if n == 3:
        return trine_povm()
    if n == 4:
        return sic_povm()
    raise OutOfRange(f"n={n}: distributed payoff is defined for n in {{3, 4}}")


def distributed_statistics(family: str, p: float, n: int):
    """Outcome table after sending half a singlet through the channel."""
    _check_p(p)
    povm = payoff_povm(n)
    shared = apply_to_b(make_channel(family, p), singlet())
    return measure_joint(shared, povm, povm)


def distributed_payoff(family: str, p: float, n: int) -> float:
    q = distributed_statistics(family, p, n).p
    return float(q[~np.eye(n, dtype=bool)].min())


def _payoff_is_monotone(family, n, points=101) -> bool:
    vals = [distributed_payoff(family, p, n) for p in np.linspace(0.0, 1.0, points)]
    return bool(np.all(np.diff(vals) >= -1e-12))


def advantage_threshold(family: str, n: int, width: float = 1e-6) -> ThresholdResult:
    """Smallest ``p`` at which the distributed payoff reaches the two-coin optimum."""
    family = family_name(family)
    if n not in CLASSICAL_BENCHMARK:
        raise OutOfRange(f"n={n} must be 3 or 4")
    bench = CLASSICAL_BENCHMARK[n]
    if not _payoff_is_monotone(family, n):
        raise NoCrossing(f"{family} payoff is not monotone in p; bisection unsafe")
    lo, hi = 0.0, 1.0
    if distributed_payoff(family, hi, n) < bench:
        raise NoCrossing(f"{family} never reaches {bench} on [0, 1]")
    if distributed_payoff(family, lo, n) >= bench:
        return ThresholdResult(family, n, 0.0, bench, 0.0)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if distributed_payoff(family, mid, n) >= bench:
            hi = mid
        else:
            lo = mid
    return ThresholdResult(family, n, 0.5 * (lo + hi), bench, hi - lo)


def choi(ch: QubitChannel) -> np.ndarray:
    """``(I (x) Lambda)`` on ``|Phi+><Phi+|``; unit trace."""
    phi = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)
    rho = np.outer(phi, phi.conj())
    return sum(np.kron(I2, k) @ rho @ np.kron(I2, k).conj().T for k in ch.kraus)


def is_entanglement_breaking(ch: QubitChannel) -> bool:
    """PPT test on the Choi state; exact for qubit channels."""
    return float(hermitian_eigenvalues(partial_transpose_b(choi(ch)))[0]) >= -EB_TOL


def depolarizing_classical_capacity(p: float) -> float:
    """``1 - H((1 + p) / 2)`` bits."""
    _check_p(p)
    return 1.0 - binary_entropy((1.0 + p) / 2.0)


def payoff_curve(family: str, n: int, grid_points: int) -> List[CurveRow]:
    family = family_name(family)
    if grid_points < 2:
        raise OutOfRange("grid_points must be >= 2")
    bench = CLASSICAL_BENCHMARK.get(n)
    if bench is None:
        raise OutOfRange(f"n={n} must be 3 or 4")
    rows = []
    for p in np.linspace(0.0, 1.0, int(grid_points)):
        p = float(p)
        cap = depolarizing_classical_capacity(p) if family == DEPOLARIZING else None
        rows.append(CurveRow(p, distributed_payoff(family, p, n), bench, cap))
    return rows
