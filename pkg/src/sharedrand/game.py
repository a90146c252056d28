"""The non-monopolizing subsidy game G(n).

Two players each pick one of ``n`` restaurants; the payoff is the smallest
probability over the ``n (n - 1)`` pairs of distinct choices.
"""
import warnings
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from . import csvio, kernels
from .channel import CLASSICAL_BENCHMARK
from .coinspace import JointDist, alpha_correlated, eq_not_alpha
from .errors import DimensionMismatch, NotSquare, OptimizerBudgetExhausted, OutOfRange
from .freeops import StochasticMatrix, alpha_edge_spec, apply_local, unpack_alpha_edge
from .maximin import OptimizerConfig, SimplexBlockSpec, maximize
from .quoin import measure_joint, sic_povm, trine_povm, uniform_angle_povm, werner


@dataclass(frozen=True)
class PayoffReport:
    n: int
    value: float
    resource_label: str
    strategy_blob: str
    lower_bound: float
    upper_bound: float
    benchmark: Optional[float] = None
    certified: bool = True
    note: str = ""

    def csv_row(self):
        return (self.n, self.resource_label, self.value, self.lower_bound,
                self.upper_bound, self.benchmark)


REPORT_HEADER = ("n", "resource", "value", "lower_bound", "upper_bound", "benchmark")


def reports_to_csv(reports) -> str:
    return csvio.write_rows(REPORT_HEADER, (r.csv_row() for r in reports))


def payoff(j: JointDist, n: int) -> float:
    """``min_{i != j} P(ij)``."""
    if j.n_a != j.n_b:
        raise NotSquare(f"{j.n_a}x{j.n_b} table is not square")
    if j.n_a != n:
        raise DimensionMismatch(f"table is {j.n_a}x{j.n_a}, game has n={n}")
    return float(j.p[~np.eye(n, dtype=bool)].min())


def payoff_bounds(n: int) -> Tuple[float, float]:
    """``(1/n^2, 1/(n(n-1)))``: uniform local play vs. the equal off-diagonal state."""
    if int(n) != n or n < 2:
        raise OutOfRange(f"n={n} must be an integer >= 2")
    return 1.0 / (n * n), 1.0 / (n * (n - 1))


def _classical_blob(source: JointDist, s_a: StochasticMatrix, s_b: StochasticMatrix) -> str:
    return csvio.sections(source=csvio.joint_to_csv(source),
                          s_a=csvio.stochastic_to_csv(s_a),
                          s_b=csvio.stochastic_to_csv(s_b))


def _unpack_general(x, m: int, n: int):
    x = np.asarray(x, dtype=np.float64)
    src = x[:m * m].reshape(m, m)
    sa = x[m * m:m * m + m * n].reshape(m, n).T
    sb = x[m * m + m * n:m * m + 2 * m * n].reshape(m, n).T
    return (JointDist(src / src.sum()), StochasticMatrix(sa / sa.sum(axis=0)),
            StochasticMatrix(sb / sb.sum(axis=0)))


def classical_max_payoff(m: int, n: int, cfg: Optional[OptimizerConfig] = None,
                         workers: int = 1) -> PayoffReport:
    """Best payoff in G(n) from a classical m x m coin and local m -> n maps.

    For two-coins the search is restricted to the alpha-correlated edge, which
    reaches every 2 x 2 state under local maps.
    """
    if m < 2 or n < 2:
        raise OutOfRange("m and n must be >= 2")
    cfg = cfg or OptimizerConfig()
    if m == 2:
        res = maximize(kernels.alpha_edge_cells, alpha_edge_spec(n), cfg,
                       args=[float(n)], workers=workers)
        alpha, s_a, s_b = unpack_alpha_edge(res.x, n)
        source = alpha_correlated(alpha)
    else:
        spec = SimplexBlockSpec([m * m] + [n] * (2 * m))
        res = maximize(kernels.general_cells, spec, cfg,
                       args=[float(n), float(m)], workers=workers)
        source, s_a, s_b = _unpack_general(res.x, m, n)
    value = payoff(apply_local(s_a, s_b, source), n)
    if not res.stalled:
        warnings.warn(f"G({n}) from C({m}): best start hit the iteration cap; "
                      "value not converged", OptimizerBudgetExhausted, stacklevel=2)
    lo, hi = payoff_bounds(n)
    return PayoffReport(
        n=n, value=value, resource_label=f"classical{m}",
        strategy_blob=_classical_blob(source, s_a, s_b), lower_bound=lo, upper_bound=hi,
        benchmark=CLASSICAL_BENCHMARK.get(n) if m == 2 else None,
        certified=res.stalled,
        note="heuristic multi-start optimum")


class Table1Strategy(NamedTuple):
    m: int
    n: int
    source: JointDist
    s_a: StochasticMatrix
    s_b: StochasticMatrix
    payoff: float


_T = 1.0 / 3.0
_TABLE1 = (
    (2, 3, lambda: alpha_correlated(0.5),
     [[0, 0.5], [0.5, 0], [0.5, 0.5]],
     [[0.5, 0], [0, 0.5], [0.5, 0.5]]),
    (2, 4, lambda: alpha_correlated(0.5),
     [[0.2, _T], [0.2, _T], [0.4, 0], [0.2, _T]],
     [[_T, 0.2], [_T, 0.2], [0, 0.4], [_T, 0.2]]),
    (3, 4, lambda: eq_not_alpha(3),
     [[0, 2 * _T, 0], [0, 0, 2 * _T], [2 * _T, 0, 0], [_T, _T, _T]],
     [[0, 2 * _T, 0], [0, 0, 2 * _T], [2 * _T, 0, 0], [_T, _T, _T]]),
)


def table1_strategies() -> List[Table1Strategy]:
    """Known optimal two- and three-coin strategies, evaluated directly."""
    out = []
    for m, n, source, sa, sb in _TABLE1:
        src = source()
        s_a, s_b = StochasticMatrix(sa), StochasticMatrix(sb)
        out.append(Table1Strategy(m, n, src, s_a, s_b, payoff(apply_local(s_a, s_b, src), n)))
    return out


def quantum_povm(n: int):
    if n == 3:
        return trine_povm(), "trine"
    if n == 4:
        return sic_povm(), "sic"
    return uniform_angle_povm(n), f"uniform{n}"


def quantum_payoff(n: int, p: float = 1.0) -> PayoffReport:
    """Payoff of a (noisy) singlet measured with the same POVM on both sides.

    Trine for n = 3, SIC for n = 4, the uniform-angle POVM beyond; the latter
    is not claimed optimal.
    """
    if int(n) != n or n < 3:
        raise OutOfRange(f"n={n} must be an integer >= 3")
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p={p} outside [0, 1]")
    n = int(n)
    povm, povm_name = quantum_povm(n)
    state = werner(p)
    value = payoff(measure_joint(state, povm, povm), n)
    lo, hi = payoff_bounds(n)
    label = "singlet" if p == 1.0 else f"werner(p={p!r})"
    blob = csvio.sections(state=csvio.quoin_to_csv(state), povm=csvio.povm_to_csv(povm))
    note = f"povm={povm_name}"
    if n >= 5:
        note += "; non-optimal, open for n>=5"
    return PayoffReport(n=n, value=value, resource_label=label, strategy_blob=blob,
                        lower_bound=lo, upper_bound=hi,
                        benchmark=CLASSICAL_BENCHMARK.get(n), note=note)
