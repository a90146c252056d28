"""Seeded property suites: monotonicity, alpha-edge decomposition and reachability, CC reduction, Werner PPT."""
from typing import Callable, Dict, List, NamedTuple, Optional

import numpy as np

from .coinspace import mutual_information, random_joint
from .errors import DecompositionNotFound
from .freeops import apply_local, lemma1_decompose, random_stochastic, verify_lemma2
from .maximin import OptimizerConfig
from .quoin import (cc_state, measure_joint, min_pt_eigenvalue, random_cc_state, random_povm,
                    theorem5_reduce, werner)


class SuiteResult(NamedTuple):
    suite: str
    prop: str
    trials: int
    failures: int
    worst: float
    passed: bool


HEADER = ("suite", "property", "trials", "failures", "worst", "status")


def as_row(r: SuiteResult):
    return (r.suite, r.prop, r.trials, r.failures, r.worst, "pass" if r.passed else "FAIL")


DEFAULT_TRIALS = {"monotone": 10_000, "lemma1": 100, "lemma2": 500, "theorem5": 100,
                  "werner-ppt": 1001}


def monotone(trials: int, seed: int = 0, max_in: int = 6, max_out: int = 8) -> List[SuiteResult]:
    """Mutual information never grows under random local stochastic maps."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst = -np.inf
    for _ in range(trials):
        na, nb = rng.integers(1, max_in + 1, size=2)
        oa, ob = rng.integers(1, max_out + 1, size=2)
        j = random_joint(rng, na, nb)
        out = apply_local(random_stochastic(oa, na, rng), random_stochastic(ob, nb, rng), j)
        gain = mutual_information(out) - mutual_information(j)
        worst = max(worst, gain)
        failures += gain > 1e-9
    return [SuiteResult("monotone", "I(out) <= I(in) + 1e-9", trials, failures, worst,
                        failures == 0)]


def lemma1(trials: int, seed: int = 0, cfg: Optional[OptimizerConfig] = None) -> List[SuiteResult]:
    """Random 2x2 targets decompose through the alpha-edge."""
    rng = np.random.default_rng(seed)
    cfg = cfg or OptimizerConfig(seed=seed)
    failures = 0
    worst = 0.0
    for _ in range(trials):
        try:
            d = lemma1_decompose(random_joint(rng, 2, 2), cfg)
            worst = max(worst, d.residual)
        except DecompositionNotFound:
            failures += 1
            worst = np.inf
    return [SuiteResult("lemma1", "residual <= 1e-7", trials, failures, worst, failures == 0)]


def lemma2(trials: int, seed: int = 0, cfg: Optional[OptimizerConfig] = None) -> List[SuiteResult]:
    """Penalized search from the alpha-edge stays at the two-coin optimum."""
    base = cfg or OptimizerConfig()
    cfg = OptimizerConfig(max_starts=trials, max_iters_per_start=base.max_iters_per_start,
                          seed=seed, convergence_tol=base.convergence_tol,
                          smoothing_beta=base.smoothing_beta)
    out = []
    for n, bound in ((3, 1 / 8), (4, 1 / 15)):
        v = verify_lemma2(n, cfg)
        ok = v <= bound + 1e-4
        out.append(SuiteResult("lemma2", f"n={n} penalized payoff <= {bound:.6g} + 1e-4",
                               trials, int(not ok), v, ok))
    return out


def theorem5(trials: int, seed: int = 0, max_outcomes: int = 6) -> List[SuiteResult]:
    """CC-state statistics equal their classical simulation."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(trials):
        w = random_cc_state(rng)
        a = random_povm(rng, int(rng.integers(2, max_outcomes + 1)))
        b = random_povm(rng, int(rng.integers(2, max_outcomes + 1)))
        coin, s_a, s_b = theorem5_reduce(w, a, b)
        gap = float(np.max(np.abs(apply_local(s_a, s_b, coin).p
                                  - measure_joint(cc_state(w), a, b).p)))
        worst = max(worst, gap)
        failures += gap > 1e-12
    return [SuiteResult("theorem5", "max |classical - quantum| <= 1e-12", trials, failures,
                        worst, failures == 0)]


def werner_ppt_boundary(width: float = 1e-7) -> float:
    """Bisect the sign change of the smallest partial-transpose eigenvalue."""
    lo, hi = 0.0, 1.0
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if min_pt_eigenvalue(werner(mid)) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def werner_ppt(trials: int = 1001, seed: int = 0) -> List[SuiteResult]:
    p_star = werner_ppt_boundary()
    grid_bad = 0
    for p in np.linspace(0.0, 1.0, trials):
        ppt = min_pt_eigenvalue(werner(p)) >= -1e-9
        grid_bad += ppt != (p <= 1 / 3 + 1e-9)
    return [
        SuiteResult("werner-ppt", "boundary = 1/3 +- 1e-6", 1, int(abs(p_star - 1 / 3) > 1e-6),
                    p_star, abs(p_star - 1 / 3) <= 1e-6),
        SuiteResult("werner-ppt", "PPT iff p <= 1/3 on grid", trials, grid_bad, float(grid_bad),
                    grid_bad == 0),
    ]


SUITES: Dict[str, Callable] = {
    "monotone": monotone,
    "lemma1": lemma1,
    "lemma2": lemma2,
    "theorem5": theorem5,
    "werner-ppt": werner_ppt,
}


def run(suite: str, trials: Optional[int] = None, seed: int = 0) -> List[SuiteResult]:
    names = list(SUITES) if suite == "all" else [suite]
    out = []
    for name in names:
        out.extend(SUITES[name](trials or DEFAULT_TRIALS[name], seed))
    return out
