"""Resource theory of shared randomness: classical coins, quantum coins, games and channels."""
from ._accel import backend
from .coinspace import JointDist, MarginalDist, alpha_correlated, eq_not_alpha, mutual_information
from .errors import OptimizerBudgetExhausted, SharedRandError
from .freeops import StochasticMatrix, apply_local, lemma1_decompose, verify_lemma2
from .game import PayoffReport, classical_max_payoff, payoff, quantum_payoff, table1_strategies
from .maximin import MaximinResult, OptimizerConfig, SimplexBlockSpec, maximize
from .quoin import Povm, QuoinState, measure_joint, singlet, werner

__version__ = "0.1.0"
