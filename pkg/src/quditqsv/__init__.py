"""Verification strategies and direct fidelity estimation for bipartite qudit states."""
from .charfunc import CharFunction, char_sud, char_weyl, fidelity_overlap, reconstruct, support
from .dfe import coverage_experiment, estimate, expected_schedule, make_plan, measure_observable
from .linalg import hermitian_eig, kron, negativity, partial_transpose
from .states import (
    SchmidtState,
    general_schmidt,
    max_entangled,
    two_qubit_target,
    two_qutrit_target,
)
from .verification import (
    Strategy,
    StrategyReport,
    n_measurements,
    optimize_theta3,
    strategy_bell_2qubit,
    strategy_bell_general,
    strategy_qudit_general,
    strategy_separable,
    strategy_two_qubit,
    strategy_two_qutrit,
)

__version__ = "0.1.0"
