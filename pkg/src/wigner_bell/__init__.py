"""Bell nonlocality of massive qubits seen from a boosted frame.

Wigner rotations entangle spin with momentum; tracing momentum out leaves a
mixed spin state whose CHSH (two qubits) or three-qubit Bell value is
maximized over measurement directions.
"""

from .bell import (
    CHSH,
    I3,
    BellFunctional,
    MaximizeResult,
    OptimizerOptions,
    SweepPoint,
    chsh_oracle,
    correlation,
    evaluate,
    maximize,
    sweep,
)
from .relativity import (
    WignerRotation,
    einstein_add,
    rapidity,
    relativistic_spin_operator,
    spin_half_rep,
    wigner_angle,
    wigner_rotation,
)
from .scenario import (
    MomentumBranch,
    MomentumScenario,
    MomentumSetting,
    make_generalized_ghz_spin,
    make_generalized_w_spin,
    make_momentum_branches,
    make_scenario,
    transform_scenario,
)

__version__ = "0.1.0"
