"""catlab: collective-spin cat states in two-mode bosonic interferometers.

Prepares coherent and thermal states of N bosons in two modes, evolves them
under the twist-and-turn Hamiltonian to create Schrodinger-cat counting
distributions, and quantifies how macroscopic (extensive difference) and how
genuinely quantum (Fisher-information indefiniteness) the result is.
"""

__version__ = "0.1.0"

from .spin import (
    SpinAxis,
    SpinSpace,
    NumericalInvariantError,
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    axis_op,
    cartesian_ops,
    coherent_state,
    expectation,
    make_space,
    rotation,
    thermal_state,
    variance,
)
from .dynamics import (
    EvolvedState,
    Propagator,
    SignConvention,
    StateLabel,
    TwistTurnParams,
    build_hamiltonian,
    evolve,
    prepare_and_evolve,
    t_pi,
)
from .classical import (
    FixedPoint,
    MeanFieldParams,
    PhasePoint,
    SeparatrixAbsentError,
    Stability,
    TrajectoryClass,
    classical_energy,
    classify_batch,
    fixed_points,
    integrate_trajectory,
    phase_portrait,
    separatrix,
)
from .metrology import (
    AxisMap,
    CatSplit,
    JzDistribution,
    MetrologyReport,
    ReadoutSpec,
    cat_split,
    cfi_commutator,
    cfi_finite_difference,
    jz_distribution,
    metrology_report,
    n_eff,
    protocol_distribution,
    qfi,
    qfi_axis_map,
    statistical_uncertainty,
)
from .wigner import WignerGrid, ridge_circular_spread, wigner
from .catqubit import (
    CatQubitModel,
    SyntheticCat,
    analytic_qfi,
    analytic_rq,
    eta_critical,
    lg_violation,
    make_synthetic_cat,
    reduced_density,
    reduced_extdiff,
)
from .config import ConfigError, RunConfig

__all__ = [name for name in dir() if not name.startswith("_")]
