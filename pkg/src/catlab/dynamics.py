"""Twist-and-turn dynamics: Hamiltonian, exact evolution, cat-creation schedule.

The two-mode Hamiltonian with hopping energy t and interaction energy u is

    H = (u/2) (n_1 - n_2)^2 + sigma * t * (a1^dag a2 + a2^dag a1)

which in collective-spin form (n_1 - n_2 = 2 J_z, mode exchange = 2 J_x) reads

    H = 2 u J_z^2 + sigma * 2 t J_x.

The default sign sigma = -1 places the unstable mean-field fixed point at
(z = 0, phi = pi); the literal sigma = +1 variant is gauge-equivalent under
conjugation by exp(i pi J_z) together with phi -> phi + pi, and leaves every
counting statistic and Fisher information unchanged.

Starting a coherent (or partially condensed thermal) state on the separatrix
and evolving for the schedule time

    T_pi = ln(8N) / (N u)        (pi state; 1.4 T_pi for the 0 state)

splits it into the two macroscopically distinct branches of a cat.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import classical
from .spin import (
    SpinSpace,
    assert_density_matrix,
    spectral_decomp,
    thermal_state,
)

#: beta_scaled value standing in for zero temperature.  At N = 200 the weight
#: outside the top eigenstate is ~ exp(-50), far below every tolerance here.
PURE_STATE_BETA = 50.0


class SignConvention(enum.Enum):
    """Sign of the hopping term; FIGURE_ONE puts the saddle at phi = pi."""

    FIGURE_ONE = "figure_one"
    LITERAL_EQ5 = "literal_eq5"


class StateLabel(enum.Enum):
    """Canonical initial states, named by their phase-space azimuth."""

    PI = "pi"
    ZERO = "zero"


@dataclass(frozen=True)
class TwistTurnParams:
    """Couplings of the twist-and-turn Hamiltonian on a given spin space."""

    space: SpinSpace
    t_hop: float = 1.0
    u_int: float = 0.1
    sign_convention: SignConvention = SignConvention.FIGURE_ONE

    def __post_init__(self):
        if not (np.isfinite(self.t_hop) and self.t_hop > 0):
            raise ValueError(f"t_hop must be > 0, got {self.t_hop}")
        if not (np.isfinite(self.u_int) and self.u_int >= 0):
            raise ValueError(f"u_int must be >= 0, got {self.u_int}")

    @property
    def lambda_cl(self) -> float:
        """Mean-field coupling u N / t controlling the classical phase portrait."""
        return self.u_int * self.space.n_particles / self.t_hop


def build_hamiltonian(params: TwistTurnParams) -> np.ndarray:
    """Dense twist-and-turn Hamiltonian, tridiagonal in the Dicke basis."""
    space = params.space
    sigma = -1.0 if params.sign_convention is SignConvention.FIGURE_ONE else 1.0
    return 2.0 * params.u_int * (space.jz @ space.jz) + sigma * 2.0 * params.t_hop * space.jx


def t_pi(space: SpinSpace, u_int: float) -> float:
    """Cat-creation time ln(8N) / (N u) in units of hbar / t (natural log)."""
    if not (np.isfinite(u_int) and u_int > 0):
        raise ValueError(f"t_pi requires u_int > 0, got {u_int}")
    n = space.n_particles
    return float(np.log(8 * n) / (n * u_int))


class Propagator:
    """Unitary evolution under a fixed Hamiltonian via one eigendecomposition.

    The decomposition is computed once and reused for every duration, so
    sweeping many times against the same H costs one matrix-matrix product
    per point.  Instances are immutable and safe to share across workers.
    """

    def __init__(self, hamiltonian: np.ndarray):
        self._decomp = spectral_decomp(hamiltonian)
        self._dim = hamiltonian.shape[0]

    def unitary(self, duration: float) -> np.ndarray:
        return self._decomp.apply(lambda w: np.exp(-1j * w * duration))

    def evolve(self, rho: np.ndarray, duration: float) -> np.ndarray:
        if rho.shape[0] != self._dim:
            raise ValueError(f"dimension mismatch: state {rho.shape[0]}, H {self._dim}")
        if duration < 0:
            raise ValueError(f"duration must be >= 0, got {duration}")
        if duration == 0:
            return rho.copy()
        u = self.unitary(duration)
        out = u @ rho @ u.conj().T
        # unitary evolution cannot disturb hermiticity/trace beyond round-off
        out = (out + out.conj().T) / 2
        assert_density_matrix(out)
        return out


_PROPAGATOR_CACHE: dict[bytes, Propagator] = {}
_PROPAGATOR_CACHE_MAX = 8


def evolve(rho: np.ndarray, hamiltonian: np.ndarray, duration: float) -> np.ndarray:
    """Evolve rho(tau) = exp(-iH tau) rho exp(+iH tau), caching the eigensystem of H."""
    key = hamiltonian.tobytes()
    prop = _PROPAGATOR_CACHE.get(key)
    if prop is None:
        if len(_PROPAGATOR_CACHE) >= _PROPAGATOR_CACHE_MAX:
            _PROPAGATOR_CACHE.pop(next(iter(_PROPAGATOR_CACHE)))
        prop = Propagator(hamiltonian)
        _PROPAGATOR_CACHE[key] = prop
    return prop.evolve(rho, duration)


@dataclass(frozen=True)
class InitialCondition:
    """Phase-space placement and temperature of a prepared thermal state."""

    beta_scaled: float
    z: float
    phi: float


@dataclass(frozen=True)
class EvolvedState:
    """A density matrix together with how it was produced."""

    rho: np.ndarray
    elapsed: float
    params: TwistTurnParams
    provenance: InitialCondition

    def __post_init__(self):
        if self.elapsed < 0:
            raise ValueError("elapsed time must be >= 0")
        assert_density_matrix(self.rho)


def initial_condition(
    state_label: StateLabel, beta_scaled: float, params: TwistTurnParams
) -> InitialCondition:
    """Phase-space start of the canonical states.

    The pi state sits on the unstable fixed point (z = 0, phi = pi).  The 0
    state sits on the separatrix crossing at phi = 0, whose height z_c(0) is
    taken from the mean-field portrait for the same couplings.
    """
    if state_label is StateLabel.PI:
        return InitialCondition(beta_scaled, 0.0, np.pi)
    mf = classical.MeanFieldParams(params.lambda_cl)
    z_c = classical.separatrix(0.0, mf)
    return InitialCondition(beta_scaled, z_c, 0.0)


def prepare_and_evolve(
    state_label: StateLabel,
    beta_scaled: float,
    time_factor: float,
    params: TwistTurnParams,
) -> EvolvedState:
    """Prepare a pi/0 thermal state and evolve it for time_factor * T_pi."""
    if time_factor < 0:
        raise ValueError(f"time_factor must be >= 0, got {time_factor}")
    init = initial_condition(state_label, beta_scaled, params)
    phi0 = init.phi
    if params.sign_convention is SignConvention.LITERAL_EQ5:
        # same physics in the gauge where the saddle sits at phi = 0
        phi0 = phi0 + np.pi
    rho = thermal_state(params.space, beta_scaled, init.z, phi0)
    duration = time_factor * t_pi(params.space, params.u_int)
    rho_t = evolve(rho, build_hamiltonian(params), duration)
    return EvolvedState(rho_t, duration, params, init)
