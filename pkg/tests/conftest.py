import numpy as np
import pytest

from catlab import SpinSpace, StateLabel, TwistTurnParams, prepare_and_evolve

PURE_BETA = 50.0


@pytest.fixture(scope="session")
def space200():
    return SpinSpace(200)


@pytest.fixture(scope="session")
def params200(space200):
    return TwistTurnParams(space=space200, t_hop=1.0, u_int=0.1)


@pytest.fixture(scope="session")
def cold_zero_cat(params200):
    """Pure 0 state evolved 1.4 T_pi: the reference cat at N = 200."""
    return prepare_and_evolve(StateLabel.ZERO, PURE_BETA, 1.4, params200)


@pytest.fixture(scope="session")
def cold_pi_cat(params200):
    """Pure pi state evolved 1.0 T_pi."""
    return prepare_and_evolve(StateLabel.PI, PURE_BETA, 1.0, params200)


@pytest.fixture(scope="session")
def hot_zero_cat(params200):
    """0 state at temperature 10 eps_tau evolved 1.1 T_pi."""
    return prepare_and_evolve(StateLabel.ZERO, 0.1, 1.1, params200)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """Ginibre-induced random mixed state, optionally rank-limited."""
    k = rank if rank is not None else dim
    a = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_pure(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
