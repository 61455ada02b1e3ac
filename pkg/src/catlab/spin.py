"""Collective-spin Hilbert space for N bosons in two modes.

N particles in two modes map onto a single spin j = N/2 via the Schwinger
representation: the population difference is n_1 - n_2 = 2 J_z and mode
exchange (a1^dag a2 + a2^dag a1) = 2 J_x.  The state space is the Dicke
ladder |m>, m = -j ... +j, stored in ascending m order, so every operator
here is a dense (N+1) x (N+1) complex matrix.

Conventions fixed in this module:
  * hbar = 1; the hopping energy defines the time unit and the
    condensation energy scale eps_tau defines the temperature unit.
  * J(theta, phi) = J_z cos(theta) + J_x sin(theta) cos(phi)
                  + J_y sin(theta) sin(phi)   (unit-vector decomposition).
  * Rotations are U(alpha, theta, phi) = exp(-i alpha J(theta, phi)).
  * Thermal states use a positive exponent,
        rho(beta, z, phi) = exp(beta * J(acos z, phi)) / Z,
    so beta -> inf selects the top eigenvector: the spin coherent state
    pointing along (acos z, phi).  The sign is recorded in run manifests.

All matrix functions (exponentials, thermal weights) go through an exact
eigendecomposition rather than series truncation; at dim ~ 10^3 this is
cheap and leaves no convergence knob.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-9
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10


class NumericalInvariantError(RuntimeError):
    """A matrix failed one of the exactness checks (hermiticity, trace, ...)."""


class SpectralDecomp(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    values: np.ndarray
    vectors: np.ndarray

    def apply(self, fn) -> np.ndarray:
        """Assemble V f(w) V^dag for a scalar function fn of the eigenvalues."""
        return (self.vectors * fn(self.values)) @ self.vectors.conj().T


def spectral_decomp(a: np.ndarray) -> SpectralDecomp:
    """Eigendecomposition of a Hermitian matrix (validated)."""
    assert_hermitian(a)
    w, v = np.linalg.eigh(a)
    return SpectralDecomp(w, v)


@dataclass(frozen=True)
class SpinSpace:
    """The (N+1)-dimensional Dicke space of N two-mode bosons.

    Basis states |m>, m = -j ... +j ascending, are eigenstates of J_z.
    N must be even so j = N/2 is an integer and z = cos(theta) maps onto
    the lattice m/j without half-integer offsets.
    """

    n_particles: int

    def __post_init__(self):
        n = self.n_particles
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ValueError(f"n_particles must be an integer, got {n!r}")
        if n < 2 or n % 2 != 0:
            raise ValueError(f"n_particles must be even and >= 2, got {n}")

    @property
    def j(self) -> float:
        return self.n_particles / 2

    @property
    def dim(self) -> int:
        return self.n_particles + 1

    @cached_property
    def m_values(self) -> np.ndarray:
        """J_z eigenvalues, ascending: -j, -j+1, ..., +j."""
        return np.arange(-self.j, self.j + 1)

    @cached_property
    def jz(self) -> np.ndarray:
        return np.diag(self.m_values).astype(complex)

    @cached_property
    def jplus(self) -> np.ndarray:
        # <m+1| J+ |m> = sqrt(j(j+1) - m(m+1)); ascending basis puts the
        # matrix element one row below the diagonal.
        m = self.m_values[:-1]
        return np.diag(np.sqrt(self.j * (self.j + 1) - m * (m + 1)), -1).astype(complex)

    @cached_property
    def jx(self) -> np.ndarray:
        return (self.jplus + self.jplus.conj().T) / 2

    @cached_property
    def jy(self) -> np.ndarray:
        return (self.jplus - self.jplus.conj().T) / 2j


def make_space(n_particles: int) -> SpinSpace:
    """Build the collective-spin space for an even particle number N >= 2."""
    return SpinSpace(n_particles)


def cartesian_ops(space: SpinSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (J_z, J_x, J_y) as dense matrices in the Dicke basis."""
    return space.jz, space.jx, space.jy


def canonicalize_angles(theta: float, phi: float) -> tuple[float, float]:
    """Fold (theta, phi) into theta in [0, pi], phi in [-pi, pi)."""
    if not (np.isfinite(theta) and np.isfinite(phi)):
        raise ValueError("axis angles must be finite")
    theta = float(np.mod(theta, 2 * np.pi))
    if theta > np.pi:
        theta = 2 * np.pi - theta
        phi = phi + np.pi
    phi = float(np.mod(phi + np.pi, 2 * np.pi) - np.pi)
    return theta, phi


@dataclass(frozen=True)
class SpinAxis:
    """A direction on the Bloch sphere, theta in [0, pi], phi in [-pi, pi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        th, ph = canonicalize_angles(self.theta, self.phi)
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "phi", ph)

    def unit_vector(self) -> np.ndarray:
        """Cartesian components ordered (z, x, y) to match the J triple."""
        return np.array(
            [
                np.cos(self.theta),
                np.sin(self.theta) * np.cos(self.phi),
                np.sin(self.theta) * np.sin(self.phi),
            ]
        )


X_AXIS = SpinAxis(np.pi / 2, 0.0)
Y_AXIS = SpinAxis(np.pi / 2, np.pi / 2)
Z_AXIS = SpinAxis(0.0, 0.0)


def axis_op(space: SpinSpace, axis: SpinAxis) -> np.ndarray:
    """Spin projection J(theta, phi) along the given axis."""
    nz, nx, ny = axis.unit_vector()
    return nz * space.jz + nx * space.jx + ny * space.jy


def rotation(space: SpinSpace, alpha: float, axis: SpinAxis) -> np.ndarray:
    """Rotation U = exp(-i alpha J(theta, phi)), built spectrally."""
    if not np.isfinite(alpha):
        raise ValueError("rotation angle must be finite")
    dec = spectral_decomp(axis_op(space, axis))
    u = dec.apply(lambda w: np.exp(-1j * alpha * w))
    assert_unitary(u)
    return u


def coherent_state(space: SpinSpace, axis: SpinAxis) -> np.ndarray:
    """Spin coherent state pointing along the axis (top eigenvector of J(axis))."""
    dec = spectral_decomp(axis_op(space, axis))
    vec = dec.vectors[:, -1].copy()
    # fix the overall phase so results do not depend on LAPACK sign choices
    k = int(np.argmax(np.abs(vec)))
    vec *= np.exp(-1j * np.angle(vec[k]))
    return vec


def thermal_state(space: SpinSpace, beta_scaled: float, z: float, phi: float) -> np.ndarray:
    """Thermal state exp(beta * J(acos z, phi)) / Z of the condensation Hamiltonian.

    beta_scaled is beta * eps_tau, the only temperature parameter exposed.
    The positive exponent means beta -> inf concentrates the state onto the
    spin coherent state at phase-space point (z, phi).
    """
    if not np.isfinite(beta_scaled) or beta_scaled < 0:
        raise ValueError(f"beta_scaled must be >= 0, got {beta_scaled}")
    if abs(z) > 1:
        raise ValueError(f"imbalance z must lie in [-1, 1], got {z}")
    axis = SpinAxis(float(np.arccos(z)), phi)
    dec = spectral_decomp(axis_op(space, axis))
    logw = beta_scaled * dec.values
    logw -= logw.max()
    p = np.exp(logw)
    p /= p.sum()
    rho = (dec.vectors * p) @ dec.vectors.conj().T
    assert_density_matrix(rho)
    return rho


def expectation(rho: np.ndarray, a: np.ndarray) -> float:
    """Tr[A rho], checked to be real up to a 1e-9 imaginary residue."""
    if rho.shape != a.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {a.shape}")
    val = np.trace(a @ rho)
    scale = max(1.0, abs(val))
    if abs(val.imag) > 1e-9 * scale:
        raise NumericalInvariantError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def variance(rho: np.ndarray, a: np.ndarray) -> float:
    """Var(A) = Tr[A^2 rho] - Tr[A rho]^2, clamped at zero."""
    mean = expectation(rho, a)
    second = expectation(rho, a @ a)
    var = second - mean * mean
    if var < -1e-9 * max(1.0, abs(second)):
        raise NumericalInvariantError(f"variance came out negative: {var:.3e}")
    return max(var, 0.0)


def assert_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    scale = np.abs(a).max()
    if scale == 0:
        return
    dev = np.abs(a - a.conj().T).max()
    if dev > tol * scale:
        raise NumericalInvariantError(f"matrix not Hermitian: max|A - A^dag| = {dev:.3e}")


def assert_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    dev = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if dev > tol:
        raise NumericalInvariantError(f"matrix not unitary: max|U^dag U - I| = {dev:.3e}")


def assert_density_matrix(rho: np.ndarray, tol: float = TRACE_TOL) -> None:
    assert_hermitian(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise NumericalInvariantError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    w = np.linalg.eigvalsh(rho)
    if w.min() < EIGENVALUE_FLOOR:
        raise NumericalInvariantError(f"negative eigenvalue {w.min():.3e} below round-off floor")


def state_eigensystem(rho: np.ndarray) -> SpectralDecomp:
    """Eigendecomposition of a density matrix with round-off negatives clamped to 0."""
    dec = spectral_decomp(rho)
    if dec.values.min() < EIGENVALUE_FLOOR:
        raise NumericalInvariantError(f"density matrix has eigenvalue {dec.values.min():.3e}")
    return SpectralDecomp(np.clip(dec.values, 0.0, None), dec.vectors)
