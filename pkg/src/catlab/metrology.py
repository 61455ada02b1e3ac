"""Counting statistics, extensive difference, and Fisher-information metrology.

The four-step interferometric protocol is: prepare rho, encode a phase
(rho_psi = U^dag rho U with U = exp(-i psi J_Omega)), rotate for read-out
(U_r), and measure J_z.  Everything observable here derives from the
resulting distribution p(r) = <r| rho_psi |r> with |r> = U_r |m>.

From the distribution of J_z itself we get the statistical uncertainty
Delta_s and, after splitting at the mean, the extensive difference Lambda
between the two halves of a double-peaked cat distribution.

Sensitivity to the encoded phase is quantified by the classical Fisher
information for the chosen read-out and by the quantum Fisher information
over the eigensystem of rho:

    F_q = 2 sum_{l,l'} (p_l - p_l')^2 / (p_l + p_l') |<l| G |l'>|^2,

which for a pure state reduces to 4 Var(G) and in general equals the
convex-roof of 4 Var over all pure-state decompositions.  The quality of
indefiniteness r_q = (sqrt(F_q)/2) / Delta_s in [0, 1] measures the fraction
of the observed uncertainty that no amount of classical knowledge could
remove; r_c is its experimentally accessible lower bound from the CFI.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .spin import (
    SpinAxis,
    SpinSpace,
    NumericalInvariantError,
    X_AXIS,
    rotation,
    state_eigensystem,
)

#: eigenvalue-pair cutoff in the spectral QFI and bin cutoff in the CFI;
#: removes 0/0 terms without touching anything at the 1e-6 acceptance level
WEIGHT_CUTOFF = 1e-12

PROB_FLOOR = -1e-12


@lru_cache(maxsize=16)
def _space_for_dim(dim: int) -> SpinSpace:
    if dim < 3 or dim % 2 == 0:
        raise ValueError(f"dimension {dim} is not an N+1 with even N >= 2")
    return SpinSpace(dim - 1)


def _space_of(mat: np.ndarray) -> SpinSpace:
    return _space_for_dim(mat.shape[0])


@dataclass(frozen=True)
class ReadoutSpec:
    """Read-out rotation applied before the J_z measurement.

    The default, a pi/2 rotation about x, turns the number-difference
    measurement into an effective measurement of J_y.
    """

    axis: SpinAxis = X_AXIS
    angle: float = np.pi / 2

    def unitary(self, space: SpinSpace) -> np.ndarray:
        return rotation(space, self.angle, self.axis)


def trivial_readout() -> ReadoutSpec:
    return ReadoutSpec(angle=0.0)


@dataclass(frozen=True)
class JzDistribution:
    """Probabilities over the J_z lattice m = -j ... +j."""

    space: SpinSpace
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (self.space.dim,):
            raise ValueError(f"expected {self.space.dim} probabilities, got {p.shape}")
        if p.min() < PROB_FLOOR:
            raise NumericalInvariantError(f"probability {p.min():.3e} below round-off floor")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > 1e-9:
            raise NumericalInvariantError(f"probabilities sum to {p.sum():.12f}, not 1")
        object.__setattr__(self, "probs", p)

    @property
    def m_values(self) -> np.ndarray:
        return self.space.m_values

    def mean(self) -> float:
        return float(np.dot(self.probs, self.m_values))

    def std(self) -> float:
        mu = self.mean()
        var = float(np.dot(self.probs, (self.m_values - mu) ** 2))
        return float(np.sqrt(max(var, 0.0)))


def protocol_distribution(
    rho: np.ndarray,
    psi: float,
    encoding_axis: SpinAxis,
    readout: ReadoutSpec,
) -> JzDistribution:
    """Outcome distribution of the full protocol at encoded phase psi."""
    space = _space_of(rho)
    rho_psi = rho
    if psi != 0.0:
        u = rotation(space, psi, encoding_axis)
        rho_psi = u.conj().T @ rho @ u  # rho -> U^dag rho U
    u_r = readout.unitary(space)
    p = np.real(np.einsum("im,ij,jm->m", u_r.conj(), rho_psi, u_r, optimize=True))
    return JzDistribution(space, p)


def jz_distribution(rho: np.ndarray) -> JzDistribution:
    """Diagonal of rho in the Dicke basis: counting statistics of J_z."""
    space = _space_of(rho)
    return JzDistribution(space, np.real(np.diag(rho)))


def statistical_uncertainty(dist: JzDistribution) -> float:
    """Delta_s, the standard deviation of the counting distribution."""
    return dist.std()


@dataclass(frozen=True)
class CatSplit:
    """Dead/alive decomposition of a counting distribution at its mean.

    The bin sitting exactly at the mean (when the mean lands on a lattice
    value) belongs to neither side.  Lambda is reported as the non-negative
    separation |<J_z>_R - <J_z>_L|; a side with zero weight makes the split
    degenerate and Lambda is 0.
    """

    mean: float
    p_left: np.ndarray
    p_right: np.ndarray
    n_left: float
    n_right: float
    extensive_difference: float
    peak_width_left: float
    peak_width_right: float
    degenerate: bool


def cat_split(dist: JzDistribution) -> CatSplit:
    m = dist.m_values
    p = dist.probs
    mu = dist.mean()
    left = m < mu
    right = m > mu
    # exclude a bin exactly at the mean from both sides (strict step function)
    at_mean = np.abs(m - mu) <= 1e-9 * max(1.0, abs(mu))
    left &= ~at_mean
    right &= ~at_mean
    n_l = float(p[left].sum())
    n_r = float(p[right].sum())
    if n_l <= 0.0 or n_r <= 0.0:
        zeros = np.zeros_like(p)
        return CatSplit(mu, zeros, zeros, n_l, n_r, 0.0, 0.0, 0.0, True)
    p_l = np.where(left, p, 0.0) / n_l
    p_r = np.where(right, p, 0.0) / n_r
    mean_l = float(np.dot(p_l, m))
    mean_r = float(np.dot(p_r, m))
    width_l = float(np.sqrt(max(np.dot(p_l, (m - mean_l) ** 2), 0.0)))
    width_r = float(np.sqrt(max(np.dot(p_r, (m - mean_r) ** 2), 0.0)))
    return CatSplit(mu, p_l, p_r, n_l, n_r, abs(mean_r - mean_l), width_l, width_r, False)


def qfi(rho: np.ndarray, generator: np.ndarray) -> float:
    """Quantum Fisher information of rho for phase encoding by the generator.

    Spectral formula over the eigenpairs of rho; pairs with combined weight
    below 1e-12 are skipped.  Equals 4 Var(generator) for pure states.
    """
    if rho.shape != generator.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {generator.shape}")
    dec = state_eigensystem(rho)
    p = dec.values
    g = dec.vectors.conj().T @ generator @ dec.vectors
    num = (p[:, None] - p[None, :]) ** 2
    den = p[:, None] + p[None, :]
    weights = np.zeros_like(num)
    mask = den > WEIGHT_CUTOFF
    weights[mask] = num[mask] / den[mask]
    return float(2.0 * np.sum(weights * np.abs(g) ** 2))


def _readout_frame_diag(mat: np.ndarray, u_r: np.ndarray) -> np.ndarray:
    """Diagonal of U_r^dag M U_r, i.e. <r| M |r> over the read-out basis."""
    return np.einsum("im,ij,jm->m", u_r.conj(), mat, u_r, optimize=True)


def cfi_commutator(rho: np.ndarray, generator: np.ndarray, readout: ReadoutSpec) -> float:
    """Classical Fisher information at psi = 0 from the exact derivative.

    d p_r / d psi = <r| i [generator, rho] |r>, so no finite phase step is
    needed; bins with p_r below 1e-12 are skipped.
    """
    if rho.shape != generator.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {generator.shape}")
    space = _space_of(rho)
    u_r = readout.unitary(space)
    p = np.real(_readout_frame_diag(rho, u_r))
    drho = 1j * (generator @ rho - rho @ generator)
    dp = np.real(_readout_frame_diag(drho, u_r))
    mask = p > WEIGHT_CUTOFF
    return float(np.sum(dp[mask] ** 2 / p[mask]))


def cfi_finite_difference(
    rho: np.ndarray,
    encoding_axis: SpinAxis,
    readout: ReadoutSpec,
    delta: float = 1e-4,
) -> float:
    """CFI estimated the way an experiment would: central differences at +/- delta.

    Matches cfi_commutator to O(delta^2); the default delta = 1e-4 rad keeps
    the quadratic error at the 1e-8 level.
    """
    if not (np.isfinite(delta) and delta > 0):
        raise ValueError(f"delta must be > 0, got {delta}")
    p_plus = protocol_distribution(rho, +delta, encoding_axis, readout).probs
    p_minus = protocol_distribution(rho, -delta, encoding_axis, readout).probs
    p_zero = protocol_distribution(rho, 0.0, encoding_axis, readout).probs
    dp = (p_plus - p_minus) / (2.0 * delta)
    mask = p_zero > WEIGHT_CUTOFF
    return float(np.sum(dp[mask] ** 2 / p_zero[mask]))


@dataclass(frozen=True)
class MetrologyReport:
    """All indefiniteness measures of one prepared state, for one read-out.

    delta_s: statistical uncertainty of the generator's counting distribution.
    delta_q: convex uncertainty sqrt(F_q)/2, the decomposition-optimized floor.
    r_q, r_c: quality of indefiniteness and its measured lower bound.
    lam: extensive difference of the split distribution.
    n_eff_bound: F_q / (4N), the macroscopicity bound from this generator.
    degenerate: True when delta_s = 0 and the ratios are undefined.
    """

    delta_s: float
    f_q: float
    delta_q: float
    f_c: float
    r_q: float
    r_c: float
    lam: float
    reduced_lambda_q: float
    reduced_lambda_c: float
    n_eff_bound: float
    degenerate: bool = False

    def __post_init__(self):
        if self.degenerate:
            return
        if not (-1e-9 <= self.r_c <= self.r_q <= 1.0 + 1e-9):
            raise NumericalInvariantError(
                f"Fisher chain violated: r_c = {self.r_c}, r_q = {self.r_q}"
            )
        if self.f_c > self.f_q * (1.0 + 1e-6) + 1e-12:
            raise NumericalInvariantError(f"F_c = {self.f_c} exceeds F_q = {self.f_q}")


def metrology_report(
    rho: np.ndarray,
    generator: np.ndarray | None = None,
    readout: ReadoutSpec | None = None,
) -> MetrologyReport:
    """Assemble the full report; defaults measure J_z indefiniteness via J_y."""
    space = _space_of(rho)
    if generator is None:
        generator = space.jz
    if readout is None:
        readout = ReadoutSpec()
    off_diag = generator - np.diag(np.diag(generator))
    if np.abs(off_diag).max() == 0.0 and np.abs(
        np.real(np.diag(generator)) - space.m_values
    ).max() <= 1e-9:
        dist = jz_distribution(rho)
    else:
        dist = _generator_distribution(rho, generator)
    delta_s = statistical_uncertainty(dist)
    split = cat_split(dist)
    f_q = qfi(rho, generator)
    f_c = cfi_commutator(rho, generator, readout)
    delta_q = 0.5 * np.sqrt(f_q)
    n_eff_bound = f_q / (4.0 * space.n_particles)
    if delta_s == 0.0:
        return MetrologyReport(
            delta_s, f_q, delta_q, f_c, np.nan, np.nan, split.extensive_difference,
            np.nan, np.nan, n_eff_bound, degenerate=True,
        )
    r_q = delta_q / delta_s
    r_c = 0.5 * np.sqrt(f_c) / delta_s
    lam = split.extensive_difference
    return MetrologyReport(
        delta_s, f_q, delta_q, f_c, r_q, r_c, lam, lam * r_q, lam * r_c, n_eff_bound,
    )


def _generator_distribution(rho: np.ndarray, generator: np.ndarray) -> JzDistribution:
    """Counting distribution of an arbitrary spin-projection generator.

    Valid for generators unitarily equivalent to J_z (any axis projection):
    the eigenbasis plays the role of the Dicke lattice.
    """
    space = _space_of(rho)
    w, v = np.linalg.eigh(generator)
    if np.abs(w - space.m_values).max() > 1e-6:
        raise ValueError("generator spectrum is not the J_z lattice; use an axis projection")
    p = np.real(np.einsum("im,ij,jm->m", v.conj(), rho, v, optimize=True))
    return JzDistribution(space, p)


@dataclass(frozen=True)
class AxisMap:
    """F_q(rho, J(theta, phi)) / (4N) sampled on an axis grid."""

    theta_values: np.ndarray
    phi_values: np.ndarray
    values: np.ndarray  # shape (n_theta, n_phi)
    argmax_axis: SpinAxis
    max_value: float


def qfi_quadratic_form(rho: np.ndarray) -> np.ndarray:
    """3x3 real symmetric M with F_q(rho, J(u)) = u^T M u, u = (z, x, y) axis.

    Because the QFI is quadratic in the generator and J(theta, phi) is a
    fixed linear combination of (J_z, J_x, J_y), one eigendecomposition of
    rho determines the whole axis map exactly.
    """
    space = _space_of(rho)
    dec = state_eigensystem(rho)
    p = dec.values
    comps = [dec.vectors.conj().T @ g @ dec.vectors for g in (space.jz, space.jx, space.jy)]
    num = (p[:, None] - p[None, :]) ** 2
    den = p[:, None] + p[None, :]
    weights = np.zeros_like(num)
    mask = den > WEIGHT_CUTOFF
    weights[mask] = num[mask] / den[mask]
    m_form = np.empty((3, 3))
    for a in range(3):
        for b in range(a, 3):
            val = 2.0 * float(np.sum(weights * (comps[a] * comps[b].conj())).real)
            m_form[a, b] = m_form[b, a] = val
    return m_form


def qfi_axis_map(
    rho: np.ndarray,
    theta_grid: np.ndarray,
    phi_grid: np.ndarray,
) -> AxisMap:
    """Evaluate F_q / (4N) over the axis grid, reusing one spectral decomposition."""
    theta_grid = np.asarray(theta_grid, dtype=float)
    phi_grid = np.asarray(phi_grid, dtype=float)
    if theta_grid.size == 0 or phi_grid.size == 0:
        raise ValueError("axis grids must be non-empty")
    space = _space_of(rho)
    m_form = qfi_quadratic_form(rho)
    th = theta_grid[:, None]
    ph = phi_grid[None, :]
    u = np.stack(
        [
            np.broadcast_to(np.cos(th), (theta_grid.size, phi_grid.size)),
            np.sin(th) * np.cos(ph),
            np.sin(th) * np.sin(ph),
        ]
    )
    f = np.einsum("aij,ab,bij->ij", u, m_form, u, optimize=True)
    values = f / (4.0 * space.n_particles)
    i, k = np.unravel_index(int(values.argmax()), values.shape)
    return AxisMap(
        theta_grid, phi_grid, values, SpinAxis(theta_grid[i], phi_grid[k]), float(values[i, k])
    )


def default_axis_grids(n_theta: int = 64, n_phi: int = 128) -> tuple[np.ndarray, np.ndarray]:
    """Default map resolution; resolves the equatorial band below 3 degrees."""
    return np.linspace(0.0, np.pi, n_theta), np.linspace(-np.pi, np.pi, n_phi, endpoint=False)


def n_eff(
    rho: np.ndarray,
    theta_grid: np.ndarray | None = None,
    phi_grid: np.ndarray | None = None,
) -> tuple[float, SpinAxis]:
    """Macroscopicity max_axis F_q / (4N) with the maximizing axis."""
    if theta_grid is None or phi_grid is None:
        dth, dph = default_axis_grids()
        theta_grid = dth if theta_grid is None else theta_grid
        phi_grid = dph if phi_grid is None else phi_grid
    amap = qfi_axis_map(rho, theta_grid, phi_grid)
    return amap.max_value, amap.argmax_axis
