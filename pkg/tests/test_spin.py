import numpy as np
import pytest

from catlab import (
    SpinAxis,
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
from catlab.spin import assert_density_matrix, canonicalize_angles, spectral_decomp

from conftest import random_density


def test_make_space_dimensions():
    sp = make_space(200)
    assert sp.dim == 201
    assert sp.j == 100
    small = make_space(2)
    assert small.dim == 3
    assert small.j == 1


@pytest.mark.parametrize("bad", [3, 0, -2, 1])
def test_make_space_rejects_bad_n(bad):
    with pytest.raises(ValueError):
        make_space(bad)


def test_cartesian_ops_spin_one():
    sp = make_space(2)
    jz, jx, jy = cartesian_ops(sp)
    assert np.allclose(np.diag(jz), [-1, 0, 1])
    # <0| J+ |-1> = sqrt(2) sits one row below the diagonal in ascending order
    assert abs(sp.jplus[1, 0] - np.sqrt(2)) < 1e-12


@pytest.mark.parametrize("n", [2, 6, 20, 200])
def test_su2_algebra(n):
    sp = make_space(n)
    jz, jx, jy = cartesian_ops(sp)
    for a, b, c in [(jx, jy, jz), (jy, jz, jx), (jz, jx, jy)]:
        comm = a @ b - b @ a - 1j * c
        assert np.abs(comm).max() < 1e-9
    casimir = jx @ jx + jy @ jy + jz @ jz
    assert np.abs(casimir - sp.j * (sp.j + 1) * np.eye(sp.dim)).max() < 1e-8


def test_axis_op_special_directions():
    sp = make_space(8)
    assert np.abs(axis_op(sp, SpinAxis(0.0, 0.7)) - sp.jz).max() < 1e-12
    assert np.abs(axis_op(sp, X_AXIS) - sp.jx).max() < 1e-12
    assert np.abs(axis_op(sp, Y_AXIS) - sp.jy).max() < 1e-12


def test_axis_op_spectrum_is_jz_ladder():
    sp = make_space(20)
    rng = np.random.default_rng(3)
    for _ in range(10):
        ax = SpinAxis(rng.uniform(0, np.pi), rng.uniform(-np.pi, np.pi))
        w = np.linalg.eigvalsh(axis_op(sp, ax))
        assert np.abs(w - sp.m_values).max() < 1e-8


def test_canonicalize_angles_ranges_and_direction():
    rng = np.random.default_rng(11)
    for _ in range(200):
        th_raw = rng.uniform(-8, 8)
        ph_raw = rng.uniform(-8, 8)
        th, ph = canonicalize_angles(th_raw, ph_raw)
        assert 0 <= th <= np.pi
        assert -np.pi <= ph < np.pi
        raw_vec = np.array(
            [
                np.cos(th_raw),
                np.sin(th_raw) * np.cos(ph_raw),
                np.sin(th_raw) * np.sin(ph_raw),
            ]
        )
        assert np.abs(SpinAxis(th_raw, ph_raw).unit_vector() - raw_vec).max() < 1e-12


def test_rotation_identities():
    sp = make_space(6)
    assert np.abs(rotation(sp, 0.0, X_AXIS) - np.eye(sp.dim)).max() < 1e-12
    # integer spin: a full turn about any axis is the identity
    ax = SpinAxis(1.1, -2.0)
    assert np.abs(rotation(sp, 2 * np.pi, ax) - np.eye(sp.dim)).max() < 1e-8


def test_readout_rotation_maps_jz_to_jy():
    sp = make_space(10)
    u = rotation(sp, np.pi / 2, X_AXIS)
    conjugated = u.conj().T @ sp.jz @ u
    assert np.abs(conjugated - sp.jy).max() < 1e-9


def test_thermal_state_infinite_temperature():
    sp = make_space(10)
    rho = thermal_state(sp, 0.0, 0.3, 1.0)
    assert np.abs(rho - np.eye(sp.dim) / sp.dim).max() < 1e-12


def test_thermal_state_zero_temperature_proxy():
    sp = make_space(40)
    ax = SpinAxis(np.arccos(0.3), -1.2)
    rho = thermal_state(sp, 50.0, 0.3, -1.2)
    # independent oracle: projector onto the top eigenvector of the axis op
    w, v = np.linalg.eigh(axis_op(sp, ax))
    top = v[:, -1]
    fidelity = np.real(top.conj() @ rho @ top)
    assert fidelity > 0.999


def test_thermal_state_rejects_bad_inputs():
    sp = make_space(4)
    with pytest.raises(ValueError):
        thermal_state(sp, 1.0, 1.5, 0.0)
    with pytest.raises(ValueError):
        thermal_state(sp, -0.5, 0.0, 0.0)


def test_thermal_state_commutes_with_axis_op():
    sp = make_space(16)
    rho = thermal_state(sp, 0.7, -0.4, 2.0)
    a = axis_op(sp, SpinAxis(np.arccos(-0.4), 2.0))
    comm = rho @ a - a @ rho
    assert np.abs(comm).max() < 1e-9


def test_thermal_state_rotation_covariance():
    # rho(beta, z, phi) equals the z-polar thermal state conjugated by the
    # rotation that carries the z axis onto (acos z, phi)
    sp = make_space(14)
    rng = np.random.default_rng(5)
    for _ in range(6):
        z = rng.uniform(-0.95, 0.95)
        phi = rng.uniform(-np.pi, np.pi)
        beta = rng.uniform(0.1, 3.0)
        theta = np.arccos(z)
        r = rotation(sp, theta, SpinAxis(np.pi / 2, phi + np.pi / 2))
        rho_pole = thermal_state(sp, beta, 1.0, 0.0)
        rho_direct = thermal_state(sp, beta, z, phi)
        assert np.abs(r @ rho_pole @ r.conj().T - rho_direct).max() < 1e-8


def test_expectation_and_variance():
    sp = make_space(100)
    rho_mixed = np.eye(sp.dim) / sp.dim
    assert abs(expectation(rho_mixed, sp.jz)) < 1e-12

    pole = coherent_state(sp, Z_AXIS)
    rho_pole = np.outer(pole, pole.conj())
    assert abs(expectation(rho_pole, sp.jz) - sp.j) < 1e-8
    assert variance(rho_pole, sp.jz) < 1e-8

    # transverse coherent state has the standard projection noise j/2
    side = coherent_state(sp, X_AXIS)
    rho_side = np.outer(side, side.conj())
    assert abs(variance(rho_side, sp.jz) - sp.j / 2) < 1e-8


def test_expectation_dimension_mismatch():
    a = make_space(4)
    b = make_space(6)
    with pytest.raises(ValueError):
        expectation(np.eye(a.dim) / a.dim, b.jz)


def test_state_constructors_pass_density_checks():
    rng = np.random.default_rng(9)
    sp = make_space(12)
    for _ in range(5):
        z = rng.uniform(-1, 1)
        phi = rng.uniform(-np.pi, np.pi)
        beta = rng.uniform(0, 5)
        assert_density_matrix(thermal_state(sp, beta, z, phi))
    assert_density_matrix(random_density(rng, sp.dim))


def test_spectral_decomp_reconstruction():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    a = (a + a.conj().T) / 2
    dec = spectral_decomp(a)
    recon = (dec.vectors * dec.values) @ dec.vectors.conj().T
    assert np.abs(recon - a).max() < 1e-8 * np.abs(a).max()
    gram = dec.vectors.conj().T @ dec.vectors
    assert np.abs(gram - np.eye(9)).max() < 1e-9
