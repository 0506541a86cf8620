import math

import numpy as np
import pytest

from gateselftest import (
    BlochAffine,
    DensityMatrix,
    affine_of_channel,
    from_bloch,
    from_unitary,
    hadamard,
    power,
    rotation_gate,
    rotation_unitary,
    to_bloch,
    z_k,
    zeta,
)
from gateselftest.channel import NoiseModel, apply_noise, identity

from helpers import random_cptp


def random_ball_vector(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * rng.uniform(0.0, 1.0)


def test_roundtrip():
    rng = np.random.default_rng(10)
    for _ in range(100):
        v = random_ball_vector(rng)
        assert np.abs(to_bloch(from_bloch(v)) - v).max() <= 1e-12


def test_axis_states_map_to_axis_vectors():
    assert np.allclose(to_bloch(zeta("x", +1)), [1, 0, 0])
    assert np.allclose(to_bloch(zeta("y", -1)), [0, -1, 0])
    assert np.allclose(to_bloch(zeta("z", +1)), [0, 0, 1])


def test_y_axis_coherence_sign():
    # (0, 1, 0) is the state with coherence <1|rho|0> = +i/2
    rho = from_bloch([0.0, 1.0, 0.0])
    assert rho.matrix[1, 0] == pytest.approx(0.5j)
    assert rho.matrix[0, 1] == pytest.approx(-0.5j)


def test_ball_membership_enforced():
    with pytest.raises(ValueError):
        from_bloch([1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        from_bloch([0.0, 1.0])
    # unit vectors (pure states) are fine
    assert from_bloch([0.0, 0.0, 1.0]).is_pure()


def test_rotation_unitary_is_unitary():
    rng = np.random.default_rng(11)
    for _ in range(20):
        u = rotation_unitary(*rng.uniform(0.0, 2.0 * math.pi, size=3))
        assert np.abs(u.conj().T @ u - np.eye(2)).max() <= 1e-12


def test_rotation_unitary_eigenstructure():
    alpha, theta, phi = 1.3, 0.8, 2.1
    u = rotation_unitary(alpha, theta, phi)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    psi = np.array([c, np.exp(1j * phi) * s])
    perp = np.array([s, -np.exp(1j * phi) * c])
    assert np.abs(u @ psi - psi).max() <= 1e-12
    assert np.abs(u @ perp - np.exp(1j * alpha) * perp).max() <= 1e-12


def test_theta_zero_is_phase_gate():
    alpha = 0.9
    for phi in (0.0, 1.0, -2.5):
        u = rotation_unitary(alpha, 0.0, phi)
        assert np.abs(u - np.diag([1.0, np.exp(1j * alpha)])).max() <= 1e-12


def test_pi_rotations_are_involutions():
    for theta, phi in ((math.pi / 4, 0.3), (math.pi / 2, 1.7)):
        u = rotation_unitary(math.pi, theta, phi)
        assert np.abs(u @ u - np.eye(2)).max() <= 1e-12


def test_same_axis_rotations_compose_additively():
    theta, phi = 1.1, 0.4
    u = rotation_unitary(0.7, theta, phi) @ rotation_unitary(0.5, theta, phi)
    assert np.abs(u - rotation_unitary(1.2, theta, phi)).max() <= 1e-12


def test_affine_of_rotation_is_special_orthogonal():
    rng = np.random.default_rng(12)
    for _ in range(30):
        alpha, theta, phi = rng.uniform(0.0, 2.0 * math.pi, size=3)
        affine = affine_of_channel(rotation_gate(alpha, theta, phi))
        assert affine.is_rotation(1e-10)
        assert np.abs(affine.offset).max() <= 1e-12


def test_affine_matches_channel_action():
    rng = np.random.default_rng(13)
    for _ in range(20):
        g = random_cptp(rng, n=1)
        affine = affine_of_channel(g)
        v = random_ball_vector(rng)
        direct = to_bloch(g.apply(from_bloch(v)))
        assert np.abs(affine(v) - direct).max() <= 1e-10


def test_affine_of_depolarizing_shrinks_uniformly():
    lam = 0.3
    g = apply_noise(identity(1), NoiseModel("depolarize", lam))
    affine = affine_of_channel(g)
    assert np.abs(affine.linear - (1.0 - lam) * np.eye(3)).max() <= 1e-12
    assert np.abs(affine.offset).max() <= 1e-12


def test_rotation_height_trajectory():
    # z-coordinate after k rotations of |0> follows the closed form z_k
    rng = np.random.default_rng(14)
    zero = DensityMatrix.basis("0")
    for _ in range(5):
        alpha = rng.uniform(0.1, 2.0 * math.pi)
        theta = rng.uniform(0.05, math.pi / 2)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        gate = rotation_gate(alpha, theta, phi)
        for k in range(13):
            z = to_bloch(power(gate, k).apply(zero))[2]
            assert z == pytest.approx(z_k(alpha, theta, k), abs=1e-10)


def test_hadamard_bloch_action():
    # H_phi swaps the z+ pole with the phi-longitude equator point
    for phi in (0.0, 0.9):
        ball = to_bloch(hadamard(phi).apply(DensityMatrix.basis("0")))
        assert np.abs(ball - [math.cos(phi), math.sin(phi), 0.0]).max() <= 1e-12


def test_affine_validation():
    with pytest.raises(ValueError):
        BlochAffine(np.eye(2), np.zeros(3))
    with pytest.raises(ValueError):
        BlochAffine(np.eye(3), np.zeros(2))
    with pytest.raises(ValueError):
        affine_of_channel(identity(2))
    with pytest.raises(ValueError):
        to_bloch(DensityMatrix(np.eye(4) / 4.0))


def test_affine_call_applies_offset():
    affine = BlochAffine(0.5 * np.eye(3), [0.0, 0.0, 0.25])
    assert np.allclose(affine([0.0, 0.0, 1.0]), [0.0, 0.0, 0.75])
    assert not affine.is_rotation()


def test_unitary_channel_is_rotation_but_measurement_is_not():
    u = rotation_unitary(2.2, 0.6, 1.0)
    assert affine_of_channel(from_unitary(u)).is_rotation(1e-10)
    from gateselftest import measurement

    assert not affine_of_channel(measurement(1)).is_rotation(1e-10)
