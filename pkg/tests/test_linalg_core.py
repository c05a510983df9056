import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellviol.bell_ops import MeasurementSettings, build_bell3
from bellviol.linalg_core import (
    I2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    TAU_EIG,
    TAU_HERM,
    Direction,
    InvalidInputError,
    basis_index,
    basis_pattern,
    basis_vector,
    canonical_angle,
    commutator,
    eigh,
    expectation,
    jacobi_eigh,
    pauli_direction,
    pauli_planar,
    spin_table,
    tensor,
)

angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def random_hermitian(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


# --- Pauli operators ---------------------------------------------------------

def test_pauli_direction_axes():
    np.testing.assert_array_equal(pauli_direction(Direction(0, 0, 1)), [[1, 0], [0, -1]])
    np.testing.assert_array_equal(pauli_direction(Direction(1, 0, 0)), [[0, 1], [1, 0]])


def test_pauli_direction_planar_pi_over_3():
    # n = (1/2, sqrt(3)/2, 0): n_x sx + n_y sy = [[0, 1/2 - i sqrt3/2], [1/2 + i sqrt3/2, 0]]
    expected = np.array([[0, 0.5 - 0.5j * math.sqrt(3)], [0.5 + 0.5j * math.sqrt(3), 0]])
    got = pauli_direction(Direction.planar(math.pi / 3))
    np.testing.assert_allclose(got, expected, atol=1e-15)


def test_pauli_direction_rejects_non_unit():
    with pytest.raises(InvalidInputError):
        pauli_direction((1.0, 1.0, 0.0))
    with pytest.raises(InvalidInputError):
        Direction(0.0, 0.0, 1.0 + 1e-9)


def test_pauli_direction_hermitian_traceless_unit_spectrum():
    rng = np.random.default_rng(3)
    for _ in range(20):
        d = Direction.normalized(*rng.normal(size=3))
        s = pauli_direction(d)
        assert np.allclose(s, s.conj().T)
        assert abs(np.trace(s)) < 1e-15
        np.testing.assert_allclose(np.linalg.eigvalsh(s), [-1, 1], atol=1e-14)


@pytest.mark.parametrize(
    "phi, expected",
    [
        (0.0, SIGMA_X),
        (math.pi / 2, SIGMA_Y),
        (math.pi / 4, np.array([[0, (1 - 1j) / math.sqrt(2)], [(1 + 1j) / math.sqrt(2), 0]])),
    ],
)
def test_pauli_planar_examples(phi, expected):
    np.testing.assert_allclose(pauli_planar(phi), expected, atol=1e-15)


@settings(max_examples=100)
@given(angles)
def test_pauli_planar_squares_to_identity(phi):
    s = pauli_planar(phi)
    np.testing.assert_allclose(s @ s, I2, atol=TAU_HERM)
    np.testing.assert_allclose(s, pauli_direction(Direction.planar(phi)), atol=1e-15)


# --- tensor / commutator -----------------------------------------------------

def test_tensor_examples():
    np.testing.assert_array_equal(tensor(I2, I2), np.eye(4))
    up_down = basis_vector((1, -1))
    zz = tensor(SIGMA_Z, SIGMA_Z)
    np.testing.assert_array_equal(zz @ up_down, -up_down)
    np.testing.assert_array_equal(
        tensor(SIGMA_X, SIGMA_X, SIGMA_X) @ basis_vector((1, 1, 1)), basis_vector((-1, -1, -1))
    )


def test_tensor_particle_one_is_most_significant():
    # sigma_z on particle 1 only: sign follows the leading bit
    op = tensor(SIGMA_Z, I2, I2)
    assert np.array_equal(np.diag(op).real, [1, 1, 1, 1, -1, -1, -1, -1])


@settings(max_examples=30)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_tensor_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.integers(-3, 4, size=(2, 2)) + 1j * rng.integers(-3, 4, size=(2, 2)) for _ in range(3))
    np.testing.assert_array_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))


def test_commutator_examples():
    np.testing.assert_allclose(commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z)
    a = random_hermitian(4, np.random.default_rng(0))
    np.testing.assert_array_equal(commutator(a, a), np.zeros((4, 4)))
    with pytest.raises(InvalidInputError):
        commutator(I2, np.eye(4))


@settings(max_examples=100)
@given(angles, angles)
def test_planar_commutator_is_sine_times_sigma_z(phi, phi_p):
    c = commutator(pauli_planar(phi), pauli_planar(phi_p))
    np.testing.assert_allclose(c, 2j * math.sin(phi_p - phi) * SIGMA_Z, atol=TAU_HERM)


# --- eigensolvers ------------------------------------------------------------

@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eigh_sigma_z(method):
    w, v = eigh(SIGMA_Z, method=method)
    np.testing.assert_allclose(w, [-1, 1])
    np.testing.assert_allclose(np.abs(v), [[0, 1], [1, 0]], atol=1e-15)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eigh_bell_operator_extremes(method):
    b = build_bell3(MeasurementSettings.from_theta([math.pi / 2] * 3))
    w, _ = eigh(b, method=method)
    assert abs(w[0] + 4) < 1e-12 and abs(w[-1] - 4) < 1e-12


@pytest.mark.parametrize("dim", [2, 3, 4, 8, 16, 32])
def test_jacobi_matches_lapack_and_reconstructs(dim):
    rng = np.random.default_rng(dim)
    h = random_hermitian(dim, rng)
    scale = np.max(np.abs(h))
    w, v = jacobi_eigh(h)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=TAU_EIG * scale)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, h, atol=10 * TAU_EIG * scale)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(dim), atol=TAU_EIG)
    assert np.max(np.abs(h @ v - v * w)) <= TAU_EIG * dim * scale


def test_jacobi_handles_degenerate_spectrum():
    b = build_bell3(MeasurementSettings.from_theta([math.pi / 2] * 3))
    w, v = jacobi_eigh(b)
    np.testing.assert_allclose(w, [-4, 0, 0, 0, 0, 0, 0, 4], atol=1e-12)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(8), atol=1e-12)
    np.testing.assert_allclose(b @ v, v * w, atol=1e-12)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(InvalidInputError):
        eigh(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(InvalidInputError):
        eigh(np.ones((2, 3)))
    with pytest.raises(InvalidInputError):
        eigh(SIGMA_Z, method="qr")


# --- expectation -------------------------------------------------------------

def test_expectation_examples():
    assert expectation(SIGMA_Z, basis_vector((1,))) == 1.0
    val, imag = expectation(SIGMA_Y, np.array([1, 1j]) / math.sqrt(2), return_imag=True)
    assert abs(val - 1) < 1e-15 and abs(imag) < 1e-15


def test_expectation_product_state_oracle():
    # |+x>^3: every row with a sigma_y factor averages to zero, the all-sigma_x row gives 1
    b = build_bell3(MeasurementSettings.from_theta([math.pi / 2] * 3))
    plus = tensor(*([np.array([1, 1]) / math.sqrt(2)] * 3))
    assert abs(expectation(b, plus) - (-1.0)) < 1e-14


def test_expectation_errors():
    with pytest.raises(InvalidInputError):
        expectation(np.eye(4), basis_vector((1,)))
    with pytest.raises(InvalidInputError):
        expectation(SIGMA_Z, np.array([1.0, 1.0]))


# --- conventions -------------------------------------------------------------

@pytest.mark.parametrize(
    "phi, expected",
    [(0.0, 0.0), (math.pi, math.pi), (-math.pi, math.pi), (3 * math.pi, math.pi), (2 * math.pi + 0.5, 0.5)],
)
def test_canonical_angle(phi, expected):
    assert canonical_angle(phi) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=100)
@given(angles)
def test_canonical_angle_range(phi):
    c = canonical_angle(phi)
    assert -math.pi < c <= math.pi
    assert abs(math.remainder(c - phi, 2 * math.pi)) < 1e-12


def test_canonical_angle_rejects_nan():
    with pytest.raises(InvalidInputError):
        canonical_angle(float("nan"))


def test_basis_labels_round_trip():
    assert basis_index((1, 1, 1)) == 0
    assert basis_index((-1, -1, -1)) == 7
    assert basis_index((1, 1, -1)) == 1
    for n in range(1, 6):
        table = spin_table(n)
        for k in range(1 << n):
            assert basis_index(basis_pattern(k, n)) == k
            assert tuple(table[k]) == basis_pattern(k, n)
    with pytest.raises(InvalidInputError):
        basis_index((1, 0))
