import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boundbell import bell, qubits
from boundbell.qubits import (
    dur_state,
    expectation,
    ghz,
    mix_with_noise,
    product_projector,
)

angles = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)


def test_ghz_examples():
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(ghz(3, 0), [s, 0, 0, 0, 0, 0, 0, s], atol=1e-15)
    np.testing.assert_allclose(ghz(1, 0), [s, s], atol=1e-15)
    np.testing.assert_allclose(ghz(2, np.pi), [s, 0, 0, -s], atol=1e-15)


def test_ghz_rejects_bad_n():
    for n in (0, 13, 2.5):
        with pytest.raises(ValueError):
            ghz(n)


@given(alpha=angles)
def test_ghz_overlap(alpha):
    overlap = np.vdot(ghz(4, 0), ghz(4, alpha))
    assert abs(abs(overlap) ** 2 - np.cos(alpha / 2) ** 2) < 1e-12


# hand expansion for N=4: every listed entry is 1/(2(N+1)) = 1/10
DUR4_DIAGONAL = [0, 15, 8, 4, 2, 1, 7, 11, 13, 14]


def test_dur_state_n4_entrywise():
    rho = dur_state(4, 0.0)
    expected = np.zeros((16, 16), dtype=complex)
    for i in DUR4_DIAGONAL:
        expected[i, i] = 0.1
    expected[0, 15] = expected[15, 0] = 0.1
    np.testing.assert_allclose(rho, expected, atol=1e-15)
    assert abs(np.trace(rho) - 1) < 1e-12


def test_dur_state_phase():
    a = np.pi / 12
    rho = dur_state(4, a)
    assert abs(rho[0, 15] - 0.1 * np.exp(-1j * a)) < 1e-15
    assert abs(rho[15, 0] - 0.1 * np.exp(1j * a)) < 1e-15
    np.testing.assert_allclose(np.abs(rho), np.abs(dur_state(4, 0)), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 8), alpha=angles)
def test_dur_state_is_density_matrix(n, alpha):
    rho = dur_state(n, alpha)
    # at N=2 the single-excitation and single-hole projectors coincide
    expected_nonzero = 6 if n == 2 else 2 * n + 4
    assert np.count_nonzero(np.abs(rho) > 1e-15) == expected_nonzero
    qubits.check_density_matrix(rho)
    assert np.linalg.eigvalsh(rho).min() >= -1e-10


def test_dur_state_n2_doubles_the_overlapping_weights():
    rho = dur_state(2, 0.0)
    np.testing.assert_allclose(np.diag(rho).real, [1 / 6, 1 / 3, 1 / 3, 1 / 6], atol=1e-15)


def test_dur_state_needs_two_qubits():
    with pytest.raises(ValueError):
        dur_state(1)


def test_mix_with_noise_examples():
    rho = dur_state(4, 0.3)
    np.testing.assert_allclose(mix_with_noise(rho, 0.0), rho)
    np.testing.assert_allclose(mix_with_noise(rho, 1.0), np.eye(16) / 16, atol=1e-16)
    for v in (-0.1, 1.5):
        with pytest.raises(ValueError):
            mix_with_noise(rho, v)


def test_mix_with_noise_dur7():
    op = bell.bell_matrix_closed_form(7)
    sigma = mix_with_noise(dur_state(7, 0), 0.1)
    assert abs(expectation(op, sigma) - 0.9 * (-3) ** 7 / 16) < 1e-9


def _random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def _random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), v=st.floats(0, 1), n=st.integers(1, 4))
def test_mix_is_affine(seed, v, n):
    rng = np.random.default_rng(seed)
    op = _random_hermitian(rng, 2**n)
    rho = _random_density(rng, 2**n)
    lhs = expectation(op, mix_with_noise(rho, v))
    rhs = (1 - v) * expectation(op, rho) + v * expectation(op, qubits.maximally_mixed(n))
    assert abs(lhs - rhs) < 1e-10


def test_product_projector_examples():
    p = product_projector([0, 0, 0], [0.3, 1.0, 2.0])
    expected = np.zeros((8, 8))
    expected[0, 0] = 1
    np.testing.assert_allclose(p, expected, atol=1e-15)
    np.testing.assert_allclose(product_projector([np.pi / 4], [0]), 0.5 * np.ones((2, 2)), atol=1e-15)
    np.testing.assert_allclose(product_projector([np.pi / 4] * 2, [0, 0]), 0.25 * np.ones((4, 4)), atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(angles, angles), min_size=1, max_size=5))
def test_product_projector_is_rank_one_projector(pairs):
    thetas, phis = zip(*pairs)
    p = product_projector(thetas, phis)
    np.testing.assert_allclose(p @ p, p, atol=1e-10)
    assert abs(np.trace(p) - 1) < 1e-10


def test_expectation_examples():
    rng = np.random.default_rng(1)
    rho = _random_density(rng, 8)
    assert abs(expectation(np.eye(8), rho) - 1) < 1e-12
    for n in range(2, 8):
        value = expectation(bell.bell_matrix_closed_form(n), qubits.projector(ghz(n, 0)))
        assert abs(value - (-3) ** n / 2) < 1e-9
    alpha = 0.37
    op = bell.rotate_operator(bell.bell_matrix_closed_form(7), alpha, 7)
    assert abs(expectation(op, dur_state(7, alpha)) - (-2187 / 16)) < 1e-9


def test_expectation_errors():
    with pytest.raises(ValueError):
        expectation(np.eye(4), np.eye(8) / 8)
    with pytest.raises(ValueError):
        expectation(np.array([[0, 1], [0, 0]]), np.eye(2) / 2)


def test_hermitize():
    a = np.array([[1, 2 + 1e-13], [2, 3]], dtype=complex)
    h = qubits.hermitize(a)
    np.testing.assert_array_equal(h, h.conj().T)
    with pytest.raises(ValueError):
        qubits.hermitize(np.array([[0, 1], [0, 0]]))


def test_matrix_json_round_trip():
    rho = dur_state(3, 0.4)
    text = qubits.matrix_to_json(rho)
    data = json.loads(text)
    assert data["dim"] == 8 and len(data["entries"]) == 64
    np.testing.assert_array_equal(qubits.matrix_from_json(text), rho)


def test_basis_convention():
    # |l_1 ... l_N> with the first qubit most significant
    assert qubits.single_excitations(4) == [8, 4, 2, 1]
    psi = qubits.product_state([np.pi / 2, 0, 0], [0, 0, 0])
    assert abs(psi[4]) == pytest.approx(1)
