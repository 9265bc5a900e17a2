import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boundbell import bell
from boundbell.qubits import dur_state, expectation, ghz, maximally_mixed, mix_with_noise, projector

SQ2 = np.sqrt(2)


def test_setting_unitary_examples():
    np.testing.assert_allclose(bell.setting_unitary(0), np.array([[1, 1], [1, -1]]) / SQ2, atol=1e-15)
    np.testing.assert_allclose(bell.setting_unitary(np.pi), np.array([[1, 1], [-1, 1]]) / SQ2, atol=1e-15)


@given(st.floats(-10, 10, allow_nan=False))
def test_setting_unitary_is_unitary(phi):
    u = bell.setting_unitary(phi)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-12)


@given(st.floats(-10, 10, allow_nan=False))
def test_projector_pair(phi):
    p0, p1 = bell.projector_pair(phi)
    np.testing.assert_allclose(p0 + p1, np.eye(2), atol=1e-12)
    for p in (p0, p1):
        np.testing.assert_allclose(p @ p, p, atol=1e-12)
        assert abs(np.trace(p) - 1) < 1e-12


def test_projector_pair_phi0():
    # U(0)|0> = (|0> + |1>)/sqrt(2)
    p0, _ = bell.projector_pair(0.0)
    np.testing.assert_allclose(p0, 0.5 * np.ones((2, 2)), atol=1e-15)


def test_outcome_values():
    # outcome 0 is worth -1 and outcome 1 is worth +1
    np.testing.assert_array_equal(bell.OUTCOME_VALUES, [-1, 1])
    p0, p1 = bell.projector_pair(0.4)
    np.testing.assert_allclose(bell.setting_observable(0.4), p1 - p0)


def test_default_phases():
    table = bell.default_phases(4)
    np.testing.assert_allclose(table[0], [np.pi / 6, np.pi / 2, 5 * np.pi / 6])
    for row in table[1:]:
        np.testing.assert_allclose(row, [0, np.pi / 3, 2 * np.pi / 3])


def test_coefficient_tensor_values():
    for n in range(1, 6):
        c = bell.coefficient_tensor(n)
        allowed = np.array([0, 0.5, -0.5, np.sqrt(3) / 2, -np.sqrt(3) / 2, 1, -1])
        assert np.all(np.min(np.abs(c.ravel()[:, None] - allowed[None, :]), axis=1) < 1e-12)
    c = bell.coefficient_tensor(3)
    table = bell.default_phases(3)
    for ks in itertools.product(range(3), repeat=3):
        assert abs(c[ks] - np.cos(sum(table[i, k] for i, k in enumerate(ks)))) < 1e-12


def test_correlation_product_state():
    rho = np.zeros((4, 4))
    rho[0, 0] = 1
    for choices in itertools.product((1, 2, 3), repeat=2):
        table = bell.default_phases(2)
        singles = [
            np.real(np.trace(np.diag([1, 0]) @ bell.setting_observable(table[i, k - 1])))
            for i, k in enumerate(choices)
        ]
        assert abs(bell.correlation(rho, choices) - np.prod(singles)) < 1e-12


def test_correlation_ghz():
    # Born rule by hand: E = Re(exp(-i(pi/6 + 0))) for the outcome convention in use
    value = bell.correlation(projector(ghz(2, 0)), (1, 1))
    assert abs(abs(value) - np.sqrt(3) / 2) < 1e-12
    assert abs(value - np.cos(np.pi / 6)) < 1e-12


def test_correlation_maximally_mixed():
    for choices in itertools.product((1, 2, 3), repeat=3):
        assert abs(bell.correlation(maximally_mixed(3), choices)) < 1e-12


def test_correlation_errors():
    with pytest.raises(ValueError):
        bell.correlation(maximally_mixed(2), (1, 4))
    with pytest.raises(ValueError):
        bell.correlation(maximally_mixed(2), (1,))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_assembly_matches_closed_form(n):
    op = bell.bell_operator_three(n)
    assert np.max(np.abs(op.matrix - bell.bell_matrix_closed_form(n))) < 1e-10
    assert op.classical_bound == pytest.approx(2 ** (n - 1) * np.sqrt(3))


def test_assembly_corner_values():
    assert bell.bell_operator_three(2).matrix[0, 3] == pytest.approx(4.5)
    assert bell.bell_operator_three(3).matrix[7, 0] == pytest.approx(-13.5)
    assert bell.classical_bound_three(7) == pytest.approx(110.851, abs=1e-3)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 3))
def test_operator_matches_correlation_sum(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    c = bell.coefficient_tensor(n)
    total = sum(
        c[ks] * bell.correlation(rho, tuple(k + 1 for k in ks))
        for ks in itertools.product(range(3), repeat=n)
    )
    assert abs(expectation(bell.bell_operator_three(n).matrix, rho) - total) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_spectrum(n):
    eig = np.linalg.eigvalsh(bell.bell_matrix_closed_form(n))
    half = 3**n / 2
    assert abs(eig[0] + half) < 1e-9 and abs(eig[-1] - half) < 1e-9
    assert np.all(np.abs(eig[1:-1]) < 1e-9)
    ratio = eig[-1] / bell.classical_bound_three(n)
    assert ratio == pytest.approx(3**n / (2**n * np.sqrt(3)))


def test_rotation_examples():
    op = bell.bell_operator_three(3)
    same = bell.rotate_operator(op, 0.0)
    np.testing.assert_allclose(same.matrix, op.matrix, atol=1e-14)
    rotated = bell.rotate_operator(op, 0.9)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(rotated.matrix), np.linalg.eigvalsh(op.matrix), atol=1e-10
    )
    assert rotated.matrix[0, 7] == pytest.approx(-13.5 * np.exp(-0.9j))
    with pytest.raises(ValueError):
        bell.rotate_operator(op, 0.1, n=4)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_alpha_invariance(n):
    base = bell.bell_matrix_closed_form(n)
    expected = (-3) ** n / (2 * (n + 1))
    for alpha in np.linspace(0, 2 * np.pi, 50):
        value = expectation(bell.rotate_operator(base, alpha, n), dur_state(n, alpha))
        assert abs(value - expected) < 1e-9


def _naive_bound(n):
    """Loop over every strategy tuple and every setting choice explicitly."""
    table = bell.default_phases(n)
    strategies = list(itertools.product((-1, 1), repeat=3))
    best = 0.0
    for joint in itertools.product(strategies, repeat=n):
        total = 0.0
        for ks in itertools.product(range(3), repeat=n):
            c = np.cos(sum(table[i, k] for i, k in enumerate(ks)))
            total += c * np.prod([joint[i][k] for i, k in enumerate(ks)])
        best = max(best, abs(total))
    return best


@pytest.mark.parametrize("n, expected", [(2, 2 * np.sqrt(3)), (3, 4 * np.sqrt(3))])
def test_enumeration_matches_naive_loop(n, expected):
    naive = _naive_bound(n)
    assert naive == pytest.approx(expected, abs=1e-9)
    assert bell.lhv_bound_enumeration(n) == pytest.approx(naive, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_enumeration_bound(n):
    assert abs(bell.lhv_bound_enumeration(n) - 2 ** (n - 1) * np.sqrt(3)) < 1e-9


def test_enumeration_cap():
    with pytest.raises(ValueError):
        bell.lhv_bound_enumeration(8)


def test_noise_threshold_three():
    assert bell.noise_threshold_three(7) == pytest.approx(0.18903, abs=5e-5)
    assert bell.noise_threshold_three(8) == pytest.approx(0.39178, abs=5e-5)
    assert bell.noise_threshold_three(6) == 0.0
    assert not bell.violates_three(6)
    assert bell.violates_three(7)


def test_noise_threshold_is_where_violation_stops():
    for n in (7, 8, 9):
        v = bell.noise_threshold_three(n)
        base = bell.bell_matrix_closed_form(n)
        for eps, violated in ((-1e-6, True), (1e-6, False)):
            value = expectation(base, mix_with_noise(dur_state(n, 0), v + eps))
            assert bool(abs(value) > bell.classical_bound_three(n)) is violated
