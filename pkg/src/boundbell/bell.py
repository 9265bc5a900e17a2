"""Three-setting Bell operators for N qubits.

Each observer chooses one of three projector pairs obtained by rotating the
computational basis with ``U(phi) = [[1, 1], [e^{i phi}, -e^{i phi}]] / sqrt(2)``.
Outcome 0 carries the value -1 and outcome 1 the value +1. The Bell
expression weights the correlation function of setting choice
``(k_1, ..., k_N)`` with ``cos(phi^1_{k_1} + ... + phi^N_{k_N})`` and its
local-realistic bound is ``2**(N-1) * sqrt(3)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .qubits import (
    check_qubit_count,
    hermitize,
    kron_all,
    local_diagonal_phase,
    num_qubits,
)

FIRST_OBSERVER_PHASES = (np.pi / 6, np.pi / 2, 5 * np.pi / 6)
OTHER_OBSERVER_PHASES = (0.0, np.pi / 3, 2 * np.pi / 3)

OUTCOME_VALUES = np.array([-1.0, 1.0])

MAX_ENUMERATION_QUBITS = 7


@dataclass(frozen=True)
class BellOperator:
    matrix: np.ndarray
    classical_bound: float

    def __post_init__(self):
        object.__setattr__(self, "matrix", hermitize(self.matrix))
        if not self.classical_bound > 0:
            raise ValueError("classical bound must be positive")

    @property
    def n(self):
        return num_qubits(self.matrix.shape[0])


def default_phases(n):
    """Phase table of shape (n, 3): observer 1 uses pi/6, pi/2, 5pi/6, the rest 0, pi/3, 2pi/3."""
    n = check_qubit_count(n)
    table = np.tile(OTHER_OBSERVER_PHASES, (n, 1))
    table[0] = FIRST_OBSERVER_PHASES
    return table


def _phase_table(n, table):
    table = default_phases(n) if table is None else np.asarray(table, dtype=float)
    if table.shape != (n, 3):
        raise ValueError(f"phase table must have shape ({n}, 3), got {table.shape}")
    return table


def classical_bound_three(n):
    return 2 ** (n - 1) * np.sqrt(3)


def setting_unitary(phi):
    e = np.exp(1j * phi)
    return np.array([[1, 1], [e, -e]]) / np.sqrt(2)


def projector_pair(phi):
    """Projectors ``U(phi)|j><j|U(phi)^dagger`` for outcomes j = 0, 1."""
    u = setting_unitary(phi)
    return tuple(np.outer(u[:, j], u[:, j].conj()) for j in (0, 1))


def setting_observable(phi):
    """Dichotomic observable ``P(1) - P(0)`` of one setting."""
    p0, p1 = projector_pair(phi)
    return p1 - p0


def coefficient_tensor(n, table=None):
    """Real tensor c[k_1, ..., k_N] = cos(sum of phases), indices 0-based."""
    n = check_qubit_count(n)
    table = _phase_table(n, table)
    total = np.zeros((3,) * n)
    for i in range(n):
        shape = [1] * n
        shape[i] = 3
        total = total + table[i].reshape(shape)
    return np.cos(total)


def correlation(rho, choices, table=None):
    """Correlation function of a joint setting choice (1-based indices).

    Computed from Born-rule outcome probabilities, each outcome string
    weighted by the product of its +-1 values.
    """
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    table = _phase_table(n, table)
    if len(choices) != n:
        raise ValueError(f"need {n} setting choices, got {len(choices)}")
    if any(k not in (1, 2, 3) for k in choices):
        raise ValueError(f"setting choices must be in {{1, 2, 3}}, got {choices}")
    v = kron_all(setting_unitary(table[i, k - 1]) for i, k in enumerate(choices))
    probs = np.real(np.einsum("ai,ab,bi->i", v.conj(), rho, v))
    signs = OUTCOME_VALUES
    for _ in range(n - 1):
        signs = np.kron(signs, OUTCOME_VALUES)
    return float(probs @ signs)


def bell_operator_three(n, table=None):
    """Sum of all 3**N coefficient-weighted tensor products of setting observables."""
    n = check_qubit_count(n, minimum=2)
    table = _phase_table(n, table)
    coeffs = coefficient_tensor(n, table)
    obs = [[setting_observable(table[i, k]) for k in range(3)] for i in range(n)]
    dim = 2**n
    total = np.zeros((dim, dim), dtype=complex)
    for ks in itertools.product(range(3), repeat=n):
        total += coeffs[ks] * kron_all(obs[i][k] for i, k in enumerate(ks))
    return BellOperator(total, classical_bound_three(n))


def bell_matrix_closed_form(n):
    """Matrix with (-3)**N / 2 in the two corners and zeros elsewhere."""
    n = check_qubit_count(n, minimum=2)
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    m[0, -1] = m[-1, 0] = (-3) ** n / 2
    return m


def rotate_operator(op, alpha, n=None):
    """Conjugate by ``U(alpha/N)^{(x)N}`` with ``U(x) = diag(1, e^{i x})``."""
    matrix = op.matrix if isinstance(op, BellOperator) else np.asarray(op, dtype=complex)
    if n is None:
        n = num_qubits(matrix.shape[0])
    if matrix.shape != (2**n, 2**n):
        raise ValueError(f"operator of shape {matrix.shape} does not act on {n} qubits")
    d = local_diagonal_phase(n, alpha)
    rotated = d[:, None] * matrix * d.conj()[None, :]
    if isinstance(op, BellOperator):
        return BellOperator(rotated, op.classical_bound)
    return rotated


def lhv_bound_enumeration(n, table=None):
    """Largest |Bell expression| over all deterministic local strategies.

    Every observer has 8 strategies (a +-1 answer for each of the three
    settings); all 8**N joint strategies are evaluated.
    """
    n = check_qubit_count(n, minimum=1)
    if n > MAX_ENUMERATION_QUBITS:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUMERATION_QUBITS}, got {n}")
    values = coefficient_tensor(n, table)
    strategies = np.array(list(itertools.product((-1.0, 1.0), repeat=3)))
    # contract one observer axis at a time; the new strategy axis moves to the back
    for _ in range(n):
        values = np.tensordot(values, strategies, axes=([0], [1]))
    return float(np.max(np.abs(values)))


def dur_bell_value(n):
    """``Tr(B_N(alpha) rho_N(alpha)) = (-3)**N / (2 (N + 1))`` for every alpha."""
    return (-3.0) ** n / (2 * (n + 1))


def violates_three(n):
    return abs(dur_bell_value(n)) > classical_bound_three(n)


def noise_threshold_three(n):
    """White-noise fraction below which the three-setting violation persists; 0 if none."""
    n = check_qubit_count(n, minimum=2)
    return max(0.0, 1.0 - 2.0**n * (n + 1) * np.sqrt(3) / 3.0**n)
