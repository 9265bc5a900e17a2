"""Entanglement witnesses with identity diagonal and a single corner coherence.

Two families are built here:

* the normalized witness generated by the three-setting Bell inequality,
  ``I - 3**N / (2**N sqrt(3)) (|0..0><1..1| + h.c.)``;
* the strengthened family ``I - kappa 2**(N-1) (|0..0><1..1| + h.c.)`` with
  ``0 <= kappa <= 1``, which stays nonnegative on product states and detects
  every member of the bound entangled family for ``N >= 4`` at ``kappa = 1``.

Both are rotated by the same local phase ``U(alpha/N)^{(x)N}`` as the state
they are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .bell import rotate_operator
from .qubits import (
    check_qubit_count,
    dur_state,
    expectation,
    hermitize,
    num_qubits,
    product_state,
)

BELL_GENERATED = "bell-generated"
STRENGTHENED = "strengthened"


@dataclass(frozen=True)
class WitnessOperator:
    matrix: np.ndarray
    kind: str
    alpha: float = 0.0
    kappa: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", hermitize(self.matrix))
        if self.kind not in (BELL_GENERATED, STRENGTHENED):
            raise ValueError(f"unknown witness kind {self.kind!r}")

    @property
    def n(self):
        return num_qubits(self.matrix.shape[0])


def _corner_witness(n, corner, alpha):
    dim = 2**n
    w = np.eye(dim, dtype=complex)
    w[0, -1] = w[-1, 0] = -corner
    return rotate_operator(w, alpha, n)


def witness_from_bell(n, alpha=0.0):
    """Bell-inequality witness divided by the classical bound ``2**(N-1) sqrt(3)``."""
    n = check_qubit_count(n, minimum=2)
    corner = 3.0**n / (2.0**n * np.sqrt(3))
    return WitnessOperator(_corner_witness(n, corner, alpha), BELL_GENERATED, alpha)


def s_witness(n, kappa=1.0, alpha=0.0):
    n = check_qubit_count(n, minimum=2)
    if not 0.0 <= kappa <= 1.0:
        raise ValueError(f"kappa must lie in [0, 1], got {kappa}")
    corner = kappa * 2.0 ** (n - 1)
    return WitnessOperator(_corner_witness(n, corner, alpha), STRENGTHENED, alpha, kappa)


def product_expectation(w, thetas, phis):
    """``Tr(W P)`` for the product projector with per-qubit angles (theta_k, phi_k)."""
    matrix = w.matrix if isinstance(w, WitnessOperator) else np.asarray(w)
    psi = product_state(thetas, phis)
    if psi.shape[0] != matrix.shape[0]:
        raise ValueError(f"{len(psi)}-dim product state vs {matrix.shape[0]}-dim witness")
    return float(np.real(np.vdot(psi, matrix @ psi)))


def s_witness_product_closed_form(kappa, thetas, phis, alpha=0.0):
    """Closed form ``1 - kappa cos(sum phi - alpha) prod sin(2 theta)`` of ``Tr(S P)``."""
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    return float(1 - kappa * np.cos(np.sum(phis) - alpha) * np.prod(np.sin(2 * thetas)))


def sample_product_angles(rng, n, size):
    """Angles of product states whose factors are uniform on the Bloch sphere."""
    thetas = 0.5 * np.arccos(rng.uniform(-1, 1, size=(size, n)))
    phis = rng.uniform(0, 2 * np.pi, size=(size, n))
    return thetas, phis


def _batch_values(matrix, thetas, phis):
    size, n = thetas.shape
    psi = np.ones((size, 1), dtype=complex)
    for k in range(n):
        q = np.stack([np.cos(thetas[:, k]), np.exp(1j * phis[:, k]) * np.sin(thetas[:, k])], axis=1)
        psi = (psi[:, :, None] * q[:, None, :]).reshape(size, -1)
    return np.real(np.einsum("si,ij,sj->s", psi.conj(), matrix, psi))


@dataclass(frozen=True)
class PositivityScan:
    minimum: float
    thetas: np.ndarray
    phis: np.ndarray


def positivity_scan(w, samples=2000, seed=0, refine=4, chunk=4096):
    """Minimum of ``Tr(W P)`` over product projectors: random sampling plus local descent.

    The `refine` best samples are polished with BFGS over all 2N angles.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    matrix = w.matrix if isinstance(w, WitnessOperator) else np.asarray(w)
    n = num_qubits(matrix.shape[0])
    rng = np.random.default_rng(seed)
    thetas, phis = sample_product_angles(rng, n, samples)
    values = np.concatenate(
        [
            _batch_values(matrix, thetas[i : i + chunk], phis[i : i + chunk])
            for i in range(0, samples, chunk)
        ]
    )
    order = np.argsort(values, kind="stable")
    best = (values[order[0]], thetas[order[0]], phis[order[0]])

    def objective(x):
        return product_expectation(matrix, x[:n], x[n:])

    for i in order[:refine]:
        x0 = np.concatenate([thetas[i], phis[i]])
        res = minimize(objective, x0, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000})
        if res.fun < best[0]:
            best = (float(res.fun), res.x[:n].copy(), res.x[n:].copy())
    return PositivityScan(float(best[0]), best[1], best[2])


def detection_value(n, kappa=1.0, alpha=0.0):
    """``Tr(S_N(kappa, alpha) rho_N(alpha))``; negative means the state is detected."""
    return expectation(s_witness(n, kappa, alpha).matrix, dur_state(n, alpha))


def detection_closed_form(n, kappa):
    return (1 - kappa * 2.0 ** (n - 1) + n) / (n + 1)


def detection_threshold_kappa(n):
    """Smallest kappa at which the strengthened witness stops being nonnegative on the family."""
    return (1 + n) / 2.0 ** (n - 1)


def bell_witness_detection_value(n, alpha=0.0):
    return expectation(witness_from_bell(n, alpha).matrix, dur_state(n, alpha))
