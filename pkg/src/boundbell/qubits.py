"""N-qubit states, projectors and expectation values.

Basis convention shared by every module: the computational basis vector
``|l_1 l_2 ... l_N>`` sits at index ``sum(l_k * 2**(N - k))``, i.e. the first
qubit is the most significant bit. ``|00...0>`` is index 0 and ``|11...1>`` is
index ``2**N - 1``.
"""

from __future__ import annotations

import json

import numpy as np

MAX_QUBITS = 12

STRUCT_TOL = 1e-12
HERMITIAN_TOL = 1e-10


def check_qubit_count(n, minimum=1):
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"qubit count must be an integer, got {n!r}")
    n = int(n)
    if not minimum <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must lie in [{minimum}, {MAX_QUBITS}], got {n}")
    return n


def num_qubits(dim):
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def hermitize(a, tol=STRUCT_TOL):
    """Return ``(a + a^dagger) / 2``; reject matrices further than `tol` from Hermitian."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = np.max(np.abs(a - a.conj().T), initial=0.0)
    if asym > tol:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    return (a + a.conj().T) / 2


def check_density_matrix(rho, tol=STRUCT_TOL):
    rho = np.asarray(rho)
    num_qubits(rho.shape[0])
    if rho.shape != (rho.shape[0], rho.shape[0]):
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise ValueError(f"density matrix has trace {tr}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def ghz(n, alpha=0.0):
    """``(|0...0> + exp(i alpha)|1...1>) / sqrt(2)`` as a state vector."""
    n = check_qubit_count(n)
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1 / np.sqrt(2)
    psi[-1] += np.exp(1j * alpha) / np.sqrt(2)
    return psi


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def single_excitations(n):
    """Basis indices of the states with exactly one 1 (first qubit first)."""
    return [1 << (n - 1 - k) for k in range(n)]


def single_holes(n):
    full = 2**n - 1
    return [full ^ i for i in single_excitations(n)]


def dur_state(n, alpha=0.0):
    """Bound entangled N-qubit state of the one-parameter family.

    A phased GHZ projector with weight 1/(N+1) mixed with the N
    single-excitation and N single-hole projectors, each with weight
    1/(2(N+1)).
    """
    n = check_qubit_count(n, minimum=2)
    rho = projector(ghz(n, alpha))
    idx = single_excitations(n) + single_holes(n)
    # indices repeat at N=2, so accumulate rather than assign
    np.add.at(rho, (idx, idx), 0.5)
    return rho / (n + 1)


def maximally_mixed(n):
    n = check_qubit_count(n)
    return np.eye(2**n, dtype=complex) / 2**n


def mix_with_noise(rho, v):
    """Convex mixture ``(1 - v) rho + v * I / 2**N``."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"noise fraction must lie in [0, 1], got {v}")
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    return (1 - v) * rho + v * np.eye(dim) / dim


def qubit_state(theta, phi):
    """``cos(theta)|0> + exp(i phi) sin(theta)|1>``."""
    return np.array([np.cos(theta), np.exp(1j * phi) * np.sin(theta)])


def product_state(thetas, phis):
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    if thetas.shape != phis.shape or thetas.ndim != 1:
        raise ValueError("thetas and phis must be 1-d arrays of equal length")
    check_qubit_count(len(thetas))
    psi = np.ones(1, dtype=complex)
    for theta, phi in zip(thetas, phis):
        psi = np.kron(psi, qubit_state(theta, phi))
    if abs(np.vdot(psi, psi) - 1) > STRUCT_TOL:
        raise ValueError("product state is not normalized")
    return psi


def product_projector(thetas, phis):
    """Rank-one projector onto the product of single-qubit states (theta_k, phi_k)."""
    return projector(product_state(thetas, phis))


def kron_all(factors):
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def local_diagonal_phase(n, alpha):
    """Diagonal of ``U(alpha/N)^{(x)N}`` with ``U(x) = |0><0| + exp(i x)|1><1|``."""
    weights = np.array([bin(i).count("1") for i in range(2**n)])
    return np.exp(1j * alpha * weights / n)


def expectation(op, rho):
    """``Tr(op rho)`` for a Hermitian `op`; the imaginary residue must be negligible."""
    op = np.asarray(op)
    rho = np.asarray(rho)
    if op.shape != rho.shape or op.ndim != 2:
        raise ValueError(f"dimension mismatch: operator {op.shape} vs state {rho.shape}")
    if np.max(np.abs(op - op.conj().T)) > HERMITIAN_TOL:
        raise ValueError("operator is not Hermitian")
    # Tr(A B) = sum_ij A_ij B_ji
    val = np.sum(op * rho.T)
    if abs(val.imag) > 1e-9:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def matrix_to_json(a):
    a = np.asarray(a, dtype=complex)
    entries = [[float(z.real), float(z.imag)] for z in a.ravel()]
    return json.dumps({"dim": a.shape[0], "entries": entries})


def matrix_from_json(text):
    data = json.loads(text)
    dim = data["dim"]
    flat = np.array([complex(re, im) for re, im in data["entries"]])
    return flat.reshape(dim, dim)
