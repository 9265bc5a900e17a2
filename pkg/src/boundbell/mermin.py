"""Two-setting Mermin-Klyshko operators and their optimum on the bound entangled family.

Each observer measures one of two equatorial observables
``sigma(a) = cos(a) X + sin(a) Y``. The operator is built recursively,

    M_1 = sigma(a_1)
    M_k = 1/2 M_{k-1} (x) (sigma(a_k) + sigma(a'_k))
        + 1/2 M'_{k-1} (x) (sigma(a_k) - sigma(a'_k)),

where ``M'`` swaps the primed and unprimed angles. Its local-realistic bound
is 1 and its largest GHZ value is ``2**((N-1)/2)``.

Every term maps ``|l>`` to its bit complement, so ``M`` is fully described by
the vector ``d[l] = <l|M|~l>``; this is what the optimizer works with.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import BellOperator
from .qubits import check_qubit_count, dur_state, num_qubits

NUM_STARTS = 32
CONVERGENCE_TOL = 1e-10
MAX_SWEEPS = 500
NO_VIOLATION_TOL = 1e-9


@dataclass(frozen=True)
class MkSettings:
    """Per-observer angle pairs ``(a_k, a'_k)``, stored reduced mod 2 pi."""

    a: np.ndarray
    a_prime: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).ravel()
        ap = np.asarray(self.a_prime, dtype=float).ravel()
        if a.shape != ap.shape:
            raise ValueError("a and a_prime need the same length")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(ap))):
            raise ValueError("setting angles must be finite")
        object.__setattr__(self, "a", np.mod(a, 2 * np.pi))
        object.__setattr__(self, "a_prime", np.mod(ap, 2 * np.pi))

    @property
    def n(self):
        return len(self.a)

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x[0::2], x[1::2])

    def to_vector(self):
        x = np.empty(2 * self.n)
        x[0::2], x[1::2] = self.a, self.a_prime
        return x


def ghz_optimal_settings(n):
    """Settings reaching ``2**((N-1)/2)`` on ``ghz(n, 0)``."""
    n = check_qubit_count(n, minimum=1)
    # a'_k - a_k = pi/2 at every site; the first offset aligns the corner phase
    a = np.zeros(n)
    a[0] = -np.pi / 4 * (n - 1)
    return MkSettings(a, a + np.pi / 2)


def sigma(a):
    return np.array([[0, np.exp(-1j * a)], [np.exp(1j * a), 0]])


def mk_antidiagonal(settings):
    """Vector ``d`` with ``d[l] = <l|M_N|~l>`` for every basis index ``l``."""

    def site(a):
        # <b|sigma(a)|1-b> for b = 0, 1
        return np.array([np.exp(-1j * a), np.exp(1j * a)])

    d = site(settings.a[0])
    dp = site(settings.a_prime[0])
    for a, ap in zip(settings.a[1:], settings.a_prime[1:]):
        s, sp = site(a), site(ap)
        d, dp = (
            0.5 * (np.kron(d, s + sp) + np.kron(dp, s - sp)),
            0.5 * (np.kron(dp, sp + s) + np.kron(d, sp - s)),
        )
    return d


def mk_operator_recursive(settings):
    """Dense operator straight from the Kronecker recursion (reference route)."""
    m = sigma(settings.a[0])
    mp = sigma(settings.a_prime[0])
    for a, ap in zip(settings.a[1:], settings.a_prime[1:]):
        s, sp = sigma(a), sigma(ap)
        m, mp = (
            0.5 * (np.kron(m, s + sp) + np.kron(mp, s - sp)),
            0.5 * (np.kron(mp, sp + s) + np.kron(m, sp - s)),
        )
    return m


def mk_operator(n, settings):
    n = check_qubit_count(n, minimum=2)
    if settings.n != n:
        raise ValueError(f"settings describe {settings.n} observers, expected {n}")
    d = mk_antidiagonal(settings)
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim)
    m[idx, (dim - 1) ^ idx] = d
    return BellOperator(m, 1.0)


def mk_expectation(settings, rho):
    """``Tr(M rho)`` using only the entries of ``rho`` that ``M`` can reach."""
    rho = np.asarray(rho)
    dim = rho.shape[0]
    idx = np.arange(dim)
    return float(np.real(np.sum(mk_antidiagonal(settings) * rho[(dim - 1) ^ idx, idx])))


def _maximize_from(x, rho, max_sweeps=MAX_SWEEPS, tol=CONVERGENCE_TOL):
    """Coordinate ascent; each angle enters as A cos + B sin + C, maximized exactly."""
    f = mk_expectation(MkSettings.from_vector(x), rho)
    for _ in range(max_sweeps):
        start = f
        for j in range(len(x)):
            vals = []
            for t in (0.0, np.pi / 2, np.pi):
                x[j] = t
                vals.append(mk_expectation(MkSettings.from_vector(x), rho))
            f0, f90, f180 = vals
            c = 0.5 * (f0 + f180)
            x[j] = np.arctan2(f90 - c, f0 - c)
            f = mk_expectation(MkSettings.from_vector(x), rho)
        if f - start < tol:
            break
    else:
        return f, x, False
    return f, x, True


@dataclass(frozen=True)
class MkOptimum:
    value: float
    settings: MkSettings
    converged: bool


def maximize_mk(rho, starts=NUM_STARTS, seed=0):
    """Best ``Tr(M rho)`` over two-setting equatorial measurements, multi-start."""
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    rng = np.random.default_rng(seed)
    best = None
    all_converged = True
    for _ in range(starts):
        x0 = rng.uniform(0, 2 * np.pi, size=2 * n)
        f, x, ok = _maximize_from(x0, rho)
        all_converged &= ok
        if best is None or f > best[0]:
            best = (f, x.copy())
    return MkOptimum(best[0], MkSettings.from_vector(best[1]), all_converged)


def mk_dur_optimum(n, alpha=None, starts=NUM_STARTS, seed=0):
    """Best Mermin-Klyshko value on the bound entangled state; alpha defaults to pi/(4(N-1))."""
    n = check_qubit_count(n, minimum=4)
    if alpha is None:
        alpha = default_mk_alpha(n)
    opt = maximize_mk(dur_state(n, alpha), starts=starts, seed=seed)
    if not opt.converged:
        raise RuntimeError(
            f"Mermin-Klyshko optimization did not converge; best value so far {opt.value:.12g}"
        )
    return opt.value


def default_mk_alpha(n):
    return np.pi / (4 * (n - 1))


def noise_threshold_mk(n, **kwargs):
    """White-noise fraction below which the Mermin-Klyshko violation persists; 0 if none."""
    value = mk_dur_optimum(n, default_mk_alpha(n), **kwargs)
    if value <= 1.0 + NO_VIOLATION_TOL:
        return 0.0
    return 1.0 - 1.0 / value
