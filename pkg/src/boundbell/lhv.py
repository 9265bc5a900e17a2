"""Local-hidden-variable models as a linear-programming feasibility problem.

A local model is a probability distribution over deterministic strategies:
every observer ``i`` fixes an outcome ``l_i(k)`` in {0, 1} for each of its
``m`` settings. Strategy ``s`` is encoded by ``m * n`` bits, observer 1 /
setting 1 being the most significant. The behavior is local iff it is a
convex combination of the strategies' 0/1 prediction vectors.

Behavior entries are indexed by ``(k_1, ..., k_n, l_1, ..., l_n)``
(settings 0-based in memory, 1-based in CSV files), settings major.
"""

from __future__ import annotations

import csv
import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.stats import unitary_group

from . import exact, simplex
from .bell import coefficient_tensor, setting_unitary, OUTCOME_VALUES
from .qubits import kron_all, num_qubits

log = logging.getLogger(__name__)

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
FAILED = "failed"

FEAS_TOL = 1e-8
MAX_SETTING_BITS = 24
MAX_MATRIX_ENTRIES = 2**28
MAX_TABLEAU_ENTRIES = 2**25


class CapExceeded(ValueError):
    """The requested scenario is too large for dense enumeration."""


class NumericalFailure(RuntimeError):
    """The solver could not reach a trustworthy verdict."""


@dataclass(frozen=True)
class ExperimentSpec:
    """Measurement bases: ``unitaries[i, k]`` maps |j> to observer i's outcome-j vector for setting k."""

    unitaries: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.unitaries, dtype=complex)
        if u.ndim != 4 or u.shape[2:] != (2, 2) or u.shape[0] < 1 or u.shape[1] < 1:
            raise ValueError(f"unitaries must have shape (n, m, 2, 2), got {u.shape}")
        eye = np.eye(2)
        for i, k in itertools.product(range(u.shape[0]), range(u.shape[1])):
            p0, p1 = _pair(u[i, k])
            if np.max(np.abs(p0 + p1 - eye)) > 1e-12:
                raise ValueError(f"projectors of observer {i + 1}, setting {k + 1} do not sum to I")
        object.__setattr__(self, "unitaries", u)

    @property
    def n(self):
        return self.unitaries.shape[0]

    @property
    def m(self):
        return self.unitaries.shape[1]

    def projectors(self, i, k):
        return _pair(self.unitaries[i, k])

    def permuted(self, order):
        return ExperimentSpec(self.unitaries[list(order)])

    @classmethod
    def from_phases(cls, table):
        """Settings ``U(phi)`` of the three-setting inequality from a phase table (n, m)."""
        table = np.asarray(table, dtype=float)
        return cls(np.array([[setting_unitary(phi) for phi in row] for row in table]))

    @classmethod
    def computational(cls, n, m=1):
        return cls(np.tile(np.eye(2, dtype=complex), (n, m, 1, 1)))

    @classmethod
    def haar(cls, n, m, rng):
        u = unitary_group.rvs(2, size=n * m, random_state=rng)
        return cls(np.asarray(u).reshape(n, m, 2, 2))


def _pair(u):
    return tuple(np.outer(u[:, j], u[:, j].conj()) for j in (0, 1))


def chsh_spec():
    """Two-qubit equatorial settings giving the maximal CHSH value on ghz(2, 0)."""
    return ExperimentSpec.from_phases([[0.0, np.pi / 2], [-np.pi / 4, np.pi / 4]])


def mermin_spec():
    """Three-qubit X/Y settings giving Mermin value 4 on ghz(3, 0)."""
    return ExperimentSpec.from_phases([[0.0, np.pi / 2]] * 3)


@dataclass(frozen=True)
class QuantumBehavior:
    """Joint outcome probabilities, array of shape ``(m,) * n + (2,) * n``."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        n = p.ndim // 2
        if p.ndim != 2 * n or n < 1 or p.shape[n:] != (2,) * n or len(set(p.shape[:n])) != 1:
            raise ValueError(f"behavior has inconsistent shape {p.shape}")
        if p.min() < -1e-12 or p.max() > 1 + 1e-12:
            raise ValueError("probabilities outside [0, 1]")
        sums = p.reshape(p.shape[:n] + (-1,)).sum(axis=-1)
        if np.max(np.abs(sums - 1)) > 1e-10:
            raise ValueError("outcome probabilities do not sum to 1 for every setting choice")
        _check_no_signalling(p, n)

    @property
    def n(self):
        return self.probs.ndim // 2

    @property
    def m(self):
        return self.probs.shape[0]

    def vector(self):
        return self.probs.ravel()

    def correlator(self, choices):
        """Expectation of the product of +-1 outcome values, settings 0-based."""
        table = self.probs[tuple(choices)]
        signs = OUTCOME_VALUES
        for _ in range(self.n - 1):
            signs = np.multiply.outer(signs, OUTCOME_VALUES)
        return float(np.sum(table * signs))

    def permuted(self, order):
        order = list(order)
        return QuantumBehavior(np.transpose(self.probs, order + [self.n + i for i in order]))


def _check_no_signalling(p, n, tol=1e-9):
    # the marginal of observer i must not depend on which setting j chose
    for i in range(n):
        marg_i = p.sum(axis=tuple(n + a for a in range(n) if a != i))
        for j in range(n):
            if i == j:
                continue
            marg = marg_i
            marg = np.moveaxis(marg, j, 0)
            if np.max(np.abs(marg - marg[:1])) > tol:
                raise ValueError(f"behavior is signalling from observer {j + 1} to {i + 1}")


def quantum_behavior(rho, spec):
    """Born-rule probabilities ``Tr(rho (x)_i P^i_{k_i}(l_i))`` for every setting choice."""
    rho = np.asarray(rho, dtype=complex)
    n, m = spec.n, spec.m
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"state of shape {rho.shape} does not match {n} observers")
    probs = np.empty((m,) * n + (2,) * n)
    for ks in itertools.product(range(m), repeat=n):
        v = kron_all(spec.unitaries[i, k] for i, k in enumerate(ks))
        diag = np.real(np.einsum("ai,ab,bi->i", v.conj(), rho, v))
        probs[ks] = diag.reshape((2,) * n)
    return QuantumBehavior(probs)


def _decode_rows(n, m, rows):
    idx = np.unravel_index(np.asarray(rows), (m,) * n + (2,) * n)
    ks = np.stack(idx[:n], axis=1)
    ls = np.stack(idx[n:], axis=1)
    return ks, ls


def strategy_matrix(n, m, rows=None, strategies=None):
    """0/1 matrix: entry (row, s) is 1 iff strategy ``s`` predicts that row's outcomes.

    `rows` and `strategies` select subsets (flat indices); default is all.
    """
    total_rows = m**n * 2**n
    rows = np.arange(total_rows) if rows is None else np.asarray(rows)
    strategies = (
        np.arange(2 ** (n * m), dtype=np.int64) if strategies is None else np.asarray(strategies, dtype=np.int64)
    )
    if n * m > MAX_SETTING_BITS:
        raise CapExceeded(f"m*n = {n * m} exceeds the cap of {MAX_SETTING_BITS}")
    if len(rows) * len(strategies) > MAX_MATRIX_ENTRIES:
        raise CapExceeded(f"{len(rows)} x {len(strategies)} strategy matrix exceeds the entry cap")
    ks, ls = _decode_rows(n, m, rows)
    out = np.ones((len(rows), len(strategies)), dtype=np.uint8)
    for i in range(n):
        shift = n * m - 1 - (i * m + ks[:, i])
        bits = (strategies[None, :] >> shift[:, None]) & 1
        out &= (bits == ls[:, i][:, None]).astype(np.uint8)
    return out


@lru_cache(maxsize=None)
def independent_rows(n, m):
    """A basis of the row space: per observer the events (k, 0) for all k, plus (1, 1)."""
    local = [(k, 0) for k in range(m)] + [(0, 1)]
    rows = []
    for combo in itertools.product(local, repeat=n):
        ks = [c[0] for c in combo]
        ls = [c[1] for c in combo]
        rows.append(np.ravel_multi_index(tuple(ks + ls), (m,) * n + (2,) * n))
    return np.array(sorted(rows))


@dataclass(frozen=True)
class LPProblem:
    n: int
    m: int
    rows: np.ndarray
    A: np.ndarray
    b: np.ndarray


def build_problem(behavior):
    n, m = behavior.n, behavior.m
    rows = independent_rows(n, m)
    if n * m > MAX_SETTING_BITS:
        raise CapExceeded(f"m*n = {n * m} exceeds the cap of {MAX_SETTING_BITS}")
    if len(rows) * (2 ** (n * m) + len(rows)) > MAX_TABLEAU_ENTRIES:
        raise CapExceeded(f"LP with {len(rows)} rows and {2 ** (n * m)} strategies exceeds the size cap")
    A = strategy_matrix(n, m, rows=rows)
    return LPProblem(n, m, rows, A, behavior.vector()[rows])


def classical_maximum(coefficients, n, m, chunk=2**14):
    """``max_s y . a_s`` over every deterministic strategy, for a functional on behaviors."""
    y = np.asarray(coefficients, dtype=float).ravel()
    support = np.flatnonzero(y)
    best = -np.inf
    for start in range(0, 2 ** (n * m), chunk):
        strategies = np.arange(start, min(start + chunk, 2 ** (n * m)))
        cols = strategy_matrix(n, m, rows=support, strategies=strategies)
        best = max(best, float(np.max(y[support] @ cols)))
    return best


@dataclass(frozen=True)
class Certificate:
    """A Bell-type inequality ``sum y * p <= classical_max`` violated by the behavior."""

    coefficients: np.ndarray
    classical_max: float
    quantum_value: float

    @property
    def gap(self):
        return self.quantum_value - self.classical_max

    def scaled(self, classical_max):
        """Rescale so the local maximum equals `classical_max` (requires a positive maximum)."""
        if self.classical_max <= 0:
            raise ValueError("certificate has no positive classical maximum to rescale")
        f = classical_max / self.classical_max
        return Certificate(self.coefficients * f, classical_max, self.quantum_value * f)


@dataclass
class FeasibilityResult:
    verdict: str
    weights: np.ndarray | None = None
    certificate: Certificate | None = None
    residual: float = 0.0
    iterations: int = 0
    critical_visibility: float | None = None
    extra: dict = field(default_factory=dict)


def _lift(problem, y_red, behavior_shape):
    y = np.zeros(int(np.prod(behavior_shape)))
    y[problem.rows] = y_red
    return y.reshape(behavior_shape)


def _noise_zeroed(problem, behavior, y_red):
    """Full-space functional that vanishes on white noise, plus its values."""
    shape = behavior.probs.shape
    y = _lift(problem, y_red, shape)
    n, m = problem.n, problem.m
    offset = y.sum() / 2**n  # value of y on uniform outcome probabilities
    y = y - offset / m**n
    classical = float(np.max(y_red @ problem.A)) - offset
    quantum = float(y.ravel() @ behavior.vector())
    return Certificate(y, classical, quantum)


def visibility_certificate(problem, behavior):
    """Solve for the largest white-noise visibility that keeps the behavior local.

    Returns ``(t, certificate)``; the certificate is zero on white noise, has
    local maximum ``t`` and quantum value 1 (so its ratio is ``1/t``).
    """
    n, m = problem.n, problem.m
    noise = np.full(problem.A.shape[0], 0.5**n)
    d = problem.b - noise
    A = np.hstack([problem.A.astype(float), -d[:, None]])
    c = np.zeros(A.shape[1])
    c[-1] = -1.0
    sol = simplex.solve(A, noise, c)
    if sol.status != simplex.OPTIMAL:
        raise NumericalFailure(f"visibility LP ended with status {sol.status}")
    t = -sol.objective
    return t, _noise_zeroed(problem, behavior, sol.duals)


def lhv_feasible(behavior, certificate=True):
    """Decide whether `behavior` admits a local-hidden-variable model.

    Feasible results carry nonnegative strategy weights summing to one.
    Infeasible results carry a certificate; with ``certificate=True`` it is
    the white-noise-optimal Bell inequality, otherwise the phase-one Farkas
    functional.
    """
    problem = build_problem(behavior)
    n, m = problem.n, problem.m
    try:
        sol = simplex.solve(problem.A, problem.b, feas_tol=FEAS_TOL)
    except simplex.SimplexError as exc:
        raise NumericalFailure(str(exc)) from exc

    if sol.status == simplex.OPTIMAL:
        w = sol.x
        support = np.flatnonzero(w > 0)
        cols = strategy_matrix(n, m, strategies=support)
        residual = float(np.max(np.abs(cols @ w[support] - behavior.vector())))
        if residual > FEAS_TOL or w.min() < -1e-10 or abs(w.sum() - 1) > 1e-10:
            raise NumericalFailure(f"reconstruction check failed (residual {residual:.3e})")
        return FeasibilityResult(FEASIBLE, weights=w, residual=residual, iterations=sol.iterations)

    y = sol.duals
    farkas = Certificate(
        _lift(problem, y, behavior.probs.shape),
        float(np.max(y @ problem.A)),
        float(y @ problem.b),
    )
    if farkas.gap < FEAS_TOL:
        raise NumericalFailure(f"Farkas certificate gap {farkas.gap:.3e} below tolerance")
    result = FeasibilityResult(INFEASIBLE, certificate=farkas, iterations=sol.iterations)
    if certificate:
        try:
            t, cert = visibility_certificate(problem, behavior)
        except (NumericalFailure, simplex.SimplexError) as exc:
            log.warning("keeping phase-one certificate: %s", exc)
        else:
            if cert.gap >= FEAS_TOL:
                result.certificate = cert
                result.critical_visibility = t
    return result


def lhv_feasible_exact(behavior):
    """Same question answered in exact rational arithmetic (small instances only)."""
    problem = build_problem(behavior)
    return FEASIBLE if exact.is_feasible(problem.A.tolist(), problem.b.tolist()) else INFEASIBLE


def bell_functional(n, table=None):
    """Three-setting Bell expression as coefficients on the behavior entries."""
    coeffs = coefficient_tensor(n, table)
    signs = OUTCOME_VALUES
    for _ in range(n - 1):
        signs = np.multiply.outer(signs, OUTCOME_VALUES)
    return np.multiply.outer(coeffs, signs)


def violates(behavior, coefficients, classical_max):
    """Weak duality: a functional exceeding its local maximum proves infeasibility."""
    value = float(np.sum(np.asarray(coefficients) * behavior.probs))
    return abs(value) > classical_max + FEAS_TOL


@dataclass
class TrialResult:
    trial: int
    verdict: str
    residual: float | None = None
    gap: float | None = None
    spec: ExperimentSpec | None = None
    error: str | None = None


@dataclass
class ScanReport:
    trials: list

    def count(self, verdict):
        return sum(t.verdict == verdict for t in self.trials)

    @property
    def feasible(self):
        return self.count(FEASIBLE)

    @property
    def infeasible(self):
        return self.count(INFEASIBLE)

    @property
    def failed(self):
        return self.count(FAILED)

    def summary(self):
        return f"feasible={self.feasible} infeasible={self.infeasible} failed={self.failed}"


def worker_count():
    raw = os.environ.get("BOUNDBELL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"BOUNDBELL_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def _run_trial(rho, n, m, seed, trial):
    rng = np.random.default_rng([seed, trial])
    spec = ExperimentSpec.haar(n, m, rng)
    try:
        res = lhv_feasible(quantum_behavior(rho, spec), certificate=False)
    except NumericalFailure as exc:
        return TrialResult(trial, FAILED, error=str(exc))
    if res.verdict == FEASIBLE:
        return TrialResult(trial, FEASIBLE, residual=res.residual)
    return TrialResult(trial, INFEASIBLE, gap=res.certificate.gap, spec=spec)


def random_setting_scan(rho, m, trials, seed=0, workers=None):
    """Run the LP on `trials` independent Haar-random choices of every observer's settings.

    Trial ``t`` draws from ``default_rng([seed, t])``, so the report does not
    depend on how trials are scheduled.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rho = np.asarray(rho, dtype=complex)
    n = num_qubits(rho.shape[0])
    # fail early on oversized scenarios instead of once per trial
    build_problem(QuantumBehavior(np.full((m,) * n + (2,) * n, 0.5**n)))
    workers = worker_count() if workers is None else workers
    run = lambda t: _run_trial(rho, n, m, seed, t)  # noqa: E731
    if workers == 1:
        results = [run(t) for t in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(trials)))
    return ScanReport(results)


def write_behavior_csv(behavior, path):
    n = behavior.n
    header = [f"k_{i + 1}" for i in range(n)] + [f"l_{i + 1}" for i in range(n)] + ["p"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for idx in np.ndindex(behavior.probs.shape):
            ks = [k + 1 for k in idx[:n]]
            writer.writerow(ks + list(idx[n:]) + [format(behavior.probs[idx], ".17g")])


def read_behavior_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        n = (len(header) - 1) // 2
        expected = [f"k_{i + 1}" for i in range(n)] + [f"l_{i + 1}" for i in range(n)] + ["p"]
        if header != expected:
            raise ValueError(f"unexpected header {header}")
        entries = [(tuple(int(v) for v in row[:-1]), float(row[-1])) for row in reader]
    m = max(key[i] for key, _ in entries for i in range(n))
    probs = np.full((m,) * n + (2,) * n, np.nan)
    for key, p in entries:
        probs[tuple(k - 1 for k in key[:n]) + key[n:]] = p
    if np.isnan(probs).any():
        raise ValueError("behavior table is incomplete")
    return QuantumBehavior(probs)
