"""Dense two-phase tableau simplex for ``min c.x  s.t.  A x = b, x >= 0``.

Pricing is Dantzig's most-negative reduced cost; after a run of degenerate
pivots the solver falls back to Bland's smallest-index rule until the
objective moves again, which rules out cycling. Ratio-test ties go to the
basic variable with the lowest column index.

Dual values are read off the reduced costs of the artificial columns, so an
infeasible phase one yields a Farkas certificate ``y`` with ``y.A <= 0`` and
``y.b > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

PIVOT_TOL = 1e-11
COST_TOL = 1e-11
DEGENERATE_STREAK = 20


class SimplexError(RuntimeError):
    """Raised when the iteration guard is exceeded."""


@dataclass
class LPSolution:
    status: str
    x: np.ndarray | None
    duals: np.ndarray
    objective: float
    iterations: int


class _Tableau:
    def __init__(self, A, b):
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        m, n = A.shape
        self.m, self.n = m, n
        self.flip = np.where(b < 0, -1.0, 1.0)
        # column-major so the rank-one pivot update can run in place through BLAS
        T = np.zeros((m + 1, n + m + 1), order="F")
        T[:m, :n] = A * self.flip[:, None]
        T[:m, n : n + m] = np.eye(m)
        T[:m, -1] = b * self.flip
        self.T = T
        self.basis = np.arange(n, n + m)
        self.iterations = 0

    def set_costs(self, c_full):
        """Load reduced costs ``c - c_B B^-1 A`` into the objective row."""
        T = self.T
        T[-1, :-1] = c_full
        T[-1, -1] = 0.0
        cb = c_full[self.basis]
        T[-1] -= cb @ T[:-1]

    def pivot(self, row, col):
        T = self.T
        T[row] /= T[row, col]
        factors = T[:, col].copy()
        factors[row] = 0.0
        self.T = dger(-1.0, factors, T[row].copy(), a=T, overwrite_a=1)
        self.basis[row] = col
        self.iterations += 1

    def run(self, allowed, max_iter):
        """Minimize the loaded objective; returns False when unbounded."""
        streak = 0
        while True:
            T = self.T
            if self.iterations >= max_iter:
                raise SimplexError(f"simplex exceeded {max_iter} iterations")
            costs = np.where(allowed, T[-1, :-1], 0.0)
            candidates = np.flatnonzero(costs < -COST_TOL)
            if candidates.size == 0:
                return True
            if streak >= DEGENERATE_STREAK:
                col = candidates[0]
            else:
                col = candidates[np.argmin(costs[candidates])]
            column = T[:-1, col]
            rows = np.flatnonzero(column > PIVOT_TOL)
            if rows.size == 0:
                return False
            ratios = T[rows, -1] / column[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            row = tied[np.argmin(self.basis[tied])]
            streak = streak + 1 if best <= 1e-12 else 0
            self.pivot(row, col)

    def duals(self, c_art):
        # reduced cost of artificial i is c_art_i - y_i (in flipped row signs)
        y = c_art - self.T[-1, self.n : self.n + self.m]
        return y * self.flip

    def primal(self):
        x = np.zeros(self.n + self.m)
        x[self.basis] = self.T[:-1, -1]
        return x[: self.n]


def solve(A, b, c=None, feas_tol=1e-9, max_iter=None):
    """Two-phase simplex. With ``c=None`` only phase one (feasibility) is run.

    The returned duals satisfy ``A^T y <= c`` at optimality. When infeasible
    they are the phase-one duals: ``A^T y <= 0`` and ``y.b`` equals the
    phase-one optimum.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({m},)")
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000
    tab = _Tableau(A, b)
    structural = np.zeros(n + m, dtype=bool)
    structural[:n] = True

    phase1 = np.concatenate([np.zeros(n), np.ones(m)])
    tab.set_costs(phase1)
    tab.run(np.ones(n + m, dtype=bool), max_iter)
    infeasibility = -tab.T[-1, -1]
    if infeasibility > feas_tol:
        return LPSolution(INFEASIBLE, None, tab.duals(np.ones(m)), infeasibility, tab.iterations)

    # drive zero-level artificials out of the basis where a structural pivot exists;
    # rows with no such pivot are redundant and keep their artificial at zero
    for row in range(m):
        if tab.basis[row] >= n:
            entries = np.abs(tab.T[row, :n])
            j = np.flatnonzero(entries > 1e-9)
            if j.size:
                tab.pivot(row, j[np.argmax(entries[j])])

    if c is None:
        return LPSolution(OPTIMAL, tab.primal(), tab.duals(np.ones(m)), 0.0, tab.iterations)

    c = np.asarray(c, dtype=float)
    if c.shape != (n,):
        raise ValueError(f"cost vector has shape {c.shape}, expected ({n},)")
    tab.set_costs(np.concatenate([c, np.zeros(m)]))
    bounded = tab.run(structural, max_iter)
    if not bounded:
        return LPSolution(UNBOUNDED, None, np.zeros(m), -np.inf, tab.iterations)
    x = tab.primal()
    return LPSolution(OPTIMAL, x, tab.duals(np.zeros(m)), float(c @ x), tab.iterations)
