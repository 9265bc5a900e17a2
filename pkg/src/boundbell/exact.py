"""Exact rational feasibility check for ``A x = b, x >= 0``.

Independent of the floating-point solver: plain lists of ``Fraction`` and
Bland's rule throughout. Only meant for small instances.
"""

from __future__ import annotations

from fractions import Fraction


def is_feasible(A, b):
    """True iff the system has a nonnegative solution, decided in exact arithmetic.

    Float entries are converted with ``Fraction(float)``, which is exact.
    """
    rows = [[Fraction(v) for v in row] for row in A]
    rhs = [Fraction(v) for v in b]
    m = len(rows)
    n = len(rows[0]) if m else 0
    # tableau rows: structural | artificial | rhs, with rhs >= 0
    tab = []
    for i in range(m):
        sign = -1 if rhs[i] < 0 else 1
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab.append([sign * v for v in rows[i]] + art + [sign * rhs[i]])
    basis = list(range(n, n + m))
    # phase-one reduced costs: -sum of rows on structural columns
    obj = [Fraction(0)] * (n + m + 1)
    for row in tab:
        for j in range(n):
            obj[j] -= row[j]
        obj[-1] -= row[-1]

    while True:
        entering = next((j for j in range(n + m) if obj[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        # phase one is bounded below by zero, so a pivot row always exists
        r = best[1]
        piv = tab[r][entering]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [vi - f * vr for vi, vr in zip(tab[i], tab[r])]
        f = obj[entering]
        obj = [vo - f * vr for vo, vr in zip(obj, tab[r])]
        basis[r] = entering
    return obj[-1] == 0
