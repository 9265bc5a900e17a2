"""Bound entangled states that violate a Bell inequality.

Run with ``python demos/01_violation.py``.
"""

# %% [markdown]
# The N-qubit family mixes a phased GHZ state with the 2N single-excitation
# and single-hole projectors. Its partial transposes are positive for every
# bipartition into groups, yet the state is entangled. We check how a
# three-setting Bell expression responds to it.

# %%
import numpy as np

from boundbell import bell
from boundbell.qubits import dur_state, expectation, ghz, projector

# %% [markdown]
# The operator built setting by setting (3^N terms) collapses to a matrix
# with only two nonzero entries, in the corners.

# %%
n = 4
op = bell.bell_operator_three(n).matrix
nonzero = np.argwhere(np.abs(op) > 1e-10)
print("nonzero entries:", nonzero.tolist())
print("corner value:", op[0, -1].real, "= (-3)^N / 2 =", (-3) ** n / 2)

# %% [markdown]
# On the GHZ state the expression reaches (-3)^N/2, well above the local
# bound 2^(N-1) sqrt 3 for any N >= 2.

# %%
for n in range(2, 6):
    value = expectation(bell.bell_operator_three(n).matrix, projector(ghz(n)))
    print(f"N={n}  GHZ value {value:9.3f}  local bound {bell.classical_bound_three(n):8.3f}")

# %% [markdown]
# The bound entangled family keeps only a 1/(N+1) share of the GHZ
# coherence, so the value shrinks to (-3)^N/(2(N+1)). The exponential gain
# of 3^N over 2^N wins from N = 7 on. The phase alpha is absorbed by local
# diagonal unitaries and does not matter.

# %%
print(f"{'N':>3} {'value':>12} {'bound':>10} {'ratio':>8}")
for n in range(4, 11):
    alpha = 0.7
    op = bell.rotate_operator(bell.bell_matrix_closed_form(n), alpha, n)
    value = expectation(op, dur_state(n, alpha))
    bound = bell.classical_bound_three(n)
    flag = "violated" if abs(value) > bound else ""
    print(f"{n:>3} {value:12.4f} {bound:10.4f} {abs(value) / bound:8.4f} {flag}")

# %% [markdown]
# The bound itself is checked by brute force: every observer picks one of
# eight deterministic answer triples.

# %%
for n in range(2, 6):
    print(n, bell.lhv_bound_enumeration(n), 2 ** (n - 1) * np.sqrt(3))
