"""Entanglement witnesses for the whole family.

The Bell operator gives a witness that only works for N >= 7. Rescaling
the same corner matrix gives witnesses that detect every member.
"""

# %%
import numpy as np

from boundbell import witnesses
from boundbell.qubits import dur_state, expectation

# %% [markdown]
# A witness must be nonnegative on every product state. For the corner
# family that reduces to a closed form in the Bloch angles. Here we test it
# against random product states and a refined minimum search.

# %%
rng = np.random.default_rng(0)
w = witnesses.s_witness(5, 1.0, 0.4)
thetas, phis = witnesses.sample_product_angles(rng, 5, 5)
for t, p in zip(thetas, phis):
    print(f"{witnesses.product_expectation(w, t, p):.6f}  "
          f"{witnesses.s_witness_product_closed_form(1.0, t, p, alpha=0.4):.6f}")

for kappa in (0.0, 0.5, 1.0):
    scan = witnesses.positivity_scan(witnesses.s_witness(4, kappa), samples=1000, seed=1)
    print(f"kappa={kappa}: min over product states {scan.minimum:.8f} (expected {1 - kappa})")

# %% [markdown]
# Detection: a negative value on the state proves entanglement.

# %%
print(f"{'N':>3} {'Bell witness':>13} {'S, kappa=1':>11} {'kappa*':>8}")
for n in range(4, 11):
    bw = witnesses.bell_witness_detection_value(n, 0.0)
    s = expectation(witnesses.s_witness(n, 1.0, 0.2).matrix, dur_state(n, 0.2))
    print(f"{n:>3} {bw:13.5f} {s:11.5f} {witnesses.detection_threshold_kappa(n):8.5f}")
