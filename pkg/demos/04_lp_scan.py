"""Looking for a local hidden-variable model directly.

A behavior is local iff it is a mixture of deterministic strategies. That
is a linear feasibility problem. An infeasible answer comes with a
separating functional, which is a Bell inequality the behavior violates.
"""

# %%
import time

import numpy as np

from boundbell import lhv
from boundbell.qubits import dur_state, ghz, projector

# %% [markdown]
# Sanity check on CHSH: the certificate recovered from the solver, rescaled
# to local bound 2, reaches 2 sqrt 2 on the maximally entangled state.

# %%
res = lhv.lhv_feasible(lhv.quantum_behavior(projector(ghz(2)), lhv.chsh_spec()))
cert = res.certificate.scaled(2.0)
print(res.verdict, "quantum value", cert.quantum_value, "critical visibility", res.critical_visibility)
print(np.round(cert.coefficients.reshape(4, 4), 3))

# %% [markdown]
# Random measurements on the two-qubit GHZ state sometimes violate CHSH,
# so a scan finds infeasible trials.

# %%
print(lhv.random_setting_scan(projector(ghz(2)), 2, trials=100, seed=0).summary())

# %% [markdown]
# For the 4-qubit bound entangled state no random choice of three settings
# per observer breaks locality. Each LP has 256 independent rows and 4096
# strategies. 20 trials keep this demo short.

# %%
start = time.perf_counter()
report = lhv.random_setting_scan(dur_state(4, 0.0), 3, trials=20, seed=42)
print(report.summary(), f"({time.perf_counter() - start:.0f} s)")
print("worst residual", max(t.residual for t in report.trials))
