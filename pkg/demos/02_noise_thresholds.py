"""How much white noise the violation survives, for two inequalities.

This prints the data of the threshold-versus-N curve. Mermin-Klyshko
settings are optimized numerically, which takes a minute or so.
"""

# %%
from boundbell import bell, mermin

# %% [markdown]
# Mixing in a fraction v of white noise scales the Bell value by (1 - v),
# since the noise contributes nothing. The threshold is the v at which the
# value falls back onto the local bound.
#
# For the two-setting Mermin-Klyshko family the best equatorial settings
# must be searched for. Coordinate ascent is enough because the value is a
# sinusoid in each single angle.

# %%
print(f"{'N':>3} {'three-setting':>14} {'MK optimum':>11} {'MK threshold':>13}")
for n in range(4, 11):
    best = mermin.mk_dur_optimum(n)
    v_three = bell.noise_threshold_three(n)
    # the MK local bound is 1, so noise v leaves (1 - v) * best
    v_mk = max(0.0, 1 - 1 / best) if best > 1 + 1e-9 else 0.0
    print(f"{n:>3} {v_three:14.5f} {best:11.5f} {v_mk:13.5f}")

# %% [markdown]
# The MK optimum equals 2^((N-1)/2)/(N+1): the state's only off-diagonal
# element is the GHZ corner, and the best MK settings for GHZ reach it
# completely. It first exceeds 1 at N = 8. The three-setting inequality
# already tolerates noise at N = 7 and stays ahead for larger N.

# %%
for n in (7, 8):
    print(n, 2 ** ((n - 1) / 2) / (n + 1))
