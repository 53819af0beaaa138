"""
Pre- and post-selected qubit
============================

A qubit prepared in |0> and later found in a chosen final state.  What can
be said about a Pauli measurement made in between?
"""

import numpy as np

from twoboundary import tsvf

Z = np.diag([1.0, -1.0])
X = np.array([[0.0, 1.0], [1.0, 0.0]])

# Start in |0>, end in |+>.  A Z measurement in between is certain to give +1,
# even though |+> alone would give +1 or -1 with equal odds.
sc = tsvf.TwoStateScenario(pre=[1, 0], post=[1, 1] / np.sqrt(2), observable=Z)
print("ABL  P(-1), P(+1) for Z:", tsvf.abl_probability(sc))

# The same boundaries make an X measurement certain too.
print("ABL  P(-1), P(+1) for X:", tsvf.abl_probability(
    tsvf.TwoStateScenario(pre=[1, 0], post=[1, 1] / np.sqrt(2), observable=X)))

#%%
# Weak values
# -----------
# A weak measurement of Z between nearly orthogonal boundaries reads far
# outside the eigenvalue range.
for offset in (45, 20, 5, 1):
    a = np.pi / 4 - np.radians(offset)
    post = np.array([np.cos(a), -np.sin(a)])  # <+|post> = sin(offset)
    wv = tsvf.weak_value(tsvf.TwoStateScenario([1, 1] / np.sqrt(2), post, Z))
    print(f"{offset:2d} deg from orthogonal  weak value of Z = {wv.real:9.3f}")

#%%
# Where the two evolutions meet does not matter
# ---------------------------------------------
rng = np.random.default_rng(1)
d = 4
steps = []
for _ in range(3):
    q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    steps.append(q)
h = rng.standard_normal((d, d))
sc = tsvf.TwoStateScenario(
    pre=tsvf.haar_state(rng, d), post=tsvf.haar_state(rng, d),
    observable=h + h.T, evolution_steps=steps, measurement_index=1,
)
for split in range(4):
    print("split", split, np.round(tsvf.match_time_invariance(sc, split), 12))

#%%
# Averaging over unknown final states
# -----------------------------------
# The mean ABL distribution over random final states sits close to the Born
# weights but is pulled towards the uniform distribution; the pull shrinks
# as the dimension grows.
pre = np.array([0.6, 0.8j])
res = tsvf.born_recovery(pre, Z, sample_count=20000, seed=5)
print("mean ABL :", res.mean, "+/-", res.stderr)
print("Born     :", res.born)

k = np.arange(16)
pre16 = np.sqrt(k + 1.0) / np.sqrt(136.0)
res16 = tsvf.born_recovery(pre16, np.diag(k.astype(float)), sample_count=20000, seed=5)
print("dim 16, largest outcome: mean ABL", res16.mean[-1].round(4), " Born", res16.born[-1].round(4))
