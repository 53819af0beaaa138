"""
Random walk fixed at both ends
==============================

A particle hops on a ring.  Each step it keeps its velocity with
probability 1 - 2 eps, or changes it by one unit up or down.  Only runs that
end where the final boundary says are kept.  The initial boundary pushes the
walker to the right; the final one asks it to come to rest at the origin.
"""

import numpy as np

from twoboundary import render, walk

cfg = walk.WalkConfig(width=64, horizon=40, epsilon=0.05,
                      initial_x=0, initial_v=1, final_x=0, final_v=0)

# Rejection sampling: most tries miss the final boundary.
profile = walk.run_ensemble(cfg, tries=400_000, seed=42)
print(f"accepted {profile.accepted} of {profile.tries} "
      f"(rate {profile.acceptance_rate:.5f})")

# The forward-backward sum gives the same picture without noise.
exact = walk.exact_conditioned_density(cfg)
print(f"exact acceptance probability {exact.total_weight:.5f}")
print(render.render(profile, "ascii"))

#%%
# Mean velocity along the horizon
# -------------------------------
# Near t = 0 the walker still remembers its initial push; towards t = T it
# has to slow down to meet the final boundary.
for t in (1, 5, 10, 20, 30, 35, 40):
    print(f"t={t:2d}  <v> = {exact.mean_velocity[t]:+.3f}")

#%%
# Swapping the boundaries
# -----------------------
# Exchanging start and end (and negating their velocities) plays the same
# histogram backwards in time.
rev = walk.exact_conditioned_density(walk.reverse_config(cfg))
print("mirror symmetric:", np.allclose(rev.density, exact.density[::-1], atol=1e-12))
