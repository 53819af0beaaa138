"""
Photon pairs, beam splitters and a badly built double slit
==========================================================
"""

import math

import numpy as np

from twoboundary import interference as itf

#%%
# Two emitters and a common detector
# ----------------------------------
# With a fixed phase relation the pair rate swings between 0 and 2.  Once the
# phase is random, the cross term averages out.
for phi in (0.0, math.pi / 3, math.pi / 2, math.pi):
    print(f"phi={phi:.3f}  coincidence={itf.hbt_coincidence(itf.HbtSetup(phi)):.3f}")

rng = np.random.default_rng(0)
phis = rng.uniform(0, 2 * math.pi, 20_000)
print("random phases:", np.mean([itf.hbt_coincidence(itf.HbtSetup(p)) for p in phis]))
print("phi and phi+pi together:", itf.hbt_pair_average(1.234))

#%%
# Joining two paths at a 50/50 splitter
# -------------------------------------
for d in np.linspace(0, math.pi / 2, 5):
    p1, p2 = itf.splitter_outputs(d, 0.0)
    print(f"phase difference {d:.3f}:  {p1:.3f} / {p2:.3f}")

#%%
# Double slit with a wide separation
# ----------------------------------
# Source and detector sit on the line through slit A.  Slit B is 13 mm away,
# so its path length changes across its own width and the contributions
# cancel.
geom = itf.SlitGeometry(
    source=(0.0, 1.0), detector=(0.0, -1.0),
    slit_a_center=0.0, slit_b_center=13e-3,
    slit_a_width=1e-4, slit_b_width=1e-4,
    wave_number=2 * math.pi / 500e-9,
)
rep = itf.slit_intensities(geom)
print(f"|A|^2 = {rep.intensity_a:.3e}   |B|^2 = {rep.intensity_b:.3e}")
print(f"detour ratio {rep.detour_ratio:.2e}  (envelope {itf.detour_envelope(geom):.2e})")

# Shrinking the slits restores the textbook picture where both slits count.
for w in (1e-4, 1e-5, 1e-6, 1e-7):
    g = itf.SlitGeometry(geom.source, geom.detector, 0.0, 13e-3, w, w, geom.wave_number)
    print(f"width {w:.0e}: ratio {itf.slit_intensities(g, 'sinc').detour_ratio:.4f}")
