"""
Photon number below and above threshold
=======================================

dn/dt = (N2 - N1) W n + W N2 - 2 kappa n, with the level occupations held
fixed.  Above threshold the photon number grows exponentially; below it
settles at a finite value fed by spontaneous emission.
"""

from twoboundary import laser

below = laser.LaserParams(n2=1.0, n1=3.0, w=1.0, kappa=0.5)
above = laser.LaserParams(n2=3.0, n1=1.0, w=0.5, kappa=0.2)

for name, p in (("below", below), ("above", above)):
    s = laser.simulate(p, n0=1.0, t_end=10.0, dt=0.01)
    exact = laser.closed_form(p, 1.0, s.times[-1])
    print(f"{name}: a={p.growth_rate:+.2f} b={p.source:.2f}  n(10)={s.photon_counts[-1]:.6g} "
          f"(closed form {exact:.6g})")

# Below threshold the fixed point -b/a is where the right-hand side changes sign.
fixed = -below.source / below.growth_rate
for n in (0.0, 0.5 * fixed, fixed, 2 * fixed):
    print(f"n={n:.3f}  growing: {laser.lasing_condition(below, n)}")
