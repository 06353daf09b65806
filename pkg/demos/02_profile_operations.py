"""The four profile operations, one at a time.

Profiles are 3-piece-linear: flat at ``value_left``, a linear ramp, flat at
``value_right``.  Diffusion widens the ramp with residence time; joins and
splits rearrange profiles across channel widths while conserving reactant.
"""

import math

from gridmixer import SPProfile, advance_straight, join_profiles, join_split, split_profile

W = 0.2        # channel width, mm
D = 1.33e-4    # sodium diffusivity, mm^2/s


def show(name, p):
    print(f"{name:28s} left={p.value_left:.4f} right={p.value_right:.4f} "
          f"flats=({p.flat_left:.4f}, {p.flat_right:.4f}) area={p.area():.5f}")


# 1. A fresh interface between pure fluids, advanced down a channel.
step = join_profiles([(SPProfile.uniform(1.0, W), 1.0),
                      (SPProfile.uniform(0.0, W), 1.0)], W)
show("fresh 50/50 interface", step)
after = advance_straight(step, length=1.5, velocity=1.0, diffusivity=D)
show("after one 1.5 mm channel", after)
print(f"  ramp width {after.ramp_width:.5f} mm = 4*sqrt(D*t) = "
      f"{4 * math.sqrt(D * 1.6):.5f} mm  (t = (1.5 + w/2) / v = 1.6 s)\n")

# 2. Long residence: the ramp reaches both walls, then wall values decay.
deep = advance_straight(step, length=300.0, velocity=1.0, diffusivity=D)
show("after 300 mm (deep mixing)", deep)
print()

# 3. Splitting cuts the profile at velocity fractions and rescales each slice.
left, right = split_profile(after, [3.0, 1.0])
show("left slice (3/4 of flow)", left)
show("right slice (1/4 of flow)", right)
flux_in = (3.0 + 1.0) * after.area()
flux_out = 3.0 * left.area() + 1.0 * right.area()
print(f"  flux conserved: {flux_in:.6f} vs {flux_out:.6f}\n")

# 4. Rejoining the slices at the same ratios reproduces the original exactly.
back = join_profiles([(left, 3.0), (right, 1.0)], W)
show("slices rejoined", back)
print()

# 5. A join-and-split node does both steps in one go.
outs = join_split([(after, 1.0), (SPProfile.uniform(0.0, W), 1.0)], [1.5, 0.5])
for i, p in enumerate(outs):
    show(f"join-split outflow {i}", p)
