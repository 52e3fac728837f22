"""Where does each rotor push as its cone motor turns?

Walks the body -> cone -> rotor chain for one arm and shows that the thrust
sweeps a cone of half-opening phi around a tilted axis, so the largest
deviation from vertical (a half-turn) is 2*phi.
"""
from __future__ import annotations

import math

import numpy as np

from quadcone.geometry import included_angle_kappa, thrust_direction_body

phi = math.pi / 10
print(f"cone angle phi = {phi:.4f} rad ({math.degrees(phi):.1f} deg)\n")
print(" theta    thrust direction (body)        tilt from vertical   formula")
for theta in np.linspace(0, 2 * math.pi, 9):
    n = thrust_direction_body(2, theta, phi)
    tilt = math.degrees(math.acos(np.clip(n[2], -1, 1)))
    print(f"{theta:6.3f}   [{n[0]:+.4f} {n[1]:+.4f} {n[2]:+.4f}]      {tilt:7.3f} deg"
          f"          {math.degrees(included_angle_kappa(theta, phi)):7.3f} deg")

print("\nAt the half-turn every arm leans outward or sideways by 2*phi:")
for i in (1, 2, 3, 4):
    print(f"  arm {i}: {np.round(thrust_direction_body(i, math.pi, phi), 4) + 0.0}")
