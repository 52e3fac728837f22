"""Healthy hover with tilted thrust on two arms.

Cones 1 and 3 sit at their vertical position while cones 2 and 4 sit at the
half-turn, leaning by 2*phi in opposite directions. The leaning rotors must
spin faster to keep the lift; the sideways parts cancel, and so do the drag
yaw moments. A 2 s simulation confirms the vehicle stays put.
"""
from __future__ import annotations

import math

import numpy as np

from quadcone import analysis, simulator

print("phi (deg)   omega_13   omega_24  [rad/s]")
for deg in (0, 5, 10, 15, 20, 25, 30, 35, 40, 44):
    sol = analysis.symmetric_hover_rates(math.radians(deg))
    print(f"{deg:8d}   {sol.omega_13:8.2f}   {sol.omega_24:8.2f}")
print("omega_24 grows without bound as phi approaches 45 deg.\n")

phi = math.pi / 8
config, schedule = simulator.symmetric_hover_scenario(phi, record_decimation=100)
trace = simulator.run(config, schedule)
v = trace.data[:, 4:7]
print(f"2 s at phi = pi/8: max |v| = {np.abs(v).max():.2e} m/s, "
      f"max |attitude| = {np.abs(trace.data[:, 7:10]).max():.2e} rad")
