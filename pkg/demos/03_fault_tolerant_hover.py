"""Hovering with every rotor motor stopped.

If the rotor motors fail, spinning the cone motors still turns the
propellers (through the cone tilt), so they still make thrust. The vertical
share of each thrust swings once per cone revolution, leaving a small
vertical wobble at exactly the cone frequency. This script finds the hover
cone rate, simulates 16 revolutions and reads the wobble off a periodogram.
"""
from __future__ import annotations

import math

import numpy as np

from quadcone import analysis

phi = math.pi / 10
sol, trace, spectrum = analysis.simulate_ft_oscillation(phi, periods=16)

print(f"cone angle            {phi:.4f} rad")
print(f"hover cone rate       {sol.theta_dot_c:.3f} rad/s  ({sol.frequency_hz:.2f} Hz)")
print(f"wobble amplitude      {sol.amplitude:.4f} m/s^2  (g tan^2 phi)")
print(f"altitude range        {np.ptp(trace['z']) * 1e6:.2f} um over {trace.t[-1]:.3f} s")

f, power = spectrum.dominant()
print(f"\nperiodogram: bin width {spectrum.bin_width:.2f} Hz")
print(f"dominant bin          {f:.2f} Hz, power {power:.4f} (m/s^2)^2")
print(f"single-tone estimate  {sol.amplitude ** 2 / 2:.4f} (m/s^2)^2")

print("\nPower grows with the cone angle (and with the cone rate):")
for pt in analysis.oscillation_power_curve(np.radians([5, 10, 15, 20, 25, 30]), periods=8):
    print(f"  phi {math.degrees(pt.phi):4.1f} deg  rate {pt.theta_dot_c:7.2f} rad/s  power {pt.power:.4f}")
