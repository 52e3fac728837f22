"""Choosing the cone angle.

A wider cone lets the thrust sweep a bigger circle but makes the spinning
link carry a much bigger centripetal load in fault-tolerant hover. Both grow
with phi, so no angle beats another on both counts; a weight mu on the
load picks one compromise.
"""
from __future__ import annotations

import math

from quadcone import tradeoff

print(f"phi = pi/4: range {float(tradeoff.range_metric(math.pi / 4)):.5f} m, "
      f"load {float(tradeoff.centripetal_force(math.pi / 4)):.1f} N\n")
print("      mu        phi*(deg)   range (m)   load (N)")
for pt in sorted(tradeoff.pareto_frontier(n=12), key=lambda p: p.mu):
    print(f"  {pt.mu:.3e}    {math.degrees(pt.phi):6.2f}     {pt.range_m:.5f}   {pt.centripetal_force:8.2f}")
