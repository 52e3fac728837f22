"""Cone-angle trade-off: thrust-direction range against the centripetal load.

A wider cone lets the thrust point over a larger circle (range
``2 pi d sin phi``) but the spinning link of a fault-tolerant hover then
carries a larger centripetal force ``m**2 g d / (4 k_f) * sin phi / cos(phi)**3``.
Both grow with ``phi`` on ``[0, pi/4]``, so every cone angle is Pareto-optimal;
the weighted sum ``-R + mu * F_C`` picks one per weight ``mu``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import optimize

from .params import VehicleParams

PHI_MAX = math.pi / 4


@dataclass(frozen=True)
class ParetoPoint:
    phi: float
    range_m: float
    centripetal_force: float
    mu: float
    cost: float

    @property
    def neg_range(self) -> float:
        return 0.0 - self.range_m  # avoid printing -0


def _check_phi(phi):
    arr = np.asarray(phi, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > PHI_MAX + 1e-15):
        raise ValueError(f"cone angle must lie in [0, pi/4], got {phi!r}")
    return arr


def range_metric(phi, params: VehicleParams | None = None):
    p = params or VehicleParams()
    return 2.0 * math.pi * p.link_offset * np.sin(_check_phi(phi))


def centripetal_force(phi, params: VehicleParams | None = None):
    p = params or VehicleParams()
    phi = _check_phi(phi)
    scale = p.total_mass ** 2 * p.gravity * p.link_offset / (4.0 * p.thrust_coeff)
    return scale * np.sin(phi) / np.cos(phi) ** 3


def weighted_cost(phi, mu: float, params: VehicleParams | None = None):
    if mu < 0:
        raise ValueError("mu must be non-negative")
    return -range_metric(phi, params) + mu * centripetal_force(phi, params)


def minimize_cost(mu: float, params: VehicleParams | None = None, *, xatol: float = 1e-10) -> float:
    """Cone angle minimising the weighted cost on ``[0, pi/4]``.

    Bounded Brent search, with both interval ends checked explicitly since
    the minimum often sits on the boundary.
    """
    res = optimize.minimize_scalar(lambda x: float(weighted_cost(x, mu, params)),
                                   bounds=(0.0, PHI_MAX), method="bounded",
                                   options={"xatol": xatol})
    candidates = [0.0, float(res.x), PHI_MAX]
    costs = [float(weighted_cost(c, mu, params)) for c in candidates]
    return candidates[int(np.argmin(costs))]


def default_mu_grid(params: VehicleParams | None = None, n: int = 64) -> np.ndarray:
    """Log-spaced weights one decade either side of ``R(pi/4) / F_C(pi/4)``.

    The ends of that span already pin the optimum to ``pi/4`` and ``0``.
    """
    if n < 2:
        raise ValueError("need at least two weights")
    scale = float(range_metric(PHI_MAX, params) / centripetal_force(PHI_MAX, params))
    return scale * np.logspace(-1.0, 1.0, n)


def pareto_point(phi: float, mu: float, params: VehicleParams | None = None) -> ParetoPoint:
    return ParetoPoint(phi, float(range_metric(phi, params)), float(centripetal_force(phi, params)),
                       mu, float(weighted_cost(phi, mu, params)))


def pareto_frontier(params: VehicleParams | None = None, mus: Iterable[float] | None = None,
                    n: int = 64) -> list[ParetoPoint]:
    """Weighted-sum sweep; one point per weight, sorted by cone angle."""
    mus = default_mu_grid(params, n) if mus is None else list(mus)
    points = [pareto_point(minimize_cost(mu, params), float(mu), params) for mu in mus]
    return sorted(points, key=lambda pt: (pt.phi, -pt.mu))


def parametric_frontier(phis: Iterable[float], params: VehicleParams | None = None) -> list[ParetoPoint]:
    """Objectives evaluated directly on a grid of cone angles (``mu`` reported as NaN)."""
    return sorted((pareto_point(float(phi), float("nan"), params) for phi in phis),
                  key=lambda pt: pt.phi)


def is_dominated(a: ParetoPoint, b: ParetoPoint) -> bool:
    """True if ``b`` dominates ``a`` (more range and less force, one strictly)."""
    weakly = b.range_m >= a.range_m and b.centripetal_force <= a.centripetal_force
    strictly = b.range_m > a.range_m or b.centripetal_force < a.centripetal_force
    return weakly and strictly


def frontier_csv(points: Sequence[ParetoPoint]) -> str:
    lines = ["mu,phi_rad,neg_range_m,centripetal_force_n,cost"]
    lines += [f"{pt.mu:.17g},{pt.phi:.17g},{pt.neg_range:.17g},{pt.centripetal_force:.17g},{pt.cost:.17g}"
              for pt in points]
    return "\n".join(lines) + "\n"
