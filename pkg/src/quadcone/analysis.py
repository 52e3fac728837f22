"""Hover solutions and the spectral look at the fault-tolerant hover oscillation.

Healthy hover holds the cones at (0, pi, 0, pi): arms 1 and 3 thrust straight
up, arms 2 and 4 lean by 2*phi and must spin faster by 1/sqrt(cos 2*phi).

Fault-tolerant hover stops every rotor and spins all cones at one rate. Each
thrust then has fixed magnitude ``k_f (rate cos phi)**2`` and a vertical
share that swings between 1 and ``cos 2*phi`` once per revolution::

    m/4 * z'' = k_f (rate cos phi)**2 (cos(phi)**2 + sin(phi)**2 cos(rate t)) - m g / 4

so the period mean vanishes at ``rate = sqrt(m g / (4 k_f)) / cos(phi)**2`` and
the oscillation amplitude is ``g tan(phi)**2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate, optimize, signal

from .params import VehicleParams


@dataclass(frozen=True)
class HoverSolution:
    phi: float
    omega_13: float | None
    omega_24: float | None
    feasible: bool


@dataclass(frozen=True)
class FtHoverSolution:
    phi: float
    theta_dot_c: float        # rad/s
    amplitude: float          # m/s^2, half peak-to-peak of the vertical acceleration
    frequency: float          # rad/s; equals theta_dot_c

    @property
    def frequency_hz(self) -> float:
        return self.frequency / (2.0 * math.pi)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.theta_dot_c


class NoBracket(RuntimeError):
    pass


def _params(params) -> VehicleParams:
    return params if params is not None else VehicleParams()


def hover_rotor_rate(params=None) -> float:
    """Rotor rate that lifts a quarter of the weight with a vertical thrust."""
    p = _params(params)
    return math.sqrt(p.weight / (4.0 * p.thrust_coeff))


def symmetric_hover_rates(phi: float, params=None) -> HoverSolution:
    if not 0.0 <= phi < math.pi / 4:
        return HoverSolution(phi, None, None, False)
    p = _params(params)
    w13 = hover_rotor_rate(p)
    w24 = math.sqrt(p.weight / (4.0 * p.thrust_coeff * math.cos(2.0 * phi)))
    return HoverSolution(phi, w13, w24, True)


def vertical_accel_profile(t, theta_dot_c: float, phi: float, params=None):
    """Open-loop vertical acceleration of the synchronised fault-tolerant hover."""
    if not theta_dot_c > 0:
        raise ValueError("theta_dot_c must be positive")
    p = _params(params)
    t = np.asarray(t, dtype=float)
    lift = 4.0 * p.thrust_coeff / p.total_mass * (theta_dot_c * math.cos(phi)) ** 2
    out = lift * (1.0 - 2.0 * math.sin(phi) ** 2 * np.sin(0.5 * theta_dot_c * t) ** 2) - p.gravity
    return float(out) if out.ndim == 0 else out


def ft_hover_rate_closed_form(phi: float, params=None) -> float:
    return hover_rotor_rate(params) / math.cos(phi) ** 2


def ft_oscillation_amplitude(theta_dot_c: float, phi: float, params=None) -> float:
    p = _params(params)
    return 4.0 * p.thrust_coeff / p.total_mass * theta_dot_c ** 2 * (math.cos(phi) * math.sin(phi)) ** 2


def period_altitude_residual(theta_dot_c: float, phi: float, params=None) -> float:
    """Altitude change over one cone revolution starting from rest, by quadrature.

    This is the repeated integral of the vertical acceleration over
    ``[0, 2 pi / theta_dot_c]``, folded into one integral with weight ``(P - s)``.
    The integrand is a smooth trigonometric polynomial over one period, so
    fixed 64-point Gauss-Legendre is exact to rounding.
    """
    period = 2.0 * math.pi / theta_dot_c
    val, _ = integrate.fixed_quad(
        lambda s: (period - s) * vertical_accel_profile(s, theta_dot_c, phi, params),
        0.0, period, n=64)
    return float(val)


def period_mean_accel(theta_dot_c: float, phi: float, params=None) -> float:
    """Period-mean vertical acceleration recovered from the altitude residual."""
    period = 2.0 * math.pi / theta_dot_c
    return period_altitude_residual(theta_dot_c, phi, params) / (0.5 * period * period)


def ft_hover_rate(phi: float, params=None, *, rtol: float = 1e-13) -> FtHoverSolution:
    """Cone rate for fault-tolerant hover, found by bisection on the period-mean acceleration.

    The mean grows with the rate, so the root is bracketed by expanding an
    interval around the healthy hover rate.
    """
    if not 0.0 < phi <= math.pi / 4:
        raise ValueError(f"fault-tolerant hover needs 0 < phi <= pi/4, got {phi}")
    p = _params(params)
    f = lambda rate: period_mean_accel(rate, phi, p)
    lo = hi = hover_rotor_rate(p)
    for _ in range(60):
        if f(lo) < 0.0 < f(hi):
            break
        lo, hi = lo / 2.0, hi * 2.0
    else:
        raise NoBracket(f"no sign change of the mean vertical acceleration for phi={phi}")
    rate = optimize.bisect(f, lo, hi, xtol=1e-12, rtol=rtol, maxiter=500)
    return FtHoverSolution(phi, rate, ft_oscillation_amplitude(rate, phi, p), rate)


# --- spectra ---------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """One-sided spectrum of a mean-removed signal.

    ``power`` is per bin and sums to the signal variance; ``psd`` is the
    same thing per hertz, so ``psd.sum() * bin_width`` is also the variance.
    A tone of amplitude ``A`` sitting on a bin shows ``power = A**2 / 2`` there.
    """

    frequency: np.ndarray
    power: np.ndarray
    bin_width: float

    @property
    def psd(self) -> np.ndarray:
        return self.power / self.bin_width

    def dominant(self) -> tuple[float, float]:
        """``(frequency_hz, power)`` of the strongest non-DC bin."""
        k = 1 + int(np.argmax(self.power[1:]))
        return float(self.frequency[k]), float(self.power[k])

    def to_csv(self) -> str:
        lines = ["frequency_hz,power"]
        lines += [f"{f:.17g},{p:.17g}" for f, p in zip(self.frequency, self.power)]
        return "\n".join(lines) + "\n"


def periodogram(values, sample_rate: float | None = None, *, times=None,
                rtol: float = 1e-6) -> Spectrum:
    """Rectangular-window periodogram with the mean removed.

    Give either ``sample_rate`` or the sample ``times``; non-uniform times
    raise ``ValueError``.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a 1-D signal with at least two samples")
    if times is not None:
        t = np.asarray(times, dtype=float)
        if t.shape != x.shape:
            raise ValueError("times and values differ in length")
        dt = np.diff(t)
        if np.any(dt <= 0) or np.ptp(dt) > rtol * dt.mean():
            raise ValueError("samples are not uniformly spaced")
        sample_rate = 1.0 / dt.mean()
    if sample_rate is None or not sample_rate > 0:
        raise ValueError("a positive sample_rate is required")
    freq, power = signal.periodogram(x, fs=sample_rate, window="boxcar",
                                     detrend="constant", scaling="spectrum")
    return Spectrum(freq, power, sample_rate / x.size)


@dataclass(frozen=True)
class OscillationPoint:
    phi: float
    theta_dot_c: float
    power: float              # (m/s^2)^2, dominant-bin power of the vertical acceleration
    dominant_freq_hz: float
    bin_width: float
    expected_power: float     # amplitude**2 / 2
    error: str | None = None


def simulate_ft_oscillation(phi: float, params=None, *, periods: int = 16,
                            step_size: float = 1e-4):
    """Simulate fault-tolerant hover over a whole number of revolutions.

    Returns ``(solution, trace, spectrum)``; the spectrum covers exactly the
    ``n_steps`` samples before the last so the window spans ``periods`` turns.
    """
    from . import simulator

    p = _params(params).replace(cone_angle=float(phi))
    config, schedule = simulator.ft_hover_scenario(
        phi, p, periods=periods, step_size=step_size, whole_steps=True)
    trace = simulator.run(config, schedule)
    az = trace["az"][:-1]
    spectrum = periodogram(az, 1.0 / step_size)
    return ft_hover_rate(phi, p), trace, spectrum


def oscillation_power_curve(phis: Iterable[float], params=None, *, periods: int = 16,
                            step_size: float = 1e-4) -> list[OscillationPoint]:
    """Dominant oscillation power against cone rate, one simulation per cone angle.

    A failing grid point is recorded with ``error`` set and the sweep goes on.
    """
    out = []
    for phi in phis:
        try:
            sol, _, spectrum = simulate_ft_oscillation(
                phi, params, periods=periods, step_size=step_size)
        except Exception as exc:  # noqa: BLE001 - sweep keeps going
            nan = float("nan")
            out.append(OscillationPoint(phi, nan, nan, nan, nan, nan, f"{type(exc).__name__}: {exc}"))
            continue
        f_hz, power = spectrum.dominant()
        out.append(OscillationPoint(phi, sol.theta_dot_c, power, f_hz, spectrum.bin_width,
                                    0.5 * sol.amplitude ** 2))
    return out


def power_curve_csv(points: Sequence[OscillationPoint]) -> str:
    lines = ["phi_rad,theta_dot_c,power"]
    lines += [f"{pt.phi:.17g},{pt.theta_dot_c:.17g},{pt.power:.17g}" for pt in points]
    return "\n".join(lines) + "\n"
