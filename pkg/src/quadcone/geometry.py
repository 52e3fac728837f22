"""Rotations, the body -> cone -> rotor frame chain and Euler-angle kinematics.

All angles are radians. Rotation matrices are plain ``(3, 3)`` float arrays.
Arms are numbered 1..4 counter-clockwise starting from +X_B.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PITCH_GUARD = 1e-6
ARMS = (1, 2, 3, 4)


class SingularityError(ArithmeticError):
    """Raised when the Euler-rate map is evaluated too close to pitch = +-pi/2."""


def _check_angle(angle: float) -> float:
    angle = float(angle)
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle!r}")
    return angle


def rot_x(angle: float) -> np.ndarray:
    a = _check_angle(angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    a = _check_angle(angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    a = _check_angle(angle)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def arm_sign(i: int) -> float:
    """(-1)**i: -1 for arms 1 and 3, +1 for arms 2 and 4."""
    if i not in ARMS:
        raise ValueError(f"arm index must be one of {ARMS}, got {i!r}")
    return -1.0 if i % 2 else 1.0


def arm_heading(i: int) -> float:
    """Z-rotation that carries +X_B onto the cone frame of arm ``i``."""
    arm_sign(i)
    return -math.pi + 0.5 * math.pi * i


def arm_position(i: int, arm_length: float) -> np.ndarray:
    """Body-frame position of the end of arm ``i`` (1: +X, 2: +Y, 3: -X, 4: -Y)."""
    arm_sign(i)
    # exact axis-aligned components; cos(pi/2) is not exactly zero
    ux, uy = {1: (1.0, 0.0), 2: (0.0, 1.0), 3: (-1.0, 0.0), 4: (0.0, -1.0)}[i]
    return arm_length * np.array([ux, uy, 0.0])


def _cone_angle(params_or_phi) -> float:
    return float(getattr(params_or_phi, "cone_angle", params_or_phi))


def body_to_cone(i: int, params) -> np.ndarray:
    """Orientation of the cone frame of arm ``i`` in the body frame.

    ``params`` is a :class:`~quadcone.params.VehicleParams` or a bare cone-angle.
    """
    phi = _cone_angle(params)
    if not 0.0 <= phi <= math.pi / 4:
        raise ValueError(f"cone angle must lie in [0, pi/4], got {phi!r}")
    return rot_z(arm_heading(i)) @ rot_x(-phi)


def cone_to_rotor(i: int, theta: float, params) -> np.ndarray:
    """Orientation of the rotor frame of arm ``i`` in its cone frame."""
    phi = _cone_angle(params)
    return rot_z(arm_sign(i) * _check_angle(theta)) @ rot_x(phi)


def body_to_rotor(i: int, theta: float, params) -> np.ndarray:
    return body_to_cone(i, params) @ cone_to_rotor(i, theta, params)


def thrust_direction_body(i: int, theta: float, params) -> np.ndarray:
    """Unit vector of +Z of the rotor frame, expressed in the body frame."""
    return body_to_rotor(i, theta, params)[:, 2].copy()


def included_angle_kappa(theta: float, phi: float) -> float:
    """Angle between the thrust at cone-motor angle ``theta`` and at ``theta = 0``."""
    if not 0.0 <= phi <= math.pi / 4:
        raise ValueError(f"cone angle must lie in [0, pi/4], got {phi!r}")
    # acos(1 - 2 x**2) == 2 asin(x); the asin form keeps full precision near zero
    half = abs(math.sin(0.5 * _check_angle(theta)))
    if half == 1.0:
        return 2.0 * phi  # half-turn: the thrust has swept the full cone opening
    return 2.0 * math.asin(min(1.0, math.sin(phi) * half))


@dataclass(frozen=True)
class EulerAngles:
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.roll, self.pitch, self.yaw])


def _rpy(angles) -> tuple[float, float, float]:
    if isinstance(angles, EulerAngles):
        return angles.roll, angles.pitch, angles.yaw
    r, p, y = angles
    return float(r), float(p), float(y)


def body_to_world(angles) -> np.ndarray:
    """Z-Y-X Euler rotation taking body-frame vectors to the world frame."""
    roll, pitch, yaw = _rpy(angles)
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    return np.array(
        [
            [cp * cy, sr * sp * cy - cr * sy, cr * sp * cy + sr * sy],
            [cp * sy, sr * sp * sy + cr * cy, cr * sp * sy - sr * cy],
            [-sp, sr * cp, cr * cp],
        ]
    )


def euler_rate_matrix(angles) -> np.ndarray:
    roll, pitch, _ = _rpy(angles)
    if abs(pitch) >= math.pi / 2 - PITCH_GUARD:
        raise SingularityError(f"pitch {pitch!r} is within {PITCH_GUARD} rad of +-pi/2")
    cr, sr = math.cos(roll), math.sin(roll)
    tp, secp = math.tan(pitch), 1.0 / math.cos(pitch)
    return np.array(
        [
            [1.0, sr * tp, cr * tp],
            [0.0, cr, -sr],
            [0.0, sr * secp, cr * secp],
        ]
    )


def euler_rates(angles, body_rates) -> np.ndarray:
    """Roll/pitch/yaw rates from body angular velocity ``[p, q, r]``."""
    return euler_rate_matrix(angles) @ np.asarray(body_rates, dtype=float)
