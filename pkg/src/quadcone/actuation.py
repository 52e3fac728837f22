"""Thrust and drag generation per arm, and the admissible-input gate.

Each arm carries two rate inputs: the cone motor (``cone_rate``) that swings
the thrust around its cone, and the rotor motor (``rotor_rate``) that spins
the propeller. Only the propeller's spin about its own axis, measured
relative to the body, makes thrust and drag:

    w_z = s_i * (cone_rate * cos(phi) + rotor_rate),   s_i = (-1)**i
    F   = k_f * w_z**2
    M   = k_m * w_z**2
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import arm_position, arm_sign, cone_to_rotor, thrust_direction_body

RATE_RATIO = 10.0


class Mode(enum.Enum):
    NORMAL = "normal"
    FAULT_TOLERANT = "fault_tolerant"


class InadmissibleCommand(ValueError):
    pass


@dataclass(frozen=True)
class ArmCommand:
    """Rate inputs for one arm.

    ``cone_accel`` and ``rotor_accel`` are the time derivatives of the two
    rates; they only feed the gyroscopic terms and are zero for
    piecewise-constant schedules.
    """

    cone_rate: float = 0.0
    rotor_rate: float = 0.0
    mode: Mode = Mode.NORMAL
    cone_accel: float = 0.0
    rotor_accel: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))

    @classmethod
    def fault_tolerant(cls, cone_rate: float) -> "ArmCommand":
        return cls(cone_rate=cone_rate, rotor_rate=0.0, mode=Mode.FAULT_TOLERANT)

    def to_dict(self) -> dict:
        out = {"cone_rate": self.cone_rate, "rotor_rate": self.rotor_rate,
               "mode": self.mode.value}
        if self.cone_accel or self.rotor_accel:
            out.update(cone_accel=self.cone_accel, rotor_accel=self.rotor_accel)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ArmCommand":
        return cls(**data)


IDLE = ArmCommand()


def in_admissible_region(cone_rate: float, rotor_rate: float) -> bool:
    """Mode-free membership: ``{w >= 10|c|, w > 0}`` union the line ``w == 0``."""
    if rotor_rate == 0.0:
        return True
    return rotor_rate > 0.0 and rotor_rate >= RATE_RATIO * abs(cone_rate)


def validate_command(cmd: ArmCommand) -> str | None:
    """Return ``None`` if ``cmd`` is admissible, else a message naming the broken rule."""
    c, w = float(cmd.cone_rate), float(cmd.rotor_rate)
    if not (math.isfinite(c) and math.isfinite(w)):
        return "rates must be finite"
    if w < 0.0:
        return f"rotor_rate >= 0 violated: rotor_rate = {w}"
    if cmd.mode is Mode.FAULT_TOLERANT:
        if w != 0.0:
            return f"fault-tolerant mode needs rotor_rate == 0, got {w}"
        return None
    if w < RATE_RATIO * abs(c):
        return f"rotor_rate >= 10*|cone_rate| violated: {w} < {RATE_RATIO * abs(c)}"
    return None


def require_admissible(cmd: ArmCommand) -> ArmCommand:
    problem = validate_command(cmd)
    if problem is not None:
        raise InadmissibleCommand(problem)
    return cmd


def propeller_rate_body(i: int, cmd: ArmCommand, params, theta: float = 0.0) -> np.ndarray:
    """Propeller angular velocity relative to the body, in rotor-frame components.

    Computed as the full product ``cone_to_rotor(i, theta).T @ [0, 0, s*cone_rate]
    + [0, 0, s*rotor_rate]``; the result does not depend on ``theta``.
    """
    s = arm_sign(i)
    rel = cone_to_rotor(i, theta, params).T @ np.array([0.0, 0.0, s * cmd.cone_rate])
    rel[2] += s * cmd.rotor_rate
    return rel


def effective_z_rate(i: int, cmd: ArmCommand, params) -> float:
    return arm_sign(i) * (cmd.cone_rate * math.cos(params.cone_angle) + cmd.rotor_rate)


def thrust_magnitude(i: int, cmd: ArmCommand, params) -> float:
    return params.thrust_coeff * effective_z_rate(i, cmd, params) ** 2


def drag_moment_magnitude(i: int, cmd: ArmCommand, params) -> float:
    return params.drag_coeff * effective_z_rate(i, cmd, params) ** 2


def drag_moment_rotor(i: int, cmd: ArmCommand, params) -> np.ndarray:
    """Aerodynamic drag moment on propeller ``i`` in rotor-frame components.

    It lies on the rotor axis and always opposes the propeller's spin.
    """
    wz = effective_z_rate(i, cmd, params)
    return np.array([0.0, 0.0, -math.copysign(params.drag_coeff * wz * wz, wz)])


def hub_velocity_body(i: int, cmd: ArmCommand, params) -> np.ndarray:
    """Velocity of the propeller hub relative to the body, rotor-frame components.

    Logged only; it is not fed into the force model.
    """
    s = arm_sign(i)
    return s * np.array([math.sin(params.cone_angle) * params.link_offset * cmd.cone_rate, 0.0, 0.0])


def arm_wrench_parts(i: int, theta: float, cmd: ArmCommand, params):
    """Body-frame ``(force, thrust_moment, drag_moment)`` about the body origin."""
    direction = thrust_direction_body(i, theta, params)
    wz = effective_z_rate(i, cmd, params)
    force = params.thrust_coeff * wz * wz * direction
    thrust_moment = np.cross(arm_position(i, params.arm_length), force)
    drag = -math.copysign(params.drag_coeff * wz * wz, wz) * direction
    return force, thrust_moment, drag


def arm_force_and_moment_body(i: int, theta: float, cmd: ArmCommand, params):
    """Body-frame force and total moment (thrust lever arm plus rotor drag) of arm ``i``."""
    force, thrust_moment, drag = arm_wrench_parts(i, theta, cmd, params)
    return force, thrust_moment + drag
