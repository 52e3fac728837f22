"""Newton-Euler dynamics of the body with its four cone motors and rotors.

Rotation is resolved in three layers per arm: the rotor (propeller) is
driven by its cone, the cone by the body. Each layer contributes

    rotor:  tau_P = I_R dw/dt + w x (I_R w) - tau_drag         (rotor frame)
    cone:   tau_C = I_C dw_C/dt + w_C x (I_C w_C) + R_cr tau_P (cone frame)
    body:   I_B dw_B/dt + w_B x (I_B w_B) = tau_thrust - sum_i R_bc tau_C

The rotor and cone accelerations contain the unknown body acceleration
linearly, so the body equation is closed by folding those terms into an
effective inertia and solving one 3x3 system.

The state vector has 16 entries::

    [x, y, z, vx, vy, vz, roll, pitch, yaw, p, q, r, theta_1..theta_4]
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import actuation
from .actuation import ArmCommand
from .geometry import (
    ARMS,
    EulerAngles,
    SingularityError,
    arm_position,
    arm_sign,
    body_to_cone,
    body_to_world,
    cone_to_rotor,
    euler_rate_matrix,
)

STATE_SIZE = 16
POS, VEL, ATT, RATE, CONE = slice(0, 3), slice(3, 6), slice(6, 9), slice(9, 12), slice(12, 16)
E_Z = np.array([0.0, 0.0, 1.0])


@dataclass
class RigidState:
    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    attitude: EulerAngles = field(default_factory=EulerAngles)
    body_rates: np.ndarray = field(default_factory=lambda: np.zeros(3))
    cone_angles: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        self.velocity = np.asarray(self.velocity, dtype=float).reshape(3)
        if not isinstance(self.attitude, EulerAngles):
            self.attitude = EulerAngles(*map(float, self.attitude))
        self.body_rates = np.asarray(self.body_rates, dtype=float).reshape(3)
        self.cone_angles = np.asarray(self.cone_angles, dtype=float).reshape(4)

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.position, self.velocity, self.attitude.as_array(),
                               self.body_rates, self.cone_angles])

    @classmethod
    def from_vector(cls, x) -> "RigidState":
        x = np.asarray(x, dtype=float)
        if x.shape != (STATE_SIZE,):
            raise ValueError(f"state vector must have shape ({STATE_SIZE},), got {x.shape}")
        return cls(x[POS], x[VEL], EulerAngles(*x[ATT]), x[RATE], x[CONE])


def _vec(state) -> np.ndarray:
    return state.to_vector() if isinstance(state, RigidState) else np.asarray(state, dtype=float)


def _cmd(inputs: Sequence[ArmCommand], i: int) -> ArmCommand:
    return inputs[i - 1]


# --- per-arm reference implementation -------------------------------------
# These follow the layered equations term by term. ``body_accel`` is the body
# angular acceleration used inside the rotor/cone accelerations; leave it at
# zero to get the part that is known from the current state.


def cone_relative_rate(i: int, cmd: ArmCommand) -> np.ndarray:
    """Cone angular velocity relative to the body, cone-frame components."""
    return np.array([0.0, 0.0, arm_sign(i) * cmd.cone_rate])


def propeller_inertial_rate(i, state, inputs, params) -> np.ndarray:
    """Inertial angular velocity of propeller ``i`` in rotor-frame components."""
    x = _vec(state)
    cmd = _cmd(inputs, i)
    theta = x[CONE][i - 1]
    r_cr = cone_to_rotor(i, theta, params)
    chain = body_to_cone(i, params) @ r_cr
    w = chain.T @ x[RATE] + r_cr.T @ cone_relative_rate(i, cmd)
    w[2] += arm_sign(i) * cmd.rotor_rate
    return w


def cone_inertial_rate(i, state, inputs, params) -> np.ndarray:
    """Inertial angular velocity of cone ``i`` in cone-frame components."""
    x = _vec(state)
    return body_to_cone(i, params).T @ x[RATE] + cone_relative_rate(i, _cmd(inputs, i))


def propeller_rate_derivative(i, state, inputs, params, body_accel=None) -> np.ndarray:
    """Time derivative of the rotor-frame components of the propeller rate.

    The rotor frame turns relative to the body at ``u`` (the cone's relative
    rate seen in rotor axes), which rotates the body-rate contribution.
    """
    x = _vec(state)
    cmd = _cmd(inputs, i)
    s = arm_sign(i)
    theta = x[CONE][i - 1]
    r_cr = cone_to_rotor(i, theta, params)
    chain = body_to_cone(i, params) @ r_cr
    u = r_cr.T @ cone_relative_rate(i, cmd)
    body_part = chain.T @ x[RATE]
    wdot = -np.cross(u, body_part) + r_cr.T @ np.array([0.0, 0.0, s * cmd.cone_accel])
    wdot[2] += s * cmd.rotor_accel
    if body_accel is not None:
        wdot += chain.T @ np.asarray(body_accel, dtype=float)
    return wdot


def rotor_gyro_torque(i, state, inputs, params, body_accel=None) -> np.ndarray:
    """Torque the cone applies to propeller ``i`` (rotor frame)."""
    w = propeller_inertial_rate(i, state, inputs, params)
    wdot = propeller_rate_derivative(i, state, inputs, params, body_accel)
    I_R = np.asarray(params.rotor_inertia)
    drag = actuation.drag_moment_rotor(i, _cmd(inputs, i), params)
    return I_R * wdot + np.cross(w, I_R * w) - drag


def cone_reaction_torque(i, state, inputs, params, body_accel=None) -> np.ndarray:
    """Torque the body applies to cone ``i`` (cone frame)."""
    x = _vec(state)
    cmd = _cmd(inputs, i)
    w_c = cone_inertial_rate(i, state, inputs, params)
    wdot_c = np.array([0.0, 0.0, arm_sign(i) * cmd.cone_accel])
    if body_accel is not None:
        wdot_c = wdot_c + body_to_cone(i, params).T @ np.asarray(body_accel, dtype=float)
    I_C = np.asarray(params.cone_inertia)
    tau_p = rotor_gyro_torque(i, state, inputs, params, body_accel)
    r_cr = cone_to_rotor(i, x[CONE][i - 1], params)
    return I_C * wdot_c + np.cross(w_c, I_C * w_c) + r_cr @ tau_p


def effective_inertia(state, params) -> np.ndarray:
    """Body inertia plus every cone and rotor inertia rotated into body axes."""
    x = _vec(state)
    J = params.I_B.copy()
    for i in ARMS:
        r_bc = body_to_cone(i, params)
        chain = r_bc @ cone_to_rotor(i, x[CONE][i - 1], params)
        J += r_bc @ params.I_C @ r_bc.T + chain @ params.I_R @ chain.T
    return J


def thrust_moment_body(state, inputs, params) -> np.ndarray:
    """Sum of the thrust lever-arm moments about the body origin."""
    x = _vec(state)
    total = np.zeros(3)
    for i in ARMS:
        _, moment, _ = actuation.arm_wrench_parts(i, x[CONE][i - 1], _cmd(inputs, i), params)
        total += moment
    return total


def body_angular_acceleration(state, inputs, params) -> np.ndarray:
    """Body angular acceleration (body frame).

    Drag moments reach the body through the rotor and cone layers, so only
    the thrust lever-arm moments enter as an external torque here.
    """
    x = _vec(state)
    omega = x[RATE]
    I_B = np.asarray(params.body_inertia)
    rhs = thrust_moment_body(x, inputs, params) - np.cross(omega, I_B * omega)
    for i in ARMS:
        rhs -= body_to_cone(i, params) @ cone_reaction_torque(i, x, inputs, params)
    return np.linalg.solve(effective_inertia(x, params), rhs)


def total_thrust_body(state, inputs, params) -> np.ndarray:
    x = _vec(state)
    total = np.zeros(3)
    for i in ARMS:
        force, _, _ = actuation.arm_wrench_parts(i, x[CONE][i - 1], _cmd(inputs, i), params)
        total += force
    return total


def translational_acceleration(state, inputs, params) -> np.ndarray:
    """World-frame acceleration of the body origin."""
    x = _vec(state)
    acc = body_to_world(x[ATT]) @ total_thrust_body(x, inputs, params) / params.total_mass
    acc[2] -= params.gravity
    return acc


def state_derivative_reference(state, inputs, params) -> np.ndarray:
    """Slow, term-by-term state derivative; used to cross-check the fast kernel."""
    x = _vec(state)
    dx = np.empty(STATE_SIZE)
    dx[POS] = x[VEL]
    dx[VEL] = translational_acceleration(x, inputs, params)
    dx[ATT] = euler_rate_matrix(x[ATT]) @ x[RATE]
    dx[RATE] = body_angular_acceleration(x, inputs, params)
    dx[CONE] = [cmd.cone_rate for cmd in inputs]
    return dx


# --- vectorised kernel used by the integrator -----------------------------


@dataclass(frozen=True)
class _Consts:
    signs: np.ndarray          # (4,)
    r_bc: np.ndarray           # (4, 3, 3)
    arms: np.ndarray           # (4, 3)
    body_and_cones: np.ndarray  # (3, 3) I_B plus the rotated cone inertias
    I_B: np.ndarray            # (3,)
    I_C: np.ndarray            # (3,)
    I_R: np.ndarray            # (3,)
    c_phi: float
    s_phi: float


@functools.lru_cache(maxsize=64)
def _consts(params) -> _Consts:
    r_bc = np.stack([body_to_cone(i, params) for i in ARMS])
    I_C = np.diag(params.cone_inertia)
    return _Consts(
        signs=np.array([arm_sign(i) for i in ARMS]),
        r_bc=r_bc,
        arms=np.stack([arm_position(i, params.arm_length) for i in ARMS]),
        body_and_cones=np.diag(params.body_inertia) + sum(r @ I_C @ r.T for r in r_bc),
        I_B=np.array(params.body_inertia),
        I_C=np.array(params.cone_inertia),
        I_R=np.array(params.rotor_inertia),
        c_phi=math.cos(params.cone_angle),
        s_phi=math.sin(params.cone_angle),
    )


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise cross product of two ``(n, 3)`` arrays."""
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1]
    out[..., 1] = a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2]
    out[..., 2] = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return out


@dataclass(frozen=True)
class InputArrays:
    """Four arm commands packed as arrays for the vectorised kernel."""

    cone_rate: np.ndarray
    rotor_rate: np.ndarray
    cone_accel: np.ndarray
    rotor_accel: np.ndarray

    @classmethod
    def pack(cls, inputs: Sequence[ArmCommand]) -> "InputArrays":
        if len(inputs) != 4:
            raise ValueError(f"need four arm commands, got {len(inputs)}")
        return cls(
            np.array([c.cone_rate for c in inputs], dtype=float),
            np.array([c.rotor_rate for c in inputs], dtype=float),
            np.array([c.cone_accel for c in inputs], dtype=float),
            np.array([c.rotor_accel for c in inputs], dtype=float),
        )


def arm_kinematics(x: np.ndarray, u: InputArrays, params):
    """Per-arm rotor frames, thrust vectors and effective z-rates, all stacked over arms.

    Returns ``(chain, thrust_body, wz)`` with ``chain`` the ``(4, 3, 3)``
    rotor-to-body rotations.
    """
    k = _consts(params)
    a = k.signs * x[CONE]
    ca, sa = np.cos(a), np.sin(a)
    r_cr = np.zeros((4, 3, 3))
    r_cr[:, 0, 0] = ca
    r_cr[:, 0, 1] = -sa * k.c_phi
    r_cr[:, 0, 2] = sa * k.s_phi
    r_cr[:, 1, 0] = sa
    r_cr[:, 1, 1] = ca * k.c_phi
    r_cr[:, 1, 2] = -ca * k.s_phi
    r_cr[:, 2, 1] = k.s_phi
    r_cr[:, 2, 2] = k.c_phi
    chain = k.r_bc @ r_cr
    wz = k.signs * (u.cone_rate * k.c_phi + u.rotor_rate)
    thrust = (params.thrust_coeff * wz * wz)[:, None] * chain[:, :, 2]
    return r_cr, chain, thrust, wz


def state_derivative_vector(x: np.ndarray, u: InputArrays, params) -> np.ndarray:
    """State derivative on the flat state vector (fast path)."""
    k = _consts(params)
    omega = x[RATE]
    r_cr, chain, thrust, wz = arm_kinematics(x, u, params)

    # propeller rates in rotor axes
    chain_t = chain.transpose(0, 2, 1)
    body_part = chain_t @ omega                       # (4, 3)
    rel = np.zeros((4, 3))
    rel[:, 1] = k.signs * u.cone_rate * k.s_phi
    rel[:, 2] = k.signs * u.cone_rate * k.c_phi
    w = body_part + rel
    w[:, 2] += k.signs * u.rotor_rate

    w_c = k.r_bc.transpose(0, 2, 1) @ omega
    w_c[:, 2] += k.signs * u.cone_rate

    # all four families of cross products in one stacked call
    lhs = np.concatenate([rel, w, w_c, k.arms])
    rhs_ = np.concatenate([body_part, k.I_R * w, k.I_C * w_c, thrust])
    crosses = _cross(lhs, rhs_)
    frame_turn, gyro_p, gyro_c, lever = crosses[:4], crosses[4:8], crosses[8:12], crosses[12:]

    wdot = -frame_turn
    wdot[:, 1] += k.signs * u.cone_accel * k.s_phi
    wdot[:, 2] += k.signs * (u.cone_accel * k.c_phi + u.rotor_accel)

    tau_p = k.I_R * wdot + gyro_p
    tau_p[:, 2] += np.sign(wz) * params.drag_coeff * wz * wz

    tau_c = gyro_c + (r_cr @ tau_p[:, :, None])[:, :, 0]
    tau_c[:, 2] += k.I_C[2] * k.signs * u.cone_accel

    Iw = k.I_B * omega
    rhs = lever.sum(axis=0) - (k.r_bc @ tau_c[:, :, None]).sum(axis=0)[:, 0]
    rhs[0] -= omega[1] * Iw[2] - omega[2] * Iw[1]
    rhs[1] -= omega[2] * Iw[0] - omega[0] * Iw[2]
    rhs[2] -= omega[0] * Iw[1] - omega[1] * Iw[0]
    J = k.body_and_cones + ((chain * k.I_R) @ chain_t).sum(axis=0)

    dx = np.empty(STATE_SIZE)
    dx[POS] = x[VEL]
    acc = body_to_world(x[ATT]) @ thrust.sum(axis=0) / params.total_mass
    acc[2] -= params.gravity
    dx[VEL] = acc
    dx[ATT] = euler_rate_matrix(x[ATT]) @ omega
    dx[RATE] = np.linalg.solve(J, rhs)
    dx[CONE] = u.cone_rate
    return dx


def state_derivative(state, inputs, params) -> np.ndarray:
    """Full state derivative for a :class:`RigidState` (or flat vector) and four commands."""
    u = inputs if isinstance(inputs, InputArrays) else InputArrays.pack(inputs)
    return state_derivative_vector(_vec(state), u, params)


def angular_momentum_world(state, inputs, params) -> np.ndarray:
    """World-frame angular momentum of body, cones and propellers about the body origin.

    Translational momentum of the sub-bodies is ignored, as in the dynamics.
    """
    x = _vec(state)
    R = body_to_world(x[ATT])
    total = np.asarray(params.body_inertia) * x[RATE]
    I_C = np.asarray(params.cone_inertia)
    I_R = np.asarray(params.rotor_inertia)
    for i in ARMS:
        r_bc = body_to_cone(i, params)
        chain = r_bc @ cone_to_rotor(i, x[CONE][i - 1], params)
        total += r_bc @ (I_C * cone_inertial_rate(i, x, inputs, params))
        total += chain @ (I_R * propeller_inertial_rate(i, x, inputs, params))
    return R @ total


__all__ = [
    "RigidState", "InputArrays", "SingularityError", "STATE_SIZE",
    "propeller_inertial_rate", "cone_inertial_rate", "propeller_rate_derivative",
    "rotor_gyro_torque", "cone_reaction_torque", "effective_inertia",
    "thrust_moment_body", "body_angular_acceleration", "total_thrust_body",
    "translational_acceleration", "state_derivative", "state_derivative_vector",
    "state_derivative_reference", "arm_kinematics", "angular_momentum_world",
]
