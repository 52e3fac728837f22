from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from quadcone.actuation import ArmCommand, arm_force_and_moment_body
from quadcone.dynamics import (
    CONE, RATE, VEL, RigidState, angular_momentum_world, body_angular_acceleration,
    cone_inertial_rate, cone_reaction_torque, propeller_inertial_rate, rotor_gyro_torque,
    state_derivative, state_derivative_reference, thrust_moment_body, total_thrust_body,
    translational_acceleration,
)
from quadcone.geometry import ARMS, EulerAngles, arm_sign, body_to_cone, body_to_world, cone_to_rotor, rot_x, rot_z
from quadcone.params import VehicleParams

IDLE4 = [ArmCommand()] * 4


def hat(w):
    return np.array([[0, -w[2], w[1]], [w[2], 0, -w[0]], [-w[1], w[0], 0]])


def vee(m):
    return np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]]) / 2


def hover_inputs(params):
    w13 = math.sqrt(params.weight / (4 * params.thrust_coeff))
    w24 = w13 / math.sqrt(math.cos(2 * params.cone_angle))
    return [ArmCommand(0.0, w13), ArmCommand(0.0, w24), ArmCommand(0.0, w13), ArmCommand(0.0, w24)]


HOVER_STATE = RigidState(cone_angles=[0.0, math.pi, 0.0, math.pi])


def random_case(rng, params=None):
    p = params or VehicleParams(cone_angle=rng.uniform(0, math.pi / 4))
    state = RigidState(
        position=rng.normal(size=3), velocity=rng.normal(size=3),
        attitude=EulerAngles(*rng.uniform(-1.2, 1.2, 3)),
        body_rates=rng.normal(scale=3, size=3), cone_angles=rng.uniform(-7, 7, 4),
    )
    inputs = []
    for _ in ARMS:
        c = rng.uniform(-40, 40)
        inputs.append(ArmCommand(c, 10 * abs(c) + rng.uniform(0, 500),
                                 cone_accel=rng.normal(scale=50), rotor_accel=rng.normal(scale=50)))
    return state, inputs, p


def test_fast_kernel_matches_reference():
    rng = np.random.default_rng(1)
    for _ in range(50):
        state, inputs, p = random_case(rng)
        fast = state_derivative(state, inputs, p)
        slow = state_derivative_reference(state, inputs, p)
        assert np.allclose(fast, slow, rtol=1e-11, atol=1e-11)


def test_reference_layers_are_self_consistent():
    # the rate block solves J wdot = rhs with the body_accel-dependent terms moved left
    rng = np.random.default_rng(2)
    state, inputs, p = random_case(rng)
    wdot = body_angular_acceleration(state, inputs, p)
    x = state.to_vector()
    tau = np.zeros(3)
    for i in ARMS:
        tau += body_to_cone(i, p) @ cone_reaction_torque(i, x, inputs, p, body_accel=wdot)
    I_B = np.asarray(p.body_inertia)
    omega = state.body_rates
    residual = I_B * wdot + np.cross(omega, I_B * omega) - thrust_moment_body(x, inputs, p) + tau
    assert np.allclose(residual, 0.0, atol=1e-12)


# --- inertial rates vs. finite differences of the composed orientation -----


def _orientations(i, state, cmd, p, t):
    """World orientation of cone ``i`` and its propeller after time ``t`` at constant rates."""
    s = arm_sign(i)
    r_wb = body_to_world(state.attitude) @ expm(hat(state.body_rates) * t)
    theta = state.cone_angles[i - 1] + cmd.cone_rate * t
    cone = r_wb @ body_to_cone(i, p) @ rot_z(s * theta)
    prop = cone @ rot_x(p.cone_angle) @ rot_z(s * cmd.rotor_rate * t)
    return cone, prop


def test_inertial_rates_match_finite_differences():
    rng = np.random.default_rng(3)
    h = 1e-6
    for _ in range(20):
        state, inputs, p = random_case(rng)
        for i in ARMS:
            cmd = inputs[i - 1]
            c0, p0 = _orientations(i, state, cmd, p, 0.0)
            cp, pp = _orientations(i, state, cmd, p, h)
            cm, pm = _orientations(i, state, cmd, p, -h)
            w_prop = vee(p0.T @ (pp - pm) / (2 * h))
            w_cone_spin = vee(c0.T @ (cp - cm) / (2 * h))
            # cone rate is reported in the non-spinning cone frame
            s = arm_sign(i)
            w_cone = rot_z(s * state.cone_angles[i - 1]) @ w_cone_spin
            scale = 1 + np.abs(w_prop).max()
            assert np.allclose(propeller_inertial_rate(i, state, inputs, p), w_prop, atol=1e-6 * scale)
            assert np.allclose(cone_inertial_rate(i, state, inputs, p), w_cone, atol=1e-6 * scale)


def test_inertial_rate_examples():
    p = VehicleParams(cone_angle=0.0)
    state = RigidState(body_rates=[0, 0, 1.7])
    assert np.allclose(propeller_inertial_rate(2, state, IDLE4, p), [0, 0, 1.7])
    p = VehicleParams(cone_angle=0.3)
    inputs = [ArmCommand(4.0, 100.0)] * 4
    for i in ARMS:
        assert np.allclose(cone_inertial_rate(i, RigidState(), inputs, p), [0, 0, arm_sign(i) * 4.0])
    assert np.allclose(cone_inertial_rate(2, RigidState(body_rates=[2.0, 0, 0]), IDLE4, p), [2.0, 0, 0])


def test_rotor_torque_examples(params):
    cmd = [ArmCommand(0.0, 0.0, rotor_accel=1000.0)] * 4
    for i in ARMS:
        tau = rotor_gyro_torque(i, RigidState(), cmd, params)
        assert tau[2] == pytest.approx(arm_sign(i) * 2.030e-2, rel=1e-12)
    # steady spin: the cone only has to cancel the drag
    steady = [ArmCommand(0.0, 400.0)] * 4
    for i in ARMS:
        tau = rotor_gyro_torque(i, RigidState(), steady, params)
        wz = arm_sign(i) * 400.0
        assert np.allclose(tau, [0, 0, math.copysign(params.drag_coeff * wz * wz, wz)], atol=1e-15)


def test_cone_torque_examples(params):
    for i in ARMS:
        assert np.array_equal(cone_reaction_torque(i, RigidState(), IDLE4, params), np.zeros(3))
    phi = params.cone_angle
    cmd = [ArmCommand(cone_accel=500.0)] * 4
    for i in ARMS:
        tau = cone_reaction_torque(i, RigidState(), cmd, params)
        # the carried propeller adds its inertia about the cone axis
        carried = 2.030e-5 * math.cos(phi) ** 2 + 1e-10 * math.sin(phi) ** 2
        assert tau[2] == pytest.approx(arm_sign(i) * 500.0 * (2.030e-5 + carried), rel=1e-12)
    # steady hover: the cone passes the rotor's torque through its tilt
    steady = hover_inputs(params)
    for i in ARMS:
        tau_p = rotor_gyro_torque(i, HOVER_STATE, steady, params)
        expected = cone_to_rotor(i, HOVER_STATE.cone_angles[i - 1], params) @ tau_p
        assert np.allclose(cone_reaction_torque(i, HOVER_STATE, steady, params), expected, atol=1e-15)


@pytest.mark.parametrize("phi", [0.0, math.pi / 12, math.pi / 10, math.pi / 8, math.pi / 6])
def test_hover_fixed_point(phi):
    p = VehicleParams(cone_angle=phi)
    inputs = hover_inputs(p)
    dx = state_derivative(HOVER_STATE, inputs, p)
    assert np.allclose(dx[:12], 0.0, atol=1e-9)
    assert np.array_equal(dx[CONE], np.zeros(4))
    assert np.allclose(body_angular_acceleration(HOVER_STATE, inputs, p), 0.0, atol=1e-6)
    assert np.allclose(translational_acceleration(HOVER_STATE, inputs, p), 0.0, atol=1e-9)


def test_single_rotor_pitch_acceleration():
    p = VehicleParams(cone_angle=0.0)
    inputs = [ArmCommand(0.0, 361.38)] + [ArmCommand()] * 3
    wdot = body_angular_acceleration(RigidState(), inputs, p)
    assert wdot[1] == pytest.approx(-0.1876 / 2.985e-3, rel=5e-3)
    assert wdot[2] != 0.0  # drag reaction yaws the body
    assert wdot[0] == pytest.approx(0.0, abs=1e-12)


def test_torque_free_principal_spin(params):
    state = RigidState(body_rates=[0, 0, 5.0])
    assert np.allclose(body_angular_acceleration(state, IDLE4, params), 0.0, atol=1e-12)


def test_free_fall_derivative(params):
    state = RigidState(velocity=[0.3, -0.2, 1.0])
    dx = state_derivative(state, IDLE4, params)
    expected = np.zeros(16)
    expected[0:3] = [0.3, -0.2, 1.0]
    expected[5] = -params.gravity
    assert np.array_equal(dx, expected)


def test_ft_hover_cone_rate_passthrough(params):
    inputs = [ArmCommand.fault_tolerant(399.5)] * 4
    assert np.array_equal(state_derivative(RigidState(), inputs, params)[CONE], np.full(4, 399.5))


@settings(max_examples=50)
@given(st.integers(0, 2 ** 32 - 1))
def test_translational_layer_linear_in_thrust(seed):
    rng = np.random.default_rng(seed)
    state, inputs, p = random_case(rng)
    g = np.array([0, 0, -p.gravity])
    base = translational_acceleration(state, inputs, p) - g
    # doubling k_f doubles every thrust vector
    doubled = translational_acceleration(state, inputs, p.replace(thrust_coeff=2 * p.thrust_coeff)) - g
    assert np.allclose(doubled, 2 * base, rtol=1e-14, atol=1e-15)


def test_plain_quadrotor_limit():
    rng = np.random.default_rng(4)
    for _ in range(20):
        state, inputs, p = random_case(rng)
        p = p.replace(cone_inertia=(0.0, 0.0, 0.0), rotor_inertia=(0.0, 0.0, 0.0))
        I_B = np.asarray(p.body_inertia)
        omega = state.body_rates
        # classic Euler equation with thrust lever arms plus rotor drag as the external torque
        tau = sum(arm_force_and_moment_body(i, state.cone_angles[i - 1], inputs[i - 1], p)[1] for i in ARMS)
        expected = (tau - np.cross(omega, I_B * omega)) / I_B
        assert np.allclose(body_angular_acceleration(state, inputs, p), expected, rtol=1e-12, atol=1e-12)
        assert np.allclose(state_derivative(state, inputs, p)[RATE], expected, rtol=1e-12, atol=1e-12)


@given(st.sampled_from(ARMS), st.floats(1, 3000), st.floats(0, math.pi / 4))
def test_positive_rotor_rate_lifts(i, w, phi):
    p = VehicleParams(cone_angle=phi)
    inputs = [ArmCommand()] * 4
    inputs[i - 1] = ArmCommand(0.0, w)
    assert total_thrust_body(RigidState(), inputs, p)[2] > 0


def test_angular_momentum_rate_matches_moments():
    # with no thrust or drag the only torques are internal, so dH/dt = 0
    rng = np.random.default_rng(5)
    state, _, p = random_case(rng)
    inputs = [ArmCommand(c, 0.0, "fault_tolerant") for c in (0.0, 0.0, 0.0, 0.0)]
    x = state.to_vector()
    dx = state_derivative(x, inputs, p)
    h = 1e-6
    hp = angular_momentum_world(x + h * dx, inputs, p)
    hm = angular_momentum_world(x - h * dx, inputs, p)
    assert np.allclose((hp - hm) / (2 * h), 0.0, atol=1e-8)
    assert dx[VEL][2] == -p.gravity
