"""
Tests for the chassis kinematics.
"""

import math

import numpy as np
import pytest

from alexsim.kinematics import (
    BodyTwist,
    ChassisGeometry,
    Pose,
    WheelMount,
    WheelSpeeds,
    WorldVelocity,
    body_to_world,
    ddof,
    forward_kinematics,
    icr_radius,
    integrate_pose,
    inverse_kinematics,
    normalize_angle,
    rolling_constraint_residual,
    rotation_matrix,
    sliding_constraint_residual,
    wheel_mount_left,
    wheel_mount_right,
    wheel_rim_speed,
    world_to_body,
)

G = ChassisGeometry(d_w=0.2, r_w=0.03)


class TestFrames:
    """Global-to-robot frame rotation."""

    def test_identity_rotation(self) -> None:
        assert world_to_body(0.0, WorldVelocity(1.0, 2.0, 0.5)) == pytest.approx((1.0, 2.0, 0.5))

    def test_quarter_turn(self) -> None:
        out = world_to_body(math.pi / 2, WorldVelocity(1.0, 0.0, 0.0))
        assert out == pytest.approx((0.0, -1.0, 0.0), abs=1e-12)

    def test_norm_preserved(self) -> None:
        v = WorldVelocity(0.3, -1.7, 2.0)
        out = world_to_body(0.7, v)
        assert math.hypot(out.dx, out.dy) == pytest.approx(math.hypot(v.dx, v.dy), abs=1e-12)
        assert out.dtheta == v.dtheta

    def test_rotation_is_orthogonal(self) -> None:
        for theta in np.linspace(-math.pi, math.pi, 25):
            r = rotation_matrix(float(theta))
            assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
            assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-12)

    def test_body_to_world_inverts(self) -> None:
        rng = np.random.default_rng(3)
        for _ in range(100):
            theta = float(rng.uniform(-math.pi, math.pi))
            v = WorldVelocity(*rng.normal(size=3))
            back = body_to_world(theta, world_to_body(theta, v))
            assert back == pytest.approx(tuple(v), abs=1e-12)


class TestMotionEquations:
    """Forward and inverse motion equations."""

    @pytest.mark.parametrize(
        "v_l, v_r, expected",
        [(1.0, 1.0, (1.0, 0.0)), (-1.0, 1.0, (0.0, 10.0)), (0.0, 1.0, (0.5, 5.0))],
    )
    def test_forward(self, v_l: float, v_r: float, expected: tuple) -> None:
        assert forward_kinematics(WheelSpeeds(v_l, v_r), G) == pytest.approx(expected)

    def test_inverse_straight(self) -> None:
        assert inverse_kinematics(BodyTwist(1.0, 0.0), G) == (1.0, 1.0)

    def test_inverse_spin(self) -> None:
        ws = inverse_kinematics(BodyTwist(0.0, 4.0), G)
        assert ws.v_r == pytest.approx(0.4)
        assert ws.v_l == pytest.approx(-0.4)

    def test_pure_rotation_is_exact(self) -> None:
        assert forward_kinematics(WheelSpeeds(-0.37, 0.37), G).v_c == 0.0
        assert forward_kinematics(WheelSpeeds(0.37, 0.37), G).w == 0.0

    def test_round_trip(self) -> None:
        """inverse(forward(ws)) recovers ws on random pairs."""
        rng = np.random.default_rng(0)
        pairs = rng.uniform(-2.0, 2.0, size=(10_000, 2))
        worst = 0.0
        for v_l, v_r in pairs:
            ws = inverse_kinematics(forward_kinematics(WheelSpeeds(v_l, v_r), G), G)
            worst = max(worst, abs(ws.v_l - v_l), abs(ws.v_r - v_r))
        assert worst <= 1e-12

    def test_rim_speed(self) -> None:
        assert wheel_rim_speed(0.0, 0.03) == 0.0
        assert wheel_rim_speed(10.0, 0.03) == pytest.approx(0.3)
        assert wheel_rim_speed(10.0, 0.03) / 0.03 == pytest.approx(10.0)
        with pytest.raises(ValueError):
            wheel_rim_speed(1.0, 0.0)


class TestConstraints:
    """Wheel constraints and differential degrees of freedom."""

    @pytest.mark.parametrize("mount", [wheel_mount_left(), wheel_mount_right()])
    def test_forward_motion_satisfies_constraint(self, mount: WheelMount) -> None:
        for theta in (0.0, 0.4, -2.1):
            v = body_to_world(theta, WorldVelocity(1.3, 0.0, 0.8))
            assert abs(sliding_constraint_residual(mount, theta, v)) <= 1e-12

    def test_lateral_slide_violates_constraint(self) -> None:
        r = sliding_constraint_residual(wheel_mount_left(), 0.0, WorldVelocity(0.0, 1.0, 0.0))
        assert abs(r) == pytest.approx(1.0)

    def test_zero_velocity(self) -> None:
        assert sliding_constraint_residual(wheel_mount_right(), 1.0, WorldVelocity()) == 0.0

    @pytest.mark.parametrize("mount", [wheel_mount_left(), wheel_mount_right()])
    def test_translation_rolls_at_rim_speed(self, mount: WheelMount) -> None:
        for theta in (0.0, 0.4, -2.1):
            v = body_to_world(theta, WorldVelocity(0.6, 0.0, 0.0))
            assert abs(rolling_constraint_residual(mount, theta, v, 0.03, 20.0)) <= 1e-12
            assert rolling_constraint_residual(mount, theta, v, 0.03, 0.0) == pytest.approx(0.6)

    def test_spin_turns_wheels_opposite_ways(self) -> None:
        v = body_to_world(0.7, WorldVelocity(0.0, 0.0, 2.0))
        # Each wheel sits 0.1 m from the spin center.
        left = rolling_constraint_residual(wheel_mount_left(), 0.7, v, 0.03, 0.0)
        right = rolling_constraint_residual(wheel_mount_right(), 0.7, v, 0.03, 0.0)
        assert left == pytest.approx(0.2)
        assert right == pytest.approx(-0.2)
        with pytest.raises(ValueError):
            rolling_constraint_residual(wheel_mount_left(), 0.0, v, 0.0, 1.0)

    def test_mount_constants(self) -> None:
        left, right = wheel_mount_left(0.2), wheel_mount_right(0.2)
        assert (left.alpha, left.beta, left.l) == (-math.pi / 2, math.pi, 0.1)
        assert (right.alpha, right.beta, right.l) == (math.pi / 2, 0.0, 0.1)

    def test_ddof(self) -> None:
        assert ddof(3, 1) == 2
        assert ddof(3, 0) == 3
        assert ddof(3, 3) == 0
        with pytest.raises(ValueError):
            ddof(3, 4)


class TestIcr:
    """Instantaneous center of rotation."""

    def test_pure_spin(self) -> None:
        assert icr_radius(WheelSpeeds(-0.5, 0.5), G) == 0.0

    def test_straight(self) -> None:
        assert icr_radius(WheelSpeeds(0.5, 0.5), G) is None

    def test_pivot_on_wheel(self) -> None:
        assert icr_radius(WheelSpeeds(0.0, 1.0), G) == pytest.approx(0.1)


class TestPoseIntegration:
    """Arc-exact pose integration."""

    def test_straight_line(self) -> None:
        assert integrate_pose(Pose(), BodyTwist(1.0, 0.0), 1.0) == (1.0, 0.0, 0.0)

    def test_spin_in_place(self) -> None:
        p = integrate_pose(Pose(), BodyTwist(0.0, math.pi), 1.0)
        assert p == pytest.approx((0.0, 0.0, math.pi))

    def test_half_circle(self) -> None:
        p = integrate_pose(Pose(), BodyTwist(1.0, 1.0), math.pi)
        assert p == pytest.approx((0.0, 2.0, math.pi), abs=1e-12)

    def test_heading_stays_normalized(self) -> None:
        p = Pose()
        for _ in range(50):
            p = integrate_pose(p, BodyTwist(0.1, 3.0), 0.1)
            assert -math.pi < p.theta <= math.pi

    def test_small_steps_converge_to_single_arc(self) -> None:
        twist = BodyTwist(0.4, 0.9)
        exact = integrate_pose(Pose(), twist, 2.0)
        p = Pose()
        for _ in range(2000):
            p = integrate_pose(p, twist, 0.001)
        assert p == pytest.approx(tuple(exact), abs=1e-9)

    def test_rejects_nonpositive_dt(self) -> None:
        with pytest.raises(ValueError):
            integrate_pose(Pose(), BodyTwist(1.0, 0.0), 0.0)

    def test_normalize_angle(self) -> None:
        assert normalize_angle(math.pi) == pytest.approx(math.pi)
        assert normalize_angle(-math.pi) == pytest.approx(math.pi)
        assert normalize_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
