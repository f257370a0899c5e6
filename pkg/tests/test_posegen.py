import numpy as np
import pytest

from handsix.errors import ConfigError, DataError, ProjectionError
from handsix.posegen import (
    CameraConfig,
    HandShape,
    JointAngles,
    JointLimits,
    RenderStyle,
    forward_kinematics,
    project,
    random_rotation,
    render_stylized,
    rotation_from_euler,
    sample_angles,
    sample_shape,
)
from handsix.topology import Handedness, canonical_topology

TOPOLOGY = canonical_topology()


def bone_lengths_of(pose):
    kps = pose.keypoints
    return np.array(
        [np.linalg.norm(kps[b.to_kp] - kps[b.from_kp]) for b in TOPOLOGY.bones]
    )


def unit_shape():
    return HandShape(bone_lengths=np.ones(20), palm_spread=np.zeros(5), scale=1.0)


class TestSampling:
    def test_shape_deterministic(self):
        a = sample_shape(np.random.default_rng(7))
        b = sample_shape(np.random.default_rng(7))
        assert np.array_equal(a.bone_lengths, b.bone_lengths)
        assert np.array_equal(a.palm_spread, b.palm_spread)
        assert a.scale == b.scale

    def test_middle_at_least_little_over_1000_seeds(self):
        for seed in range(1000):
            shape = sample_shape(np.random.default_rng(seed))
            per_finger = shape.bone_lengths.reshape(5, 4).sum(axis=1)
            assert per_finger[2] >= per_finger[4]

    def test_lengths_positive_and_scale_in_range(self):
        for seed in range(200):
            shape = sample_shape(np.random.default_rng(seed))
            assert np.all(shape.bone_lengths > 0)
            assert 0.8 <= shape.scale <= 1.2

    def test_angles_degenerate_interval(self):
        limits = JointLimits(
            flexion_mcp=(0, 0), flexion_pip=(0, 0), flexion_dip=(0, 0),
            abduction=(0, 0), thumb_abduction=(0, 0),
        )
        angles = sample_angles(np.random.default_rng(1), limits)
        for arr in (angles.abduction, angles.flexion_mcp, angles.flexion_pip, angles.flexion_dip):
            assert np.all(arr == 0)

    def test_angles_within_default_limits(self):
        limits = JointLimits()
        rng = np.random.default_rng(3)
        for _ in range(10000 // 5):  # 5 joints sampled per call
            angles = sample_angles(rng, limits)
            assert np.all(angles.flexion_mcp >= 0)
            assert np.all(angles.flexion_mcp <= np.deg2rad(90) + 1e-12)
            assert np.all(angles.flexion_pip <= np.deg2rad(110) + 1e-12)
            assert np.all(angles.flexion_dip <= np.deg2rad(80) + 1e-12)

    def test_inverted_interval_rejected(self):
        with pytest.raises(ConfigError):
            JointLimits(flexion_mcp=(1.0, -1.0))


class TestForwardKinematics:
    def test_zero_angles_collinear(self):
        pose = forward_kinematics(unit_shape(), JointAngles.zeros())
        kps = pose.keypoints
        for f in range(5):
            pts = np.vstack([kps[0], kps[1 + 4 * f : 5 + 4 * f]])
            d0 = pts[1] - pts[0]
            for k in range(2, 5):
                cross = np.cross(d0, pts[k] - pts[0])
                assert np.linalg.norm(cross) <= 1e-9

    def test_bone_lengths_preserved(self):
        rng = np.random.default_rng(11)
        shape = sample_shape(rng)
        angles = sample_angles(rng)
        pose = forward_kinematics(shape, angles)
        np.testing.assert_allclose(bone_lengths_of(pose), shape.bone_lengths, rtol=1e-12)

    def test_unit_shape_index_tip(self):
        # palm_spread zero: every base direction is +y; index tip = wrist + 4y
        pose = forward_kinematics(unit_shape(), JointAngles.zeros())
        np.testing.assert_allclose(pose.keypoints[8], [0.0, 4.0, 0.0], atol=1e-12)

    def test_mirror_exact(self):
        rng = np.random.default_rng(5)
        shape = sample_shape(rng)
        angles = sample_angles(rng)
        right = forward_kinematics(shape, angles, Handedness.RIGHT)
        left = forward_kinematics(shape, angles, Handedness.LEFT)
        expected = right.keypoints.copy()
        expected[:, 0] = -expected[:, 0]
        assert np.array_equal(left.keypoints, expected)

    def test_length_preservation_under_rotation(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            shape = sample_shape(rng)
            angles = sample_angles(rng)
            pose = forward_kinematics(shape, angles)
            rot = random_rotation(rng)
            rotated = pose.keypoints @ rot.T
            lengths = np.array(
                [np.linalg.norm(rotated[b.to_kp] - rotated[b.from_kp]) for b in TOPOLOGY.bones]
            )
            rel = np.abs(lengths - shape.bone_lengths) / shape.bone_lengths
            assert np.max(rel) <= 1e-9


class TestProjection:
    def test_all_points_inside_bounds(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            pose = forward_kinematics(sample_shape(rng), sample_angles(rng))
            cam = CameraConfig(global_rotation=random_rotation(rng),
                               image_width=256, image_height=256, fit_margin=0.1)
            proj = project(pose, cam)
            assert np.all(proj.keypoints[:, 0] >= 0)
            assert np.all(proj.keypoints[:, 0] <= 255)
            assert np.all(proj.keypoints[:, 1] >= 0)
            assert np.all(proj.keypoints[:, 1] <= 255)

    def test_x_range_centered(self):
        pose = forward_kinematics(unit_shape(), JointAngles.zeros())
        cam = CameraConfig(global_rotation=np.eye(3), image_width=200, image_height=100)
        proj = project(pose, cam)
        x = proj.keypoints[:, 0]
        assert (x.min() + x.max()) / 2 == pytest.approx((200 - 1) / 2, abs=1e-9)

    def test_rotation_composition(self):
        rng = np.random.default_rng(2)
        kps = rng.normal(size=(21, 3))
        r1 = rotation_from_euler(0.3, -0.8, 1.1)
        r2 = random_rotation(rng)
        seq = (kps @ r1.T) @ r2.T
        composed = kps @ (r2 @ r1).T
        np.testing.assert_allclose(seq, composed, atol=1e-9)

    def test_degenerate_pose_rejected(self):
        from handsix.posegen import HandPose3D

        pose = HandPose3D(keypoints=np.zeros((21, 3)), handedness=Handedness.RIGHT)
        cam = CameraConfig(global_rotation=np.eye(3))
        with pytest.raises(ProjectionError):
            project(pose, cam)

    def test_bad_margin_rejected(self):
        with pytest.raises(ConfigError):
            CameraConfig(global_rotation=np.eye(3), fit_margin=0.5)


class TestRender:
    def _pose(self):
        rng = np.random.default_rng(4)
        pose = forward_kinematics(sample_shape(rng), sample_angles(rng))
        cam = CameraConfig(global_rotation=random_rotation(rng))
        return project(pose, cam)

    def test_background_untouched_outside_hand(self):
        pose = self._pose()
        img = render_stylized(pose, RenderStyle(), (90, 90, 90), (256, 256))
        changed = np.any(img != 90, axis=-1)
        # every changed pixel is hand-colored (skin or outline)
        style = RenderStyle()
        hand_colors = {style.skin, style.outline}
        ys, xs = np.nonzero(changed)
        for y, x in zip(ys[::97], xs[::97]):
            assert tuple(img[y, x]) in hand_colors

    def test_deterministic(self):
        pose = self._pose()
        a = render_stylized(pose, RenderStyle(), (10, 20, 30), (256, 256))
        b = render_stylized(pose, RenderStyle(), (10, 20, 30), (256, 256))
        assert np.array_equal(a, b)

    def test_some_hand_pixels(self):
        pose = self._pose()
        img = render_stylized(pose, RenderStyle(), (0, 0, 0), (256, 256))
        assert np.any(img != 0)

    def test_background_image_passthrough(self):
        pose = self._pose()
        bg = np.random.default_rng(0).integers(0, 255, size=(256, 256, 3), dtype=np.uint8)
        img = render_stylized(pose, RenderStyle(), bg, (256, 256))
        unchanged = np.all(img == bg, axis=-1)
        assert unchanged.any()

    def test_background_size_mismatch(self):
        pose = self._pose()
        bg = np.zeros((128, 128, 3), dtype=np.uint8)
        with pytest.raises(DataError):
            render_stylized(pose, RenderStyle(), bg, (256, 256))
