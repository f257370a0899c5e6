"""Independent reference implementations used to freeze expected values.

These deliberately avoid the library's fast paths: the rasterizer oracle
repaints every pixel of the full image per bone with a brute-force distance
test, and the MJRD oracle recomputes the distance from first principles with
plain Python floats.
"""

import math

import numpy as np

from handsix.annotate import HandPose25D, bone_depth
from handsix.topology import bone_codes, canonical_topology

TOPOLOGY = canonical_topology()


def naive_rasterize(poses, width, height, radius):
    """Sort-and-overwrite reference rasterizer: full-image per-pixel
    distance test for every bone, farthest first."""
    plane_f = np.zeros((height, width), dtype=np.uint8)
    plane_s = np.zeros((height, width), dtype=np.uint8)
    plane_h = np.zeros((height, width), dtype=np.uint8)

    items = []
    for hand_idx, pose in enumerate(poses):
        for bone_idx, bone in enumerate(TOPOLOGY.bones):
            items.append((-bone_depth(pose, bone), hand_idx, bone_idx, bone))
    items.sort(key=lambda it: (it[0], it[1], it[2]))

    ys, xs = np.mgrid[0:height, 0:width]
    xs = xs.astype(np.float64)
    ys = ys.astype(np.float64)
    for _, hand_idx, _, bone in items:
        pose = poses[hand_idx]
        x0, y0 = pose.keypoints[bone.from_kp, 0], pose.keypoints[bone.from_kp, 1]
        x1, y1 = pose.keypoints[bone.to_kp, 0], pose.keypoints[bone.to_kp, 1]
        dx = x1 - x0
        dy = y1 - y0
        len2 = dx * dx + dy * dy
        if len2 == 0.0:
            ddx = xs - x0
            ddy = ys - y0
            mask = ddx * ddx + ddy * ddy <= radius * radius
        else:
            t = ((xs - x0) * dx + (ys - y0) * dy) / len2
            t = np.clip(t, 0.0, 1.0)
            ddx = xs - (x0 + t * dx)
            ddy = ys - (y0 + t * dy)
            mask = ddx * ddx + ddy * ddy <= radius * radius
        cf, cs, ch = bone_codes(bone, pose.handedness)
        plane_f[mask] = cf
        plane_s[mask] = cs
        plane_h[mask] = ch
    return plane_f, plane_s, plane_h


def mjrd_oracle(generated, reference):
    """MJRD from first principles: entrywise means, L2 normalization, and an
    explicit sum of squared differences, all in plain Python."""
    n_g = len(generated)
    n_r = len(reference)
    mean_g = [sum(vec[i] for vec in generated) / n_g for i in range(20)]
    mean_r = [sum(vec[i] for vec in reference) / n_r for i in range(20)]
    norm_g = math.sqrt(sum(v * v for v in mean_g))
    norm_r = math.sqrt(sum(v * v for v in mean_r))
    return math.sqrt(
        sum((a / norm_g - b / norm_r) ** 2 for a, b in zip(mean_g, mean_r))
    )


def random_pose(rng, width=256, height=256):
    """A random projected pose without going through the FK pipeline, so
    rasterizer tests do not depend on pose synthesis."""
    from handsix.topology import Handedness

    kps = np.empty((21, 3))
    kps[:, 0] = rng.uniform(-20, width + 20, size=21)
    kps[:, 1] = rng.uniform(-20, height + 20, size=21)
    kps[:, 2] = rng.uniform(-50, 50, size=21)
    handed = Handedness.LEFT if rng.random() < 0.5 else Handedness.RIGHT
    return HandPose25D(keypoints=kps, handedness=handed)
