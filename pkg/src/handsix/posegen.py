"""Procedural 3D hand poses by forward kinematics, plus projection and a
stylized renderer.

This is a deliberate stand-in for a full parametric hand mesh: a rigid
skeleton with per-finger abduction and three flexion joints covers the pose
variety the annotation machinery needs (keypoints + depth), without any
licensed mesh or texture assets.  Right hands live in a frame with the palm
in the x-y plane and fingers pointing roughly +y; flexion curls fingers
toward -z (closer to the camera).  Left hands are the exact x-mirror of the
same-parameter right hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from skimage.draw import polygon as _sk_polygon

from .annotate import HandPose25D, _capsule_mask
from .errors import ConfigError, DataError, ProjectionError
from .topology import Handedness, canonical_topology

_TOPOLOGY = canonical_topology()

# Canonical adult phalanx lengths in millimetres, per finger base->tip,
# first entry is the wrist->MCP bone.  Middle finger longest, little shortest.
CANONICAL_LENGTHS_MM = np.array(
    [
        [45.0, 34.0, 29.5, 26.5],   # thumb
        [80.0, 39.8, 22.4, 15.8],   # index
        [76.0, 44.6, 26.3, 17.4],   # middle
        [75.5, 41.4, 25.7, 17.3],   # ring
        [74.5, 32.7, 18.1, 15.6],   # little
    ]
).reshape(20)

# Per-finger base direction angles (radians from +y toward +x), thumb->little.
CANONICAL_SPREAD = np.array([1.05, 0.22, 0.0, -0.18, -0.40])


@dataclass
class HandShape:
    bone_lengths: np.ndarray  # 20 lengths in model units, canonical bone order
    palm_spread: np.ndarray   # 5 base direction angles, radians
    scale: float = 1.0

    def __post_init__(self):
        self.bone_lengths = np.asarray(self.bone_lengths, dtype=np.float64).reshape(20)
        self.palm_spread = np.asarray(self.palm_spread, dtype=np.float64).reshape(5)
        if np.any(self.bone_lengths <= 0):
            raise DataError("all bone lengths must be > 0")
        if self.scale <= 0:
            raise DataError("scale must be > 0")


@dataclass
class JointLimits:
    """Closed angle intervals in radians; thumb gets its own abduction range."""

    flexion_mcp: tuple[float, float] = (0.0, np.deg2rad(90.0))
    flexion_pip: tuple[float, float] = (0.0, np.deg2rad(110.0))
    flexion_dip: tuple[float, float] = (0.0, np.deg2rad(80.0))
    abduction: tuple[float, float] = (np.deg2rad(-15.0), np.deg2rad(15.0))
    thumb_abduction: tuple[float, float] = (np.deg2rad(-40.0), np.deg2rad(40.0))

    def __post_init__(self):
        for name in ("flexion_mcp", "flexion_pip", "flexion_dip", "abduction", "thumb_abduction"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"joint limit {name} is inverted: [{lo}, {hi}]")


@dataclass
class JointAngles:
    abduction: np.ndarray     # (5,)
    flexion_mcp: np.ndarray   # (5,)
    flexion_pip: np.ndarray   # (5,)
    flexion_dip: np.ndarray   # (5,)

    def __post_init__(self):
        for name in ("abduction", "flexion_mcp", "flexion_pip", "flexion_dip"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.float64).reshape(5))

    @classmethod
    def zeros(cls) -> "JointAngles":
        z = np.zeros(5)
        return cls(z.copy(), z.copy(), z.copy(), z.copy())


@dataclass
class HandPose3D:
    keypoints: np.ndarray  # (21, 3) model units, wrist at origin
    handedness: Handedness


@dataclass
class CameraConfig:
    global_rotation: np.ndarray  # (3, 3) rotation matrix
    image_width: int = 256
    image_height: int = 256
    fit_margin: float = 0.1

    def __post_init__(self):
        self.global_rotation = np.asarray(self.global_rotation, dtype=np.float64)
        if self.global_rotation.shape != (3, 3):
            raise ConfigError("global_rotation must be a 3x3 matrix")
        if self.image_width < 16 or self.image_height < 16:
            raise ConfigError("image size must be at least 16x16")
        if not 0.0 <= self.fit_margin < 0.5:
            raise ConfigError("fit_margin must be in [0, 0.5)")


def sample_shape(rng: np.random.Generator) -> HandShape:
    """Draw bone lengths around canonical adult proportions.

    Per-bone jitter of +-8% keeps finger-length ordering (middle >= little)
    for every draw; a global scale in [0.8, 1.2] is folded into the lengths.
    """
    scale = float(rng.uniform(0.8, 1.2))
    factors = rng.uniform(0.92, 1.08, size=20)
    lengths = CANONICAL_LENGTHS_MM * factors * scale
    spread = CANONICAL_SPREAD + rng.uniform(-0.05, 0.05, size=5)
    return HandShape(bone_lengths=lengths, palm_spread=spread, scale=scale)


def sample_angles(rng: np.random.Generator, limits: JointLimits | None = None) -> JointAngles:
    """Uniform angles within each joint's interval."""
    limits = limits or JointLimits()
    abd = rng.uniform(limits.abduction[0], limits.abduction[1], size=5)
    abd[0] = rng.uniform(limits.thumb_abduction[0], limits.thumb_abduction[1])
    return JointAngles(
        abduction=abd,
        flexion_mcp=rng.uniform(limits.flexion_mcp[0], limits.flexion_mcp[1], size=5),
        flexion_pip=rng.uniform(limits.flexion_pip[0], limits.flexion_pip[1], size=5),
        flexion_dip=rng.uniform(limits.flexion_dip[0], limits.flexion_dip[1], size=5),
    )


def forward_kinematics(
    shape: HandShape, angles: JointAngles, handedness: Handedness = Handedness.RIGHT
) -> HandPose3D:
    """Chain each finger from the wrist: abduction rotates the finger plane
    about z, each flexion adds to the in-plane bend angle, and every bone
    translates by its length.  Bone lengths are preserved exactly."""
    handedness = Handedness(handedness)
    kps = np.zeros((21, 3), dtype=np.float64)
    lengths = shape.bone_lengths.reshape(5, 4)

    for f in range(5):
        a = shape.palm_spread[f] + angles.abduction[f]
        u = np.array([np.sin(a), np.cos(a), 0.0])  # base direction, palm plane
        down = np.array([0.0, 0.0, -1.0])          # flexion curls toward camera
        cumulative = [
            0.0,
            angles.flexion_mcp[f],
            angles.flexion_mcp[f] + angles.flexion_pip[f],
            angles.flexion_mcp[f] + angles.flexion_pip[f] + angles.flexion_dip[f],
        ]
        pos = np.zeros(3)
        for seg in range(4):
            theta = cumulative[seg]
            direction = np.cos(theta) * u + np.sin(theta) * down
            pos = pos + lengths[f, seg] * direction
            kps[1 + 4 * f + seg] = pos

    if handedness is Handedness.LEFT:
        kps[:, 0] = -kps[:, 0]
    return HandPose3D(keypoints=kps, handedness=handedness)


def rotation_from_euler(rx: float, ry: float, rz: float) -> np.ndarray:
    """Rotation matrix from intrinsic x, y, z Euler angles (radians)."""
    cx, sx = np.cos(rx), np.sin(rx)
    cy, sy = np.cos(ry), np.sin(ry)
    cz, sz = np.cos(rz), np.sin(rz)
    mx = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
    my = np.array([[cy, 0, sy], [0, 1, 0], [-sy, 0, cy]])
    mz = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
    return mz @ my @ mx


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random rotation matrix (via a normalized random quaternion)."""
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def project(pose3d: HandPose3D, camera: CameraConfig) -> HandPose25D:
    """Rotate, then orthographically project and fit into the image.

    The keypoint bounding box is translated and uniformly scaled so it lies
    inside the image minus fit_margin; rotated z (scaled by the same factor)
    is kept as relative depth, smaller = closer.
    """
    rotated = pose3d.keypoints @ camera.global_rotation.T
    xy = rotated[:, :2]
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    ranges = hi - lo
    if np.all(ranges == 0.0):
        raise ProjectionError("all keypoints coincide after rotation")

    w, h = camera.image_width, camera.image_height
    mx = camera.fit_margin * w
    my = camera.fit_margin * h
    avail = np.array([(w - 1) - 2 * mx, (h - 1) - 2 * my])
    scales = [avail[i] / ranges[i] for i in range(2) if ranges[i] > 0]
    s = min(scales)

    center = (lo + hi) / 2.0
    out = np.empty_like(rotated)
    out[:, 0] = (rotated[:, 0] - center[0]) * s + (w - 1) / 2.0
    out[:, 1] = (rotated[:, 1] - center[1]) * s + (h - 1) / 2.0
    out[:, 2] = rotated[:, 2] * s
    return HandPose25D(keypoints=out, handedness=pose3d.handedness)


@dataclass
class RenderStyle:
    skin: tuple[int, int, int] = (224, 172, 138)
    outline: tuple[int, int, int] = (141, 94, 66)
    bone_radius: float = 6.0
    outline_width: float = 1.5


def _palm_vertices(pose: HandPose25D) -> np.ndarray:
    """Wrist plus the five segment-0 endpoints (MCP knuckles), as a polygon."""
    idx = [0] + [1 + 4 * f for f in range(5)]
    return pose.keypoints[idx]


def render_stylized(
    pose: HandPose25D,
    style: RenderStyle,
    background,
    size: tuple[int, int],
) -> np.ndarray:
    """Depth-ordered stylized render: palm polygon plus one filled capsule
    per bone, skin fill with a darker outline, over a solid color or image
    background.  Same farthest-first ordering as the annotator."""
    w, h = size
    if isinstance(background, np.ndarray):
        if background.shape != (h, w, 3):
            raise DataError(
                f"background size {background.shape[:2]} does not match target {(h, w)}"
            )
        img = background.astype(np.uint8).copy()
    else:
        img = np.full((h, w, 3), np.asarray(background, dtype=np.uint8), dtype=np.uint8)

    # Primitives: (depth, order, kind, payload); farthest (largest z) first.
    palm = _palm_vertices(pose)
    prims = [(-float(palm[:, 2].mean()), -1, "palm", palm)]
    for i, bone in enumerate(_TOPOLOGY.bones):
        p0 = pose.keypoints[bone.from_kp]
        p1 = pose.keypoints[bone.to_kp]
        prims.append((-float((p0[2] + p1[2]) / 2.0), i, "bone", (p0, p1)))
    prims.sort(key=lambda it: (it[0], it[1]))

    r = style.bone_radius
    for _, _, kind, payload in prims:
        if kind == "palm":
            verts = payload
            rr, cc = _sk_polygon(verts[:, 1], verts[:, 0], shape=(h, w))
            img[rr, cc] = style.skin
            # outline the palm rim with thin capsules along its edges
            n = len(verts)
            for k in range(n):
                a, b = verts[k], verts[(k + 1) % n]
                _draw_capsule(img, a, b, style.outline_width, style.outline, None, w, h)
        else:
            p0, p1 = payload
            _draw_capsule(img, p0, p1, r, style.skin, style.outline, w, h,
                          outline_width=style.outline_width)
    return img


def _draw_capsule(img, p0, p1, radius, fill, outline, w, h, outline_width=1.5):
    x0, y0 = float(p0[0]), float(p0[1])
    x1, y1 = float(p1[0]), float(p1[1])
    xmin = max(0, int(np.floor(min(x0, x1) - radius)) - 1)
    xmax = min(w - 1, int(np.ceil(max(x0, x1) + radius)) + 1)
    ymin = max(0, int(np.floor(min(y0, y1) - radius)) - 1)
    ymax = min(h - 1, int(np.ceil(max(y0, y1) + radius)) + 1)
    if xmin > xmax or ymin > ymax:
        return
    ys, xs = np.mgrid[ymin : ymax + 1, xmin : xmax + 1]
    xs = xs.astype(np.float64)
    ys = ys.astype(np.float64)
    mask = _capsule_mask(xs, ys, x0, y0, x1, y1, radius)
    sub = img[ymin : ymax + 1, xmin : xmax + 1]
    if outline is not None and radius > outline_width:
        inner = _capsule_mask(xs, ys, x0, y0, x1, y1, radius - outline_width)
        sub[mask & ~inner] = outline
        sub[inner] = fill
    else:
        sub[mask] = fill
