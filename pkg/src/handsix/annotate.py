"""Rasterization of the three coded annotation planes from projected poses.

Bones are stamped farthest-first (painter's algorithm): all bones from all
hands are pooled, sorted by descending mean endpoint depth, and each is drawn
as a filled capsule that overwrites whatever was painted before it.  No
anti-aliasing anywhere; the codes are categorical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DataError
from .topology import (
    BoneSpec,
    FINGER_CODES,
    HANDEDNESS_CODES,
    Handedness,
    SEGMENT_CODES,
    bone_codes,
    canonical_topology,
)

_TOPOLOGY = canonical_topology()


@dataclass
class HandPose25D:
    """A projected hand: 21 keypoints in pixel coordinates plus relative
    depth (smaller z = closer to the camera)."""

    keypoints: np.ndarray  # (21, 3) float
    handedness: Handedness

    def __post_init__(self):
        kp = np.asarray(self.keypoints, dtype=np.float64)
        if kp.shape != (21, 3):
            raise DataError(f"expected 21 keypoints with (x, y, z), got shape {kp.shape}")
        if not np.all(np.isfinite(kp)):
            raise DataError("keypoints must be finite")
        self.keypoints = kp
        self.handedness = Handedness(self.handedness)


@dataclass
class RasterConfig:
    width: int
    height: int
    stroke_radius: float = 3.0

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise DataError(f"image size must be at least 16x16, got {self.width}x{self.height}")
        if self.stroke_radius < 1:
            raise DataError(f"stroke_radius must be >= 1, got {self.stroke_radius}")


def default_stroke_radius(width: int, height: int) -> float:
    """3 px at 256x256, scaled with the smaller image dimension."""
    return max(1.0, 3.0 * min(width, height) / 256.0)


@dataclass
class AnnotationImage:
    """The three coded planes.  Nonzero supports of all planes coincide."""

    plane_finger: np.ndarray  # (h, w) uint8
    plane_segment: np.ndarray
    plane_handed: np.ndarray

    def __post_init__(self):
        shapes = {p.shape for p in (self.plane_finger, self.plane_segment, self.plane_handed)}
        if len(shapes) != 1:
            raise DataError(f"plane dimensions differ: {shapes}")

    @property
    def height(self) -> int:
        return self.plane_finger.shape[0]

    @property
    def width(self) -> int:
        return self.plane_finger.shape[1]

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.plane_finger, self.plane_segment, self.plane_handed


def bone_depth(pose: HandPose25D, bone: BoneSpec) -> float:
    """Depth of a bone is the mean z of its two endpoint keypoints."""
    return (pose.keypoints[bone.from_kp, 2] + pose.keypoints[bone.to_kp, 2]) / 2.0


def _capsule_mask(xs, ys, x0, y0, x1, y1, radius):
    """Pixels whose center lies within `radius` of segment (x0,y0)-(x1,y1)."""
    dx = x1 - x0
    dy = y1 - y0
    len2 = dx * dx + dy * dy
    if len2 == 0.0:
        ddx = xs - x0
        ddy = ys - y0
        return ddx * ddx + ddy * ddy <= radius * radius
    t = ((xs - x0) * dx + (ys - y0) * dy) / len2
    t = np.clip(t, 0.0, 1.0)
    ddx = xs - (x0 + t * dx)
    ddy = ys - (y0 + t * dy)
    return ddx * ddx + ddy * ddy <= radius * radius


def sorted_bone_order(poses: list[HandPose25D]) -> list[tuple[int, BoneSpec]]:
    """Pooled (hand_index, bone) pairs, farthest bone first; depth ties are
    broken by hand order, then canonical bone order."""
    items = []
    for hand_idx, pose in enumerate(poses):
        for bone_idx, bone in enumerate(_TOPOLOGY.bones):
            items.append((-bone_depth(pose, bone), hand_idx, bone_idx, bone))
    items.sort(key=lambda it: (it[0], it[1], it[2]))
    return [(hand_idx, bone) for _, hand_idx, _, bone in items]


def rasterize(poses: list[HandPose25D], config: RasterConfig) -> AnnotationImage:
    """Stamp all bones of all hands into the three planes, farthest first.

    Off-image strokes are clipped silently; an empty pose list yields
    all-zero planes.
    """
    h, w = config.height, config.width
    plane_f = np.zeros((h, w), dtype=np.uint8)
    plane_s = np.zeros((h, w), dtype=np.uint8)
    plane_h = np.zeros((h, w), dtype=np.uint8)
    r = float(config.stroke_radius)

    for hand_idx, bone in sorted_bone_order(poses):
        pose = poses[hand_idx]
        x0, y0 = pose.keypoints[bone.from_kp, 0], pose.keypoints[bone.from_kp, 1]
        x1, y1 = pose.keypoints[bone.to_kp, 0], pose.keypoints[bone.to_kp, 1]
        xmin = max(0, int(np.floor(min(x0, x1) - r)) - 1)
        xmax = min(w - 1, int(np.ceil(max(x0, x1) + r)) + 1)
        ymin = max(0, int(np.floor(min(y0, y1) - r)) - 1)
        ymax = min(h - 1, int(np.ceil(max(y0, y1) + r)) + 1)
        if xmin > xmax or ymin > ymax:
            continue
        ys, xs = np.mgrid[ymin : ymax + 1, xmin : xmax + 1]
        mask = _capsule_mask(xs.astype(np.float64), ys.astype(np.float64), x0, y0, x1, y1, r)
        cf, cs, ch = bone_codes(bone, pose.handedness)
        sub = (slice(ymin, ymax + 1), slice(xmin, xmax + 1))
        plane_f[sub][mask] = cf
        plane_s[sub][mask] = cs
        plane_h[sub][mask] = ch

    return AnnotationImage(plane_f, plane_s, plane_h)


_FINGER_BY_CODE = {code: i for i, code in enumerate(FINGER_CODES)}
_SEGMENT_BY_CODE = {code: i for i, code in enumerate(SEGMENT_CODES)}


def decode(ann: AnnotationImage) -> dict:
    """Map nonzero pixels back to (finger_index, segment_index) labels.

    Pixels whose code pair is not in the tables are counted under 'unknown'.
    Returns a histogram {label: pixel_count}.
    """
    support = ann.plane_finger != 0
    fcodes = ann.plane_finger[support].astype(np.int32)
    scodes = ann.plane_segment[support].astype(np.int32)
    combined = fcodes * 256 + scodes
    hist: dict = {}
    values, counts = np.unique(combined, return_counts=True)
    for v, n in zip(values, counts):
        f, s = int(v) >> 8, int(v) & 0xFF
        if f in _FINGER_BY_CODE and s in _SEGMENT_BY_CODE:
            hist[(_FINGER_BY_CODE[f], _SEGMENT_BY_CODE[s])] = int(n)
        else:
            hist["unknown"] = hist.get("unknown", 0) + int(n)
    return hist


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


def _codes_legal(plane: np.ndarray, legal: tuple, tolerance: float) -> np.ndarray:
    """Boolean mask of pixels within +-tolerance of some legal code."""
    vals = plane.astype(np.float64)
    good = np.zeros(plane.shape, dtype=bool)
    for code in legal:
        good |= np.abs(vals - code) <= tolerance
    return good


def validate(ann: AnnotationImage, tolerance: float = 0.0) -> ValidationReport:
    """Check code legality, support equality, and per-component handedness
    constancy.  Passes iff there are no violations."""
    if tolerance < 0:
        raise DataError("tolerance must be >= 0")
    violations = []

    supports = [p != 0 for p in ann.planes()]
    union = supports[0] | supports[1] | supports[2]

    for name, plane, legal, support in (
        ("finger", ann.plane_finger, FINGER_CODES, supports[0]),
        ("segment", ann.plane_segment, SEGMENT_CODES, supports[1]),
        ("handedness", ann.plane_handed, tuple(HANDEDNESS_CODES.values()), supports[2]),
    ):
        bad = support & ~_codes_legal(plane, legal, tolerance)
        if bad.any():
            violations.append(
                f"plane {name}: {int(bad.sum())} pixel(s) outside legal codes +-{tolerance}"
            )

    if not (np.array_equal(supports[0], supports[1]) and np.array_equal(supports[0], supports[2])):
        diff = int((supports[0] ^ supports[1]).sum() + (supports[0] ^ supports[2]).sum())
        violations.append(f"plane supports differ ({diff} mismatched pixel(s))")

    labels, n_comp = ndimage.label(union, structure=np.ones((3, 3), dtype=int))
    legal_handed = tuple(HANDEDNESS_CODES.values())
    for comp in range(1, n_comp + 1):
        vals = ann.plane_handed[labels == comp].astype(np.float64)
        constant = any(np.all(np.abs(vals - code) <= tolerance) for code in legal_handed)
        if not constant:
            violations.append(
                f"handedness plane not constant around one legal code on component {comp}"
            )

    return ValidationReport(ok=not violations, violations=violations)
