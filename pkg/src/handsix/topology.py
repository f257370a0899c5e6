"""The fixed 21-keypoint / 20-bone hand skeleton and its channel code tables.

Keypoint indices follow the common 21-landmark detector layout:
0 wrist; 1-4 thumb; 5-8 index; 9-12 middle; 13-16 ring; 17-20 little,
base to tip within each finger.  Every other module consults this one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Finger(enum.IntEnum):
    THUMB = 0
    INDEX = 1
    MIDDLE = 2
    RING = 3
    LITTLE = 4


class Handedness(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


KEYPOINT_COUNT = 21
BONES_PER_FINGER = 4
BONE_COUNT = 20

# Per-finger stroke intensity, thumb -> little.
FINGER_CODES = (50, 150, 250, 100, 200)
# Per-segment stroke intensity, hand base -> fingertip.
SEGMENT_CODES = (100, 200, 50, 250)
HANDEDNESS_CODES = {Handedness.LEFT: 100, Handedness.RIGHT: 200}
BACKGROUND_CODE = 0


@dataclass(frozen=True)
class BoneSpec:
    """One skeleton segment: which finger, which segment along it, and the
    two keypoints it connects."""

    finger: Finger
    segment: int  # 0 = attached to the wrist, 3 = fingertip segment
    from_kp: int
    to_kp: int


@dataclass(frozen=True)
class SkeletonTopology:
    bones: tuple[BoneSpec, ...]
    keypoint_count: int = KEYPOINT_COUNT


def canonical_topology() -> SkeletonTopology:
    """The fixed hand skeleton: 4 bones per finger, thumb -> little,
    base -> tip; segment 0 of every finger starts at the wrist (keypoint 0)."""
    bones = []
    for finger in Finger:
        base = 1 + 4 * finger.value
        bones.append(BoneSpec(finger, 0, 0, base))
        for seg in range(1, 4):
            bones.append(BoneSpec(finger, seg, base + seg - 1, base + seg))
    return SkeletonTopology(bones=tuple(bones))


def finger_code(finger: Finger) -> int:
    return FINGER_CODES[Finger(finger).value]


def segment_code(segment: int) -> int:
    if not 0 <= segment <= 3:
        raise ValueError(f"segment must be in 0..3, got {segment}")
    return SEGMENT_CODES[segment]


def handedness_code(handedness: Handedness) -> int:
    return HANDEDNESS_CODES[Handedness(handedness)]


def bone_codes(bone: BoneSpec, handedness: Handedness) -> tuple[int, int, int]:
    """The (finger, segment, handedness) intensity triple stamped for a bone."""
    return (
        finger_code(bone.finger),
        segment_code(bone.segment),
        handedness_code(handedness),
    )
