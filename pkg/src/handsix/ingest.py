"""Ingestion of detector keypoint exports for real photographs.

The detections file is JSON:

    { "version": 1,
      "records": [
        { "image": "path", "width": W, "height": H,
          "hands": [
            { "handedness": "left" | "right",
              "confidence": c,
              "keypoints": [ {"x": ..., "y": ..., "z": ...} x21 ] } ] } ] }

Unknown extra top-level keys (e.g. detector provenance) are ignored.
Records whose keypoints fall outside the image grid are discarded by
``filter_in_bounds`` before annotation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .annotate import AnnotationImage, HandPose25D, RasterConfig, rasterize
from .errors import DataError, ParseError
from .topology import Handedness

DETECTIONS_VERSION = 1


@dataclass
class HandDetection:
    handedness: Handedness
    confidence: float
    keypoints: np.ndarray  # (21, 3): x px, y px, z relative depth


@dataclass
class DetectionRecord:
    image_id: str
    image_width: int
    image_height: int
    hands: list[HandDetection]


def _parse_hand(raw: dict, where: str) -> HandDetection:
    for fld in ("handedness", "confidence", "keypoints"):
        if fld not in raw:
            raise ParseError(f"{where}: missing field '{fld}'")
    try:
        handedness = Handedness(raw["handedness"])
    except ValueError:
        raise ParseError(f"{where}: field 'handedness' must be 'left' or 'right', "
                         f"got {raw['handedness']!r}") from None
    confidence = raw["confidence"]
    if not isinstance(confidence, (int, float)) or not 0.0 <= confidence <= 1.0:
        raise ParseError(f"{where}: field 'confidence' must be in [0, 1], got {confidence!r}")
    kps = raw["keypoints"]
    if not isinstance(kps, list) or len(kps) != 21:
        raise ParseError(f"{where}: field 'keypoints' must list exactly 21 points, "
                         f"got {len(kps) if isinstance(kps, list) else type(kps).__name__}")
    arr = np.empty((21, 3), dtype=np.float64)
    for k, pt in enumerate(kps):
        for j, axis in enumerate(("x", "y", "z")):
            if axis not in pt:
                raise ParseError(f"{where}: keypoint {k} missing field '{axis}'")
            v = pt[axis]
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParseError(f"{where}: keypoint {k} field '{axis}' is not a finite number")
            arr[k, j] = v
    return HandDetection(handedness=handedness, confidence=float(confidence), keypoints=arr)


def parse_detections(path) -> list[DetectionRecord]:
    """Parse and validate a detections file; schema violations are hard
    errors naming the record index and field."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    if doc.get("version") != DETECTIONS_VERSION:
        raise ParseError(f"{path}: unsupported detections version {doc.get('version')!r}")
    raw_records = doc.get("records")
    if not isinstance(raw_records, list):
        raise ParseError(f"{path}: missing 'records' list")

    records = []
    for i, raw in enumerate(raw_records):
        where = f"{path}: record {i}"
        for fld in ("image", "width", "height", "hands"):
            if fld not in raw:
                raise ParseError(f"{where}: missing field '{fld}'")
        width, height = raw["width"], raw["height"]
        if not (isinstance(width, int) and isinstance(height, int) and width > 0 and height > 0):
            raise ParseError(f"{where}: fields 'width'/'height' must be positive integers")
        hands = [
            _parse_hand(h, f"{where}, hand {j}") for j, h in enumerate(raw["hands"])
        ]
        records.append(
            DetectionRecord(
                image_id=raw["image"], image_width=width, image_height=height, hands=hands
            )
        )
    return records


def serialize_detections(records: list[DetectionRecord], path) -> None:
    doc = {
        "version": DETECTIONS_VERSION,
        "records": [
            {
                "image": r.image_id,
                "width": r.image_width,
                "height": r.image_height,
                "hands": [
                    {
                        "handedness": h.handedness.value,
                        "confidence": h.confidence,
                        "keypoints": [
                            {"x": float(x), "y": float(y), "z": float(z)}
                            for x, y, z in h.keypoints
                        ],
                    }
                    for h in r.hands
                ],
            }
            for r in records
        ],
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def record_in_bounds(record: DetectionRecord) -> bool:
    """True iff the record has at least one hand and every keypoint of every
    hand satisfies 0 <= x < width and 0 <= y < height (exclusive bounds)."""
    if not record.hands:
        return False
    for hand in record.hands:
        x = hand.keypoints[:, 0]
        y = hand.keypoints[:, 1]
        if np.any(x < 0) or np.any(x >= record.image_width):
            return False
        if np.any(y < 0) or np.any(y >= record.image_height):
            return False
    return True


def filter_in_bounds(
    records: list[DetectionRecord],
) -> tuple[list[DetectionRecord], list[DetectionRecord]]:
    """Partition records into (kept, discarded), preserving order."""
    kept, discarded = [], []
    for r in records:
        (kept if record_in_bounds(r) else discarded).append(r)
    return kept, discarded


def annotate_record(record: DetectionRecord, config: RasterConfig) -> AnnotationImage:
    """Rasterize annotation planes for one kept record; each hand carries its
    own handedness code, depth ordering pools all hands."""
    if not record.hands:
        raise DataError(f"record {record.image_id!r} has no hands; filter before annotating")
    poses = [
        HandPose25D(keypoints=h.keypoints, handedness=h.handedness) for h in record.hands
    ]
    return rasterize(poses, config)
