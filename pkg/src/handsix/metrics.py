"""Hand-quality metrics over detection records.

Three metrics: mean detector confidence, fraction of hands at or above a
confidence threshold, and the mean joint ratio difference (MJRD) - the
Euclidean distance between the L2-normalized mean bone-length vectors of a
generated set and a reference set.  Images with no detected hand count as
confidence 0 and contribute no length vector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import MetricError
from .ingest import DetectionRecord
from .topology import canonical_topology

_TOPOLOGY = canonical_topology()
_BONE_FROM = np.array([b.from_kp for b in _TOPOLOGY.bones])
_BONE_TO = np.array([b.to_kp for b in _TOPOLOGY.bones])


def joint_lengths(keypoints: np.ndarray) -> np.ndarray:
    """2D (pixel-plane) length of each of the 20 bones, canonical order."""
    kp = np.asarray(keypoints, dtype=np.float64)
    d = kp[_BONE_TO, :2] - kp[_BONE_FROM, :2]
    return np.hypot(d[:, 0], d[:, 1])


def _length_vectors(records: list[DetectionRecord]) -> list[np.ndarray]:
    return [joint_lengths(h.keypoints) for r in records for h in r.hands]


def _confidences(records: list[DetectionRecord]) -> list[float]:
    """Per-hand confidences; a record with no hands contributes one 0."""
    out = []
    for r in records:
        if r.hands:
            out.extend(h.confidence for h in r.hands)
        else:
            out.append(0.0)
    return out


def mjrd(generated: list[np.ndarray], reference: list[np.ndarray]) -> float:
    """Euclidean distance between the two normalized mean length vectors."""
    if not generated or not reference:
        raise MetricError("mjrd requires non-empty length-vector lists on both sides")
    mean_g = np.mean(np.stack(generated), axis=0)
    mean_r = np.mean(np.stack(reference), axis=0)
    norm_g = np.linalg.norm(mean_g)
    norm_r = np.linalg.norm(mean_r)
    if norm_g == 0.0 or norm_r == 0.0:
        raise MetricError("mjrd undefined: a mean length vector has zero norm")
    return float(np.linalg.norm(mean_g / norm_g - mean_r / norm_r))


def mean_confidence(records: list[DetectionRecord]) -> float:
    if not records:
        raise MetricError("mean_confidence requires at least one record")
    return float(np.mean(_confidences(records)))


def above_fraction(records: list[DetectionRecord], threshold: float = 0.9) -> float:
    """Fraction of hands with confidence >= threshold (inclusive)."""
    if not records:
        raise MetricError("above_fraction requires at least one record")
    if not 0.0 <= threshold <= 1.0:
        raise MetricError(f"threshold must be in [0, 1], got {threshold}")
    conf = _confidences(records)
    return sum(1 for c in conf if c >= threshold) / len(conf)


@dataclass
class MetricsReport:
    n_generated: int
    n_reference: int
    mean_confidence: float
    above_threshold_fraction: float
    threshold: float
    mjrd: float
    mean_lengths_generated: np.ndarray
    mean_lengths_reference: np.ndarray
    normalized_generated: np.ndarray
    normalized_reference: np.ndarray

    def to_dict(self) -> dict:
        return {
            "n_generated": self.n_generated,
            "n_reference": self.n_reference,
            "mean_confidence": self.mean_confidence,
            "above_threshold_fraction": self.above_threshold_fraction,
            "threshold": self.threshold,
            "mjrd": self.mjrd,
            "mean_lengths_generated": self.mean_lengths_generated.tolist(),
            "mean_lengths_reference": self.mean_lengths_reference.tolist(),
            "normalized_generated": self.normalized_generated.tolist(),
            "normalized_reference": self.normalized_reference.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_table(self) -> str:
        """Fixed-width console table with the standard metric column names."""
        headers = ("Mediapipe Confidence", f"Above {self.threshold:.0%} Confidence",
                   "Mean Joint Ratio Difference")
        values = (f"{self.mean_confidence:.4f}", f"{self.above_threshold_fraction:.4f}",
                  f"{self.mjrd:.4f}")
        widths = [max(len(h), len(v)) for h, v in zip(headers, values)]
        sep = "+".join("-" * (w + 2) for w in widths)
        row = lambda cells: " | ".join(c.ljust(w) for c, w in zip(cells, widths))
        return "\n".join([row(headers), sep, row(values)])


def report(
    generated: list[DetectionRecord],
    reference: list[DetectionRecord],
    threshold: float = 0.9,
) -> MetricsReport:
    if not generated or not reference:
        raise MetricError("report requires non-empty generated and reference record lists")
    vec_g = _length_vectors(generated)
    vec_r = _length_vectors(reference)
    if not vec_g or not vec_r:
        raise MetricError("report requires at least one detected hand on each side")
    mean_g = np.mean(np.stack(vec_g), axis=0)
    mean_r = np.mean(np.stack(vec_r), axis=0)
    norm_g = np.linalg.norm(mean_g)
    norm_r = np.linalg.norm(mean_r)
    if norm_g == 0.0 or norm_r == 0.0:
        raise MetricError("mjrd undefined: a mean length vector has zero norm")
    distance = float(np.linalg.norm(mean_g / norm_g - mean_r / norm_r))
    if not math.isfinite(distance):
        raise MetricError("mjrd is not finite")
    return MetricsReport(
        n_generated=len(generated),
        n_reference=len(reference),
        mean_confidence=mean_confidence(generated),
        above_threshold_fraction=above_fraction(generated, threshold),
        threshold=threshold,
        mjrd=distance,
        mean_lengths_generated=mean_g,
        mean_lengths_reference=mean_r,
        normalized_generated=mean_g / norm_g,
        normalized_reference=mean_r / norm_r,
    )
