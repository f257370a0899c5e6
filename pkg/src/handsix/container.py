"""Bit-exact packed six-channel image format and dataset manifests.

Packed file layout (fixed, no compression):
  bytes 0-7    magic b"HAND6CH\\0"
  bytes 8-9    format version, uint16 little-endian (currently 1)
  bytes 10-13  width,  uint32 little-endian
  bytes 14-17  height, uint32 little-endian
  then six planes row-major, one byte per pixel, order R, G, B, A1, A2, A3
  (A1 = finger codes, A2 = segment codes, A3 = handedness codes).
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .annotate import AnnotationImage
from .errors import BadMagicError, BadVersionError, DataError, ParseError, TruncatedFileError

MAGIC = b"HAND6CH\0"
FORMAT_VERSION = 1
MANIFEST_VERSION = 1
_HEADER = struct.Struct("<8sHII")


@dataclass
class SixChannelImage:
    planes: np.ndarray  # (6, h, w) uint8, order R, G, B, A1, A2, A3

    def __post_init__(self):
        self.planes = np.asarray(self.planes, dtype=np.uint8)
        if self.planes.ndim != 3 or self.planes.shape[0] != 6:
            raise DataError(f"expected (6, h, w) planes, got shape {self.planes.shape}")

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    @property
    def rgb(self) -> np.ndarray:
        """(h, w, 3) view of the color planes."""
        return np.moveaxis(self.planes[:3], 0, -1)

    @property
    def annotation(self) -> AnnotationImage:
        return AnnotationImage(self.planes[3], self.planes[4], self.planes[5])

    def __eq__(self, other):
        return isinstance(other, SixChannelImage) and np.array_equal(self.planes, other.planes)


def pack(rgb: np.ndarray, ann: AnnotationImage) -> SixChannelImage:
    """Combine an (h, w, 3) RGB image with annotation planes, verbatim."""
    rgb = np.asarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise DataError(f"expected (h, w, 3) rgb image, got shape {rgb.shape}")
    if rgb.shape[:2] != (ann.height, ann.width):
        raise DataError(
            f"dimension mismatch: rgb is {rgb.shape[1]}x{rgb.shape[0]}, "
            f"annotation is {ann.width}x{ann.height}"
        )
    planes = np.stack(
        [rgb[:, :, 0], rgb[:, :, 1], rgb[:, :, 2], *ann.planes()]
    )
    return SixChannelImage(planes)


def write_packed(img: SixChannelImage, path) -> None:
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, img.width, img.height)
    with open(path, "wb") as f:
        f.write(header)
        f.write(img.planes.tobytes(order="C"))


def read_packed(path) -> SixChannelImage:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise TruncatedFileError(f"{path}: file shorter than the {_HEADER.size}-byte header")
    magic, version, width, height = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagicError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise BadVersionError(f"{path}: unsupported format version {version}")
    expected = _HEADER.size + 6 * width * height
    if len(data) < expected:
        raise TruncatedFileError(
            f"{path}: expected {expected} bytes for {width}x{height}, got {len(data)}"
        )
    planes = np.frombuffer(
        data, dtype=np.uint8, count=6 * width * height, offset=_HEADER.size
    ).reshape(6, height, width)
    return SixChannelImage(planes.copy())


@dataclass
class ManifestEntry:
    id: str
    handedness: str
    source: str  # "synthetic" or "real"
    width: int
    height: int
    packed: str | None = None       # path to a packed six-channel file
    rgb: str | None = None          # paired-file alternative
    annotation: str | None = None

    def __post_init__(self):
        if self.source not in ("synthetic", "real"):
            raise DataError(f"entry {self.id}: source must be synthetic or real")
        if self.packed is None and (self.rgb is None or self.annotation is None):
            raise DataError(f"entry {self.id}: needs a packed path or rgb+annotation paths")


def write_manifest(entries: list[ManifestEntry], path) -> None:
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise DataError(f"duplicate manifest ids: {dupes}")
    doc = {
        "version": MANIFEST_VERSION,
        "entries": [
            {k: v for k, v in asdict(e).items() if v is not None} for e in entries
        ],
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def read_manifest(path) -> list[ManifestEntry]:
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid manifest JSON: {e}") from e
    if doc.get("version") != MANIFEST_VERSION:
        raise BadVersionError(f"{path}: unsupported manifest version {doc.get('version')!r}")
    entries = []
    seen = set()
    for i, raw in enumerate(doc.get("entries", [])):
        try:
            entry = ManifestEntry(**raw)
        except TypeError as e:
            raise ParseError(f"{path}: entry {i}: {e}") from e
        if entry.id in seen:
            raise DataError(f"{path}: duplicate manifest id {entry.id!r}")
        seen.add(entry.id)
        entries.append(entry)
    return entries
