"""handsix: a six-channel hand image dataset toolkit.

Generates synthetic hand poses, rasterizes coded skeleton annotation planes
with painter's-algorithm occlusion, packs RGB + annotations into a bit-exact
container, ingests real-photo detector exports, and scores hand quality.
"""

from .topology import (
    Finger,
    Handedness,
    canonical_topology,
    finger_code,
    handedness_code,
    segment_code,
)
from .annotate import (
    AnnotationImage,
    HandPose25D,
    RasterConfig,
    bone_depth,
    decode,
    rasterize,
    validate,
)
from .container import (
    SixChannelImage,
    pack,
    read_manifest,
    read_packed,
    write_manifest,
    write_packed,
)
from .ingest import (
    DetectionRecord,
    annotate_record,
    filter_in_bounds,
    parse_detections,
)
from .metrics import above_fraction, joint_lengths, mean_confidence, mjrd, report
from .posegen import (
    CameraConfig,
    HandShape,
    JointAngles,
    JointLimits,
    forward_kinematics,
    project,
    render_stylized,
    sample_angles,
    sample_shape,
)

__version__ = "0.1.0"
