import json

import numpy as np
import pytest

from handsix.annotate import RasterConfig, validate
from handsix.errors import DataError, ParseError
from handsix.ingest import (
    DetectionRecord,
    HandDetection,
    annotate_record,
    filter_in_bounds,
    parse_detections,
    serialize_detections,
)
from handsix.topology import Handedness

from oracles import naive_rasterize


def make_keypoints(xs, ys, z=0.0):
    kps = np.zeros((21, 3))
    kps[:, 0] = xs
    kps[:, 1] = ys
    kps[:, 2] = z
    return kps


def grid_keypoints(x0=40.0, y0=40.0, step=8.0, z=0.0):
    """21 keypoints on a small grid, all well inside a 256x256 image."""
    kps = np.zeros((21, 3))
    for i in range(21):
        kps[i] = (x0 + step * (i % 5), y0 + step * (i // 5), z + 0.1 * i)
    return kps


def hand_dict(kps, handedness="right", confidence=0.9):
    return {
        "handedness": handedness,
        "confidence": confidence,
        "keypoints": [{"x": float(x), "y": float(y), "z": float(z)} for x, y, z in kps],
    }


def doc(records):
    return {"version": 1, "records": records}


def record_dict(image="img0.png", width=256, height=256, hands=None):
    return {"image": image, "width": width, "height": height,
            "hands": hands if hands is not None else [hand_dict(grid_keypoints())]}


def write_doc(tmp_path, d, name="det.json"):
    path = tmp_path / name
    path.write_text(json.dumps(d))
    return path


class TestParse:
    def test_two_records(self, tmp_path):
        path = write_doc(tmp_path, doc([record_dict(), record_dict(image="img1.png")]))
        records = parse_detections(path)
        assert len(records) == 2
        assert records[1].image_id == "img1.png"
        assert records[0].hands[0].handedness is Handedness.RIGHT

    def test_twenty_keypoints_rejected(self, tmp_path):
        h = hand_dict(grid_keypoints())
        h["keypoints"] = h["keypoints"][:20]
        path = write_doc(tmp_path, doc([record_dict(), record_dict(hands=[h])]))
        with pytest.raises(ParseError, match="record 1.*21"):
            parse_detections(path)

    def test_confidence_out_of_range(self, tmp_path):
        h = hand_dict(grid_keypoints(), confidence=1.3)
        path = write_doc(tmp_path, doc([record_dict(hands=[h])]))
        with pytest.raises(ParseError, match="confidence"):
            parse_detections(path)

    def test_missing_field_named(self, tmp_path):
        r = record_dict()
        del r["width"]
        path = write_doc(tmp_path, doc([r]))
        with pytest.raises(ParseError, match="record 0.*'width'"):
            parse_detections(path)

    def test_bad_handedness(self, tmp_path):
        h = hand_dict(grid_keypoints(), handedness="both")
        path = write_doc(tmp_path, doc([record_dict(hands=[h])]))
        with pytest.raises(ParseError, match="handedness"):
            parse_detections(path)

    def test_bad_version(self, tmp_path):
        path = write_doc(tmp_path, {"version": 2, "records": []})
        with pytest.raises(ParseError, match="version"):
            parse_detections(path)

    def test_extra_top_level_keys_ignored(self, tmp_path):
        d = doc([record_dict()])
        d["detector"] = "some-detector 1.2.3"
        d["skipped"] = []
        assert len(parse_detections(write_doc(tmp_path, d))) == 1

    def test_parse_serialize_parse_idempotent(self, tmp_path):
        path = write_doc(tmp_path, doc([record_dict(), record_dict(image="b.png", hands=[])]))
        records = parse_detections(path)
        out = tmp_path / "roundtrip.json"
        serialize_detections(records, out)
        again = parse_detections(out)
        assert len(again) == len(records)
        for a, b in zip(records, again):
            assert a.image_id == b.image_id
            assert len(a.hands) == len(b.hands)
            for ha, hb in zip(a.hands, b.hands):
                assert ha.handedness == hb.handedness
                assert ha.confidence == hb.confidence
                assert np.array_equal(ha.keypoints, hb.keypoints)


def make_record(kps_list, width=256, height=256, image="r.png"):
    hands = [
        HandDetection(handedness=Handedness.RIGHT, confidence=0.9, keypoints=k)
        for k in kps_list
    ]
    return DetectionRecord(image_id=image, image_width=width, image_height=height, hands=hands)


class TestFilter:
    def test_decision_table(self):
        inside = make_record([grid_keypoints()])
        negative = make_record([grid_keypoints()])
        negative.hands[0].keypoints[7, 0] = -3.0
        at_width = make_record([grid_keypoints()])
        at_width.hands[0].keypoints[4, 0] = 256.0  # exactly width: out (exclusive bound)
        empty = make_record([])

        kept, discarded = filter_in_bounds([inside, negative, at_width, empty])
        assert kept == [inside]
        assert discarded == [negative, at_width, empty]

    def test_partition_is_exhaustive_and_ordered(self):
        rng = np.random.default_rng(8)
        records = []
        for i in range(50):
            kps = grid_keypoints()
            if rng.random() < 0.5:
                kps[int(rng.integers(0, 21)), 1] = 500.0
            records.append(make_record([kps], image=f"img{i}.png"))
        kept, discarded = filter_in_bounds(records)
        assert len(kept) + len(discarded) == len(records)
        assert not (set(id(r) for r in kept) & set(id(r) for r in discarded))
        # order preserved within each part
        order = {id(r): i for i, r in enumerate(records)}
        assert [order[id(r)] for r in kept] == sorted(order[id(r)] for r in kept)
        assert [order[id(r)] for r in discarded] == sorted(order[id(r)] for r in discarded)

    def test_boundary_just_inside(self):
        r = make_record([grid_keypoints()])
        r.hands[0].keypoints[4] = (255.0, 255.0, 0.0)
        kept, _ = filter_in_bounds([r])
        assert kept == [r]


class TestAnnotateRecord:
    def test_single_right_hand(self):
        record = make_record([grid_keypoints()])
        ann = annotate_record(record, RasterConfig(width=256, height=256))
        assert validate(ann, tolerance=0).ok
        support = ann.plane_handed != 0
        assert support.any()
        assert np.all(ann.plane_handed[support] == 200)

    def test_two_hands_disjoint_components(self):
        left_kps = grid_keypoints(x0=20.0, y0=20.0)
        right_kps = grid_keypoints(x0=180.0, y0=180.0)
        record = DetectionRecord(
            image_id="two.png", image_width=256, image_height=256,
            hands=[
                HandDetection(Handedness.LEFT, 0.8, left_kps),
                HandDetection(Handedness.RIGHT, 0.9, right_kps),
            ],
        )
        ann = annotate_record(record, RasterConfig(width=256, height=256))
        vals = set(np.unique(ann.plane_handed)) - {0}
        assert vals == {100, 200}
        assert validate(ann, tolerance=0).ok  # disjoint components stay constant

    def test_empty_record_rejected(self):
        with pytest.raises(DataError):
            annotate_record(make_record([]), RasterConfig(width=256, height=256))

    def test_rotation_180_equivariance(self):
        # integer keypoints so the 180-degree mapping is numerically exact
        kps = grid_keypoints()  # already integral x, y
        record = make_record([kps])
        cfg = RasterConfig(width=256, height=256, stroke_radius=3)
        ann = annotate_record(record, cfg)

        rotated = kps.copy()
        rotated[:, 0] = 255.0 - rotated[:, 0]
        rotated[:, 1] = 255.0 - rotated[:, 1]
        ann_rot = annotate_record(make_record([rotated]), cfg)
        for a, b in zip(ann.planes(), ann_rot.planes()):
            assert np.array_equal(a[::-1, ::-1], b)

    def test_matches_naive_oracle(self):
        from handsix.annotate import HandPose25D

        record = make_record([grid_keypoints()])
        ann = annotate_record(record, RasterConfig(width=256, height=256, stroke_radius=3))
        poses = [HandPose25D(h.keypoints, h.handedness) for h in record.hands]
        pf, ps, ph = naive_rasterize(poses, 256, 256, 3.0)
        assert np.array_equal(ann.plane_finger, pf)
        assert np.array_equal(ann.plane_segment, ps)
        assert np.array_equal(ann.plane_handed, ph)
