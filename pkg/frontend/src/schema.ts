// Detections file schema, version 1.  This is the exact wire format the
// Python toolkit's ingest module consumes; field names and nesting are fixed.

export interface Keypoint {
    x: number; // pixels
    y: number; // pixels
    z: number; // relative depth, smaller = closer
}

export type HandednessLabel = "left" | "right";

export interface HandRecord {
    handedness: HandednessLabel;
    confidence: number; // [0, 1]
    keypoints: Keypoint[]; // exactly 21
}

export interface ImageRecord {
    image: string;
    width: number;
    height: number;
    hands: HandRecord[];
}

export interface DetectionsFile {
    version: 1;
    detector: string; // detector name/version, for provenance
    records: ImageRecord[];
    skipped: { image: string; reason: string }[];
}

export const KEYPOINT_COUNT = 21;
