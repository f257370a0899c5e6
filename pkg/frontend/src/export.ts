// Batch export: run a detector backend over an image folder and emit a
// version-1 detections file in the exact schema the Python ingest consumes.

import { readdirSync, writeFileSync, mkdirSync } from "node:fs";
import { dirname, extname, join } from "node:path";
import { HandDetector, decodePng } from "./detector.js";
import { DetectionsFile, HandRecord, ImageRecord } from "./schema.js";

export interface AdapterConfig {
    inputDir: string;
    outputPath: string;
    minDetectionConfidence: number; // default 0: every image yields a record
    maxHands: number;
}

const IMAGE_EXTENSIONS = new Set([".png"]);

export function listImages(inputDir: string): string[] {
    return readdirSync(inputDir)
        .filter((name) => IMAGE_EXTENSIONS.has(extname(name).toLowerCase()))
        .sort(); // deterministic output ordering
}

export async function exportDetections(
    config: AdapterConfig,
    detector: HandDetector,
): Promise<DetectionsFile> {
    if (config.minDetectionConfidence < 0 || config.minDetectionConfidence > 1) {
        throw new Error(`threshold must be in [0, 1], got ${config.minDetectionConfidence}`);
    }

    const out: DetectionsFile = {
        version: 1,
        detector: detector.name,
        records: [],
        skipped: [],
    };

    for (const name of listImages(config.inputDir)) {
        const path = join(config.inputDir, name);
        let width: number;
        let height: number;
        try {
            ({ width, height } = decodePng(path));
        } catch (err) {
            const reason = err instanceof Error ? err.message : String(err);
            console.error(`skipping unreadable image ${name}: ${reason}`);
            out.skipped.push({ image: name, reason });
            continue;
        }

        const detected = await detector.detect(path);
        const hands: HandRecord[] = detected
            .filter((h) => h.confidence >= config.minDetectionConfidence)
            .slice(0, config.maxHands)
            .map((h) => ({
                handedness: h.handedness,
                confidence: h.confidence,
                // normalized detector coordinates -> pixel coordinates using
                // the image's true size; z is passed through unchanged
                keypoints: h.landmarks.map((p) => ({
                    x: p.x * width,
                    y: p.y * height,
                    z: p.z,
                })),
            }));

        const record: ImageRecord = { image: name, width, height, hands };
        out.records.push(record);
    }

    mkdirSync(dirname(config.outputPath), { recursive: true });
    writeFileSync(config.outputPath, JSON.stringify(out, null, 2) + "\n");
    return out;
}
