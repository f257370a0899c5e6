// Detector backends.  The adapter never implements landmark detection
// itself: the real backend wraps the Mediapipe HandLandmarker, and the
// replay backend replays previously recorded detector output (used for
// testing and offline runs where the .task model asset is unavailable).

import { readFileSync } from "node:fs";
import { PNG } from "pngjs";
import { HandednessLabel, KEYPOINT_COUNT } from "./schema.js";

export interface NormalizedHand {
    handedness: HandednessLabel;
    confidence: number;
    // 21 landmarks in detector coordinates: x, y normalized to [0, 1]
    // relative to the image, z relative depth (smaller = closer).
    landmarks: { x: number; y: number; z: number }[];
}

export interface HandDetector {
    readonly name: string;
    detect(imagePath: string): Promise<NormalizedHand[]>;
    close(): Promise<void>;
}

export function decodePng(path: string): { data: Uint8ClampedArray; width: number; height: number } {
    const png = PNG.sync.read(readFileSync(path));
    return {
        data: new Uint8ClampedArray(png.data.buffer, png.data.byteOffset, png.data.length),
        width: png.width,
        height: png.height,
    };
}

export interface MediapipeOptions {
    modelAssetPath: string;
    wasmPath?: string;
    maxHands: number;
    minDetectionConfidence: number;
}

/** Wraps @mediapipe/tasks-vision HandLandmarker for batch image inference.
 *  Requires the hand_landmarker.task model asset on disk. */
export class MediapipeDetector implements HandDetector {
    readonly name: string;
    private landmarker: any;

    private constructor(landmarker: any, version: string) {
        this.landmarker = landmarker;
        this.name = `mediapipe-tasks-vision ${version}`;
    }

    static async create(options: MediapipeOptions): Promise<MediapipeDetector> {
        const vision = await import("@mediapipe/tasks-vision");
        const wasmPath =
            options.wasmPath ??
            new URL("../node_modules/@mediapipe/tasks-vision/wasm", import.meta.url).pathname;
        const fileset = await vision.FilesetResolver.forVisionTasks(wasmPath);
        const landmarker = await vision.HandLandmarker.createFromOptions(fileset, {
            baseOptions: { modelAssetPath: options.modelAssetPath },
            runningMode: "IMAGE",
            numHands: options.maxHands,
            minHandDetectionConfidence: options.minDetectionConfidence,
        });
        let version = "unknown";
        try {
            const pkgPath = new URL(
                "../node_modules/@mediapipe/tasks-vision/package.json", import.meta.url,
            ).pathname;
            version = JSON.parse(readFileSync(pkgPath, "utf-8")).version ?? "unknown";
        } catch {
            // provenance only; fine without it
        }
        return new MediapipeDetector(landmarker, version);
    }

    async detect(imagePath: string): Promise<NormalizedHand[]> {
        const { data, width, height } = decodePng(imagePath);
        const result = this.landmarker.detect({ data, width, height });
        const hands: NormalizedHand[] = [];
        for (let i = 0; i < result.landmarks.length; i++) {
            const category = result.handedness[i]?.[0];
            const label = (category?.categoryName ?? "Right").toLowerCase();
            hands.push({
                handedness: label === "left" ? "left" : "right",
                confidence: clamp01(category?.score ?? 0),
                landmarks: result.landmarks[i].map((p: any) => ({ x: p.x, y: p.y, z: p.z })),
            });
        }
        return hands;
    }

    async close(): Promise<void> {
        this.landmarker?.close?.();
    }
}

/** Replays detector output recorded earlier into a JSON file keyed by image
 *  file name.  Images with no entry yield an empty hands list. */
export class ReplayDetector implements HandDetector {
    readonly name: string;
    private byImage: Record<string, NormalizedHand[]>;

    constructor(fixturePath: string) {
        const doc = JSON.parse(readFileSync(fixturePath, "utf-8"));
        this.byImage = doc.detections ?? {};
        this.name = doc.detector ?? "replay";
        for (const [image, hands] of Object.entries(this.byImage)) {
            for (const hand of hands) {
                if (hand.landmarks.length !== KEYPOINT_COUNT) {
                    throw new Error(
                        `fixture entry ${image}: expected ${KEYPOINT_COUNT} landmarks, got ${hand.landmarks.length}`,
                    );
                }
            }
        }
    }

    async detect(imagePath: string): Promise<NormalizedHand[]> {
        const name = imagePath.split("/").pop() ?? imagePath;
        return this.byImage[name] ?? [];
    }

    async close(): Promise<void> {}
}

function clamp01(v: number): number {
    return Math.min(1, Math.max(0, v));
}
