#!/usr/bin/env node
// Command line entry point for the detections export adapter.

import { Command } from "commander";
import { HandDetector, MediapipeDetector, ReplayDetector } from "./detector.js";
import { exportDetections } from "./export.js";

const program = new Command();

program
    .name("handsix-detect")
    .description("Run a hand-landmark detector over an image folder and export detections JSON")
    .requiredOption("--input-dir <dir>", "directory of input images (PNG)")
    .requiredOption("--out <file>", "output detections JSON path")
    .option("--threshold <t>", "minimum detection confidence", parseFloat, 0)
    .option("--max-hands <n>", "maximum hands per image", (v) => parseInt(v, 10), 2)
    .option("--model <path>", "hand landmarker .task model asset (Mediapipe backend)")
    .option("--replay <path>", "replay recorded detector output instead of running a model")
    .action(async (opts) => {
        let detector: HandDetector;
        if (opts.replay) {
            detector = new ReplayDetector(opts.replay);
        } else if (opts.model) {
            detector = await MediapipeDetector.create({
                modelAssetPath: opts.model,
                maxHands: opts.maxHands,
                minDetectionConfidence: opts.threshold,
            });
        } else {
            console.error("either --model or --replay is required");
            process.exit(1);
        }
        try {
            const result = await exportDetections(
                {
                    inputDir: opts.inputDir,
                    outputPath: opts.out,
                    minDetectionConfidence: opts.threshold,
                    maxHands: opts.maxHands,
                },
                detector,
            );
            console.log(
                `wrote ${result.records.length} records (${result.skipped.length} skipped) to ${opts.out}`,
            );
        } finally {
            await detector.close();
        }
    });

program.parseAsync().catch((err) => {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(2);
});
