"""Batch command line front end.

Subcommands: synth, annotate, filter, validate, eval, inspect.
Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 internal error.
All flags can also come from a JSON config file (--config); explicit flags
win over the file.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import numpy as np
from PIL import Image

from . import annotate as annotate_mod
from . import container, ingest, metrics
from .errors import ConfigError, DataError, ToolkitError
from .synth import synth_batch


def _load_config(ctx, param, value):
    """Populate the default map from a JSON config file; flags win."""
    if value is None:
        return None
    try:
        with open(value) as f:
            cfg = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise click.UsageError(f"cannot read config file {value}: {e}")
    if not isinstance(cfg, dict):
        raise click.UsageError(f"config file {value} must hold a JSON object")
    ctx.default_map = {**cfg, **(ctx.default_map or {})}
    return value


config_option = click.option(
    "--config", type=click.Path(exists=True, dir_okay=False), callback=_load_config,
    is_eager=True, expose_value=False, help="JSON file of default option values.",
)


@click.group()
def cli():
    """Six-channel hand dataset toolkit."""


@cli.command()
@config_option
@click.option("--count", type=int, required=True, help="Number of samples to generate.")
@click.option("--seed", type=int, required=True, help="Master seed; outputs are deterministic.")
@click.option("--size", type=int, default=256, show_default=True)
@click.option("--stroke-radius", type=float, default=None,
              help="Annotation stroke half-thickness in px (default scales with size).")
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.option("--workers", type=int, default=None, help="Parallel workers (default: cores).")
def synth(count, seed, size, stroke_radius, out, workers):
    """Generate packed six-channel synthetic samples plus a manifest."""
    if count < 1:
        raise click.UsageError("--count must be >= 1")
    if size < 16:
        raise click.UsageError("--size must be >= 16")
    if stroke_radius is None:
        stroke_radius = annotate_mod.default_stroke_radius(size, size)
    if workers is None:
        workers = os.cpu_count() or 1
    entries = synth_batch(count, seed, size, stroke_radius, out, workers=workers)
    click.echo(f"wrote {len(entries)} samples and manifest.json to {out}")


@cli.command("annotate")
@config_option
@click.option("--detections", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--images", type=click.Path(file_okay=False), default=None,
              help="Directory of source photos to pack as RGB (by record image id).")
@click.option("--stroke-radius", type=float, default=None)
@click.option("--out", type=click.Path(file_okay=False), required=True)
def annotate_cmd(detections, images, stroke_radius, out):
    """Annotate real-photo detection records, discarding out-of-bounds ones."""
    records = ingest.parse_detections(detections)
    if not records:
        raise DataError(f"{detections}: no records")
    kept, discarded = ingest.filter_in_bounds(records)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for record in kept:
        w, h = record.image_width, record.image_height
        r = stroke_radius or annotate_mod.default_stroke_radius(w, h)
        ann = ingest.annotate_record(
            record, annotate_mod.RasterConfig(width=w, height=h, stroke_radius=r)
        )
        rgb = _load_rgb(images, record.image_id, w, h)
        entry_id = Path(record.image_id).stem
        name = f"{entry_id}.h6c"
        container.write_packed(container.pack(rgb, ann), out_dir / name)
        entries.append(
            container.ManifestEntry(
                id=entry_id,
                handedness=record.hands[0].handedness.value,
                source="real", width=w, height=h, packed=name,
            )
        )
    container.write_manifest(entries, out_dir / "manifest.json")
    click.echo(f"kept {len(kept)}, discarded {len(discarded)}")
    click.echo(f"wrote {len(entries)} packed files to {out}")


def _load_rgb(images_dir, image_id, width, height) -> np.ndarray:
    if images_dir is None:
        return np.zeros((height, width, 3), dtype=np.uint8)
    path = Path(images_dir) / image_id
    if not path.exists():
        raise DataError(f"image {image_id!r} not found under {images_dir}")
    rgb = np.asarray(Image.open(path).convert("RGB"))
    if rgb.shape[:2] != (height, width):
        raise DataError(
            f"image {image_id!r} is {rgb.shape[1]}x{rgb.shape[0]}, "
            f"record says {width}x{height} (no resizing on load)"
        )
    return rgb


@cli.command("filter")
@config_option
@click.option("--detections", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the kept records as a new detections file.")
def filter_cmd(detections, out):
    """Partition detection records by the in-bounds keypoint rule."""
    records = ingest.parse_detections(detections)
    kept, discarded = ingest.filter_in_bounds(records)
    click.echo(f"kept {len(kept)}, discarded {len(discarded)}")
    if out is not None:
        ingest.serialize_detections(kept, out)
        click.echo(f"wrote kept records to {out}")


@cli.command("validate")
@config_option
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Packed six-channel file to validate.")
@click.option("--tolerance", type=float, default=0.0, show_default=True,
              help="Intensity tolerance (use ~10 for model-generated planes).")
def validate_cmd(input_path, tolerance):
    """Validate the annotation planes of a packed file."""
    img = container.read_packed(input_path)
    report = annotate_mod.validate(img.annotation, tolerance=tolerance)
    if report.ok:
        click.echo("ok")
    else:
        for v in report.violations:
            click.echo(f"violation: {v}")
        raise DataError(f"{input_path}: {len(report.violations)} validation violation(s)")


@cli.command("eval")
@config_option
@click.option("--generated", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--reference", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--threshold", type=float, default=0.9, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
def eval_cmd(generated, reference, threshold, out):
    """Score generated detections against a reference set."""
    gen = ingest.parse_detections(generated)
    ref = ingest.parse_detections(reference)
    if not gen or not ref:
        raise DataError("both detection files must contain records")
    rep = metrics.report(gen, ref, threshold=threshold)
    click.echo(rep.to_table())
    if out is not None:
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(rep.to_json() + "\n")
        (out_dir / "report.txt").write_text(rep.to_table() + "\n")
        click.echo(f"wrote report.json and report.txt to {out}")


@cli.command("inspect")
@config_option
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
def inspect_cmd(input_path, out):
    """Export a packed file as viewable images: RGB, three grayscale planes,
    and a composite preview with the skeleton overlaid."""
    img = container.read_packed(input_path)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(input_path).stem

    Image.fromarray(img.rgb).save(out_dir / f"{stem}_rgb.png")
    names = ("finger", "segment", "handedness")
    for plane, name in zip(img.planes[3:], names):
        Image.fromarray(plane).save(out_dir / f"{stem}_{name}.png")

    composite = img.rgb.copy()
    support = img.planes[3] != 0
    composite[support] = np.stack(
        [img.planes[3][support], img.planes[4][support], img.planes[5][support]], axis=-1
    )
    Image.fromarray(composite).save(out_dir / f"{stem}_composite.png")
    click.echo(f"wrote 5 images to {out}")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.UsageError as e:
        click.echo(f"usage error: {e.format_message()}", err=True)
        sys.exit(1)
    except ConfigError as e:
        click.echo(f"usage error: {e}", err=True)
        sys.exit(1)
    except DataError as e:
        click.echo(f"data error: {e}", err=True)
        sys.exit(2)
    except ToolkitError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(3)
    sys.exit(0)


if __name__ == "__main__":
    main()
