"""Command-line entry points: terrain generation, offline rendering,
the live session server, and audio segmentation."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import nodes as nodemod
from . import terrain as terrainmod
from . import wavio


@click.group()
def main():
    """Cross-modal terrain instrument tools."""


@main.command()
@click.option("--basis", type=click.Choice([b.value for b in terrainmod.Basis]),
              default="WORLEY_F1", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--zoom", type=float, default=8.0, show_default=True)
@click.option("--size", default="256x256", show_default=True,
              help="WxH pixel resolution")
@click.option("--metric", type=click.Choice([m.value for m in terrainmod.DistanceMetric]),
              default="EUCLIDEAN", show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def gen(basis, seed, zoom, size, metric, out):
    """Generate a terrain image (PGM) plus its JSON spec sidecar."""
    try:
        w, h = (int(v) for v in size.lower().split("x"))
    except ValueError:
        raise click.ClickException(f"bad --size {size!r}; expected WxH") from None
    try:
        spec = terrainmod.BasisSpec(
            kind=terrainmod.Basis(basis),
            seed=seed,
            zoom=zoom,
            distance_metric=terrainmod.DistanceMetric(metric),
            width=w,
            height=h,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    t = terrainmod.generate_terrain(spec)
    sidecar = terrainmod.save_terrain(t, out)
    click.echo(f"wrote {out} and {sidecar}")


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--traversal", "traversal_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "output_path", required=True,
              type=click.Path(dir_okay=False))
@click.option("--terrain-seed", type=int, default=None,
              help="Override the terrain seed")
@click.option("--grain-seed", type=int, default=None,
              help="Override the granulator seed")
@click.option("--node-seed", type=int, default=None,
              help="Override the node layout seed")
def render(config_path, traversal_path, output_path,
           terrain_seed, grain_seed, node_seed):
    """Deterministically render a recorded traversal to a 24-bit WAV."""
    from .session import RenderJob, render_traversal

    overrides = {}
    if terrain_seed is not None:
        overrides["terrain_seed"] = terrain_seed
    if grain_seed is not None:
        overrides["grain_seed"] = grain_seed
    if node_seed is not None:
        overrides["node_seed"] = node_seed
    try:
        job = RenderJob(config_path=config_path, traversal_path=traversal_path,
                        output_path=output_path,
                        seed_overrides=overrides or None)
        stats = render_traversal(job)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc)) from None
    click.echo(
        f"wrote {output_path}: {stats['duration']:.2f}s  "
        f"rms={stats['rms']:.6f}  peak={stats['peak']:.6f}  "
        f"grains={stats['grain_count']}"
    )


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--sim/--device", default=True,
              help="Use the simulated device (no hardware driver ships)")
@click.option("--pace", type=float, default=1.0, show_default=True,
              help="Tick pacing factor; 1.0 is real time")
def serve(config_path, port, host, sim, pace):
    """Run the live session service for the browser UI."""
    if not sim:
        raise click.ClickException(
            "no hardware driver is included; run with --sim")
    from .service import serve as run_service

    frontend = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    try:
        run_service(config_path, port=port, host=host, pace=pace,
                    frontend_dir=frontend if frontend.exists() else None)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc)) from None


@main.command()
@click.option("--in", "in_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", type=float, required=True,
              help="Onset threshold as a fraction of peak energy, (0, 1]")
@click.option("--window", type=int, default=1024, show_default=True)
@click.option("--out", "out_path", required=True,
              type=click.Path(dir_okay=False))
def segment(in_path, threshold, window, out_path):
    """Segment a WAV file at energy onsets; write the segment table JSON."""
    try:
        audio, rate = wavio.read_wav(in_path)
        segments = nodemod.detect_onsets(audio, rate, threshold, window)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    Path(out_path).write_text(nodemod.segments_to_json(segments) + "\n")
    click.echo(f"wrote {out_path}: {len(segments)} segments")


if __name__ == "__main__":
    sys.exit(main())
