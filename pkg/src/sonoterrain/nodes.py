"""Circular resistance nodes bound to onset-detected audio segments.

A source file is split at energy onsets; each segment gets a circular
node placed in the unit square. Querying the field with the cursor
position yields the selected segment and a bump-shaped resistance value
(1 at the node center, 0 at its rim or outside every node).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._rng import SplitMix64


@dataclass(frozen=True)
class Segment:
    id: int
    start_sample: int
    end_sample: int

    def __post_init__(self):
        if not 0 <= self.start_sample < self.end_sample:
            raise ValueError("segment must satisfy 0 <= start < end")


@dataclass(frozen=True)
class Node:
    id: int
    center: tuple[float, float]
    radius: float
    segment_id: int

    def __post_init__(self):
        if not 0.0 < self.radius <= 0.5:
            raise ValueError("radius must be in (0, 0.5]")
        if not (0.0 <= self.center[0] <= 1.0 and 0.0 <= self.center[1] <= 1.0):
            raise ValueError("center must lie in the unit square")


@dataclass(frozen=True)
class NodeField:
    nodes: tuple[Node, ...]

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("node ids must be unique")


@dataclass(frozen=True)
class NodeHit:
    node_id: int | None
    resistance: float


def detect_onsets(audio: np.ndarray, sample_rate: int, threshold: float,
                  window: int = 1024) -> list[Segment]:
    """Segment audio at rising short-time-energy onsets.

    Frames are centered every half window; an onset fires where frame RMS
    rises from below ``threshold * peak`` to at or above it. Segments tile
    the whole file, so a file with no onsets yields a single segment.
    """
    audio = np.asarray(audio, dtype=np.float64)
    if audio.size == 0:
        raise ValueError("audio must be nonempty")
    if window < 64:
        raise ValueError("window must be at least 64 samples")
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")

    n = audio.size
    hop = window // 2
    half = window // 2
    csum = np.concatenate(([0.0], np.cumsum(audio * audio)))
    n_frames = 1 + (n - 1) // hop

    energies = np.empty(n_frames)
    for k in range(n_frames):
        a = max(0, k * hop - half)
        b = min(n, k * hop + half)
        energies[k] = math.sqrt((csum[b] - csum[a]) / (b - a))

    peak = float(energies.max())
    gate = threshold * peak
    onsets: list[int] = []
    prev = 0.0
    for k in range(n_frames):
        e = energies[k]
        if e >= gate and (k == 0 or prev < gate):
            onsets.append(min(k * hop, n - 1))
        prev = e

    boundaries = onsets if onsets and onsets[0] == 0 else [0] + onsets
    boundaries.append(n)
    segments = []
    for i in range(len(boundaries) - 1):
        if boundaries[i + 1] > boundaries[i]:
            segments.append(Segment(id=len(segments),
                                    start_sample=boundaries[i],
                                    end_sample=boundaries[i + 1]))
    return segments


def build_field(segments: list[Segment], seed: int) -> NodeField:
    """One node per segment, seeded placement in [0.1, 0.9]^2 with radii
    in [0.05, 0.2]."""
    if not segments:
        raise ValueError("need at least one segment")
    rng = SplitMix64(seed)
    nodes = []
    for i, seg in enumerate(segments):
        cx = rng.uniform_in(0.1, 0.9)
        cy = rng.uniform_in(0.1, 0.9)
        r = rng.uniform_in(0.05, 0.2)
        nodes.append(Node(id=i, center=(cx, cy), radius=r, segment_id=seg.id))
    return NodeField(nodes=tuple(nodes))


def query(field: NodeField, cursor: tuple[float, float],
          profile: str = "linear") -> NodeHit:
    """Closest-center selection among the nodes containing the cursor.

    Overlaps resolve to the node whose center is nearest (ties to the
    lowest id); resistance falls from 1 at the center to 0 at the rim.
    """
    if not field.nodes:
        raise ValueError("field must be nonempty")
    x, y = cursor
    best: Node | None = None
    best_d = math.inf
    for node in field.nodes:
        d = math.hypot(x - node.center[0], y - node.center[1])
        if d <= node.radius and (d < best_d or (d == best_d and (best is None or node.id < best.id))):
            best = node
            best_d = d
    if best is None:
        return NodeHit(node_id=None, resistance=0.0)
    frac = best_d / best.radius
    if profile == "cosine":
        resistance = 0.5 * (1.0 + math.cos(math.pi * frac))
    else:
        resistance = 1.0 - frac
    return NodeHit(node_id=best.id, resistance=resistance)


def resistance_grid(field: NodeField, width: int = 256, height: int = 256,
                    profile: str = "linear") -> np.ndarray:
    """Rasterize the field's resistance for display (rows top to bottom)."""
    out = np.zeros((height, width))
    for j in range(height):
        y = (j + 0.5) / height
        for i in range(width):
            out[j, i] = query(field, ((i + 0.5) / width, y), profile).resistance
    return out


def field_to_json(field: NodeField) -> str:
    return json.dumps(
        {
            "nodes": [
                {
                    "id": n.id,
                    "center": [n.center[0], n.center[1]],
                    "radius": n.radius,
                    "segment_id": n.segment_id,
                }
                for n in field.nodes
            ]
        },
        indent=2,
    )


def field_from_json(text: str) -> NodeField:
    doc = json.loads(text)
    return NodeField(
        nodes=tuple(
            Node(
                id=int(n["id"]),
                center=(float(n["center"][0]), float(n["center"][1])),
                radius=float(n["radius"]),
                segment_id=int(n["segment_id"]),
            )
            for n in doc["nodes"]
        )
    )


def segments_to_json(segments: list[Segment]) -> str:
    return json.dumps(
        {
            "segments": [
                {"id": s.id, "start_sample": s.start_sample, "end_sample": s.end_sample}
                for s in segments
            ]
        },
        indent=2,
    )


def segments_from_json(text: str) -> list[Segment]:
    doc = json.loads(text)
    return [
        Segment(id=int(s["id"]), start_sample=int(s["start_sample"]),
                end_sample=int(s["end_sample"]))
        for s in doc["segments"]
    ]


def load_field(path: str | Path) -> NodeField:
    return field_from_json(Path(path).read_text())


def save_field(field: NodeField, path: str | Path) -> None:
    Path(path).write_text(field_to_json(field) + "\n")
