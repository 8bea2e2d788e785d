"""Procedural basis-function terrains.

A terrain is a W x H grid of grayscale values in [0, 1] generated from a
cellular (Worley) or value-noise basis. The same grid doubles as a
visual texture and as the haptic force field, so generation must be
exactly reproducible: all randomness comes from integer hashes of
(seed, cell), never from float-ordering or global RNG state.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from ._kernels import kernels


class Basis(Enum):
    WORLEY_F1 = "WORLEY_F1"
    WORLEY_F2 = "WORLEY_F2"
    WORLEY_F2_MINUS_F1 = "WORLEY_F2_MINUS_F1"
    VALUE_NOISE = "VALUE_NOISE"


class DistanceMetric(Enum):
    EUCLIDEAN = "EUCLIDEAN"
    MANHATTAN = "MANHATTAN"
    CHEBYSHEV = "CHEBYSHEV"


_METRIC_CODE = {
    DistanceMetric.EUCLIDEAN: 0,
    DistanceMetric.MANHATTAN: 1,
    DistanceMetric.CHEBYSHEV: 2,
}

_WORLEY_CODE = {
    Basis.WORLEY_F1: 0,
    Basis.WORLEY_F2: 1,
    Basis.WORLEY_F2_MINUS_F1: 2,
}


class SampleMode(Enum):
    NEAREST_CELL = "NEAREST_CELL"
    BILINEAR = "BILINEAR"


@dataclass(frozen=True)
class BasisSpec:
    """Generation recipe: basis kind, seed, zoom (feature cells per image
    width) and pixel resolution."""

    kind: Basis = Basis.WORLEY_F1
    seed: int = 0
    zoom: float = 8.0
    distance_metric: DistanceMetric = DistanceMetric.EUCLIDEAN
    width: int = 256
    height: int = 256

    def __post_init__(self):
        if self.zoom <= 0:
            raise ValueError("zoom must be positive")
        if self.width < 2 or self.height < 2:
            raise ValueError("width and height must be at least 2")
        if not 0 <= self.seed <= 0xFFFFFFFFFFFFFFFF:
            raise ValueError("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "seed": self.seed,
            "zoom": self.zoom,
            "distance_metric": self.distance_metric.value,
            "width": self.width,
            "height": self.height,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BasisSpec":
        return cls(
            kind=Basis(d.get("kind", "WORLEY_F1")),
            seed=int(d.get("seed", 0)),
            zoom=float(d.get("zoom", 8.0)),
            distance_metric=DistanceMetric(d.get("distance_metric", "EUCLIDEAN")),
            width=int(d.get("width", 256)),
            height=int(d.get("height", 256)),
        )


@dataclass(frozen=True)
class Terrain:
    """Normalized grayscale grid. Immutable once generated: safe to share
    read-only across the haptic tick, the audio callback and the service
    threads; swapping the active terrain is a reference replacement."""

    values: np.ndarray  # (H, W) float64 in [0, 1], read-only
    normalized: bool
    flat: bool
    spec: BasisSpec

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def n_cells_for(spec: BasisSpec) -> int:
    """Feature cells per axis (no tiling; cells outside the domain hold
    no feature points)."""
    return max(1, int(math.ceil(spec.zoom)))


def worley_distances(p: tuple[float, float], spec: BasisSpec) -> tuple[float, float]:
    """Distance to the nearest and second-nearest feature point of the
    spec's jittered cell grid, in feature-grid units."""
    if spec.kind not in _WORLEY_CODE:
        raise ValueError("worley_distances requires a WORLEY basis spec")
    px, py = float(p[0]), float(p[1])
    if not (math.isfinite(px) and math.isfinite(py)):
        raise ValueError("point must be finite")
    return kernels.worley_pair(
        px, py, n_cells_for(spec), spec.seed, _METRIC_CODE[spec.distance_metric]
    )


def nearest_two(
    p: tuple[float, float],
    points: list[tuple[float, float]],
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN,
) -> tuple[float, float]:
    """Nearest/second-nearest distances to an explicit point set (test hook
    and brute-force oracle)."""
    if not points:
        raise ValueError("need at least one point")
    dists = []
    for fx, fy in points:
        dx, dy = fx - p[0], fy - p[1]
        if metric is DistanceMetric.EUCLIDEAN:
            dists.append(math.hypot(dx, dy))
        elif metric is DistanceMetric.MANHATTAN:
            dists.append(abs(dx) + abs(dy))
        else:
            dists.append(max(abs(dx), abs(dy)))
    dists.sort()
    return dists[0], dists[1] if len(dists) > 1 else dists[0]


def feature_points(spec: BasisSpec) -> list[tuple[float, float]]:
    """All feature points of the spec's grid (oracle/visualization aid)."""
    from ._rng import cell_hashes

    n = n_cells_for(spec)
    pts = []
    for j in range(n):
        for i in range(n):
            h1, h2 = cell_hashes(spec.seed, i, j)
            pts.append((i + (h1 >> 40) / 16777216.0, j + (h2 >> 40) / 16777216.0))
    return pts


def normalize(raw: np.ndarray, spec: BasisSpec) -> Terrain:
    """Affine map of a raw grid onto [0, 1]; a constant grid maps to all
    zeros and is flagged flat rather than rejected."""
    raw = np.asarray(raw, dtype=np.float64)
    if raw.size == 0:
        raise ValueError("grid must be nonempty")
    if not np.all(np.isfinite(raw)):
        raise ValueError("grid must be finite")
    lo = float(raw.min())
    hi = float(raw.max())
    if hi == lo:
        values = np.zeros_like(raw)
        flat = True
    else:
        values = (raw - lo) / (hi - lo)
        flat = False
    values.setflags(write=False)
    return Terrain(values=values, normalized=True, flat=flat, spec=spec)


def generate_raw(spec: BasisSpec) -> np.ndarray:
    """Evaluate the basis at every pixel center, before normalization."""
    out = np.empty((spec.height, spec.width), dtype=np.float64)
    if spec.kind is Basis.VALUE_NOISE:
        kernels.value_fill(out, spec.zoom, spec.seed)
    else:
        kernels.worley_fill(
            out,
            spec.zoom,
            spec.seed,
            _METRIC_CODE[spec.distance_metric],
            _WORLEY_CODE[spec.kind],
        )
    return out


def generate_terrain(spec: BasisSpec) -> Terrain:
    return normalize(generate_raw(spec), spec)


def sample(terrain: Terrain, pos: tuple[float, float],
           mode: SampleMode = SampleMode.NEAREST_CELL) -> float:
    """Grayscale value at a position in the unit square (clamped)."""
    x, y = float(pos[0]), float(pos[1])
    if mode is SampleMode.NEAREST_CELL:
        return kernels.sample_nearest(terrain.values, x, y)
    return kernels.sample_bilinear(terrain.values, x, y)


def export_image(terrain: Terrain) -> bytes:
    """Binary PGM (P5, maxval 255), one byte per pixel, top row first."""
    if not terrain.normalized:
        raise ValueError("terrain must be normalized before export")
    pixels = np.floor(terrain.values * 255.0 + 0.5).astype(np.uint8)
    header = f"P5\n{terrain.width} {terrain.height}\n255\n".encode("ascii")
    return header + pixels.tobytes()


def parse_pgm(data: bytes) -> np.ndarray:
    """Read a binary PGM back into a (H, W) float grid in [0, 1]."""
    if not data.startswith(b"P5"):
        raise ValueError("not a binary PGM (P5) image")
    fields: list[int] = []
    idx = 2
    while len(fields) < 3:
        while idx < len(data) and data[idx : idx + 1].isspace():
            idx += 1
        if data[idx : idx + 1] == b"#":
            while idx < len(data) and data[idx] != 0x0A:
                idx += 1
            continue
        start = idx
        while idx < len(data) and not data[idx : idx + 1].isspace():
            idx += 1
        fields.append(int(data[start:idx]))
    idx += 1  # single whitespace after maxval
    width, height, maxval = fields
    raw = np.frombuffer(data[idx : idx + width * height], dtype=np.uint8)
    if raw.size != width * height:
        raise ValueError("truncated PGM payload")
    return raw.reshape(height, width).astype(np.float64) / float(maxval)


def save_terrain(terrain: Terrain, path: str | Path) -> Path:
    """Write the PGM image plus a JSON sidecar with the generation spec."""
    path = Path(path)
    path.write_bytes(export_image(terrain))
    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps(terrain.spec.to_dict(), indent=2) + "\n")
    return sidecar
