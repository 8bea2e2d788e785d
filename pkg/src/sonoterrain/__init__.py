"""sonoterrain: procedural textures rendered as force feedback and sound.

Terrains generated from cellular/value noise double as grayscale images
and haptic force fields; navigating them drives a granular/comb/gate
synthesis chain. Three scene mappings (constant resistance, segment
nodes, grayscale terrain) run against a simulated force-feedback grip,
offline deterministic renders, and a live browser session.
"""

from ._kernels import BACKEND
from .nodes import NodeField, NodeHit, Segment, build_field, detect_onsets, query
from .scenes import (
    ControlFrame,
    DeviceState,
    ForceCommand,
    Scene,
    SceneConfig,
    SceneEngine,
)
from .simulator import DeviceSimulator, SimConfig, TraversalRecord
from .terrain import (
    Basis,
    BasisSpec,
    DistanceMetric,
    SampleMode,
    Terrain,
    export_image,
    generate_terrain,
    normalize,
    sample,
    worley_distances,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Basis",
    "BasisSpec",
    "ControlFrame",
    "DeviceState",
    "DeviceSimulator",
    "DistanceMetric",
    "ForceCommand",
    "NodeField",
    "NodeHit",
    "SampleMode",
    "Scene",
    "SceneConfig",
    "SceneEngine",
    "Segment",
    "SimConfig",
    "Terrain",
    "TraversalRecord",
    "build_field",
    "detect_onsets",
    "export_image",
    "generate_terrain",
    "normalize",
    "query",
    "sample",
    "worley_distances",
]
