"""Per-scene mapping from device state to feedback force and DSP control.

Three instrument scenes share one engine surface:

* CONSTANT - fixed resistive force on the push axis; the grip scrubs a
  looping record buffer while the x-y plane selects corpus material,
  playback speed and amplitude-envelope points. A grip-button toggle
  switches between recording into the loop and granulating it.
* NODES - circular resistance bumps bound to audio segments; force and
  grain density follow the bump profile of the closest-center node.
* TERRAIN - grayscale of a procedural texture drives force, comb filter,
  grain gain and the noise-gate openness (push force times feedback
  force), so full volume needs a strong push over a light area.

Force mapping runs at the 1 kHz haptic tick; control values are sampled
once per audio block. Both read one atomically-published (config, world)
snapshot, so scene swaps land between ticks.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum

from . import nodes as nodemod
from . import terrain as terrainmod


class Scene(Enum):
    CONSTANT = "CONSTANT"
    NODES = "NODES"
    TERRAIN = "TERRAIN"


@dataclass(frozen=True)
class DeviceState:
    """Grip pose in the normalized [-1, 1]^3 workspace plus the force the
    performer applies. Pushing the grip forward (away from the performer)
    reads as negative z user force."""

    position: tuple[float, float, float]
    velocity: tuple[float, float, float] = (0.0, 0.0, 0.0)
    user_force: tuple[float, float, float] = (0.0, 0.0, 0.0)
    button_pressed: bool = False


@dataclass(frozen=True)
class ForceCommand:
    force: tuple[float, float, float]


@dataclass(frozen=True)
class ControlFrame:
    """Per-block snapshot of every DSP control derived from device state.
    Fields outside the active scene stay None."""

    timestamp: float
    scene: Scene
    value: float = 0.0                # sampled grayscale / resistance, for displays
    grain_start: float | None = None
    corpus_index: int | None = None
    playback_speed: float | None = None
    recording: bool | None = None
    envelope_point: tuple[float, float] | None = None
    active_segment: int | None = None
    grain_density: float | None = None
    comb_delay_ms: float | None = None
    comb_feedforward: float | None = None
    grain_gain: float | None = None
    gate_openness: float | None = None


@dataclass(frozen=True)
class NodeSource:
    """Where a NODES scene gets its field: a prebuilt field file, or an
    audio file segmented at an onset threshold."""

    audio: str | None = None
    threshold: float = 0.25
    window: int = 1024
    seed: int = 7
    field: str | None = None

    def to_dict(self) -> dict:
        d = {"threshold": self.threshold, "window": self.window, "seed": self.seed}
        if self.audio:
            d["audio"] = self.audio
        if self.field:
            d["field"] = self.field
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NodeSource":
        return cls(
            audio=d.get("audio"),
            threshold=float(d.get("threshold", 0.25)),
            window=int(d.get("window", 1024)),
            seed=int(d.get("seed", 7)),
            field=d.get("field"),
        )


@dataclass(frozen=True)
class SceneConfig:
    scene: Scene = Scene.TERRAIN
    f_min: float = 0.0
    f_max: float = 9.0
    constant_force: float = 3.0
    comb_delay_ms: tuple[float, float] = (1.0, 50.0)
    comb_feedback: float = 0.0
    gate_max_threshold: float = 0.5
    gate_bypass: bool = False
    density_range: tuple[float, float] = (0.0, 100.0)
    grain_duration: float = 0.08
    grain_density: float = 40.0     # fixed voice density for CONSTANT/TERRAIN
    grain_seed: int = 0xC0FFEE
    phasor_freqs: tuple[float, float] = (110.0, 161.0)
    sample_rate: int = 48000
    block_size: int = 256
    tick_rate: int = 1000
    loop_seconds: float = 4.0
    sample_mode: terrainmod.SampleMode = terrainmod.SampleMode.NEAREST_CELL
    node_profile: str = "linear"
    terrain_spec: terrainmod.BasisSpec | None = None
    node_source: NodeSource | None = None
    corpus: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.f_min < self.f_max:
            raise ValueError("f_min must be < f_max")
        if self.comb_delay_ms[0] < 0.02:
            raise ValueError("minimum comb delay is 0.02 ms")
        if self.comb_delay_ms[0] > self.comb_delay_ms[1]:
            raise ValueError("comb delay range must be ordered")
        if self.density_range[0] > self.density_range[1]:
            raise ValueError("density range must be ordered")
        if self.constant_force < 0.0:
            raise ValueError("constant_force must be >= 0")
        if self.gate_max_threshold <= 0.0:
            raise ValueError("gate_max_threshold must be positive")
        if self.tick_rate < 100:
            raise ValueError("tick_rate must be >= 100 Hz")

    def to_dict(self) -> dict:
        d = {
            "scene": self.scene.value,
            "f_min": self.f_min,
            "f_max": self.f_max,
            "constant_force": self.constant_force,
            "comb_delay_ms": list(self.comb_delay_ms),
            "comb_feedback": self.comb_feedback,
            "gate_max_threshold": self.gate_max_threshold,
            "gate_bypass": self.gate_bypass,
            "density_range": list(self.density_range),
            "grain_duration": self.grain_duration,
            "grain_density": self.grain_density,
            "grain_seed": self.grain_seed,
            "phasor_freqs": list(self.phasor_freqs),
            "sample_rate": self.sample_rate,
            "block_size": self.block_size,
            "tick_rate": self.tick_rate,
            "loop_seconds": self.loop_seconds,
            "sample_mode": self.sample_mode.value,
            "node_profile": self.node_profile,
            "corpus": list(self.corpus),
        }
        if self.terrain_spec is not None:
            d["terrain"] = self.terrain_spec.to_dict()
        if self.node_source is not None:
            d["nodes"] = self.node_source.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SceneConfig":
        kwargs = dict(
            scene=Scene(d.get("scene", "TERRAIN")),
            f_min=float(d.get("f_min", 0.0)),
            f_max=float(d.get("f_max", 9.0)),
            constant_force=float(d.get("constant_force", 3.0)),
            comb_delay_ms=tuple(d.get("comb_delay_ms", (1.0, 50.0))),
            comb_feedback=float(d.get("comb_feedback", 0.0)),
            gate_max_threshold=float(d.get("gate_max_threshold", 0.5)),
            gate_bypass=bool(d.get("gate_bypass", False)),
            density_range=tuple(d.get("density_range", (0.0, 100.0))),
            grain_duration=float(d.get("grain_duration", 0.08)),
            grain_density=float(d.get("grain_density", 40.0)),
            grain_seed=int(d.get("grain_seed", 0xC0FFEE)),
            phasor_freqs=tuple(d.get("phasor_freqs", (110.0, 161.0))),
            sample_rate=int(d.get("sample_rate", 48000)),
            block_size=int(d.get("block_size", 256)),
            tick_rate=int(d.get("tick_rate", 1000)),
            loop_seconds=float(d.get("loop_seconds", 4.0)),
            sample_mode=terrainmod.SampleMode(d.get("sample_mode", "NEAREST_CELL")),
            node_profile=d.get("node_profile", "linear"),
            corpus=tuple(d.get("corpus", ())),
        )
        if "terrain" in d:
            kwargs["terrain_spec"] = terrainmod.BasisSpec.from_dict(d["terrain"])
        if "nodes" in d:
            kwargs["node_source"] = NodeSource.from_dict(d["nodes"])
        return cls(**kwargs)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


def lerp(a: float, b: float, t: float) -> float:
    """Convex-combination form; exact at both endpoints."""
    return a * (1.0 - t) + b * t


def clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def _to_unit(c: float) -> float:
    """Workspace coordinate [-1, 1] to unit square."""
    return (c + 1.0) * 0.5


def validate_world(scene: Scene, world) -> None:
    if scene is Scene.TERRAIN and not isinstance(world, terrainmod.Terrain):
        raise ValueError("TERRAIN scene requires a Terrain world")
    if scene is Scene.NODES and not isinstance(world, nodemod.NodeField):
        raise ValueError("NODES scene requires a NodeField world")


def worlds_equal(a, b) -> bool:
    if a is b:
        return True
    if isinstance(a, terrainmod.Terrain) and isinstance(b, terrainmod.Terrain):
        return a.spec == b.spec
    if isinstance(a, nodemod.NodeField) and isinstance(b, nodemod.NodeField):
        return a.nodes == b.nodes
    return False


class SceneEngine:
    """Holds the active (config, world) snapshot and derives forces and
    control frames from device state. The snapshot is swapped with a
    single reference assignment, so the tick and block paths never see a
    half-updated scene."""

    def __init__(self, config: SceneConfig, world=None):
        validate_world(config.scene, world)
        self._active: tuple[SceneConfig, object] = (config, world)
        self.haptics_on = False  # CONSTANT scene: start recording, force off
        self._button_was_down = False
        self.crossfade_pending = False

    @property
    def config(self) -> SceneConfig:
        return self._active[0]

    @property
    def world(self):
        return self._active[1]

    def set_scene(self, config: SceneConfig, world=None) -> bool:
        """Swap the active scene atomically; a semantically identical swap
        is a no-op. Returns True when the swap took effect."""
        validate_world(config.scene, world)
        old_config, old_world = self._active
        if config == old_config and worlds_equal(world, old_world):
            return False
        self._active = (config, world)
        self.crossfade_pending = True
        return True

    def update_button(self, state: DeviceState) -> None:
        """Edge-triggered grip-button toggle (CONSTANT scene haptics/record
        switch). Call once per tick before haptic_tick."""
        if state.button_pressed and not self._button_was_down:
            self.haptics_on = not self.haptics_on
        self._button_was_down = state.button_pressed

    def haptic_tick(self, state: DeviceState) -> ForceCommand:
        config, world = self._active
        scene = config.scene
        if scene is Scene.CONSTANT:
            fz = -config.constant_force if self.haptics_on else 0.0
        elif world is None:
            fz = 0.0
        elif scene is Scene.NODES:
            hit = nodemod.query(
                world,
                (_to_unit(state.position[0]), _to_unit(state.position[1])),
                config.node_profile,
            )
            fz = lerp(config.f_min, config.f_max, hit.resistance)
        else:  # TERRAIN
            v = terrainmod.sample(
                world,
                (_to_unit(state.position[0]), _to_unit(state.position[1])),
                config.sample_mode,
            )
            fz = lerp(config.f_min, config.f_max, v)
        m = config.f_max
        return ForceCommand(force=(0.0, 0.0, clamp(fz, -m, m)))

    def control_frame(self, state: DeviceState, last_force: ForceCommand,
                      timestamp: float) -> ControlFrame:
        config, world = self._active
        scene = config.scene
        x, y, z = state.position
        ux, uy = _to_unit(x), _to_unit(y)

        if scene is Scene.CONSTANT:
            n_corpus = max(1, len(config.corpus))
            return ControlFrame(
                timestamp=timestamp,
                scene=scene,
                value=1.0 if self.haptics_on else 0.0,
                grain_start=_to_unit(z),
                corpus_index=min(int(ux * n_corpus), n_corpus - 1),
                playback_speed=clamp(2.0 ** (2.0 * y), 0.25, 4.0),
                recording=not self.haptics_on,
                envelope_point=(ux, uy),
            )

        if scene is Scene.NODES:
            if world is None:
                return ControlFrame(timestamp=timestamp, scene=scene,
                                    grain_density=config.density_range[0])
            hit = nodemod.query(world, (ux, uy), config.node_profile)
            segment = None
            if hit.node_id is not None:
                for node in world.nodes:
                    if node.id == hit.node_id:
                        segment = node.segment_id
                        break
            return ControlFrame(
                timestamp=timestamp,
                scene=scene,
                value=hit.resistance,
                active_segment=segment,
                grain_density=lerp(config.density_range[0],
                                   config.density_range[1], hit.resistance),
            )

        # TERRAIN
        v = 0.0
        if world is not None:
            v = terrainmod.sample(world, (ux, uy), config.sample_mode)
        push = max(0.0, -state.user_force[2]) / config.f_max
        f_norm = abs(last_force.force[2]) / config.f_max
        return ControlFrame(
            timestamp=timestamp,
            scene=scene,
            value=v,
            comb_delay_ms=lerp(config.comb_delay_ms[0], config.comb_delay_ms[1], ux),
            comb_feedforward=uy * 0.95,
            grain_gain=v,
            gate_openness=clamp(push * f_norm, 0.0, 1.0),
        )


__all__ = [
    "Scene", "DeviceState", "ForceCommand", "ControlFrame", "SceneConfig",
    "NodeSource", "SceneEngine", "lerp", "clamp", "validate_world",
    "worlds_equal",
]
