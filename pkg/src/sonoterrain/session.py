"""Session wiring: scene assets, the per-scene audio graph, and the
dual-rate loop that drives them.

One tick loop serves every execution mode (live simulated sessions,
scripted offline sessions, traversal replay): device states arrive at
the haptic tick rate, force is mapped per tick, and an audio block is
rendered whenever the sample clock falls due - ``block_size`` samples
per ``sample_rate / tick_rate`` ticks. Because the interleave depends
only on tick indices and every processor is a seeded deterministic
state machine, replaying a recorded traversal reproduces the live
render byte for byte.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import nodes as nodemod
from . import terrain as terrainmod
from . import wavio
from .dsp import (
    CombFilter,
    CorpusPlayer,
    DrawnEnvelope,
    GrainParams,
    Granulator,
    LoopBuffer,
    NoiseGate,
    PhasorPair,
)
from ._rng import SplitMix64
from .scenes import (
    ControlFrame,
    DeviceState,
    ForceCommand,
    Scene,
    SceneConfig,
    SceneEngine,
)
from .simulator import DeviceSimulator, SimConfig, TraversalRecord, TraversalSample

SWAP_FADE_SECONDS = 0.010


@dataclass
class SceneAssets:
    """Everything a scene needs beyond its config: the world object the
    engine maps against, plus decoded audio material for the graph."""

    world: object = None                      # Terrain | NodeField | None
    segments: list[nodemod.Segment] = field(default_factory=list)
    segment_audio: np.ndarray | None = None
    corpus: list[np.ndarray] = field(default_factory=list)


def load_config_file(path: str | Path) -> tuple[SceneConfig, SimConfig]:
    doc = json.loads(Path(path).read_text())
    return SceneConfig.from_dict(doc), SimConfig.from_dict(doc.get("sim", {}))


def save_config_file(path: str | Path, config: SceneConfig,
                     sim: SimConfig | None = None) -> None:
    doc = config.to_dict()
    if sim is not None:
        doc["sim"] = sim.to_dict()
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _resolve(path: str, base_dir: Path | None) -> Path:
    p = Path(path)
    if not p.is_absolute() and base_dir is not None:
        p = base_dir / p
    return p


def _load_mono(path: Path, sample_rate: int) -> np.ndarray:
    data, rate = wavio.read_wav(path)
    return wavio.resample_linear(data, rate, sample_rate)


def build_assets(config: SceneConfig, base_dir: Path | None = None,
                 seed_overrides: dict | None = None) -> SceneAssets:
    """Generate/load the world and audio material for a scene config.
    ``seed_overrides`` may replace terrain/node/grain seeds without
    touching the config file."""
    overrides = seed_overrides or {}
    assets = SceneAssets()

    if config.scene is Scene.TERRAIN:
        spec = config.terrain_spec or terrainmod.BasisSpec()
        if "terrain_seed" in overrides:
            spec = terrainmod.BasisSpec.from_dict(
                {**spec.to_dict(), "seed": overrides["terrain_seed"]})
        assets.world = terrainmod.generate_terrain(spec)

    elif config.scene is Scene.NODES:
        ns = config.node_source
        if ns is None:
            raise ValueError("NODES scene requires a node_source")
        if ns.audio is None:
            raise ValueError("node_source must name an audio file")
        audio = _load_mono(_resolve(ns.audio, base_dir), config.sample_rate)
        segments = nodemod.detect_onsets(audio, config.sample_rate,
                                         ns.threshold, ns.window)
        if ns.field is not None:
            fld = nodemod.load_field(_resolve(ns.field, base_dir))
        else:
            fld = nodemod.build_field(segments,
                                      overrides.get("node_seed", ns.seed))
        assets.world = fld
        assets.segments = segments
        assets.segment_audio = audio

    else:  # CONSTANT
        if not config.corpus:
            raise ValueError("CONSTANT scene requires at least one corpus file")
        assets.corpus = [
            _load_mono(_resolve(p, base_dir), config.sample_rate)
            for p in config.corpus
        ]

    return assets


class InstrumentGraph:
    """The audio chain for one scene kind, fed a ControlFrame per block.

    TERRAIN: phasor pair -> comb -> record ring -> granulator -> gate.
    NODES: granulator over the active onset segment.
    CONSTANT: corpus player recorded into a loop; grip scrubs the loop
    through the granulator under a drawable master envelope.
    """

    def __init__(self, config: SceneConfig, assets: SceneAssets,
                 seed_overrides: dict | None = None):
        overrides = seed_overrides or {}
        self.config = config
        sr = config.sample_rate
        self.granulator = Granulator(overrides.get("grain_seed", config.grain_seed), sr)
        self._silence = np.zeros(1, dtype=np.float64)
        self._grain_len = max(1, int(round(config.grain_duration * sr)))

        if config.scene is Scene.TERRAIN:
            self.phasor = PhasorPair(sr)
            self.comb = CombFilter(sr)
            self.ring = LoopBuffer(config.loop_seconds, sr)
            self.gate = NoiseGate(config.gate_max_threshold, sr)
        elif config.scene is Scene.NODES:
            self._slices: dict[int, np.ndarray] = {}
            if assets.segment_audio is not None:
                for seg in assets.segments:
                    self._slices[seg.id] = np.ascontiguousarray(
                        assets.segment_audio[seg.start_sample:seg.end_sample])
            self._scan_rng = SplitMix64(
                overrides.get("grain_seed", config.grain_seed) ^ 0x5EED)
            self._last_source = self._silence
        else:
            self.player = CorpusPlayer(assets.corpus, sr)
            self.loop = LoopBuffer(config.loop_seconds, sr)
            self.envelope = DrawnEnvelope()

    def retune(self, config: SceneConfig) -> None:
        """Adopt a new config of the same scene kind without resetting
        processor state (used for in-place scene swaps)."""
        self.config = config

    def process_block(self, frame: ControlFrame) -> np.ndarray:
        config = self.config
        B = config.block_size
        sr = config.sample_rate

        if frame.scene is Scene.TERRAIN:
            raw = self.phasor.process(config.phasor_freqs[0],
                                      config.phasor_freqs[1], B)
            delay = frame.comb_delay_ms * sr / 1000.0
            wet = self.comb.process(raw, delay, frame.comb_feedforward,
                                    config.comb_feedback)
            self.ring.write(wet)
            cap = self.ring.capacity
            start = ((self.ring.write_head - self._grain_len) % cap) / cap
            params = GrainParams(
                density=config.grain_density,
                duration=config.grain_duration,
                start_position=start,
                gain=frame.grain_gain,
            )
            voice = self.granulator.process(self.ring.samples, params, B, wrap=True)
            if config.gate_bypass:
                return voice
            return self.gate.process(voice, frame.gate_openness)

        if frame.scene is Scene.NODES:
            source = None
            if frame.active_segment is not None:
                source = self._slices.get(frame.active_segment)
            if source is None:
                params = GrainParams(density=0.0, duration=config.grain_duration)
                return self.granulator.process(self._last_source, params, B)
            self._last_source = source
            params = GrainParams(
                density=frame.grain_density,
                duration=config.grain_duration,
                start_position=self._scan_rng.uniform(),
                gain=1.0,
            )
            return self.granulator.process(source, params, B, wrap=False)

        # CONSTANT
        s = self.player.process(frame.corpus_index, frame.playback_speed, B)
        if frame.envelope_point is not None:
            self.envelope.draw(*frame.envelope_point)
        self.loop.recording = bool(frame.recording)
        if frame.recording:
            self.loop.write(s)
            voice = s
        else:
            params = GrainParams(
                density=config.grain_density,
                duration=config.grain_duration,
                start_position=frame.grain_start,
                gain=1.0,
            )
            voice = self.granulator.process(self.loop.samples, params, B, wrap=True)
        return voice * self.envelope.eval(frame.grain_start)


def _structurally_equal(a: SceneConfig, b: SceneConfig) -> bool:
    """True when a swap can keep the running graph (same kind and same
    processor-shaping parameters; only mapping ranges differ)."""
    keys = ("scene", "sample_rate", "block_size", "grain_seed", "loop_seconds",
            "grain_duration", "gate_max_threshold", "gate_bypass", "phasor_freqs",
            "comb_feedback", "grain_density", "corpus")
    return all(getattr(a, k) == getattr(b, k) for k in keys)


class SessionCore:
    """Engine + graph + optional simulator, advanced one haptic tick at a
    time. Emits the audio blocks that fall due within each tick."""

    def __init__(self, config: SceneConfig, assets: SceneAssets,
                 sim_config: SimConfig | None = None,
                 seed_overrides: dict | None = None):
        if sim_config is not None and sim_config.tick_rate != config.tick_rate:
            raise ValueError("sim tick rate must match scene tick rate")
        self.config = config
        self.assets = assets
        self._seed_overrides = seed_overrides
        self.engine = SceneEngine(config, assets.world)
        self.graph = InstrumentGraph(config, assets, seed_overrides)
        self.sim = DeviceSimulator(sim_config) if sim_config is not None else None
        self.last_force = ForceCommand(force=(0.0, 0.0, 0.0))
        self.tick_index = 0
        self.samples_rendered = 0
        self.last_frame: ControlFrame | None = None
        self._fade_remaining = 0
        self._fade_total = max(1, int(round(SWAP_FADE_SECONDS * config.sample_rate)))

    @property
    def tick_rate(self) -> int:
        return self.config.tick_rate

    def swap_scene(self, config: SceneConfig, assets: SceneAssets) -> bool:
        """Atomically replace the active scene between ticks. Same-kind
        swaps keep the processor state (only the mapping changes); a kind
        change rebuilds the graph. Either way a short gain fade masks the
        control discontinuity. Identical swaps are no-ops."""
        if config.tick_rate != self.config.tick_rate:
            raise ValueError("cannot change tick rate mid-session")
        if config.sample_rate != self.config.sample_rate or \
                config.block_size != self.config.block_size:
            raise ValueError("cannot change audio format mid-session")
        effective = self.engine.set_scene(config, assets.world)
        if not effective:
            return False
        if _structurally_equal(self.config, config):
            self.graph.retune(config)
        else:
            self.graph = InstrumentGraph(config, assets, self._seed_overrides)
        self.config = config
        self.assets = assets
        self._fade_remaining = self._fade_total
        return True

    def tick_with_state(self, state: DeviceState) -> tuple[ForceCommand, list[np.ndarray]]:
        """Advance one tick from an externally supplied device state
        (replay path and hardware path share this)."""
        self.engine.update_button(state)
        force = self.engine.haptic_tick(state)
        self.last_force = force
        self.tick_index += 1
        cfg = self.config
        target = self.tick_index * cfg.sample_rate / cfg.tick_rate
        blocks = []
        while self.samples_rendered + cfg.block_size <= target:
            frame = self.engine.control_frame(
                state, force, self.samples_rendered / cfg.sample_rate)
            self.last_frame = frame
            block = self.graph.process_block(frame)
            if self._fade_remaining > 0:
                block = self._apply_fade(block)
            blocks.append(block)
            self.samples_rendered += cfg.block_size
        return force, blocks

    def tick_sim(self, *, target=None, user_force=None, button_pressed=False
                 ) -> tuple[DeviceState, ForceCommand, list[np.ndarray]]:
        """Step the simulated device against the previous feedback force,
        then advance the engine on the new state."""
        if self.sim is None:
            raise ValueError("session has no simulator")
        dt = 1.0 / self.config.tick_rate
        state = self.sim.step(self.last_force, dt, target=target,
                              user_force=user_force,
                              button_pressed=button_pressed)
        force, blocks = self.tick_with_state(state)
        return state, force, blocks

    def _apply_fade(self, block: np.ndarray) -> np.ndarray:
        n = block.size
        total = self._fade_total
        done = total - self._fade_remaining
        ramp = np.minimum((done + np.arange(1, n + 1, dtype=np.float64)) / total, 1.0)
        self._fade_remaining = max(0, self._fade_remaining - n)
        return block * ramp


def render_states(config: SceneConfig, assets: SceneAssets,
                  states, seed_overrides: dict | None = None
                  ) -> tuple[np.ndarray, dict]:
    """Offline render of a device-state sequence; the backbone of replay
    and traversal rendering."""
    core = SessionCore(config, assets, sim_config=None,
                       seed_overrides=seed_overrides)
    blocks: list[np.ndarray] = []
    n_ticks = 0
    for state in states:
        _, new_blocks = core.tick_with_state(state)
        blocks.extend(new_blocks)
        n_ticks += 1
    audio = np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.float64)
    stats = {
        "duration": audio.size / config.sample_rate,
        "rms": float(np.sqrt(np.mean(audio * audio))) if audio.size else 0.0,
        "peak": float(np.max(np.abs(audio))) if audio.size else 0.0,
        "grain_count": core.graph.granulator.grains_spawned,
        "ticks": n_ticks,
    }
    return audio, stats


def run_simulated(config: SceneConfig, sim_config: SimConfig,
                  assets: SceneAssets, script, seconds: float,
                  seed_overrides: dict | None = None
                  ) -> tuple[TraversalRecord, np.ndarray, dict]:
    """Drive a scripted simulated session, producing both the traversal
    record and the simultaneously rendered audio.

    ``script(k, t)`` returns the tick input: a dict with either ``target``
    or ``user_force`` and an optional ``button_pressed``.
    """
    core = SessionCore(config, assets, sim_config, seed_overrides)
    n_ticks = int(round(seconds * config.tick_rate))
    samples: list[TraversalSample] = []
    blocks: list[np.ndarray] = []
    dt = 1.0 / config.tick_rate
    for k in range(n_ticks):
        inp = script(k, k * dt)
        state, force, new_blocks = core.tick_sim(**inp)
        samples.append(TraversalSample(
            t=k * dt,
            position=state.position,
            user_force=state.user_force,
            feedback_force=force.force,
            button_pressed=state.button_pressed,
        ))
        blocks.extend(new_blocks)
    audio = np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.float64)
    record = TraversalRecord(tick_rate=config.tick_rate,
                             config_digest=config.digest(), samples=samples)
    stats = {
        "duration": audio.size / config.sample_rate,
        "rms": float(np.sqrt(np.mean(audio * audio))) if audio.size else 0.0,
        "peak": float(np.max(np.abs(audio))) if audio.size else 0.0,
        "grain_count": core.graph.granulator.grains_spawned,
    }
    return record, audio, stats


def replay(record: TraversalRecord, config: SceneConfig, assets: SceneAssets,
           seed_overrides: dict | None = None) -> tuple[np.ndarray, dict]:
    """Re-render a recorded traversal through the same engine path. With
    identical config and seeds the audio is byte-identical to the live
    session's render."""
    if record.tick_rate != config.tick_rate:
        raise ValueError(
            f"record tick rate {record.tick_rate} != engine {config.tick_rate}")
    states = (
        DeviceState(position=s.position, user_force=s.user_force,
                    button_pressed=s.button_pressed)
        for s in record.samples
    )
    return render_states(config, assets, states, seed_overrides)


@dataclass(frozen=True)
class RenderJob:
    config_path: str
    traversal_path: str
    output_path: str
    seed_overrides: dict | None = None

    def __post_init__(self):
        paths = {self.config_path, self.traversal_path, self.output_path}
        if len(paths) != 3:
            raise ValueError("job paths must be distinct")


def render_traversal(job: RenderJob) -> dict:
    """Deterministic offline render of a recorded traversal to a 24-bit
    WAV, returning summary statistics. Fails without leaving a partial
    output file."""
    config_path = Path(job.config_path)
    traversal_path = Path(job.traversal_path)
    if not config_path.exists():
        raise FileNotFoundError(f"config not found: {config_path}")
    if not traversal_path.exists():
        raise FileNotFoundError(f"traversal not found: {traversal_path}")
    config, _ = load_config_file(config_path)
    record = TraversalRecord.load(traversal_path)
    assets = build_assets(config, config_path.parent, job.seed_overrides)
    audio, stats = replay(record, config, assets, job.seed_overrides)

    out_path = Path(job.output_path)
    fd, tmp = tempfile.mkstemp(suffix=".wav", dir=str(out_path.parent or "."))
    os.close(fd)
    try:
        wavio.write_wav(tmp, audio, config.sample_rate, bits=24)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return stats
