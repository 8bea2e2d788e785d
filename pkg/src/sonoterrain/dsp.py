"""Block-based audio primitives.

Audio moves through the instrument as fixed-length numpy float64 blocks
(default 256 samples at 48 kHz, about 5 ms of control latency). Each
processor owns its state, is fed control values once per block, and is
a deterministic state machine: same state plus same input always yields
the same output bytes. Per-sample loops live in the kernel backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import kernels
from ._rng import SplitMix64

SAMPLE_RATE = 48000
BLOCK_SIZE = 256


@dataclass(frozen=True)
class GrainParams:
    density: float = 0.0        # grains per second
    duration: float = 0.08      # seconds
    start_position: float = 0.0  # normalized position into the source
    gain: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.density < 0.0:
            raise ValueError("density must be >= 0")
        if not 0.005 <= self.duration <= 0.5:
            raise ValueError("duration must be in [0.005, 0.5] s")
        if not 0.0 <= self.start_position <= 1.0:
            raise ValueError("start_position must be in [0, 1]")
        if not 0.0 <= self.gain <= 1.0:
            raise ValueError("gain must be in [0, 1]")


class PhasorPair:
    """Two free-running 0..1 ramps; output is their mean recentered to
    [-0.5, 0.5]. Phase state persists across blocks."""

    def __init__(self, sample_rate: int = SAMPLE_RATE,
                 phase1: float = 0.0, phase2: float = 0.0):
        self.sample_rate = sample_rate
        self._state = np.array([phase1, phase2], dtype=np.float64)

    def process(self, f1: float, f2: float, block_size: int = BLOCK_SIZE) -> np.ndarray:
        nyquist = self.sample_rate / 2.0
        for f in (f1, f2):
            if not 0.0 <= f <= nyquist:
                raise ValueError("phasor frequency must be in [0, rate/2]")
        out = np.empty(block_size, dtype=np.float64)
        kernels.phasor_block(out, float(f1), float(f2), float(self.sample_rate),
                             self._state)
        return out

    @property
    def phases(self) -> tuple[float, float]:
        return float(self._state[0]), float(self._state[1])


class CombFilter:
    """y[n] = x[n] + a*x[n-D] + b*y[n-D] with delay lines persisting across
    blocks. Delay changes ramp linearly over one block (fractional reads
    are linearly interpolated) so parameter sweeps do not click; a held
    integer delay reads exactly, which keeps impulse responses closed-form."""

    MAX_DELAY_SECONDS = 1.0

    def __init__(self, sample_rate: int = SAMPLE_RATE):
        self.sample_rate = sample_rate
        self.max_delay = int(sample_rate * self.MAX_DELAY_SECONDS)
        length = self.max_delay + 8
        self._xline = np.zeros(length, dtype=np.float64)
        self._yline = np.zeros(length, dtype=np.float64)
        self._widx = 0
        self._d_prev: float | None = None

    def process(self, block: np.ndarray, delay_samples: float,
                feedforward: float, feedback: float = 0.0) -> np.ndarray:
        if delay_samples > self.max_delay:
            raise ValueError(f"delay {delay_samples} exceeds max {self.max_delay}")
        if abs(feedback) >= 1.0:
            raise ValueError("|feedback| must be < 1 for stability")
        d1 = max(1.0, float(delay_samples))
        d0 = d1 if self._d_prev is None else self._d_prev
        block = np.ascontiguousarray(block, dtype=np.float64)
        out = np.empty_like(block)
        self._widx = kernels.comb_block(block, out, self._xline, self._yline,
                                        self._widx, d0, d1,
                                        float(feedforward), float(feedback))
        self._d_prev = d1
        return out


class Granulator:
    """Poisson-scheduled Hann-windowed grains summed over a source buffer.

    Onsets come from a unit-rate exponential budget drained at the current
    density, so the schedule is a true Poisson process yet fully
    deterministic given the seed and the sequence of process() calls.
    In-flight grains keep the source and gain they were spawned with.
    """

    def __init__(self, seed: int, sample_rate: int = SAMPLE_RATE):
        self.sample_rate = sample_rate
        self._rng = SplitMix64(seed)
        self._budget = self._rng.exponential()
        self._grains: list[list] = []  # [src, start, pos, length, amp, offset, wrap]
        self.grains_spawned = 0

    def process(self, source: np.ndarray, params: GrainParams,
                block_size: int = BLOCK_SIZE, wrap: bool = False) -> np.ndarray:
        if source.size == 0:
            raise ValueError("source must be nonempty")
        out = np.zeros(block_size, dtype=np.float64)
        rate = params.density / self.sample_rate  # expected onsets per sample
        if rate > 0.0:
            total = block_size * rate
            acc = 0.0
            while True:
                remaining = total - acc
                if self._budget > remaining:
                    self._budget -= remaining
                    break
                acc += self._budget
                onset = int(acc / rate)
                if onset >= block_size:
                    onset = block_size - 1
                self._spawn(source, params, onset, wrap)
                self._budget = self._rng.exponential()
        alive: list[list] = []
        for grain in self._grains:
            src, start, pos, length, amp, offset, wraps = grain
            new_pos = kernels.grain_accumulate(out, src, start, pos, length,
                                               amp, offset, wraps)
            if new_pos < length:
                alive.append([src, start, new_pos, length, amp, 0, wraps])
        self._grains = alive
        return out

    def _spawn(self, source: np.ndarray, params: GrainParams, offset: int,
               wrap: bool) -> None:
        slen = source.size
        length = max(1, int(round(params.duration * self.sample_rate)))
        if length > slen:
            length = slen
        if wrap:
            start = int(round(params.start_position * slen)) % slen
        else:
            start = int(round(params.start_position * (slen - length)))
            start = min(max(start, 0), slen - length)
        self._grains.append([source, start, 0, length, params.gain, offset, wrap])
        self.grains_spawned += 1

    @property
    def active_grains(self) -> int:
        return len(self._grains)


class NoiseGate:
    """Downward gate on a 10 ms RMS envelope with 5 ms linear crossfades.

    The control raises openness: the effective threshold is
    ``max_threshold * (1 - openness)``, so openness 1 means threshold 0
    and the gate passes input through bit-exactly. Closed attenuation is
    60 dB.
    """

    def __init__(self, max_threshold: float, sample_rate: int = SAMPLE_RATE):
        if max_threshold <= 0.0:
            raise ValueError("max_threshold must be positive")
        self.max_threshold = float(max_threshold)
        self.sample_rate = sample_rate
        self._alpha = math.exp(-1.0 / (0.010 * sample_rate))
        self._step = 1.0 / (0.005 * sample_rate)
        self._atten = 10.0 ** (-60.0 / 20.0)
        self._state = np.zeros(3, dtype=np.float64)  # mean square, gain, init flag

    def process(self, block: np.ndarray, openness: float) -> np.ndarray:
        openness = min(max(float(openness), 0.0), 1.0)
        block = np.ascontiguousarray(block, dtype=np.float64)
        out = np.empty_like(block)
        kernels.gate_block(block, out, openness, self.max_threshold,
                           self._alpha, self._step, self._atten, self._state)
        return out


class LoopBuffer:
    """Circular record buffer; writing past the end wraps and overwrites
    the oldest material."""

    def __init__(self, seconds: float, sample_rate: int = SAMPLE_RATE):
        capacity = int(round(seconds * sample_rate))
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.samples = np.zeros(capacity, dtype=np.float64)
        self.write_head = 0
        self.recording = True

    @property
    def capacity(self) -> int:
        return self.samples.size

    def write(self, block: np.ndarray) -> None:
        if not self.recording:
            return
        data = np.asarray(block, dtype=np.float64)
        cap = self.capacity
        pos = 0
        while pos < data.size:
            n = min(cap - self.write_head, data.size - pos)
            self.samples[self.write_head : self.write_head + n] = data[pos : pos + n]
            self.write_head = (self.write_head + n) % cap
            pos += n


@dataclass(frozen=True)
class Envelope:
    """Breakpoint amplitude envelope over normalized time [0, 1]."""

    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        bp = self.breakpoints
        if len(bp) < 2 or bp[0][0] != 0.0 or bp[-1][0] != 1.0:
            raise ValueError("envelope must span t=0 to t=1")
        for i, (t, g) in enumerate(bp):
            if not 0.0 <= g <= 1.0:
                raise ValueError("gains must be in [0, 1]")
            if i > 0 and t <= bp[i - 1][0]:
                raise ValueError("times must be strictly increasing")


def envelope_eval(env: Envelope, t: float) -> float:
    """Piecewise-linear gain at time fraction t (clamped to [0, 1])."""
    t = min(max(float(t), 0.0), 1.0)
    bp = env.breakpoints
    for i in range(1, len(bp)):
        t1, g1 = bp[i]
        if t <= t1:
            t0, g0 = bp[i - 1]
            u = (t - t0) / (t1 - t0)
            return g0 * (1.0 - u) + g1 * u
    return bp[-1][1]


class DrawnEnvelope:
    """Live-drawable envelope on a fixed time grid; starts flat at unity
    gain, points are painted in by repeated draw() calls."""

    def __init__(self, slots: int = 32):
        self._times = np.linspace(0.0, 1.0, slots + 1)
        self._gains = np.ones(slots + 1, dtype=np.float64)

    def draw(self, t: float, gain: float) -> None:
        t = min(max(float(t), 0.0), 1.0)
        gain = min(max(float(gain), 0.0), 1.0)
        idx = int(round(t * (self._times.size - 1)))
        self._gains[idx] = gain

    def eval(self, t: float) -> float:
        return envelope_eval(self.as_envelope(), t)

    def as_envelope(self) -> Envelope:
        return Envelope(tuple(zip(self._times.tolist(), self._gains.tolist())))


class CorpusPlayer:
    """Looping variable-speed playback over a bank of source buffers,
    linear-interpolated; the read head carries over across blocks and
    resets when the active source changes."""

    def __init__(self, sources: list[np.ndarray], sample_rate: int = SAMPLE_RATE):
        if not sources:
            raise ValueError("corpus must contain at least one source")
        self.sample_rate = sample_rate
        self._tables = []
        for src in sources:
            src = np.asarray(src, dtype=np.float64)
            if src.size < 2:
                raise ValueError("corpus sources need at least 2 samples")
            self._tables.append(np.concatenate([src, src[:1]]))
        self._index = 0
        self._pos = 0.0

    @property
    def n_sources(self) -> int:
        return len(self._tables)

    def process(self, index: int, speed: float,
                block_size: int = BLOCK_SIZE) -> np.ndarray:
        index = min(max(int(index), 0), len(self._tables) - 1)
        if index != self._index:
            self._index = index
            self._pos = 0.0
        table = self._tables[self._index]
        length = table.size - 1
        positions = (self._pos + speed * np.arange(block_size)) % length
        out = np.interp(positions, np.arange(table.size, dtype=np.float64), table)
        self._pos = (self._pos + speed * block_size) % length
        return out
