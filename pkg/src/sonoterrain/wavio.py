"""RIFF/WAVE PCM I/O for 16- and 24-bit files.

The stdlib ``wave`` module handles the container; 24-bit samples are
packed and unpacked by hand since there is no 3-byte numpy dtype.
"""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a PCM WAV as mono float64 in [-1, 1]. Multichannel input is
    averaged down to mono."""
    with wave.open(str(path), "rb") as w:
        channels = w.getnchannels()
        width = w.getsampwidth()
        rate = w.getframerate()
        frames = w.readframes(w.getnframes())
    if width == 2:
        data = np.frombuffer(frames, dtype="<i2").astype(np.float64) / 32768.0
    elif width == 3:
        raw = np.frombuffer(frames, dtype=np.uint8).reshape(-1, 3)
        ints = (
            raw[:, 0].astype(np.int32)
            | (raw[:, 1].astype(np.int32) << 8)
            | (raw[:, 2].astype(np.int32) << 16)
        )
        ints = np.where(ints >= 1 << 23, ints - (1 << 24), ints)
        data = ints.astype(np.float64) / 8388608.0
    else:
        raise ValueError(f"unsupported PCM sample width: {width * 8} bit")
    if channels > 1:
        data = data.reshape(-1, channels).mean(axis=1)
    return data, rate


def write_wav(path: str | Path, samples: np.ndarray, rate: int,
              bits: int = 24) -> None:
    """Write mono float samples as 16- or 24-bit PCM, clipping to full scale."""
    samples = np.asarray(samples, dtype=np.float64)
    if bits == 16:
        scaled = np.clip(np.floor(samples * 32767.0 + 0.5), -32768, 32767)
        payload = scaled.astype("<i2").tobytes()
        width = 2
    elif bits == 24:
        scaled = np.clip(np.floor(samples * 8388607.0 + 0.5), -8388608, 8388607)
        ints = scaled.astype(np.int64)
        ints = np.where(ints < 0, ints + (1 << 24), ints).astype(np.uint32)
        raw = np.empty((ints.size, 3), dtype=np.uint8)
        raw[:, 0] = ints & 0xFF
        raw[:, 1] = (ints >> 8) & 0xFF
        raw[:, 2] = (ints >> 16) & 0xFF
        payload = raw.tobytes()
        width = 3
    else:
        raise ValueError("bits must be 16 or 24")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(width)
        w.setframerate(rate)
        w.writeframes(payload)


def resample_linear(samples: np.ndarray, src_rate: int, dst_rate: int) -> np.ndarray:
    """Linear-interpolation resampler for rate-mismatched source files."""
    if src_rate == dst_rate:
        return samples
    n_out = int(round(len(samples) * dst_rate / src_rate))
    if n_out < 1 or len(samples) < 2:
        return samples
    src_pos = np.arange(n_out, dtype=np.float64) * (src_rate / dst_rate)
    return np.interp(src_pos, np.arange(len(samples), dtype=np.float64), samples)


def float_to_pcm16_stereo(samples: np.ndarray) -> bytes:
    """Duplicate mono float samples into interleaved 16-bit LE stereo."""
    scaled = np.clip(np.floor(samples * 32767.0 + 0.5), -32768, 32767).astype("<i2")
    stereo = np.repeat(scaled, 2)
    return stereo.tobytes()
