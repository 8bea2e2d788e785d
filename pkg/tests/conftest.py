import numpy as np
import pytest

from sonoterrain import wavio


@pytest.fixture
def make_wav(tmp_path):
    """Factory writing small deterministic WAV files for corpus/segment
    fixtures."""

    def _make(name, samples, rate=48000, bits=16):
        path = tmp_path / name
        wavio.write_wav(path, np.asarray(samples, dtype=np.float64), rate, bits)
        return path

    return _make


@pytest.fixture
def sine_wav(make_wav):
    t = np.arange(24000) / 48000.0
    return make_wav("sine.wav", 0.5 * np.sin(2 * np.pi * 220.0 * t))


@pytest.fixture
def burst_wav(make_wav):
    """Two short tone bursts separated by silence: segmentable material."""
    rate = 48000
    audio = np.zeros(rate)
    t = np.arange(2400) / rate
    audio[0:2400] = 0.8 * np.sin(2 * np.pi * 330.0 * t)
    audio[24000:26400] = 0.8 * np.sin(2 * np.pi * 490.0 * t)
    return make_wav("burst.wav", audio, rate)
