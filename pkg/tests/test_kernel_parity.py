"""Bit-equality contract between the compiled core and the pure-Python
fallback. Every kernel must produce identical bytes so renders do not
depend on which backend got imported."""

import numpy as np
import pytest

from sonoterrain._kernels import fallback as fb

cc = pytest.importorskip("sonoterrain._kernels._core",
                         reason="compiled core not built")

RNG = np.random.default_rng(1234)


def test_worley_pair_parity():
    for _ in range(500):
        px, py = RNG.uniform(-1, 9, 2)
        n = int(RNG.integers(1, 12))
        seed = int(RNG.integers(0, 2**64, dtype=np.uint64))
        metric = int(RNG.integers(0, 3))
        assert cc.worley_pair(px, py, n, seed, metric) == \
            fb.worley_pair(px, py, n, seed, metric)


@pytest.mark.parametrize("which", [0, 1, 2])
def test_worley_fill_parity(which):
    a = np.empty((24, 31))
    b = np.empty((24, 31))
    cc.worley_fill(a, 6.4, 99, 0, which)
    fb.worley_fill(b, 6.4, 99, 0, which)
    assert np.array_equal(a, b)


def test_value_fill_parity():
    a = np.empty((17, 23))
    b = np.empty((17, 23))
    cc.value_fill(a, 5.9, 1234)
    fb.value_fill(b, 5.9, 1234)
    assert np.array_equal(a, b)


def test_sample_parity():
    values = RNG.random((13, 19))
    for _ in range(300):
        x, y = RNG.uniform(-0.3, 1.3, 2)
        assert cc.sample_nearest(values, x, y) == fb.sample_nearest(values, x, y)
        assert cc.sample_bilinear(values, x, y) == fb.sample_bilinear(values, x, y)


def test_phasor_parity():
    state_a = np.array([0.1, 0.7])
    state_b = state_a.copy()
    for _ in range(20):
        a = np.empty(256)
        b = np.empty(256)
        cc.phasor_block(a, 441.3, 997.7, 48000.0, state_a)
        fb.phasor_block(b, 441.3, 997.7, 48000.0, state_b)
        assert np.array_equal(a, b)
    assert np.array_equal(state_a, state_b)


def test_comb_parity():
    x = RNG.normal(0, 0.4, 2048)
    la = dict(xline=np.zeros(48008), yline=np.zeros(48008), widx=0)
    lb = dict(xline=np.zeros(48008), yline=np.zeros(48008), widx=0)
    d = 60.0
    for i in range(0, 2048, 256):
        blk = np.ascontiguousarray(x[i : i + 256])
        oa = np.empty(256)
        ob = np.empty(256)
        d_next = d + 13.7
        la["widx"] = cc.comb_block(blk, oa, la["xline"], la["yline"],
                                   la["widx"], d, d_next, 0.8, 0.4)
        lb["widx"] = fb.comb_block(blk, ob, lb["xline"], lb["yline"],
                                   lb["widx"], d, d_next, 0.8, 0.4)
        d = d_next
        assert np.array_equal(oa, ob)
    assert la["widx"] == lb["widx"]
    assert np.array_equal(la["yline"], lb["yline"])


def test_gate_parity():
    x = RNG.normal(0, 0.3, 4096)
    sa = np.zeros(3)
    sb = np.zeros(3)
    alpha = float(np.exp(-1.0 / 480.0))
    for i in range(0, 4096, 256):
        blk = np.ascontiguousarray(x[i : i + 256])
        oa = np.empty(256)
        ob = np.empty(256)
        openness = (i // 256 % 5) / 4.0
        cc.gate_block(blk, oa, openness, 0.25, alpha, 1.0 / 240.0, 1e-3, sa)
        fb.gate_block(blk, ob, openness, 0.25, alpha, 1.0 / 240.0, 1e-3, sb)
        assert np.array_equal(oa, ob)
    assert np.array_equal(sa, sb)


def test_grain_parity():
    src = RNG.normal(0, 0.5, 4000)
    for wrap in (False, True):
        oa = np.zeros(256)
        ob = np.zeros(256)
        pa = cc.grain_accumulate(oa, src, 3600, 0, 900, 0.8, 17, wrap)
        pb = fb.grain_accumulate(ob, src, 3600, 0, 900, 0.8, 17, wrap)
        assert pa == pb
        assert np.array_equal(oa, ob)


def test_full_render_parity(monkeypatch, tmp_path):
    """A short end-to-end render must be byte-identical across backends."""
    import subprocess
    import sys

    script = r"""
import numpy as np, sys
from sonoterrain import session as S
from sonoterrain import terrain as T
from sonoterrain.scenes import Scene, SceneConfig
from sonoterrain.simulator import SimConfig

config = SceneConfig(scene=Scene.TERRAIN,
                     terrain_spec=T.BasisSpec(seed=3, zoom=6.0, width=48, height=48))
assets = S.build_assets(config)
def script(k, t):
    return dict(user_force=(np.sin(t), 0.2, -5.0))
_, audio, _ = S.run_simulated(config, SimConfig(), assets, script, seconds=0.4)
np.save(sys.argv[1], audio)
"""
    outs = []
    for env_val in ("0", "1"):
        out = tmp_path / f"render_{env_val}.npy"
        env = dict(__import__("os").environ, SONOTERRAIN_NO_EXT=env_val)
        subprocess.run([sys.executable, "-c", script, str(out)],
                       check=True, env=env)
        outs.append(np.load(out))
    assert np.array_equal(outs[0], outs[1])
