"""Compare the compiled kernel core against the pure-Python fallback.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from sonoterrain._kernels import fallback as fb

try:
    from sonoterrain._kernels import _core as cc
except ImportError:
    cc = None


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_worley(mod):
    out = np.empty((256, 256))
    return lambda: mod.worley_fill(out, 8.0, 42, 0, 0)


def bench_sample(mod):
    values = np.random.default_rng(0).random((1024, 1024))
    xs = np.random.default_rng(1).random(10_000)
    ys = np.random.default_rng(2).random(10_000)

    def run():
        for x, y in zip(xs, ys):
            mod.sample_nearest(values, x, y)

    return run


def bench_comb(mod):
    x = np.random.default_rng(3).normal(0, 0.3, 48000)

    def run():
        xline = np.zeros(48008)
        yline = np.zeros(48008)
        widx = 0
        out = np.empty(256)
        for i in range(0, 48000 - 256, 256):
            widx = mod.comb_block(np.ascontiguousarray(x[i : i + 256]), out,
                                  xline, yline, widx, 480.0, 480.0, 0.7, 0.3)

    return run


def bench_gate(mod):
    x = np.random.default_rng(4).normal(0, 0.3, 48000)
    alpha = float(np.exp(-1.0 / 480.0))

    def run():
        state = np.zeros(3)
        out = np.empty(256)
        for i in range(0, 48000 - 256, 256):
            mod.gate_block(np.ascontiguousarray(x[i : i + 256]), out, 0.5,
                           0.25, alpha, 1.0 / 240.0, 1e-3, state)

    return run


def bench_grains(mod):
    src = np.random.default_rng(5).normal(0, 0.3, 48000)

    def run():
        out = np.zeros(256)
        for _ in range(200):
            for g in range(8):
                mod.grain_accumulate(out, src, g * 1000, 0, 2400, 0.5, 0, False)

    return run


BENCHES = [
    ("worley_fill 256x256 zoom 8", bench_worley),
    ("sample_nearest x 10k (1024^2)", bench_sample),
    ("comb 1 s @ 48 kHz", bench_comb),
    ("noise gate 1 s @ 48 kHz", bench_gate),
    ("grain mix 1600 grain-blocks", bench_grains),
]


def main():
    if cc is None:
        print("compiled core not built; showing fallback only")
    print(f"{'kernel':<34}{'fallback':>12}{'compiled':>12}{'speedup':>10}")
    for name, make in BENCHES:
        t_fb = timeit(make(fb))
        if cc is not None:
            t_cc = timeit(make(cc))
            print(f"{name:<34}{t_fb * 1e3:>10.1f}ms{t_cc * 1e3:>10.2f}ms"
                  f"{t_fb / t_cc:>9.0f}x")
        else:
            print(f"{name:<34}{t_fb * 1e3:>10.1f}ms{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
