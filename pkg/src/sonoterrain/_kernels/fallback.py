"""Pure-Python kernels, bit-compatible with the compiled core.

Every loop mirrors the arithmetic of ``_core.pyx`` operation for
operation (same formulas, same evaluation order, same libm calls), so
either backend produces byte-identical terrains and audio. Keep the two
files in sync; ``tests/test_kernel_parity.py`` enforces the contract.
"""

from __future__ import annotations

import math

COMPILED = False

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_ROW_SALT = 0xD1B54A32D192ED03
_INV24 = 1.0 / 16777216.0
_INV53 = 1.0 / 9007199254740992.0
_TWO_PI = 6.283185307179586

# metric codes
EUCLIDEAN, MANHATTAN, CHEBYSHEV = 0, 1, 2
# worley output codes
W_F1, W_F2, W_F2_MINUS_F1 = 0, 1, 2


def _mix64(z):
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def _feature(seed, i, j):
    base = (seed + i * _GOLDEN + j * _ROW_SALT) & _MASK64
    h1 = _mix64(base)
    h2 = _mix64(h1)
    return i + (h1 >> 40) * _INV24, j + (h2 >> 40) * _INV24


def _dist(dx, dy, metric):
    if metric == EUCLIDEAN:
        return math.sqrt(dx * dx + dy * dy)
    ax = dx if dx >= 0.0 else -dx
    ay = dy if dy >= 0.0 else -dy
    if metric == MANHATTAN:
        return ax + ay
    return ax if ax >= ay else ay


def worley_pair(px, py, n_cells, seed, metric):
    """Exact nearest/second-nearest feature distances on a bounded grid.

    Rings of cells are searched outward from the containing cell until no
    unvisited cell can hold a closer point (cells at Chebyshev ring k are
    at least k-1 away under all three metrics).
    """
    cx = int(math.floor(px))
    cy = int(math.floor(py))
    if cx < 0:
        cx = 0
    elif cx > n_cells - 1:
        cx = n_cells - 1
    if cy < 0:
        cy = 0
    elif cy > n_cells - 1:
        cy = n_cells - 1

    kmax = max(cx, n_cells - 1 - cx, cy, n_cells - 1 - cy)
    best1 = math.inf
    best2 = math.inf
    for k in range(kmax + 1):
        if k > 0 and (k - 1) >= best2:
            break
        for dy in range(-k, k + 1):
            j = cy + dy
            if j < 0 or j >= n_cells:
                continue
            ady = dy if dy >= 0 else -dy
            for dx in range(-k, k + 1):
                adx = dx if dx >= 0 else -dx
                if (adx if adx >= ady else ady) != k:
                    continue
                i = cx + dx
                if i < 0 or i >= n_cells:
                    continue
                fx, fy = _feature(seed, i, j)
                d = _dist(fx - px, fy - py, metric)
                if d < best1:
                    best2 = best1
                    best1 = d
                elif d < best2:
                    best2 = d
    if best2 == math.inf:
        best2 = best1
    return best1, best2


def worley_fill(out, zoom, seed, metric, which):
    h, w = out.shape
    n_cells = int(math.ceil(zoom))
    if n_cells < 1:
        n_cells = 1
    for j in range(h):
        py = (j + 0.5) / h * zoom
        for i in range(w):
            px = (i + 0.5) / w * zoom
            f1, f2 = worley_pair(px, py, n_cells, seed, metric)
            if which == W_F1:
                out[j, i] = f1
            elif which == W_F2:
                out[j, i] = f2
            else:
                out[j, i] = f2 - f1


def _lattice(seed, i, j):
    base = (seed + i * _GOLDEN + j * _ROW_SALT) & _MASK64
    return (_mix64(base) >> 11) * _INV53


def _fade(t):
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def value_fill(out, zoom, seed):
    h, w = out.shape
    for j in range(h):
        py = (j + 0.5) / h * zoom
        y0 = int(math.floor(py))
        ty = _fade(py - y0)
        for i in range(w):
            px = (i + 0.5) / w * zoom
            x0 = int(math.floor(px))
            tx = _fade(px - x0)
            v00 = _lattice(seed, x0, y0)
            v10 = _lattice(seed, x0 + 1, y0)
            v01 = _lattice(seed, x0, y0 + 1)
            v11 = _lattice(seed, x0 + 1, y0 + 1)
            a = v00 + tx * (v10 - v00)
            b = v01 + tx * (v11 - v01)
            out[j, i] = a + ty * (b - a)


def _clamp01(x):
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


def sample_nearest(values, x, y):
    h, w = values.shape
    x = _clamp01(x)
    y = _clamp01(y)
    ix = int(x * w)
    if ix > w - 1:
        ix = w - 1
    iy = int(y * h)
    if iy > h - 1:
        iy = h - 1
    return float(values[iy, ix])


def sample_bilinear(values, x, y):
    h, w = values.shape
    x = _clamp01(x)
    y = _clamp01(y)
    u = x * w - 0.5
    v = y * h - 0.5
    i0 = int(math.floor(u))
    j0 = int(math.floor(v))
    tx = u - i0
    ty = v - j0
    i1 = i0 + 1
    j1 = j0 + 1
    if i0 < 0:
        i0 = 0
    if i1 > w - 1:
        i1 = w - 1
    if i1 < 0:
        i1 = 0
    if i0 > w - 1:
        i0 = w - 1
    if j0 < 0:
        j0 = 0
    if j1 > h - 1:
        j1 = h - 1
    if j1 < 0:
        j1 = 0
    if j0 > h - 1:
        j0 = h - 1
    v00 = float(values[j0, i0])
    v10 = float(values[j0, i1])
    v01 = float(values[j1, i0])
    v11 = float(values[j1, i1])
    a = v00 + tx * (v10 - v00)
    b = v01 + tx * (v11 - v01)
    return a + ty * (b - a)


def phasor_block(out, f1, f2, sample_rate, state):
    n = out.shape[0]
    inc1 = f1 / sample_rate
    inc2 = f2 / sample_rate
    ph1 = float(state[0])
    ph2 = float(state[1])
    for i in range(n):
        out[i] = 0.5 * (ph1 + ph2) - 0.5
        ph1 += inc1
        ph1 -= math.floor(ph1)
        ph2 += inc2
        ph2 -= math.floor(ph2)
    state[0] = ph1
    state[1] = ph2


def comb_block(x, out, xline, yline, widx, d0, d1, a, b):
    n = x.shape[0]
    length = xline.shape[0]
    step = (d1 - d0) / n
    for i in range(n):
        d = d0 + step * (i + 1)
        xline[widx] = x[i]
        di = int(math.floor(d))
        frac = d - di
        r0 = widx - di
        if r0 < 0:
            r0 += length
        r1 = r0 - 1
        if r1 < 0:
            r1 += length
        xv = float(xline[r0]) * (1.0 - frac) + float(xline[r1]) * frac
        yv = float(yline[r0]) * (1.0 - frac) + float(yline[r1]) * frac
        y = float(x[i]) + a * xv + b * yv
        yline[widx] = y
        out[i] = y
        widx += 1
        if widx >= length:
            widx = 0
    return widx


def gate_block(x, out, openness, t_max, alpha, step, atten, state):
    n = x.shape[0]
    thresh = t_max * (1.0 - openness)
    ms = float(state[0])
    gain = float(state[1])
    if state[2] == 0.0:
        gain = 1.0 if thresh == 0.0 else atten
        state[2] = 1.0
    one_minus_alpha = 1.0 - alpha
    for i in range(n):
        xi = float(x[i])
        ms = alpha * ms + one_minus_alpha * xi * xi
        env = math.sqrt(ms)
        target = 1.0 if env >= thresh else atten
        diff = target - gain
        if diff > step:
            diff = step
        elif diff < -step:
            diff = -step
        gain += diff
        out[i] = xi * gain
    state[0] = ms
    state[1] = gain


def grain_accumulate(out, src, start, pos, length, amp, offset, wrap):
    """Mix one Hann-windowed grain into ``out``; returns the new read pos."""
    n = out.shape[0]
    slen = src.shape[0]
    denom = float(length - 1) if length > 1 else 1.0
    i = offset
    while i < n and pos < length:
        idx = start + pos
        if wrap:
            idx %= slen
        w = 0.5 * (1.0 - math.cos(_TWO_PI * pos / denom))
        out[i] += amp * w * float(src[idx])
        i += 1
        pos += 1
    return pos
