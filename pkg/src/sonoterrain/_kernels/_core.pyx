# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the hot loops: noise fills, terrain sampling,
and per-sample DSP. Must stay bit-compatible with ``fallback.py`` —
same formulas, same evaluation order, same libm calls."""

from libc.math cimport ceil, cos, floor, sqrt
from libc.stdint cimport uint64_t as u64

COMPILED = True

cdef double INV24 = 1.0 / 16777216.0
cdef double INV53 = 1.0 / 9007199254740992.0
cdef double TWO_PI = 6.283185307179586
cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL
cdef u64 ROW_SALT = 0xD1B54A32D192ED03ULL

EUCLIDEAN, MANHATTAN, CHEBYSHEV = 0, 1, 2
W_F1, W_F2, W_F2_MINUS_F1 = 0, 1, 2


cdef inline u64 _mix64(u64 z) nogil:
    z ^= z >> 30
    z = z * 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z = z * 0x94D049BB133111EBULL
    z ^= z >> 31
    return z


cdef inline void _feature(u64 seed, long i, long j, double* fx, double* fy) nogil:
    cdef u64 base = seed + (<u64>i) * GOLDEN + (<u64>j) * ROW_SALT
    cdef u64 h1 = _mix64(base)
    cdef u64 h2 = _mix64(h1)
    fx[0] = i + <double>(h1 >> 40) * INV24
    fy[0] = j + <double>(h2 >> 40) * INV24


cdef inline double _dist(double dx, double dy, int metric) nogil:
    cdef double ax, ay
    if metric == 0:
        return sqrt(dx * dx + dy * dy)
    ax = dx if dx >= 0.0 else -dx
    ay = dy if dy >= 0.0 else -dy
    if metric == 1:
        return ax + ay
    return ax if ax >= ay else ay


cdef void _worley_pair(double px, double py, long n_cells, u64 seed, int metric,
                       double* out1, double* out2) nogil:
    cdef long cx = <long>floor(px)
    cdef long cy = <long>floor(py)
    cdef long kmax, k, i, j, dx, dy, adx, ady, m
    cdef double best1 = 1e300
    cdef double best2 = 1e300
    cdef double fx, fy, d
    cdef bint found2 = False

    if cx < 0:
        cx = 0
    elif cx > n_cells - 1:
        cx = n_cells - 1
    if cy < 0:
        cy = 0
    elif cy > n_cells - 1:
        cy = n_cells - 1

    kmax = cx
    if n_cells - 1 - cx > kmax:
        kmax = n_cells - 1 - cx
    if cy > kmax:
        kmax = cy
    if n_cells - 1 - cy > kmax:
        kmax = n_cells - 1 - cy

    for k in range(kmax + 1):
        if k > 0 and found2 and (k - 1) >= best2:
            break
        for dy in range(-k, k + 1):
            j = cy + dy
            if j < 0 or j >= n_cells:
                continue
            ady = dy if dy >= 0 else -dy
            for dx in range(-k, k + 1):
                adx = dx if dx >= 0 else -dx
                m = adx if adx >= ady else ady
                if m != k:
                    continue
                i = cx + dx
                if i < 0 or i >= n_cells:
                    continue
                _feature(seed, i, j, &fx, &fy)
                d = _dist(fx - px, fy - py, metric)
                if d < best1:
                    best2 = best1
                    best1 = d
                    if best2 < 1e300:
                        found2 = True
                elif d < best2:
                    best2 = d
                    found2 = True
    if not found2:
        best2 = best1
    out1[0] = best1
    out2[0] = best2


def worley_pair(double px, double py, long n_cells, object seed, int metric):
    cdef u64 s = <u64>(<unsigned long long>seed)
    cdef double f1, f2
    _worley_pair(px, py, n_cells, s, metric, &f1, &f2)
    return f1, f2


def worley_fill(double[:, ::1] out, double zoom, object seed, int metric, int which):
    cdef u64 s = <u64>(<unsigned long long>seed)
    cdef Py_ssize_t h = out.shape[0]
    cdef Py_ssize_t w = out.shape[1]
    cdef long n_cells = <long>ceil(zoom)
    cdef Py_ssize_t i, j
    cdef double px, py, f1, f2
    if n_cells < 1:
        n_cells = 1
    with nogil:
        for j in range(h):
            py = (j + 0.5) / <double>h * zoom
            for i in range(w):
                px = (i + 0.5) / <double>w * zoom
                _worley_pair(px, py, n_cells, s, metric, &f1, &f2)
                if which == 0:
                    out[j, i] = f1
                elif which == 1:
                    out[j, i] = f2
                else:
                    out[j, i] = f2 - f1


cdef inline double _lattice(u64 seed, long i, long j) nogil:
    cdef u64 base = seed + (<u64>i) * GOLDEN + (<u64>j) * ROW_SALT
    return <double>(_mix64(base) >> 11) * INV53


cdef inline double _fade(double t) nogil:
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def value_fill(double[:, ::1] out, double zoom, object seed):
    cdef u64 s = <u64>(<unsigned long long>seed)
    cdef Py_ssize_t h = out.shape[0]
    cdef Py_ssize_t w = out.shape[1]
    cdef Py_ssize_t i, j
    cdef long x0, y0
    cdef double px, py, tx, ty, v00, v10, v01, v11, a, b
    with nogil:
        for j in range(h):
            py = (j + 0.5) / <double>h * zoom
            y0 = <long>floor(py)
            ty = _fade(py - y0)
            for i in range(w):
                px = (i + 0.5) / <double>w * zoom
                x0 = <long>floor(px)
                tx = _fade(px - x0)
                v00 = _lattice(s, x0, y0)
                v10 = _lattice(s, x0 + 1, y0)
                v01 = _lattice(s, x0, y0 + 1)
                v11 = _lattice(s, x0 + 1, y0 + 1)
                a = v00 + tx * (v10 - v00)
                b = v01 + tx * (v11 - v01)
                out[j, i] = a + ty * (b - a)


cdef inline double _clamp01(double x) nogil:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


def sample_nearest(const double[:, ::1] values, double x, double y):
    cdef Py_ssize_t h = values.shape[0]
    cdef Py_ssize_t w = values.shape[1]
    cdef Py_ssize_t ix, iy
    x = _clamp01(x)
    y = _clamp01(y)
    ix = <Py_ssize_t>(x * w)
    if ix > w - 1:
        ix = w - 1
    iy = <Py_ssize_t>(y * h)
    if iy > h - 1:
        iy = h - 1
    return values[iy, ix]


def sample_bilinear(const double[:, ::1] values, double x, double y):
    cdef Py_ssize_t h = values.shape[0]
    cdef Py_ssize_t w = values.shape[1]
    cdef double u, v, tx, ty, v00, v10, v01, v11, a, b
    cdef long i0, i1, j0, j1
    x = _clamp01(x)
    y = _clamp01(y)
    u = x * w - 0.5
    v = y * h - 0.5
    i0 = <long>floor(u)
    j0 = <long>floor(v)
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
    v00 = values[j0, i0]
    v10 = values[j0, i1]
    v01 = values[j1, i0]
    v11 = values[j1, i1]
    a = v00 + tx * (v10 - v00)
    b = v01 + tx * (v11 - v01)
    return a + ty * (b - a)


def phasor_block(double[::1] out, double f1, double f2, double sample_rate,
                 double[::1] state):
    cdef Py_ssize_t n = out.shape[0]
    cdef double inc1 = f1 / sample_rate
    cdef double inc2 = f2 / sample_rate
    cdef double ph1 = state[0]
    cdef double ph2 = state[1]
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = 0.5 * (ph1 + ph2) - 0.5
            ph1 += inc1
            ph1 -= floor(ph1)
            ph2 += inc2
            ph2 -= floor(ph2)
    state[0] = ph1
    state[1] = ph2


def comb_block(const double[::1] x, double[::1] out, double[::1] xline,
               double[::1] yline, long widx, double d0, double d1,
               double a, double b):
    cdef Py_ssize_t n = x.shape[0]
    cdef long length = <long>xline.shape[0]
    cdef double step = (d1 - d0) / n
    cdef Py_ssize_t i
    cdef long di, r0, r1
    cdef double d, frac, xv, yv, y
    with nogil:
        for i in range(n):
            d = d0 + step * (i + 1)
            xline[widx] = x[i]
            di = <long>floor(d)
            frac = d - di
            r0 = widx - di
            if r0 < 0:
                r0 += length
            r1 = r0 - 1
            if r1 < 0:
                r1 += length
            xv = xline[r0] * (1.0 - frac) + xline[r1] * frac
            yv = yline[r0] * (1.0 - frac) + yline[r1] * frac
            y = x[i] + a * xv + b * yv
            yline[widx] = y
            out[i] = y
            widx += 1
            if widx >= length:
                widx = 0
    return widx


def gate_block(const double[::1] x, double[::1] out, double openness, double t_max,
               double alpha, double step, double atten, double[::1] state):
    cdef Py_ssize_t n = x.shape[0]
    cdef double thresh = t_max * (1.0 - openness)
    cdef double ms = state[0]
    cdef double gain = state[1]
    cdef double one_minus_alpha = 1.0 - alpha
    cdef double xi, env, target, diff
    cdef Py_ssize_t i
    if state[2] == 0.0:
        gain = 1.0 if thresh == 0.0 else atten
        state[2] = 1.0
    with nogil:
        for i in range(n):
            xi = x[i]
            ms = alpha * ms + one_minus_alpha * xi * xi
            env = sqrt(ms)
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


def grain_accumulate(double[::1] out, const double[::1] src, long start, long pos,
                     long length, double amp, long offset, bint wrap):
    """Mix one Hann-windowed grain into ``out``; returns the new read pos."""
    cdef Py_ssize_t n = out.shape[0]
    cdef long slen = <long>src.shape[0]
    cdef double denom = <double>(length - 1) if length > 1 else 1.0
    cdef long i = offset
    cdef long idx
    cdef double w
    with nogil:
        while i < n and pos < length:
            idx = start + pos
            if wrap:
                idx %= slen
            w = 0.5 * (1.0 - cos(TWO_PI * pos / denom))
            out[i] += amp * w * src[idx]
            i += 1
            pos += 1
    return pos
