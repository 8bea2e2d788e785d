import math

import numpy as np
import pytest

from sonoterrain import nodes as N
from sonoterrain._rng import SplitMix64


def rms_series(audio, window, hop):
    """Independent oracle: direct scan of the centered RMS series."""
    half = window // 2
    n = len(audio)
    out = []
    for k in range(1 + (n - 1) // hop):
        a = max(0, k * hop - half)
        b = min(n, k * hop + half)
        seg = audio[a:b]
        out.append(math.sqrt(float(np.sum(seg * seg)) / (b - a)))
    return out


class TestDetectOnsets:
    def test_all_zero_single_segment(self):
        segs = N.detect_onsets(np.zeros(5000), 48000, 0.5, 1024)
        assert len(segs) == 1
        assert (segs[0].start_sample, segs[0].end_sample) == (0, 5000)

    def test_two_impulses_one_second_apart(self):
        audio = np.zeros(96000)
        audio[0] = 1.0
        audio[48000] = 1.0
        segs = N.detect_onsets(audio, 48000, 0.5, 1024)
        hop = 512
        assert len(segs) == 2
        assert abs(segs[0].start_sample - 0) <= hop
        assert abs(segs[1].start_sample - 48000) <= hop
        assert segs[-1].end_sample == 96000

    def test_matches_rms_scan_oracle(self):
        rng = np.random.default_rng(3)
        audio = rng.normal(0, 0.05, 48000)
        audio[8000:8600] += np.sin(np.arange(600)) * 0.9
        audio[30000:30600] += np.sin(np.arange(600)) * 0.9
        window, threshold = 1024, 0.5
        hop = window // 2
        series = rms_series(audio, window, hop)
        gate = threshold * max(series)
        expected = []
        prev = 0.0
        for k, e in enumerate(series):
            if e >= gate and (k == 0 or prev < gate):
                expected.append(min(k * hop, len(audio) - 1))
            prev = e
        if not expected or expected[0] != 0:
            expected = [0] + expected
        segs = N.detect_onsets(audio, 48000, threshold, window)
        assert [s.start_sample for s in segs] == expected

    def test_threshold_one_at_most_one_interior_onset(self):
        rng = np.random.default_rng(11)
        audio = rng.normal(0, 0.3, 32000)
        segs = N.detect_onsets(audio, 48000, 1.0, 512)
        interior = [s for s in segs[1:]]
        assert len(interior) <= 1

    def test_segments_tile_file(self):
        rng = np.random.default_rng(5)
        audio = rng.normal(0, 0.2, 20000) * (rng.random(20000) > 0.5)
        segs = N.detect_onsets(audio, 48000, 0.4, 256)
        assert segs[0].start_sample == 0
        assert segs[-1].end_sample == 20000
        for a, b in zip(segs, segs[1:]):
            assert a.end_sample == b.start_sample

    def test_input_validation(self):
        with pytest.raises(ValueError):
            N.detect_onsets(np.zeros(0), 48000, 0.5)
        with pytest.raises(ValueError):
            N.detect_onsets(np.zeros(100), 48000, 0.5, window=32)
        with pytest.raises(ValueError):
            N.detect_onsets(np.zeros(100), 48000, 0.0)


def segments(n):
    return [N.Segment(id=i, start_sample=i * 100, end_sample=(i + 1) * 100)
            for i in range(n)]


class TestBuildField:
    def test_single_segment(self):
        field = N.build_field(segments(1), seed=0)
        assert len(field.nodes) == 1
        assert field.nodes[0].segment_id == 0

    def test_deterministic(self):
        a = N.build_field(segments(5), seed=123)
        b = N.build_field(segments(5), seed=123)
        assert a == b

    def test_bounds(self):
        field = N.build_field(segments(12), seed=7)
        assert len(field.nodes) == 12
        for node in field.nodes:
            assert 0.1 <= node.center[0] <= 0.9
            assert 0.1 <= node.center[1] <= 0.9
            assert 0.05 <= node.radius <= 0.2

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            N.build_field([], seed=0)


def brute_force_query(field, cursor):
    """Containment filter, argmin center distance, min id tiebreak."""
    inside = []
    for node in field.nodes:
        d = math.hypot(cursor[0] - node.center[0], cursor[1] - node.center[1])
        if d <= node.radius:
            inside.append((d, node.id, node))
    if not inside:
        return N.NodeHit(node_id=None, resistance=0.0)
    d, _, node = min(inside, key=lambda t: (t[0], t[1]))
    return N.NodeHit(node_id=node.id, resistance=1.0 - d / node.radius)


class TestQuery:
    def test_center_full_resistance(self):
        field = N.NodeField(nodes=(
            N.Node(id=0, center=(0.4, 0.6), radius=0.2, segment_id=0),))
        hit = N.query(field, (0.4, 0.6))
        assert hit.node_id == 0
        assert hit.resistance == 1.0

    def test_circumference_zero_resistance(self):
        field = N.NodeField(nodes=(
            N.Node(id=0, center=(0.5, 0.5), radius=0.2, segment_id=0),))
        hit = N.query(field, (0.7, 0.5))
        assert hit.node_id == 0
        assert hit.resistance == pytest.approx(0.0, abs=1e-12)

    def test_outside_no_hit(self):
        field = N.NodeField(nodes=(
            N.Node(id=0, center=(0.5, 0.5), radius=0.1, segment_id=0),))
        hit = N.query(field, (0.9, 0.9))
        assert hit.node_id is None
        assert hit.resistance == 0.0

    def test_closest_center_beats_depth_fraction(self):
        # Cursor sits 20% into A but 40% into B; B's center is nearer.
        field = N.NodeField(nodes=(
            N.Node(id=0, center=(0.5, 0.5), radius=0.4, segment_id=0),
            N.Node(id=1, center=(0.62, 0.5), radius=0.1, segment_id=1),
        ))
        hit = N.query(field, (0.58, 0.5))
        assert hit.node_id == 1

    def test_matches_bruteforce(self):
        rng = SplitMix64(99)
        for trial in range(40):
            n = 1 + int(rng.uniform() * 12)
            field = N.build_field(segments(n), seed=trial)
            for _ in range(100):
                cursor = (rng.uniform(), rng.uniform())
                got = N.query(field, cursor)
                want = brute_force_query(field, cursor)
                assert got.node_id == want.node_id
                assert got.resistance == pytest.approx(want.resistance, abs=1e-12)

    def test_resistance_monotone_along_ray(self):
        field = N.NodeField(nodes=(
            N.Node(id=0, center=(0.5, 0.5), radius=0.3, segment_id=0),))
        values = [N.query(field, (0.5 + f * 0.3, 0.5)).resistance
                  for f in np.linspace(0.0, 1.0, 50)]
        assert values[0] == 1.0
        assert values[-1] == pytest.approx(0.0, abs=1e-12)
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_cosine_profile(self):
        field = N.NodeField(nodes=(
            N.Node(id=0, center=(0.5, 0.5), radius=0.2, segment_id=0),))
        assert N.query(field, (0.5, 0.5), "cosine").resistance == 1.0
        assert N.query(field, (0.6, 0.5), "cosine").resistance == pytest.approx(0.5)


class TestSerialization:
    def test_field_roundtrip(self):
        field = N.build_field(segments(6), seed=4)
        assert N.field_from_json(N.field_to_json(field)) == field

    def test_segments_roundtrip(self):
        segs = segments(4)
        assert N.segments_from_json(N.segments_to_json(segs)) == segs

    def test_unique_ids_enforced(self):
        with pytest.raises(ValueError):
            N.NodeField(nodes=(
                N.Node(id=0, center=(0.2, 0.2), radius=0.1, segment_id=0),
                N.Node(id=0, center=(0.8, 0.8), radius=0.1, segment_id=1),
            ))
