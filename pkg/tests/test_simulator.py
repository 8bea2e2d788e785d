import math

import numpy as np
import pytest

from sonoterrain.scenes import ForceCommand
from sonoterrain.simulator import (
    DeviceSimulator,
    SimConfig,
    TraversalRecord,
    TraversalSample,
)

ZERO = ForceCommand(force=(0.0, 0.0, 0.0))
DT = 0.001


class TestStep:
    def test_rest_stays_at_rest(self):
        sim = DeviceSimulator()
        state = sim.step(ZERO, DT, user_force=(0.0, 0.0, 0.0))
        assert state.position == (0.0, 0.0, 0.0)
        assert state.velocity == (0.0, 0.0, 0.0)

    def test_single_euler_step(self):
        config = SimConfig(damping=0.0)
        sim = DeviceSimulator(config)
        u = 2.0
        state = sim.step(ZERO, DT, user_force=(u, 0.0, 0.0))
        v = u / config.mass * DT
        assert state.velocity[0] == pytest.approx(v, rel=1e-12)
        assert state.position[0] == pytest.approx(v * DT, rel=1e-12)

    def test_push_balance_converges(self):
        sim = DeviceSimulator()
        push = 4.0
        feedback = ForceCommand(force=(0.0, 0.0, push))
        state = None
        for _ in range(5000):  # 5 s
            state = sim.step(feedback, DT, user_force=(0.0, 0.0, -push))
        assert abs(state.velocity[2]) < 1e-3

    def test_requires_exactly_one_input(self):
        sim = DeviceSimulator()
        with pytest.raises(ValueError):
            sim.step(ZERO, DT)
        with pytest.raises(ValueError):
            sim.step(ZERO, DT, target=(0, 0, 0), user_force=(0, 0, 0))

    def test_non_finite_rejected_state_unchanged(self):
        sim = DeviceSimulator()
        sim.step(ZERO, DT, user_force=(1.0, 0.0, 0.0))
        pos = tuple(sim.position)
        vel = tuple(sim.velocity)
        with pytest.raises(ValueError):
            sim.step(ZERO, DT, user_force=(math.nan, 0.0, 0.0))
        with pytest.raises(ValueError):
            sim.step(ForceCommand(force=(math.inf, 0, 0)), DT,
                     user_force=(0.0, 0.0, 0.0))
        assert tuple(sim.position) == pos
        assert tuple(sim.velocity) == vel

    def test_workspace_clamp_random_forces(self):
        sim = DeviceSimulator()
        rng = np.random.default_rng(8)
        for _ in range(5000):
            uf = tuple(rng.uniform(-9, 9, 3))
            ff = ForceCommand(force=tuple(rng.uniform(-9, 9, 3)))
            state = sim.step(ff, DT, user_force=uf)
            assert all(abs(c) <= 1.0 for c in state.position)

    def test_pointer_mode_converges_under_constant_feedback(self):
        config = SimConfig()
        sim = DeviceSimulator(config)
        target = (0.3, -0.2, 0.1)
        ff = ForceCommand(force=(0.0, 0.0, 9.0))  # strongest allowed feedback
        state = None
        for _ in range(2000):  # 2 s
            state = sim.step(ff, DT, target=target)
        # spring balances feedback: p = target + ff/k on each axis
        expected = tuple(
            target[i] + ff.force[i] / config.coupling_stiffness for i in range(3)
        )
        for i in range(3):
            assert abs(state.position[i] - expected[i]) < 1e-3

    def test_energy_bounded_long_run(self):
        config = SimConfig()
        sim = DeviceSimulator(config)
        rng = np.random.default_rng(17)
        ufs = rng.uniform(-9, 9, (1_000_000, 3))
        ffs = rng.uniform(-9, 9, (1_000_000, 3))
        max_ke = 0.0
        for k in range(1_000_000):
            ff = ForceCommand(force=(ffs[k, 0], ffs[k, 1], ffs[k, 2]))
            state = sim.step(ff, DT, user_force=tuple(ufs[k]))
            ke = 0.5 * config.mass * sum(v * v for v in state.velocity)
            max_ke = max(max_ke, ke)
        # bounded input -> bounded energy (v_max ~ F_total/damping)
        v_bound = (9.0 * 2) / config.damping
        assert max_ke <= 0.5 * config.mass * 3 * v_bound**2


class TestTraversalRecord:
    def make_record(self, n=50):
        samples = [
            TraversalSample(
                t=k * DT,
                position=(math.sin(k * 0.1), 0.1 * k, -0.5),
                user_force=(0.0, 0.0, -3.0),
                feedback_force=(0.0, 0.0, 4.5),
                button_pressed=(k == 10),
            )
            for k in range(n)
        ]
        return TraversalRecord(tick_rate=1000, config_digest="abc123",
                               samples=samples)

    def test_save_load_roundtrip(self, tmp_path):
        record = self.make_record()
        path = tmp_path / "trace.jsonl"
        record.save(path)
        loaded = TraversalRecord.load(path)
        assert loaded.tick_rate == record.tick_rate
        assert loaded.config_digest == record.config_digest
        assert len(loaded.samples) == len(record.samples)
        for a, b in zip(loaded.samples, record.samples):
            assert a.position == b.position
            assert a.user_force == b.user_force
            assert a.feedback_force == b.feedback_force
            assert a.button_pressed == b.button_pressed

    def test_duration(self):
        assert self.make_record(2500).duration() == pytest.approx(2.5)

    def test_rejects_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        with pytest.raises(ValueError):
            TraversalRecord.load(path)

    def test_rejects_headerless_file(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"t": 0.0}\n')
        with pytest.raises(ValueError):
            TraversalRecord.load(path)


class TestSimConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            SimConfig(mass=0.0)
        with pytest.raises(ValueError):
            SimConfig(damping=-1.0)
        with pytest.raises(ValueError):
            SimConfig(tick_rate=10)

    def test_dict_roundtrip(self):
        config = SimConfig(mass=0.25, damping=1.5)
        assert SimConfig.from_dict(config.to_dict()) == config
