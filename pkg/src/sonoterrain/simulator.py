"""Simulated haptic grip: a damped point mass inside the feedback force
field, plus traversal recording for deterministic offline reproduction.

The simulator stands in for force-feedback hardware behind the same
DeviceState/ForceCommand contract; no hardware driver ships with the
package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .scenes import DeviceState, ForceCommand

RECORD_VERSION = 1


@dataclass(frozen=True)
class SimConfig:
    mass: float = 0.19                # kg
    damping: float = 2.0              # N*s/m
    workspace_half_extent: float = 1.0
    tick_rate: int = 1000             # Hz
    coupling_stiffness: float = 60.0  # N per workspace unit (pointer spring)

    def __post_init__(self):
        if self.mass <= 0.0:
            raise ValueError("mass must be positive")
        if self.damping < 0.0:
            raise ValueError("damping must be >= 0")
        if self.tick_rate < 100:
            raise ValueError("tick_rate must be >= 100 Hz")

    def to_dict(self) -> dict:
        return {
            "mass": self.mass,
            "damping": self.damping,
            "workspace_half_extent": self.workspace_half_extent,
            "tick_rate": self.tick_rate,
            "coupling_stiffness": self.coupling_stiffness,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        return cls(
            mass=float(d.get("mass", 0.19)),
            damping=float(d.get("damping", 2.0)),
            workspace_half_extent=float(d.get("workspace_half_extent", 1.0)),
            tick_rate=int(d.get("tick_rate", 1000)),
            coupling_stiffness=float(d.get("coupling_stiffness", 60.0)),
        )


class DeviceSimulator:
    """Semi-implicit Euler integration of the grip mass at the tick rate.
    Positions clamp to the workspace with the velocity zeroed on the
    clamped axis, so bounded feedback can never fling the grip out."""

    def __init__(self, config: SimConfig = SimConfig()):
        self.config = config
        self.position = [0.0, 0.0, 0.0]
        self.velocity = [0.0, 0.0, 0.0]

    def step(self, feedback: ForceCommand, dt: float, *,
             target: tuple[float, float, float] | None = None,
             user_force: tuple[float, float, float] | None = None,
             button_pressed: bool = False) -> DeviceState:
        """Advance one tick. Pointer mode (``target``) derives the user
        force from a coupling spring; script mode takes it verbatim."""
        if (target is None) == (user_force is None):
            raise ValueError("provide exactly one of target or user_force")
        if target is not None:
            for c in target:
                if not math.isfinite(c):
                    raise ValueError("non-finite target")
            uf = tuple(
                self.config.coupling_stiffness * (target[i] - self.position[i])
                for i in range(3)
            )
        else:
            for c in user_force:
                if not math.isfinite(c):
                    raise ValueError("non-finite user force")
            uf = (float(user_force[0]), float(user_force[1]), float(user_force[2]))
        for c in feedback.force:
            if not math.isfinite(c):
                raise ValueError("non-finite feedback force")

        m = self.config.mass
        c = self.config.damping
        ext = self.config.workspace_half_extent
        for i in range(3):
            accel = (uf[i] + feedback.force[i] - c * self.velocity[i]) / m
            self.velocity[i] += accel * dt
            self.position[i] += self.velocity[i] * dt
            if self.position[i] > ext:
                self.position[i] = ext
                self.velocity[i] = 0.0
            elif self.position[i] < -ext:
                self.position[i] = -ext
                self.velocity[i] = 0.0
        return DeviceState(
            position=(self.position[0], self.position[1], self.position[2]),
            velocity=(self.velocity[0], self.velocity[1], self.velocity[2]),
            user_force=uf,
            button_pressed=button_pressed,
        )


@dataclass(frozen=True)
class TraversalSample:
    t: float
    position: tuple[float, float, float]
    user_force: tuple[float, float, float]
    feedback_force: tuple[float, float, float]
    button_pressed: bool = False


@dataclass
class TraversalRecord:
    """Tick-rate log of a session: timestamps, grip pose, user force and
    the feedback that was sent. Serialized as one JSON object per line
    after a header carrying the tick rate and the config digest."""

    tick_rate: int
    config_digest: str
    samples: list[TraversalSample]

    def save(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            fh.write(json.dumps({
                "version": RECORD_VERSION,
                "tick_rate": self.tick_rate,
                "config_digest": self.config_digest,
            }) + "\n")
            for s in self.samples:
                line = {
                    "t": round(s.t, 9),
                    "pos": list(s.position),
                    "uf": list(s.user_force),
                    "ff": list(s.feedback_force),
                }
                if s.button_pressed:
                    line["btn"] = True
                fh.write(json.dumps(line) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "TraversalRecord":
        with open(path) as fh:
            header_line = fh.readline()
            if not header_line:
                raise ValueError(f"{path}: empty traversal file")
            header = json.loads(header_line)
            if "tick_rate" not in header:
                raise ValueError(f"{path}: missing traversal header")
            samples = []
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                d = json.loads(line)
                samples.append(TraversalSample(
                    t=float(d["t"]),
                    position=tuple(float(v) for v in d["pos"]),
                    user_force=tuple(float(v) for v in d["uf"]),
                    feedback_force=tuple(float(v) for v in d["ff"]),
                    button_pressed=bool(d.get("btn", False)),
                ))
        return cls(
            tick_rate=int(header["tick_rate"]),
            config_digest=str(header.get("config_digest", "")),
            samples=samples,
        )

    def duration(self) -> float:
        return len(self.samples) / self.tick_rate
