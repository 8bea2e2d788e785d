"""Live session service: streams state and audio to the companion UI and
accepts pointer input back.

The session loop runs in its own thread at the haptic tick rate; web
handlers never touch the real-time path directly. Inbound pointer input
lands in a latest-value slot the loop reads each tick; outbound state
and audio go through per-client buffers that drop stale StateUpdates
first and never reorder audio.

Wire protocol (one WebSocket at ``/session``):
  text frames   JSON SessionMessages with strictly increasing ``seq``:
                hello, state, terrain_ready
  binary frames raw 16-bit little-endian PCM, stereo, 48 kHz
Document endpoints: GET /terrain.pgm, GET /config, POST /scene.
"""

from __future__ import annotations

import asyncio
import json
import math
import threading
import time
from collections import deque
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Response, WebSocket, WebSocketDisconnect

from . import nodes as nodemod
from . import terrain as terrainmod
from .scenes import SceneConfig
from .session import SceneAssets, SessionCore, build_assets
from .simulator import SimConfig
from .wavio import float_to_pcm16_stereo

STATE_BUFFER_LIMIT = 256
AUDIO_HIGH_WATER = 1024


def world_image(config: SceneConfig, world) -> bytes:
    """PGM rendering of the active force field, whatever the scene."""
    if isinstance(world, terrainmod.Terrain):
        return terrainmod.export_image(world)
    if isinstance(world, nodemod.NodeField):
        grid = nodemod.resistance_grid(world, 256, 256, config.node_profile)
        spec = terrainmod.BasisSpec(width=256, height=256)
        flat = bool(grid.max() == grid.min())
        grid = grid.copy()
        grid.setflags(write=False)
        t = terrainmod.Terrain(values=grid, normalized=True, flat=flat, spec=spec)
        return terrainmod.export_image(t)
    level = min(max(config.constant_force / config.f_max, 0.0), 1.0)
    grid = np.full((64, 64), level)
    grid.setflags(write=False)
    t = terrainmod.Terrain(values=grid, normalized=True, flat=True,
                           spec=terrainmod.BasisSpec(width=64, height=64))
    return terrainmod.export_image(t)


class LatestSlot:
    """Single-producer single-consumer latest-value exchange."""

    def __init__(self, initial=None):
        self._lock = threading.Lock()
        self._value = initial

    def set(self, value):
        with self._lock:
            self._value = value

    def get(self):
        with self._lock:
            return self._value

    def take(self):
        with self._lock:
            value = self._value
            self._value = None
            return value


class ClientFeed:
    """Ordered outbound buffer for one client. StateUpdates are dropped
    oldest-first under pressure; audio frames are never dropped or
    reordered (the producer pauses instead)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._ready = threading.Condition(self._lock)
        self._items: deque = deque()
        self._audio_count = 0
        self.closed = False

    def put_text(self, payload: str):
        with self._ready:
            n_text = len(self._items) - self._audio_count
            if n_text >= STATE_BUFFER_LIMIT:
                for i, (kind, _) in enumerate(self._items):
                    if kind == "text":
                        del self._items[i]
                        break
            self._items.append(("text", payload))
            self._ready.notify()

    def put_audio(self, payload: bytes):
        with self._ready:
            self._items.append(("audio", payload))
            self._audio_count += 1
            self._ready.notify()

    def audio_backlog(self) -> int:
        with self._lock:
            return self._audio_count

    def get(self, timeout: float = 0.25):
        with self._ready:
            if not self._items:
                self._ready.wait(timeout)
            if not self._items:
                return None
            kind, payload = self._items.popleft()
            if kind == "audio":
                self._audio_count -= 1
            return kind, payload

    def close(self):
        with self._ready:
            self.closed = True
            self._ready.notify()


class PointerInput:
    __slots__ = ("target", "push", "button")

    def __init__(self, target=(0.0, 0.0), push=0.0, button=False):
        self.target = target
        self.push = push
        self.button = button


class LiveSession:
    """Owns the session thread. Pointer targets drive the simulated grip
    via the x/y coupling spring; the push control applies forward force
    on the z axis."""

    def __init__(self, config: SceneConfig, sim_config: SimConfig,
                 assets: SceneAssets, base_dir: Path | None = None,
                 pace: float = 1.0):
        self.core = SessionCore(config, assets, sim_config)
        self.base_dir = base_dir
        self.pace = pace
        self.pointer = LatestSlot(PointerInput())
        self._swap_slot = LatestSlot()
        self._clients: list[ClientFeed] = []
        self._clients_lock = threading.Lock()
        self._seq = 0
        self._seq_lock = threading.Lock()
        self.warning_count = 0
        self.terrain_rev = 0
        self._last_state_slot = -1
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    # -- lifecycle ---------------------------------------------------------

    def start(self):
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name="sonoterrain-session")
        self._thread.start()

    def stop(self):
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
        with self._clients_lock:
            for feed in self._clients:
                feed.close()

    # -- client management -------------------------------------------------

    def attach_client(self) -> ClientFeed:
        feed = ClientFeed()
        with self._clients_lock:
            self._clients.append(feed)
        return feed

    def detach_client(self, feed: ClientFeed):
        feed.close()
        with self._clients_lock:
            if feed in self._clients:
                self._clients.remove(feed)

    def next_seq(self) -> int:
        with self._seq_lock:
            self._seq += 1
            return self._seq

    def hello_message(self) -> str:
        msg = {
            "type": "hello",
            "seq": self.next_seq(),
            "config": self.core.config.to_dict(),
            "terrain": f"/terrain.pgm?rev={self.terrain_rev}",
        }
        world = self.core.engine.world
        if isinstance(world, nodemod.NodeField):
            msg["field"] = json.loads(nodemod.field_to_json(world))
        return json.dumps(msg)

    # -- inbound -----------------------------------------------------------

    def handle_client_message(self, text: str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError:
            self.warning_count += 1
            return
        kind = doc.get("type")
        if kind == "pointer":
            self._handle_pointer(doc)
        elif kind == "scene_swap":
            try:
                self.request_swap(doc.get("config", {}))
            except (ValueError, KeyError, FileNotFoundError):
                self.warning_count += 1
        else:
            self.warning_count += 1

    def _handle_pointer(self, doc: dict):
        try:
            tx, ty = float(doc["target"][0]), float(doc["target"][1])
            push = float(doc.get("push", 0.0))
            button = bool(doc.get("button", False))
            if not (math.isfinite(tx) and math.isfinite(ty) and math.isfinite(push)):
                raise ValueError
        except (KeyError, TypeError, ValueError, IndexError):
            self.warning_count += 1
            return
        ext = 1.0
        tx = min(max(tx, -ext), ext)
        ty = min(max(ty, -ext), ext)
        push = min(max(push, 0.0), 1.0)
        self.pointer.set(PointerInput((tx, ty), push, button))

    def request_swap(self, config_dict: dict) -> SceneConfig:
        """Validate and stage a scene swap; it is applied between ticks.
        Raises on invalid config so callers can report 4xx."""
        config = SceneConfig.from_dict(config_dict)
        assets = build_assets(config, self.base_dir)
        self._swap_slot.set((config, assets))
        return config

    # -- session loop --------------------------------------------------------

    def _broadcast_text(self, payload: str):
        with self._clients_lock:
            clients = list(self._clients)
        for feed in clients:
            feed.put_text(payload)

    def _broadcast_audio(self, payload: bytes):
        with self._clients_lock:
            clients = list(self._clients)
        for feed in clients:
            feed.put_audio(payload)

    def _audio_backpressure(self) -> bool:
        with self._clients_lock:
            clients = list(self._clients)
        return any(f.audio_backlog() > AUDIO_HIGH_WATER for f in clients)

    def _run(self):
        core = self.core
        cfg = core.config
        dt = 1.0 / cfg.tick_rate
        next_time = time.perf_counter()
        while not self._stop.is_set():
            swap = self._swap_slot.take()
            if swap is not None:
                config, assets = swap
                if core.swap_scene(config, assets):
                    self.terrain_rev += 1
                    self._broadcast_text(json.dumps({
                        "type": "terrain_ready",
                        "seq": self.next_seq(),
                        "image": f"/terrain.pgm?rev={self.terrain_rev}",
                    }))
                cfg = core.config

            pointer = self.pointer.get()
            k = core.sim.config.coupling_stiffness
            uf = (
                k * (pointer.target[0] - core.sim.position[0]),
                k * (pointer.target[1] - core.sim.position[1]),
                -pointer.push * cfg.f_max,
            )
            state, force, blocks = core.tick_sim(user_force=uf,
                                                 button_pressed=pointer.button)
            for block in blocks:
                self._broadcast_audio(float_to_pcm16_stereo(block))

            t = core.tick_index / cfg.tick_rate
            slot = int(t * 60.0)
            if slot > self._last_state_slot:
                self._last_state_slot = slot
                frame = core.last_frame
                self._broadcast_text(json.dumps({
                    "type": "state",
                    "seq": self.next_seq(),
                    "t": round(t, 6),
                    "pos": [round(c, 6) for c in state.position],
                    "force": [round(c, 6) for c in force.force],
                    "openness": (frame.gate_openness or 0.0) if frame else 0.0,
                    "active_node": frame.active_segment if frame else None,
                    "v": round(frame.value, 6) if frame else 0.0,
                }))

            if self.pace > 0:
                next_time += dt / self.pace
                while self._audio_backpressure() and not self._stop.is_set():
                    time.sleep(0.01)  # pause capture rather than drop audio
                    next_time = time.perf_counter()
                delay = next_time - time.perf_counter()
                if delay > 0.002:
                    time.sleep(delay)
                elif delay < -0.25:
                    next_time = time.perf_counter()


def create_app(session: LiveSession, frontend_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="sonoterrain session")

    @app.get("/terrain.pgm")
    def terrain_image():
        data = world_image(session.core.config, session.core.engine.world)
        return Response(content=data, media_type="image/x-portable-graymap")

    @app.get("/config")
    def active_config():
        return session.core.config.to_dict()

    @app.get("/stats")
    def stats():
        return {
            "ticks": session.core.tick_index,
            "samples_rendered": session.core.samples_rendered,
            "warnings": session.warning_count,
            "terrain_rev": session.terrain_rev,
        }

    @app.post("/scene")
    async def swap_scene(body: dict):
        config_dict = body.get("config", body)
        try:
            config = session.request_swap(config_dict)
        except (ValueError, KeyError, TypeError, FileNotFoundError) as exc:
            return Response(
                content=json.dumps({"error": str(exc)}),
                status_code=422,
                media_type="application/json",
            )
        return {"accepted": True, "scene": config.scene.value}

    @app.websocket("/session")
    async def session_socket(ws: WebSocket):
        await ws.accept()
        feed = session.attach_client()
        loop = asyncio.get_event_loop()

        async def pump():
            while not feed.closed:
                item = await loop.run_in_executor(None, feed.get, 0.25)
                if item is None:
                    continue
                kind, payload = item
                if kind == "audio":
                    await ws.send_bytes(payload)
                else:
                    await ws.send_text(payload)

        await ws.send_text(session.hello_message())
        sender = asyncio.create_task(pump())
        try:
            while True:
                msg = await ws.receive()
                if msg["type"] == "websocket.disconnect":
                    break
                if "text" in msg and msg["text"] is not None:
                    session.handle_client_message(msg["text"])
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            session.detach_client(feed)

    if frontend_dir is not None and frontend_dir.exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True),
                  name="frontend")

    return app


def serve(config_path: str | Path, port: int = 8765, host: str = "127.0.0.1",
          pace: float = 1.0, frontend_dir: Path | None = None):
    """Build a live simulated session from a config file and serve it."""
    import uvicorn

    from .session import load_config_file

    config_path = Path(config_path)
    config, sim_config = load_config_file(config_path)
    assets = build_assets(config, config_path.parent)
    live = LiveSession(config, sim_config, assets,
                       base_dir=config_path.parent, pace=pace)
    app = create_app(live, frontend_dir)
    live.start()
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        live.stop()
