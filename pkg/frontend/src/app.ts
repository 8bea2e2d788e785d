/** Navigator UI wiring: heatmap + meters + push control + scene swap,
 * pointer input rate-limited to 120 Hz. */

import { AudioPlayer } from "./audioPlayer.js";
import { Connection, ConnectionStatus } from "./connection.js";
import { Heatmap } from "./heatmap.js";
import { canvasToWorkspace, clamp01 } from "./mapping.js";
import { GrayImage } from "./pgm.js";
import {
  HelloMessage,
  PointerState,
  StateUpdate,
  encodePointer,
  encodeSceneSwap,
} from "./protocol.js";
import { RateLimiter } from "./rateLimiter.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

function main(): void {
  const canvas = $<HTMLCanvasElement>("heatmap");
  const heatmap = new Heatmap(canvas);
  const audio = new AudioPlayer();

  let lastState: StateUpdate | null = null;
  let config: Record<string, unknown> = {};
  let fMax = 9;
  let pushValue = 0;
  let buttonHeld = false;
  let pointerTarget: [number, number] = [0, 0];

  const statusEl = $("status");
  const sceneEl = $("scene");
  const forceEl = $("force");
  const vEl = $("grayscale");
  const opennessEl = $<HTMLProgressElement>("openness");
  const pushSlider = $<HTMLInputElement>("push");
  const seedInput = $<HTMLInputElement>("seed");

  const connection = new Connection(window.location.origin, {
    onStatus(status: ConnectionStatus) {
      statusEl.textContent = status;
      statusEl.className = status;
    },
    onHello(hello: HelloMessage) {
      config = hello.config;
      fMax = Number(config["f_max"]) || 9;
      sceneEl.textContent = `${config["scene"]}  (force 0..${fMax} N)`;
      heatmap.setNodes(hello.field?.nodes ?? []);
    },
    onState(state: StateUpdate) {
      lastState = state;
      forceEl.textContent = state.force.map((f) => f.toFixed(2)).join(", ");
      vEl.textContent = state.v.toFixed(3);
      opennessEl.value = state.openness;
    },
    onTerrain(img: GrayImage) {
      heatmap.setImage(img);
    },
    onAudio(frame: ArrayBuffer) {
      audio.feed(frame);
    },
  });

  const limiter = new RateLimiter<PointerState>(120, (p) =>
    connection.send(encodePointer(p)),
  );

  function offerPointer(): void {
    limiter.offer({ target: pointerTarget, push: pushValue, button: buttonHeld });
  }

  canvas.addEventListener("pointermove", (ev) => {
    const rect = canvas.getBoundingClientRect();
    pointerTarget = canvasToWorkspace(
      ev.clientX - rect.left, ev.clientY - rect.top, rect.width, rect.height,
    );
    offerPointer();
  });
  canvas.addEventListener("pointerdown", (ev) => {
    audio.enable();
    buttonHeld = true;
    if (ev.shiftKey) pushValue = 1;
    offerPointer();
  });
  window.addEventListener("pointerup", () => {
    buttonHeld = false;
    pushValue = Number(pushSlider.value);
    offerPointer();
  });
  pushSlider.addEventListener("input", () => {
    pushValue = clamp01(Number(pushSlider.value));
    offerPointer();
  });
  $("audio-enable").addEventListener("click", () => {
    audio.enable();
    $("audio-enable").textContent = "audio on";
  });

  $("reseed").addEventListener("click", () => {
    const terrain = config["terrain"] as Record<string, unknown> | undefined;
    if (!terrain) return;
    const seed = Number(seedInput.value) || Math.floor(Math.random() * 1e9);
    const next = { ...config, terrain: { ...terrain, seed } };
    connection.send(encodeSceneSwap(next));
    config = next;
  });

  function repaint(): void {
    heatmap.draw(lastState, fMax, connection.stale);
    $("underruns").textContent = String(audio.underruns);
    requestAnimationFrame(repaint);
  }

  connection.open();
  requestAnimationFrame(repaint);
}

main();
