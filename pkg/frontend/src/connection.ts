/** Session connection: fetches terrain and config, subscribes to the
 * state/audio streams, retries with visible status, and flags the view
 * stale when no StateUpdate lands for 250 ms. */

import { parsePgm, GrayImage } from "./pgm.js";
import {
  HelloMessage,
  SequenceGuard,
  SessionMessage,
  StateUpdate,
  parseMessage,
} from "./protocol.js";

export const STALE_AFTER_MS = 250;
const RETRY_MS = 1500;

export type ConnectionStatus = "connecting" | "connected" | "retrying";

export interface ConnectionEvents {
  onStatus(status: ConnectionStatus): void;
  onHello(hello: HelloMessage): void;
  onState(state: StateUpdate): void;
  onTerrain(img: GrayImage): void;
  onAudio(frame: ArrayBuffer): void;
}

export class Connection {
  private ws: WebSocket | null = null;
  private guard = new SequenceGuard();
  private lastStateAt = 0;
  private closed = false;

  constructor(
    private readonly baseUrl: string,
    private readonly events: ConnectionEvents,
  ) {}

  open(): void {
    this.closed = false;
    this.connect();
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }

  get stale(): boolean {
    return performance.now() - this.lastStateAt > STALE_AFTER_MS;
  }

  send(text: string): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(text);
    }
  }

  async fetchTerrain(path = "/terrain.pgm"): Promise<void> {
    const resp = await fetch(this.baseUrl + path);
    if (!resp.ok) throw new Error(`terrain fetch failed: ${resp.status}`);
    const bytes = new Uint8Array(await resp.arrayBuffer());
    this.events.onTerrain(parsePgm(bytes));
  }

  private connect(): void {
    this.events.onStatus("connecting");
    const wsUrl = this.baseUrl.replace(/^http/, "ws") + "/session";
    const ws = new WebSocket(wsUrl);
    ws.binaryType = "arraybuffer";
    this.ws = ws;

    ws.onopen = () => this.events.onStatus("connected");
    ws.onmessage = (ev) => {
      if (typeof ev.data === "string") {
        const msg = parseMessage(ev.data);
        if (msg && this.guard.accept(msg)) this.dispatch(msg);
      } else {
        this.events.onAudio(ev.data as ArrayBuffer);
      }
    };
    ws.onclose = () => {
      if (this.closed) return;
      this.events.onStatus("retrying");
      setTimeout(() => this.connect(), RETRY_MS);
    };
    ws.onerror = () => ws.close();
  }

  private dispatch(msg: SessionMessage): void {
    switch (msg.type) {
      case "hello":
        this.events.onHello(msg);
        this.fetchTerrain().catch(() => undefined);
        break;
      case "state":
        this.lastStateAt = performance.now();
        this.events.onState(msg);
        break;
      case "terrain_ready":
        this.fetchTerrain(msg.image).catch(() => undefined);
        break;
    }
  }
}
