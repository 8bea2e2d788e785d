/** Session wire messages. Text frames are JSON with a strictly
 * increasing `seq`; binary frames are PCM audio handled elsewhere. */

export interface NodeDoc {
  id: number;
  center: [number, number];
  radius: number;
  segment_id: number;
}

export interface HelloMessage {
  type: "hello";
  seq: number;
  config: Record<string, unknown>;
  terrain: string;
  field?: { nodes: NodeDoc[] };
}

export interface StateUpdate {
  type: "state";
  seq: number;
  t: number;
  pos: [number, number, number];
  force: [number, number, number];
  openness: number;
  active_node: number | null;
  v: number;
}

export interface TerrainReady {
  type: "terrain_ready";
  seq: number;
  image: string;
}

export type SessionMessage = HelloMessage | StateUpdate | TerrainReady;

function isVec3(v: unknown): v is [number, number, number] {
  return Array.isArray(v) && v.length === 3 && v.every((c) => Number.isFinite(c));
}

/** Parse one text frame; malformed input yields null rather than throwing. */
export function parseMessage(text: string): SessionMessage | null {
  let doc: any;
  try {
    doc = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null) return null;
  if (!Number.isFinite(doc.seq)) return null;
  switch (doc.type) {
    case "hello":
      if (typeof doc.config !== "object" || doc.config === null) return null;
      if (typeof doc.terrain !== "string") return null;
      return doc as HelloMessage;
    case "state":
      if (!isVec3(doc.pos) || !isVec3(doc.force)) return null;
      if (!Number.isFinite(doc.t) || !Number.isFinite(doc.openness)) return null;
      if (!Number.isFinite(doc.v)) return null;
      if (doc.active_node !== null && !Number.isInteger(doc.active_node)) return null;
      return doc as StateUpdate;
    case "terrain_ready":
      if (typeof doc.image !== "string") return null;
      return doc as TerrainReady;
    default:
      return null;
  }
}

/** Drops stale or duplicated messages so views only ever move forward. */
export class SequenceGuard {
  private last = -Infinity;

  accept(msg: SessionMessage): boolean {
    if (msg.seq <= this.last) return false;
    this.last = msg.seq;
    return true;
  }
}

export interface PointerState {
  target: [number, number];
  push: number;
  button: boolean;
}

export function encodePointer(p: PointerState): string {
  return JSON.stringify({
    type: "pointer",
    target: [p.target[0], p.target[1]],
    push: p.push,
    button: p.button,
  });
}

export function encodeSceneSwap(config: Record<string, unknown>): string {
  return JSON.stringify({ type: "scene_swap", config });
}
