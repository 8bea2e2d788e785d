import { describe, expect, it } from "vitest";
import {
  SequenceGuard,
  encodePointer,
  encodeSceneSwap,
  parseMessage,
} from "../src/protocol.js";

const state = {
  type: "state", seq: 5, t: 1.25,
  pos: [0.1, -0.2, 0.3], force: [0, 0, 4.5],
  openness: 0.4, active_node: null, v: 0.7,
};

describe("parseMessage", () => {
  it("accepts well-formed state updates", () => {
    const msg = parseMessage(JSON.stringify(state));
    expect(msg?.type).toBe("state");
    if (msg?.type === "state") {
      expect(msg.force[2]).toBe(4.5);
    }
  });

  it("accepts hello and terrain_ready", () => {
    expect(parseMessage(JSON.stringify({
      type: "hello", seq: 1, config: { scene: "TERRAIN" }, terrain: "/terrain.pgm",
    }))?.type).toBe("hello");
    expect(parseMessage(JSON.stringify({
      type: "terrain_ready", seq: 9, image: "/terrain.pgm?rev=2",
    }))?.type).toBe("terrain_ready");
  });

  it("returns null for malformed frames", () => {
    expect(parseMessage("not json")).toBeNull();
    expect(parseMessage("42")).toBeNull();
    expect(parseMessage(JSON.stringify({ type: "state", seq: 1 }))).toBeNull();
    expect(parseMessage(JSON.stringify({ ...state, pos: [1, 2] }))).toBeNull();
    expect(parseMessage(JSON.stringify({ ...state, seq: "x" }))).toBeNull();
    expect(parseMessage(JSON.stringify({ type: "mystery", seq: 1 }))).toBeNull();
  });
});

describe("SequenceGuard", () => {
  it("drops non-increasing sequence numbers", () => {
    const guard = new SequenceGuard();
    const at = (seq: number) => ({ ...state, seq } as any);
    expect(guard.accept(at(1))).toBe(true);
    expect(guard.accept(at(3))).toBe(true);
    expect(guard.accept(at(3))).toBe(false);
    expect(guard.accept(at(2))).toBe(false);
    expect(guard.accept(at(4))).toBe(true);
  });
});

describe("encoders", () => {
  it("encodes pointer input with clamped fields intact", () => {
    const doc = JSON.parse(encodePointer({
      target: [0.5, -1], push: 0.25, button: true,
    }));
    expect(doc).toEqual({
      type: "pointer", target: [0.5, -1], push: 0.25, button: true,
    });
  });

  it("encodes scene swaps with the config inline", () => {
    const doc = JSON.parse(encodeSceneSwap({ scene: "TERRAIN" }));
    expect(doc.type).toBe("scene_swap");
    expect(doc.config.scene).toBe("TERRAIN");
  });
});
