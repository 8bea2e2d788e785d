/** Live round-trip against a running service. Skipped unless
 * SONOTERRAIN_URL points at one, e.g.:
 *
 *   sonoterrain serve --config configs/terrain.json --port 8765 --sim &
 *   SONOTERRAIN_URL=http://127.0.0.1:8765 npm test
 */

import { describe, expect, it } from "vitest";
import WebSocket from "ws";
import { parsePgm, pixelAt } from "../src/pgm.js";
import { parseMessage, encodePointer } from "../src/protocol.js";

const base = process.env.SONOTERRAIN_URL;
const suite = base ? describe : describe.skip;

suite("live session round-trip", () => {
  it("heatmap pixels match /terrain.pgm on 64 random spot checks", async () => {
    const resp = await fetch(base + "/terrain.pgm");
    expect(resp.ok).toBe(true);
    const img = parsePgm(new Uint8Array(await resp.arrayBuffer()));
    for (let k = 0; k < 64; k++) {
      const u = Math.random();
      const v = Math.random();
      const ix = Math.min(Math.floor(u * img.width), img.width - 1);
      const iy = Math.min(Math.floor(v * img.height), img.height - 1);
      expect(pixelAt(img, u, v)).toBe(
        img.pixels[iy * img.width + ix] / img.maxval,
      );
    }
  });

  it("pointer input is reflected in a StateUpdate within 100 ms", async () => {
    const ws = new WebSocket(base!.replace(/^http/, "ws") + "/session");
    await new Promise((resolve, reject) => {
      ws.once("open", resolve);
      ws.once("error", reject);
    });
    const reflected = new Promise<number>((resolve) => {
      let sentAt = 0;
      ws.on("message", (data, isBinary) => {
        if (isBinary) return;
        const msg = parseMessage(data.toString());
        if (msg?.type === "hello") {
          sentAt = performance.now();
          ws.send(encodePointer({ target: [0.6, 0.6], push: 0.5, button: false }));
        } else if (msg?.type === "state" && sentAt > 0) {
          // reflected once the grip starts moving toward the target
          if (msg.pos[0] > 0.01 && msg.pos[1] > 0.01) {
            resolve(performance.now() - sentAt);
          }
        }
      });
    });
    const elapsed = await Promise.race([
      reflected,
      new Promise<number>((resolve) => setTimeout(() => resolve(Infinity), 5000)),
    ]);
    ws.close();
    expect(elapsed).toBeLessThan(100);
  }, 10000);

  it("audio stream arrives as 16-bit stereo binary frames", async () => {
    const ws = new WebSocket(base!.replace(/^http/, "ws") + "/session");
    let bytes = 0;
    ws.on("message", (data, isBinary) => {
      if (isBinary) bytes += (data as Buffer).length;
    });
    await new Promise((resolve) => setTimeout(resolve, 1000));
    ws.close();
    expect(bytes).toBeGreaterThan(0);
    expect(bytes % 4).toBe(0);
  }, 10000);
});
