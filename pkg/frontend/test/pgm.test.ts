import { describe, expect, it } from "vitest";
import { parsePgm, pixelAt } from "../src/pgm.js";

function pgmBytes(width: number, height: number, pixels: number[]): Uint8Array {
  const header = new TextEncoder().encode(`P5\n${width} ${height}\n255\n`);
  const out = new Uint8Array(header.length + pixels.length);
  out.set(header);
  out.set(pixels, header.length);
  return out;
}

describe("parsePgm", () => {
  it("parses header and payload", () => {
    const img = parsePgm(pgmBytes(2, 2, [0, 255, 255, 0]));
    expect(img.width).toBe(2);
    expect(img.height).toBe(2);
    expect(img.maxval).toBe(255);
    expect([...img.pixels]).toEqual([0, 255, 255, 0]);
  });

  it("skips comment lines", () => {
    const text = new TextEncoder().encode("P5\n# a comment\n2 1\n255\n");
    const data = new Uint8Array([...text, 7, 9]);
    const img = parsePgm(data);
    expect(img.width).toBe(2);
    expect([...img.pixels]).toEqual([7, 9]);
  });

  it("rejects non-P5 data", () => {
    expect(() => parsePgm(new TextEncoder().encode("P6\n1 1\n255\nx")))
      .toThrow(/P5/);
  });

  it("rejects truncated payloads", () => {
    expect(() => parsePgm(pgmBytes(4, 4, [1, 2, 3]))).toThrow(/truncated/);
  });
});

describe("pixelAt", () => {
  it("returns the containing cell's value, top row first", () => {
    const img = parsePgm(pgmBytes(2, 2, [0, 255, 255, 0]));
    expect(pixelAt(img, 0.25, 0.25)).toBe(0);
    expect(pixelAt(img, 0.75, 0.25)).toBe(1);
    expect(pixelAt(img, 0.25, 0.75)).toBe(1);
    expect(pixelAt(img, 0.75, 0.75)).toBe(0);
  });

  it("clamps out-of-range positions", () => {
    const img = parsePgm(pgmBytes(2, 2, [0, 255, 255, 0]));
    expect(pixelAt(img, -3, 0.2)).toBe(0);
    expect(pixelAt(img, 3, 1.5)).toBe(0);
  });

  it("matches the raw payload on 64 random spot checks", () => {
    const w = 16, h = 16;
    const pixels = Array.from({ length: w * h }, (_, i) => (i * 37) % 256);
    const img = parsePgm(pgmBytes(w, h, pixels));
    let seed = 12345;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    for (let k = 0; k < 64; k++) {
      const u = rand();
      const v = rand();
      const ix = Math.min(Math.floor(u * w), w - 1);
      const iy = Math.min(Math.floor(v * h), h - 1);
      expect(pixelAt(img, u, v)).toBe(pixels[iy * w + ix] / 255);
    }
  });
});
