/** Binary PGM (P5) decoder for the terrain endpoint. */

export interface GrayImage {
  width: number;
  height: number;
  maxval: number;
  /** Row-major, top row first, one byte per pixel. */
  pixels: Uint8Array;
}

function isSpace(b: number): boolean {
  return b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d;
}

export function parsePgm(data: Uint8Array): GrayImage {
  if (data.length < 2 || data[0] !== 0x50 || data[1] !== 0x35) {
    throw new Error("not a binary PGM (P5) image");
  }
  const fields: number[] = [];
  let i = 2;
  while (fields.length < 3) {
    while (i < data.length && isSpace(data[i])) i++;
    if (data[i] === 0x23) {
      // comment line
      while (i < data.length && data[i] !== 0x0a) i++;
      continue;
    }
    let start = i;
    while (i < data.length && !isSpace(data[i])) i++;
    if (i === start) throw new Error("truncated PGM header");
    const text = new TextDecoder().decode(data.subarray(start, i));
    const value = Number(text);
    if (!Number.isInteger(value) || value <= 0) {
      throw new Error(`bad PGM header field: ${text}`);
    }
    fields.push(value);
  }
  i++; // single whitespace after maxval
  const [width, height, maxval] = fields;
  const pixels = data.subarray(i, i + width * height);
  if (pixels.length !== width * height) {
    throw new Error("truncated PGM payload");
  }
  return { width, height, maxval, pixels };
}

/** Grayscale value in [0, 1] of the cell containing a unit-square point
 * (matches the engine's nearest-cell lookup). */
export function pixelAt(img: GrayImage, u: number, v: number): number {
  const cu = Math.min(Math.max(u, 0), 1);
  const cv = Math.min(Math.max(v, 0), 1);
  const ix = Math.min(Math.floor(cu * img.width), img.width - 1);
  const iy = Math.min(Math.floor(cv * img.height), img.height - 1);
  return img.pixels[iy * img.width + ix] / img.maxval;
}
