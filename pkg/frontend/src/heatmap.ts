/** Terrain heatmap with cursor, force-vector and node overlays.
 *
 * Physical resistance cannot be felt through a mouse, so force is made
 * visible instead: the vector scales and warms with magnitude, and the
 * simulated mass already makes the cursor lag in strong fields.
 */

import { GrayImage } from "./pgm.js";
import { NodeDoc, StateUpdate } from "./protocol.js";
import { workspaceToCanvas } from "./mapping.js";

export class Heatmap {
  private readonly ctx: CanvasRenderingContext2D;
  private backing: HTMLCanvasElement | null = null;
  private nodes: NodeDoc[] = [];

  constructor(private readonly canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas context unavailable");
    this.ctx = ctx;
  }

  setImage(img: GrayImage): void {
    const backing = document.createElement("canvas");
    backing.width = img.width;
    backing.height = img.height;
    const bctx = backing.getContext("2d")!;
    const rgba = bctx.createImageData(img.width, img.height);
    for (let i = 0; i < img.pixels.length; i++) {
      const v = Math.round((img.pixels[i] / img.maxval) * 255);
      rgba.data[i * 4] = v;
      rgba.data[i * 4 + 1] = v;
      rgba.data[i * 4 + 2] = v;
      rgba.data[i * 4 + 3] = 255;
    }
    bctx.putImageData(rgba, 0, 0);
    this.backing = backing;
  }

  setNodes(nodes: NodeDoc[]): void {
    this.nodes = nodes;
  }

  draw(state: StateUpdate | null, fMax: number, stale: boolean): void {
    const { width, height } = this.canvas;
    const ctx = this.ctx;
    ctx.clearRect(0, 0, width, height);
    if (this.backing) {
      ctx.imageSmoothingEnabled = false;
      ctx.drawImage(this.backing, 0, 0, width, height);
    } else {
      ctx.fillStyle = "#15161a";
      ctx.fillRect(0, 0, width, height);
    }

    for (const node of this.nodes) {
      const [cx, cy] = [node.center[0] * width, node.center[1] * height];
      const active = state?.active_node === node.segment_id;
      ctx.beginPath();
      ctx.arc(cx, cy, node.radius * width, 0, Math.PI * 2);
      ctx.strokeStyle = active ? "#ffd75e" : "rgba(140, 170, 255, 0.6)";
      ctx.lineWidth = active ? 3 : 1;
      ctx.stroke();
    }

    if (state) {
      const [px, py] = workspaceToCanvas(state.pos[0], state.pos[1], width, height);
      const mag = Math.min(Math.abs(state.force[2]) / fMax, 1);

      // force vector: length and warmth scale with magnitude
      const len = mag * 0.25 * height;
      ctx.beginPath();
      ctx.moveTo(px, py);
      ctx.lineTo(px, py - len);
      ctx.strokeStyle = `rgb(255, ${Math.round(220 - 170 * mag)}, 80)`;
      ctx.lineWidth = 3;
      ctx.stroke();

      ctx.beginPath();
      ctx.arc(px, py, 7, 0, Math.PI * 2);
      ctx.fillStyle = stale ? "rgba(255,255,255,0.3)" : "#6ee7ff";
      ctx.fill();
      ctx.strokeStyle = "#0b0c0e";
      ctx.stroke();
    }

    if (stale) {
      ctx.fillStyle = "rgba(200, 60, 60, 0.85)";
      ctx.fillRect(8, 8, 64, 22);
      ctx.fillStyle = "#fff";
      ctx.font = "12px system-ui";
      ctx.fillText("STALE", 18, 23);
    }
  }
}
