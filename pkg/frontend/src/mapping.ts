/** Coordinate maps between canvas pixels, the [-1, 1] workspace and the
 * unit square the terrain lives in. Inputs outside the canvas clamp to
 * the workspace edge. */

export function canvasToWorkspace(
  px: number, py: number, width: number, height: number,
): [number, number] {
  const x = 2 * (px / width) - 1;
  const y = 2 * (py / height) - 1;
  return [clampUnit(x), clampUnit(y)];
}

export function workspaceToCanvas(
  x: number, y: number, width: number, height: number,
): [number, number] {
  return [((clampUnit(x) + 1) / 2) * width, ((clampUnit(y) + 1) / 2) * height];
}

export function workspaceToUnit(x: number, y: number): [number, number] {
  return [(clampUnit(x) + 1) / 2, (clampUnit(y) + 1) / 2];
}

export function clampUnit(c: number): number {
  return Math.min(Math.max(c, -1), 1);
}

export function clamp01(c: number): number {
  return Math.min(Math.max(c, 0), 1);
}
