/** Paints shaded sink geometry into the viewport canvas. */

import { shadeTriangles, type Orbit } from "./mesh.js";
import type { MeshInfo } from "./types.js";

export interface DrawTri {
  clear(width: number, height: number): void;
  triangle(points: [number, number][], fill: string): void;
  text(value: string, x: number, y: number, color: string, size: number): void;
}

const MESH_HUES = [205, 140, 20, 285, 60];

export function renderMeshes(
  draw: DrawTri,
  orbit: Orbit,
  meshes: MeshInfo[],
  width: number,
  height: number,
): number {
  draw.clear(width, height);
  if (meshes.length === 0) {
    draw.text("no sink geometry", width / 2 - 52, height / 2, "#6d7885", 12);
    return 0;
  }
  const hueByNode = new Map<number, number>();
  meshes.forEach((mesh, i) => hueByNode.set(mesh.node, MESH_HUES[i % MESH_HUES.length]));
  const shaded = shadeTriangles(orbit, meshes, width, height);
  for (const tri of shaded) {
    const hue = hueByNode.get(tri.mesh) ?? 205;
    const light = Math.round(22 + 48 * tri.shade);
    draw.triangle(
      tri.points.map((p) => [p.x, p.y] as [number, number]) as [number, number][],
      `hsl(${hue}, 48%, ${light}%)`,
    );
  }
  return shaded.length;
}
