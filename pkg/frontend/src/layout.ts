/** Where node glyphs and ports sit on the table canvas.
 *
 * The table is viewed top-down: document (u, v) maps to screen (x, y)
 * through the camera. A node's computed height (its distance to the sink)
 * is not a third axis here; it is encoded as a color ramp or a small
 * isometric offset, per the state's heightEncoding.
 */

import type { Camera, HeightEncoding } from "./state.js";
import type { NodeInfo, PortRef } from "./types.js";

export const NODE_WIDTH = 132;
export const HEADER_HEIGHT = 22;
export const PORT_SPACING = 18;
export const PORT_RADIUS = 5;
export const TABLE_SCALE = 90; // screen pixels per table unit at zoom 1

export interface Rect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function worldToScreen(camera: Camera, u: number, v: number): [number, number] {
  return [camera.panX + u * TABLE_SCALE * camera.zoom,
          camera.panY + v * TABLE_SCALE * camera.zoom];
}

export function screenToWorld(camera: Camera, x: number, y: number): [number, number] {
  return [(x - camera.panX) / (TABLE_SCALE * camera.zoom),
          (y - camera.panY) / (TABLE_SCALE * camera.zoom)];
}

export function nodeRect(camera: Camera, node: NodeInfo, encoding: HeightEncoding): Rect {
  let [x, y] = worldToScreen(camera, node.position[0], node.position[1]);
  if (encoding === "offset") {
    // small isometric lift so higher nodes (further from the sink) sit up-left
    x -= node.height * 6 * camera.zoom;
    y -= node.height * 10 * camera.zoom;
  }
  const rows = Math.max(node.inputs.length, node.outputs.length, 1);
  return {
    x,
    y,
    width: NODE_WIDTH * camera.zoom,
    height: (HEADER_HEIGHT + rows * PORT_SPACING + 6) * camera.zoom,
  };
}

export function portCenter(
  camera: Camera,
  node: NodeInfo,
  encoding: HeightEncoding,
  ref: { direction: "in" | "out"; port: string },
): [number, number] {
  const rect = nodeRect(camera, node, encoding);
  const list = ref.direction === "in" ? node.inputs : node.outputs;
  const index = Math.max(0, list.findIndex((p) => p.name === ref.port));
  const x = ref.direction === "in" ? rect.x : rect.x + rect.width;
  const y = rect.y + (HEADER_HEIGHT + PORT_SPACING * (index + 0.5)) * camera.zoom;
  return [x, y];
}

/** Color ramp for height: sinks stay cool, far-upstream nodes glow warm. */
export function heightColor(height: number, maxHeight: number): string {
  const t = maxHeight > 0 ? Math.min(1, height / maxHeight) : 0;
  const hue = 210 - 170 * t;
  return `hsl(${hue}, 55%, 42%)`;
}

export interface PortHit {
  ref: PortRef;
  distance: number;
}

export function hitTestPort(
  camera: Camera,
  nodes: NodeInfo[],
  encoding: HeightEncoding,
  x: number,
  y: number,
): PortHit | null {
  let best: PortHit | null = null;
  const reach = PORT_RADIUS * 2.2 * camera.zoom;
  for (const node of nodes) {
    const ports: PortRef[] = [
      ...node.inputs.map((p) => ({ node: node.id, direction: "in" as const, port: p.name })),
      ...node.outputs.map((p) => ({ node: node.id, direction: "out" as const, port: p.name })),
    ];
    for (const ref of ports) {
      const [px, py] = portCenter(camera, node, encoding, ref);
      const distance = Math.hypot(px - x, py - y);
      if (distance <= reach && (best === null || distance < best.distance)) {
        best = { ref, distance };
      }
    }
  }
  return best;
}

export function hitTestNode(
  camera: Camera,
  nodes: NodeInfo[],
  encoding: HeightEncoding,
  x: number,
  y: number,
): number | null {
  // later nodes draw on top, so hit-test back to front
  for (let i = nodes.length - 1; i >= 0; i -= 1) {
    const rect = nodeRect(camera, nodes[i], encoding);
    if (x >= rect.x && x <= rect.x + rect.width && y >= rect.y && y <= rect.y + rect.height) {
      return nodes[i].id;
    }
  }
  return null;
}
