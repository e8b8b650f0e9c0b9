/** Draws the table canvas: node glyphs, ports, edges, the temporary line.
 *
 * Rendering goes through the narrow Draw2D surface below so tests can pass
 * a recording stub instead of a real CanvasRenderingContext2D.
 */

import {
  HEADER_HEIGHT,
  heightColor,
  nodeRect,
  portCenter,
} from "./layout.js";
import type { CanvasState } from "./state.js";
import type { EdgeInfo, NodeInfo } from "./types.js";

export interface Draw2D {
  clear(width: number, height: number): void;
  rect(x: number, y: number, w: number, h: number, fill: string, stroke?: string): void;
  circle(x: number, y: number, r: number, fill: string): void;
  line(x1: number, y1: number, x2: number, y2: number, stroke: string, dashed?: boolean): void;
  curve(x1: number, y1: number, x2: number, y2: number, stroke: string): void;
  text(value: string, x: number, y: number, color: string, size: number): void;
}

const STATUS_BADGE: Record<string, string> = {
  missing_input: "#e2a33d",
  error: "#d64545",
  foreign_component: "#8d6fc0",
};

function nodeById(nodes: NodeInfo[], id: number): NodeInfo | undefined {
  return nodes.find((n) => n.id === id);
}

function drawEdge(draw: Draw2D, state: CanvasState, edge: EdgeInfo): void {
  const src = nodeById(state.snapshot.nodes, edge.src_node);
  const dst = nodeById(state.snapshot.nodes, edge.dst_node);
  if (!src || !dst) {
    return;
  }
  const [x1, y1] = portCenter(state.camera, src, state.heightEncoding,
                              { direction: "out", port: edge.src_port });
  const [x2, y2] = portCenter(state.camera, dst, state.heightEncoding,
                              { direction: "in", port: edge.dst_port });
  draw.curve(x1, y1, x2, y2, "#7a8aa0");
}

function drawNode(draw: Draw2D, state: CanvasState, node: NodeInfo, maxHeight: number): void {
  const rect = nodeRect(state.camera, node, state.heightEncoding);
  const zoom = state.camera.zoom;
  const fill = state.heightEncoding === "color"
    ? heightColor(node.height, maxHeight)
    : "#3c4758";
  const stroke = state.selection === node.id ? "#ffd866" : "#1d2430";
  draw.rect(rect.x, rect.y, rect.width, rect.height, fill, stroke);
  draw.text(`${node.id} ${node.type}`, rect.x + 6 * zoom, rect.y + 15 * zoom,
            "#f2f5f9", 11 * zoom);
  if (!["ok"].includes(node.status.kind)) {
    draw.circle(rect.x + rect.width - 8 * zoom, rect.y + 8 * zoom, 5 * zoom,
                STATUS_BADGE[node.status.kind] ?? "#d64545");
  }
  for (const port of node.inputs) {
    const [px, py] = portCenter(state.camera, node, state.heightEncoding,
                                { direction: "in", port: port.name });
    draw.circle(px, py, 5 * zoom, "#9fb4cc");
    draw.text(port.name, px + 8 * zoom, py + 4 * zoom, "#c8d2de", 9 * zoom);
  }
  for (const port of node.outputs) {
    const [px, py] = portCenter(state.camera, node, state.heightEncoding,
                                { direction: "out", port: port.name });
    draw.circle(px, py, 5 * zoom, "#9fd0a8");
    draw.text(port.name, px - (8 + 5 * port.name.length) * zoom, py + 4 * zoom,
              "#c8d2de", 9 * zoom);
  }
  const value = node.params["value"];
  if (node.type === "Number Slider" && typeof value === "number") {
    draw.text(`= ${value}`, rect.x + 6 * zoom, rect.y + (HEADER_HEIGHT + 12) * zoom,
              "#ffe9a8", 10 * zoom);
  }
}

export function renderGraph(draw: Draw2D, state: CanvasState, width: number, height: number): void {
  draw.clear(width, height);
  const nodes = state.snapshot.nodes;
  const maxHeight = nodes.reduce((m, n) => Math.max(m, n.height), 0);
  for (const edge of state.snapshot.edges) {
    drawEdge(draw, state, edge);
  }
  for (const node of nodes) {
    drawNode(draw, state, node, maxHeight);
  }
  if (state.pendingEdge) {
    const node = nodeById(nodes, state.pendingEdge.node);
    if (node) {
      const [px, py] = portCenter(state.camera, node, state.heightEncoding, state.pendingEdge);
      // the temporary line from the armed port to the pointer
      draw.line(px, py, state.pointer.x, state.pointer.y,
                state.flash ? "#d64545" : "#ffd866", true);
    }
  }
}
