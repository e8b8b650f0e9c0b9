/** Canvas interaction state.
 *
 * The canvas never mutates the document itself: every gesture reduces to at
 * most one service request, and the document on screen is whatever the
 * server last said. The one piece of live feedback is the pending edge: the
 * first picked port arms it and a temporary line follows the pointer until
 * the second pick or Escape clears it.
 */

import type { Action, GraphSnapshot, MeshInfo, PortRef } from "./types.js";

export interface Camera {
  panX: number;
  panY: number;
  zoom: number;
}

export type HeightEncoding = "color" | "offset";

export interface CanvasState {
  snapshot: GraphSnapshot;
  meshes: MeshInfo[];
  camera: Camera;
  pendingEdge: PortRef | null;
  pointer: { x: number; y: number };
  selection: number | null;
  heightEncoding: HeightEncoding;
  flash: { code: string; message: string } | null;
}

export function initialState(): CanvasState {
  return {
    snapshot: { nodes: [], edges: [], generation: -1 },
    meshes: [],
    camera: { panX: 40, panY: 40, zoom: 1 },
    pendingEdge: null,
    pointer: { x: 0, y: 0 },
    selection: null,
    heightEncoding: "color",
    flash: null,
  };
}

/** What a gesture turned into: a new state plus at most one request. */
export interface Reduction {
  state: CanvasState;
  request: Action | null;
}

function still(state: CanvasState): Reduction {
  return { state, request: null };
}

export function pickPort(state: CanvasState, ref: PortRef): Reduction {
  const pending = state.pendingEdge;
  if (pending === null) {
    return still({ ...state, pendingEdge: ref });
  }
  // second pick always clears the pending edge
  const cleared = { ...state, pendingEdge: null };
  if (pending.node === ref.node && pending.direction === ref.direction
      && pending.port === ref.port) {
    return still(cleared); // picking the same port again disarms
  }
  const src = pending.direction === "out" ? pending : ref;
  const dst = pending.direction === "out" ? ref : pending;
  if (src.direction !== "out" || dst.direction !== "in") {
    return still(cleared); // two outputs or two inputs: nothing to connect
  }
  return {
    state: cleared,
    request: {
      kind: "connect",
      src_node: src.node,
      src_port: src.port,
      dst_node: dst.node,
      dst_port: dst.port,
    },
  };
}

export function escape(state: CanvasState): Reduction {
  return still({ ...state, pendingEdge: null, selection: null });
}

export function movePointer(state: CanvasState, x: number, y: number): Reduction {
  return still({ ...state, pointer: { x, y } });
}

/** Dropping a dragged node back on the canvas repositions it. */
export function dropOnCanvas(state: CanvasState, node: number, u: number, v: number): Reduction {
  const existing = state.snapshot.nodes.find((n) => n.id === node);
  const height = existing ? existing.position[2] : 0;
  return {
    state,
    request: { kind: "move_node", node, position: [u, v, height] },
  };
}

/** Dropping a dragged node on the trash region throws it away. */
export function dropOnTrash(state: CanvasState, node: number): Reduction {
  return {
    state: { ...state, selection: null },
    request: { kind: "remove_node", node },
  };
}

export function dragSlider(state: CanvasState, node: number, value: number): Reduction {
  return { state, request: { kind: "set_value", node, value } };
}

export function applyGraphSnapshot(state: CanvasState, snapshot: GraphSnapshot): CanvasState {
  const live = new Set(snapshot.nodes.map((n) => n.id));
  const pendingEdge =
    state.pendingEdge && live.has(state.pendingEdge.node) ? state.pendingEdge : null;
  const selection = state.selection !== null && live.has(state.selection)
    ? state.selection : null;
  return { ...state, snapshot, pendingEdge, selection };
}

export function applyMeshes(state: CanvasState, meshes: MeshInfo[]): CanvasState {
  return { ...state, meshes };
}

export function flashRejection(
  state: CanvasState,
  reason: { code: string; message: string },
): CanvasState {
  // a rejected connect also drops the temporary line
  return { ...state, flash: reason, pendingEdge: null };
}

export function clearFlash(state: CanvasState): CanvasState {
  return { ...state, flash: null };
}

export function panBy(state: CanvasState, dx: number, dy: number): CanvasState {
  const camera = { ...state.camera, panX: state.camera.panX + dx, panY: state.camera.panY + dy };
  return { ...state, camera };
}

export function zoomAt(state: CanvasState, factor: number, x: number, y: number): CanvasState {
  const zoom = Math.min(4, Math.max(0.25, state.camera.zoom * factor));
  const scale = zoom / state.camera.zoom;
  const camera = {
    zoom,
    panX: x - (x - state.camera.panX) * scale,
    panY: y - (y - state.camera.panY) * scale,
  };
  return { ...state, camera };
}
