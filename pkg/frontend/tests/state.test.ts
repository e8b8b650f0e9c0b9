import { describe, expect, it } from "vitest";

import {
  applyGraphSnapshot,
  dragSlider,
  dropOnCanvas,
  dropOnTrash,
  escape,
  flashRejection,
  initialState,
  pickPort,
  zoomAt,
  type CanvasState,
} from "../src/state.js";
import type { GraphSnapshot, NodeInfo } from "../src/types.js";

function node(id: number, type = "Addition"): NodeInfo {
  return {
    id,
    type,
    position: [0, 0, 0],
    params: {},
    inputs: [{ name: "a", type: "number" }, { name: "b", type: "number" }],
    outputs: [{ name: "sum", type: "number" }],
    height: 0,
    status: { kind: "ok", message: null },
  };
}

function snapshot(...nodes: NodeInfo[]): GraphSnapshot {
  return { nodes, edges: [], generation: 0 };
}

function withNodes(...nodes: NodeInfo[]): CanvasState {
  return applyGraphSnapshot(initialState(), snapshot(...nodes));
}

describe("pending edge", () => {
  it("first pick arms, second compatible pick posts exactly one connect", () => {
    const state = withNodes(node(1), node(2));
    const armed = pickPort(state, { node: 1, direction: "out", port: "sum" });
    expect(armed.request).toBeNull();
    expect(armed.state.pendingEdge).toEqual({ node: 1, direction: "out", port: "sum" });

    const done = pickPort(armed.state, { node: 2, direction: "in", port: "a" });
    expect(done.state.pendingEdge).toBeNull();
    expect(done.request).toEqual({
      kind: "connect", src_node: 1, src_port: "sum", dst_node: 2, dst_port: "a",
    });
  });

  it("port order does not matter: input first still connects out -> in", () => {
    const state = withNodes(node(1), node(2));
    const armed = pickPort(state, { node: 2, direction: "in", port: "a" });
    const done = pickPort(armed.state, { node: 1, direction: "out", port: "sum" });
    expect(done.request).toEqual({
      kind: "connect", src_node: 1, src_port: "sum", dst_node: 2, dst_port: "a",
    });
  });

  it("two same-direction picks clear without a request", () => {
    const state = withNodes(node(1), node(2));
    const armed = pickPort(state, { node: 1, direction: "out", port: "sum" });
    const done = pickPort(armed.state, { node: 2, direction: "out", port: "sum" });
    expect(done.request).toBeNull();
    expect(done.state.pendingEdge).toBeNull();
  });

  it("escape clears the pending edge", () => {
    const state = withNodes(node(1));
    const armed = pickPort(state, { node: 1, direction: "out", port: "sum" });
    const cleared = escape(armed.state);
    expect(cleared.state.pendingEdge).toBeNull();
    expect(cleared.request).toBeNull();
  });

  it("a rejection flash also drops the temporary line", () => {
    const state = withNodes(node(1));
    const armed = pickPort(state, { node: 1, direction: "out", port: "sum" }).state;
    const flashed = flashRejection(armed, { code: "WouldCreateCycle", message: "no" });
    expect(flashed.pendingEdge).toBeNull();
    expect(flashed.flash?.code).toBe("WouldCreateCycle");
  });

  it("snapshot updates drop a pending edge whose node vanished", () => {
    const state = withNodes(node(1), node(2));
    const armed = pickPort(state, { node: 2, direction: "in", port: "a" }).state;
    const after = applyGraphSnapshot(armed, snapshot(node(1)));
    expect(after.pendingEdge).toBeNull();
  });
});

describe("drag and drop", () => {
  it("dropping on the canvas posts one move that keeps the stored height", () => {
    const lifted = node(3);
    lifted.position = [1, 1, 2];
    const state = withNodes(lifted);
    const done = dropOnCanvas(state, 3, 4.5, 2.25);
    expect(done.request).toEqual({ kind: "move_node", node: 3, position: [4.5, 2.25, 2] });
  });

  it("dropping on the trash posts one remove", () => {
    const state = withNodes(node(3));
    const done = dropOnTrash(state, 3);
    expect(done.request).toEqual({ kind: "remove_node", node: 3 });
  });

  it("slider drag posts one set_value", () => {
    const state = withNodes(node(4, "Number Slider"));
    const done = dragSlider(state, 4, 7);
    expect(done.request).toEqual({ kind: "set_value", node: 4, value: 7 });
  });
});

describe("camera", () => {
  it("zoom clamps and keeps the anchor point fixed", () => {
    let state = initialState();
    const [ax, ay] = [200, 150];
    const before = {
      x: (ax - state.camera.panX) / state.camera.zoom,
      y: (ay - state.camera.panY) / state.camera.zoom,
    };
    state = zoomAt(state, 2, ax, ay);
    const after = {
      x: (ax - state.camera.panX) / state.camera.zoom,
      y: (ay - state.camera.panY) / state.camera.zoom,
    };
    expect(after.x).toBeCloseTo(before.x);
    expect(after.y).toBeCloseTo(before.y);
    for (let i = 0; i < 20; i += 1) {
      state = zoomAt(state, 2, ax, ay);
    }
    expect(state.camera.zoom).toBe(4);
  });
});
