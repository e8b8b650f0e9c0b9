/** Boots the client: one session, three panels (graph canvas, command bar,
 * geometry viewport), all updates driven by the server's event stream. */

import { ServiceClient } from "./api.js";
import { noticeFor, paletteEntries } from "./command_bar.js";
import { EventTracker, parseSseChunk } from "./events.js";
import { renderGraph, type Draw2D } from "./graph_view.js";
import { hitTestNode, hitTestPort, screenToWorld } from "./layout.js";
import { defaultOrbit, frameMeshes, rotateOrbit, zoomOrbit, type Orbit } from "./mesh.js";
import { renderMeshes, type DrawTri } from "./mesh_view.js";
import {
  applyGraphSnapshot,
  applyMeshes,
  clearFlash,
  dragSlider,
  dropOnCanvas,
  dropOnTrash,
  escape,
  flashRejection,
  initialState,
  movePointer,
  panBy,
  pickPort,
  zoomAt,
  type CanvasState,
  type Reduction,
} from "./state.js";
import type { EngineEvent } from "./types.js";

function canvasDraw(ctx: CanvasRenderingContext2D): Draw2D {
  return {
    clear(w, h) {
      ctx.fillStyle = "#151a22";
      ctx.fillRect(0, 0, w, h);
    },
    rect(x, y, w, h, fill, stroke) {
      ctx.fillStyle = fill;
      ctx.fillRect(x, y, w, h);
      if (stroke) {
        ctx.strokeStyle = stroke;
        ctx.lineWidth = 1.5;
        ctx.strokeRect(x, y, w, h);
      }
    },
    circle(x, y, r, fill) {
      ctx.fillStyle = fill;
      ctx.beginPath();
      ctx.arc(x, y, r, 0, Math.PI * 2);
      ctx.fill();
    },
    line(x1, y1, x2, y2, stroke, dashed) {
      ctx.strokeStyle = stroke;
      ctx.lineWidth = 2;
      ctx.setLineDash(dashed ? [6, 4] : []);
      ctx.beginPath();
      ctx.moveTo(x1, y1);
      ctx.lineTo(x2, y2);
      ctx.stroke();
      ctx.setLineDash([]);
    },
    curve(x1, y1, x2, y2, stroke) {
      const dx = Math.max(30, Math.abs(x2 - x1) / 2);
      ctx.strokeStyle = stroke;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(x1, y1);
      ctx.bezierCurveTo(x1 + dx, y1, x2 - dx, y2, x2, y2);
      ctx.stroke();
    },
    text(value, x, y, color, size) {
      ctx.fillStyle = color;
      ctx.font = `${size}px system-ui, sans-serif`;
      ctx.fillText(value, x, y);
    },
  };
}

function triDraw(ctx: CanvasRenderingContext2D): DrawTri {
  return {
    clear(w, h) {
      ctx.fillStyle = "#10141b";
      ctx.fillRect(0, 0, w, h);
    },
    triangle(points, fill) {
      ctx.fillStyle = fill;
      ctx.strokeStyle = fill;
      ctx.beginPath();
      ctx.moveTo(points[0][0], points[0][1]);
      ctx.lineTo(points[1][0], points[1][1]);
      ctx.lineTo(points[2][0], points[2][1]);
      ctx.closePath();
      ctx.fill();
      ctx.stroke();
    },
    text(value, x, y, color, size) {
      ctx.fillStyle = color;
      ctx.font = `${size}px system-ui, sans-serif`;
      ctx.fillText(value, x, y);
    },
  };
}

async function boot(): Promise<void> {
  const graphCanvas = document.getElementById("graph") as HTMLCanvasElement;
  const meshCanvas = document.getElementById("mesh") as HTMLCanvasElement;
  const phraseInput = document.getElementById("phrase") as HTMLInputElement;
  const notice = document.getElementById("notice") as HTMLElement;
  const palette = document.getElementById("palette") as HTMLElement;
  const trash = document.getElementById("trash") as HTMLElement;
  const fileInput = document.getElementById("file") as HTMLInputElement;
  const heightMode = document.getElementById("heightmode") as HTMLSelectElement;

  const client = new ServiceClient("");
  await client.createSession();

  let state: CanvasState = initialState();
  let orbit: Orbit = defaultOrbit();
  let framed = false;
  let grammarPhrases: string[] = [];
  let grammarTypes: string[] = [];
  const tracker = new EventTracker();

  const graphCtx = canvasDraw(graphCanvas.getContext("2d")!);
  const meshCtx = triDraw(meshCanvas.getContext("2d")!);

  function paint(): void {
    renderGraph(graphCtx, state, graphCanvas.width, graphCanvas.height);
    renderMeshes(meshCtx, orbit, state.meshes, meshCanvas.width, meshCanvas.height);
  }

  async function refetchGraph(): Promise<void> {
    state = applyGraphSnapshot(state, await client.graph());
    paint();
  }

  async function refetchAll(): Promise<void> {
    await refetchGraph();
    state = applyMeshes(state, await client.geometry());
    const grammar = await client.grammar();
    grammarPhrases = grammar.phrases;
    grammarTypes = grammar.component_types;
    renderPalette("");
    paint();
  }

  function showNotice(kind: string, text: string): void {
    notice.textContent = text;
    notice.className = kind;
  }

  async function perform(reduction: Reduction): Promise<void> {
    state = reduction.state;
    paint();
    if (!reduction.request) {
      return;
    }
    const outcome = await client.sendAction(reduction.request);
    if (!outcome.ok && outcome.error) {
      state = flashRejection(state, outcome.error);
      showNotice("rejected", `${outcome.error.code}: ${outcome.error.message}`);
      paint();
      setTimeout(() => {
        state = clearFlash(state);
        paint();
      }, 600);
    }
  }

  // event channel: apply in seq order, refetch on gaps
  async function subscribe(): Promise<void> {
    const response = await fetch(client.eventsUrl());
    const reader = response.body!.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) {
        break;
      }
      const parsed = parseSseChunk(buffer, decoder.decode(value, { stream: true }));
      buffer = parsed.rest;
      for (const event of parsed.events) {
        const order = tracker.classify(event);
        if (order === "duplicate") {
          continue;
        }
        if (order === "gap") {
          tracker.nextSeq = event.seq + 1;
          await refetchAll();
          continue;
        }
        await applyEvent(event);
      }
    }
  }

  async function applyEvent(event: EngineEvent): Promise<void> {
    if (event.kind === "graph_changed") {
      await refetchGraph();
      if (event.summary && (event.summary as { op?: string }).op === "load") {
        await refetchAll(); // learned templates may extend the palette
        framed = false;
      }
    } else if (event.kind === "geometry_changed") {
      state = applyMeshes(state, event.meshes ?? []);
      if (!framed && state.meshes.length > 0) {
        orbit = frameMeshes(orbit, state.meshes);
        framed = true;
      }
      paint();
    } else if (event.kind === "command_rejected" && event.reason) {
      state = flashRejection(state, event.reason);
      paint();
    }
  }

  // graph canvas interactions
  let dragging: { node: number; moved: boolean } | null = null;
  let panning: { x: number; y: number } | null = null;

  graphCanvas.addEventListener("mousedown", (e) => {
    const { offsetX: x, offsetY: y } = e;
    const port = hitTestPort(state.camera, state.snapshot.nodes, state.heightEncoding, x, y);
    if (port) {
      void perform(pickPort(state, port.ref));
      return;
    }
    const node = hitTestNode(state.camera, state.snapshot.nodes, state.heightEncoding, x, y);
    if (node !== null) {
      dragging = { node, moved: false };
      state = { ...state, selection: node };
      paint();
      return;
    }
    panning = { x, y };
  });

  graphCanvas.addEventListener("mousemove", (e) => {
    const { offsetX: x, offsetY: y } = e;
    if (panning) {
      state = panBy(state, x - panning.x, y - panning.y);
      panning = { x, y };
      paint();
      return;
    }
    if (dragging) {
      dragging.moved = true;
    }
    state = movePointer(state, x, y).state;
    if (state.pendingEdge || dragging) {
      paint();
    }
  });

  graphCanvas.addEventListener("mouseup", (e) => {
    if (panning) {
      panning = null;
      return;
    }
    if (!dragging) {
      return;
    }
    const { node, moved } = dragging;
    dragging = null;
    if (!moved) {
      return; // click-select only: no request
    }
    const [u, v] = screenToWorld(state.camera, e.offsetX, e.offsetY);
    void perform(dropOnCanvas(state, node, u, v));
  });

  graphCanvas.addEventListener("wheel", (e) => {
    e.preventDefault();
    state = zoomAt(state, e.deltaY < 0 ? 1.1 : 0.9, e.offsetX, e.offsetY);
    paint();
  });

  trash.addEventListener("dragover", (e) => e.preventDefault());
  trash.addEventListener("mouseup", () => {
    if (dragging) {
      const { node } = dragging;
      dragging = null;
      void perform(dropOnTrash(state, node));
    }
  });

  window.addEventListener("keydown", (e) => {
    if (e.key === "Escape") {
      void perform(escape(state));
    }
  });

  // slider drag: arrow keys nudge the selected slider's value
  window.addEventListener("keydown", (e) => {
    if (state.selection === null || (e.key !== "ArrowUp" && e.key !== "ArrowDown")) {
      return;
    }
    const node = state.snapshot.nodes.find((n) => n.id === state.selection);
    if (!node || node.type !== "Number Slider") {
      return;
    }
    const value = Number(node.params["value"] ?? 0) + (e.key === "ArrowUp" ? 1 : -1);
    void perform(dragSlider(state, node.id, value));
  });

  // mesh viewport orbit
  let orbiting: { x: number; y: number } | null = null;
  meshCanvas.addEventListener("mousedown", (e) => {
    orbiting = { x: e.offsetX, y: e.offsetY };
  });
  meshCanvas.addEventListener("mousemove", (e) => {
    if (!orbiting) {
      return;
    }
    orbit = rotateOrbit(orbit, (e.offsetX - orbiting.x) * 0.01, (e.offsetY - orbiting.y) * 0.01);
    orbiting = { x: e.offsetX, y: e.offsetY };
    paint();
  });
  meshCanvas.addEventListener("mouseup", () => {
    orbiting = null;
  });
  meshCanvas.addEventListener("wheel", (e) => {
    e.preventDefault();
    orbit = zoomOrbit(orbit, e.deltaY < 0 ? 0.9 : 1.1);
    paint();
  });

  // command bar
  function renderPalette(query: string): void {
    palette.replaceChildren(
      ...paletteEntries(grammarPhrases, grammarTypes, query).slice(0, 12).map((entry) => {
        const li = document.createElement("li");
        li.textContent = entry.text;
        li.addEventListener("mousedown", () => {
          phraseInput.value = entry.text;
        });
        return li;
      }),
    );
  }

  phraseInput.addEventListener("input", () => renderPalette(phraseInput.value));
  phraseInput.addEventListener("keydown", async (e) => {
    if (e.key !== "Enter" || !phraseInput.value.trim()) {
      return;
    }
    const outcome = await client.sendPhrase(phraseInput.value.trim());
    const status = noticeFor(outcome);
    showNotice(status.kind, status.text);
    if (outcome.ok) {
      phraseInput.value = "";
      renderPalette("");
    }
  });

  // document load
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) {
      return;
    }
    const outcome = await client.loadDocument(await file.text());
    showNotice(outcome.ok ? "ok" : "rejected",
               outcome.ok ? `loaded ${file.name}` : noticeFor(outcome).text);
  });

  heightMode.addEventListener("change", () => {
    state = { ...state, heightEncoding: heightMode.value as "color" | "offset" };
    paint();
  });

  await refetchAll();
  void subscribe();
}

void boot();
