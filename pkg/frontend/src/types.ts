/** Wire types mirrored from the service's documented JSON schemas. */

export type StatusKind = "ok" | "missing_input" | "error" | "foreign_component";

export interface PortInfo {
  name: string;
  type: string;
}

export interface NodeInfo {
  id: number;
  type: string;
  position: [number, number, number];
  params: Record<string, unknown>;
  inputs: PortInfo[];
  outputs: PortInfo[];
  height: number;
  status: { kind: StatusKind; message: string | null };
}

export interface EdgeInfo {
  src_node: number;
  src_port: string;
  dst_node: number;
  dst_port: string;
}

export interface GraphSnapshot {
  nodes: NodeInfo[];
  edges: EdgeInfo[];
  generation: number;
}

export interface MeshInfo {
  node: number;
  vertices: [number, number, number][];
  triangles: [number, number, number][];
}

export type Action =
  | { kind: "add_component"; type: string; value?: number }
  | { kind: "remove_node"; node: number }
  | { kind: "move_node"; node: number; position: [number, number, number] }
  | { kind: "connect"; src_node: number; src_port: string; dst_node: number; dst_port: string }
  | { kind: "disconnect"; src_node: number; src_port: string; dst_node: number; dst_port: string }
  | { kind: "set_value"; node: number; value: number }
  | { kind: "set_text"; node: number; text: string };

export interface EngineEvent {
  seq: number;
  kind: "graph_changed" | "geometry_changed" | "command_rejected";
  summary?: Record<string, unknown>;
  meshes?: MeshInfo[];
  reason?: { code: string; message: string };
  phrase?: string;
}

export interface PortRef {
  node: number;
  direction: "in" | "out";
  port: string;
}
