/** Minimal software 3D view for sink meshes: orbit camera, perspective
 * projection, painter-sorted flat shading. Enough to watch a cube grow. */

import type { MeshInfo } from "./types.js";

export interface Orbit {
  theta: number; // around the vertical axis
  phi: number;   // elevation
  distance: number;
  target: [number, number, number];
}

export function defaultOrbit(): Orbit {
  return { theta: Math.PI / 5, phi: Math.PI / 7, distance: 14, target: [2, 2, 2] };
}

export function rotateOrbit(orbit: Orbit, dTheta: number, dPhi: number): Orbit {
  const phi = Math.min(Math.PI / 2 - 0.05, Math.max(-Math.PI / 2 + 0.05, orbit.phi + dPhi));
  return { ...orbit, theta: orbit.theta + dTheta, phi };
}

export function zoomOrbit(orbit: Orbit, factor: number): Orbit {
  return { ...orbit, distance: Math.min(200, Math.max(1, orbit.distance * factor)) };
}

export function meshesBounds(meshes: MeshInfo[]): {
  lo: [number, number, number];
  hi: [number, number, number];
} | null {
  let lo: [number, number, number] | null = null;
  let hi: [number, number, number] | null = null;
  for (const mesh of meshes) {
    for (const v of mesh.vertices) {
      if (lo === null || hi === null) {
        lo = [...v];
        hi = [...v];
      } else {
        for (let k = 0; k < 3; k += 1) {
          lo[k] = Math.min(lo[k], v[k]);
          hi[k] = Math.max(hi[k], v[k]);
        }
      }
    }
  }
  return lo && hi ? { lo, hi } : null;
}

/** Frame the orbit target/distance around whatever geometry is present. */
export function frameMeshes(orbit: Orbit, meshes: MeshInfo[]): Orbit {
  const bounds = meshesBounds(meshes);
  if (!bounds) {
    return orbit;
  }
  const { lo, hi } = bounds;
  const target: [number, number, number] = [
    (lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2,
  ];
  const span = Math.max(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2], 1);
  return { ...orbit, target, distance: span * 2.8 };
}

type Vec3 = [number, number, number];

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function normalize(a: Vec3): Vec3 {
  const n = Math.hypot(a[0], a[1], a[2]) || 1;
  return [a[0] / n, a[1] / n, a[2] / n];
}

export interface Projected {
  x: number;
  y: number;
  depth: number;
}

export function project(
  orbit: Orbit,
  point: Vec3,
  width: number,
  height: number,
): Projected {
  const eye: Vec3 = [
    orbit.target[0] + orbit.distance * Math.cos(orbit.phi) * Math.sin(orbit.theta),
    orbit.target[1] + orbit.distance * Math.cos(orbit.phi) * Math.cos(orbit.theta),
    orbit.target[2] + orbit.distance * Math.sin(orbit.phi),
  ];
  const forward = normalize(sub(orbit.target, eye));
  const right = normalize(cross(forward, [0, 0, 1]));
  const up = cross(right, forward);
  const rel = sub(point, eye);
  const cx = dot(rel, right);
  const cy = dot(rel, up);
  const cz = dot(rel, forward);
  const depth = Math.max(cz, 1e-6);
  const focal = 1.2 * Math.min(width, height);
  return {
    x: width / 2 + (focal * cx) / depth,
    y: height / 2 - (focal * cy) / depth,
    depth: cz,
  };
}

export interface ShadedTriangle {
  points: [Projected, Projected, Projected];
  depth: number;
  shade: number; // 0..1 flat lambertian
  mesh: number;  // owning sink node id
}

const LIGHT: Vec3 = normalize([0.4, -0.65, 0.65]);

/** Project and sort every triangle back-to-front, ready to fill. */
export function shadeTriangles(
  orbit: Orbit,
  meshes: MeshInfo[],
  width: number,
  height: number,
): ShadedTriangle[] {
  const out: ShadedTriangle[] = [];
  for (const mesh of meshes) {
    for (const [a, b, c] of mesh.triangles) {
      const va = mesh.vertices[a];
      const vb = mesh.vertices[b];
      const vc = mesh.vertices[c];
      const normal = normalize(cross(sub(vb, va), sub(vc, va)));
      const shade = 0.35 + 0.65 * Math.max(0, dot(normal, LIGHT));
      const points: [Projected, Projected, Projected] = [
        project(orbit, va, width, height),
        project(orbit, vb, width, height),
        project(orbit, vc, width, height),
      ];
      const depth = (points[0].depth + points[1].depth + points[2].depth) / 3;
      out.push({ points, depth, shade, mesh: mesh.node });
    }
  }
  out.sort((p, q) => q.depth - p.depth);
  return out;
}
