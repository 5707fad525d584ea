// Vertex placement. Product quivers (ids "node.level") get a grid with
// levels on the x-axis and Dynkin nodes on the y-axis, the natural frame
// for triangular products; anything else falls back to a deterministic
// force layout (seeded, no randomness across runs).

import type { QuiverPayload } from './types.js';

export interface Point {
  x: number;
  y: number;
}

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = 60;

function parseLeveled(id: string): { node: string; level: number } | null {
  const match = /^([^.]+)\.(\d+)$/.exec(id);
  if (!match) {
    return null;
  }
  return { node: match[1], level: Number(match[2]) };
}

function nodeOrder(a: string, b: string): number {
  const na = Number(a.replace(/^v/, ''));
  const nb = Number(b.replace(/^v/, ''));
  if (!Number.isNaN(na) && !Number.isNaN(nb)) {
    return na - nb;
  }
  return a < b ? -1 : a > b ? 1 : 0;
}

function gridLayout(ids: string[]): Map<string, Point> {
  const parsed = ids.map((id) => ({ id, ...parseLeveled(id)! }));
  const nodes = [...new Set(parsed.map((p) => p.node))].sort(nodeOrder);
  const levels = [...new Set(parsed.map((p) => p.level))].sort((a, b) => a - b);
  const xStep = (WIDTH - 2 * MARGIN) / Math.max(1, levels.length - 1);
  const yStep = (HEIGHT - 2 * MARGIN) / Math.max(1, nodes.length - 1);
  const positions = new Map<string, Point>();
  for (const p of parsed) {
    positions.set(p.id, {
      x: MARGIN + levels.indexOf(p.level) * xStep,
      y: MARGIN + nodes.indexOf(p.node) * yStep,
    });
  }
  return positions;
}

/** Mulberry32: tiny deterministic PRNG for reproducible layouts. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function forceLayout(ids: string[], quiver: QuiverPayload): Map<string, Point> {
  const rng = mulberry32(ids.length * 2654435761 + 7);
  const positions = new Map<string, Point>();
  const sorted = [...ids].sort();
  // start on a circle with a deterministic jitter
  sorted.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / sorted.length;
    positions.set(id, {
      x: WIDTH / 2 + (WIDTH / 3) * Math.cos(angle) + 10 * rng(),
      y: HEIGHT / 2 + (HEIGHT / 3) * Math.sin(angle) + 10 * rng(),
    });
  });
  const edges = quiver.arrows.map((a) => [a.from, a.to] as const);
  for (let iter = 0; iter < 120; iter += 1) {
    const forces = new Map<string, Point>(sorted.map((id) => [id, { x: 0, y: 0 }]));
    for (let i = 0; i < sorted.length; i += 1) {
      for (let j = i + 1; j < sorted.length; j += 1) {
        const a = positions.get(sorted[i])!;
        const b = positions.get(sorted[j])!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const d2 = Math.max(100, dx * dx + dy * dy);
        const push = 12000 / d2;
        const fa = forces.get(sorted[i])!;
        const fb = forces.get(sorted[j])!;
        const norm = Math.sqrt(d2);
        fa.x += (push * dx) / norm;
        fa.y += (push * dy) / norm;
        fb.x -= (push * dx) / norm;
        fb.y -= (push * dy) / norm;
      }
    }
    for (const [from, to] of edges) {
      const a = positions.get(from);
      const b = positions.get(to);
      if (!a || !b) {
        continue;
      }
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(1, Math.sqrt(dx * dx + dy * dy));
      const pull = (dist - 120) * 0.02;
      const fa = forces.get(from)!;
      const fb = forces.get(to)!;
      fa.x += (pull * dx) / dist;
      fa.y += (pull * dy) / dist;
      fb.x -= (pull * dx) / dist;
      fb.y -= (pull * dy) / dist;
    }
    for (const id of sorted) {
      const p = positions.get(id)!;
      const f = forces.get(id)!;
      p.x = Math.min(WIDTH - MARGIN, Math.max(MARGIN, p.x + f.x));
      p.y = Math.min(HEIGHT - MARGIN, Math.max(MARGIN, p.y + f.y));
    }
  }
  return positions;
}

export function layoutPositions(quiver: QuiverPayload): Map<string, Point> {
  const ids = quiver.vertices.map((v) => v.id);
  if (ids.length > 0 && ids.every((id) => parseLeveled(id) !== null)) {
    return gridLayout(ids);
  }
  return forceLayout(ids, quiver);
}

export const CANVAS = { width: WIDTH, height: HEIGHT };
