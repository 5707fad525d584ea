// SVG rendering of the session state. Pure DOM manipulation driven by the
// store; no mathematics here. Vertices are clickable circles whose colors
// always equal the engine's classification; c-vectors appear as tooltips.

import { CANVAS, layoutPositions } from './layout.js';
import type { SessionStore } from './store.js';
import type { SequenceReport } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function formatCVector(basis: string[], vec: number[] | undefined): string {
  if (!vec) {
    return '';
  }
  const parts = vec
    .map((entry, i) => ({ entry, id: basis[i] }))
    .filter(({ entry }) => entry !== 0)
    .map(({ entry, id }) => {
      const coeff = entry === 1 ? '+' : entry === -1 ? '-' : entry > 0 ? `+${entry}` : `${entry}`;
      return `${coeff}e[${id}]`;
    });
  return parts.length ? parts.join(' ') : '0';
}

export function describeReport(report: SequenceReport | null): string {
  if (!report) {
    return 'no report yet';
  }
  let text = `kind: ${report.kind}`;
  if (report.sigma) {
    const sigma = Object.entries(report.sigma)
      .map(([a, b]) => `${a}→${b}`)
      .join(', ');
    text += `\nσ: ${sigma}`;
  }
  if (report.bps) {
    text += `\nBPS charges: ${report.bps.length}`;
  }
  return text;
}

export function renderApp(store: SessionStore, root: HTMLElement, highlight: Set<string>): void {
  const state = store.state;
  const canvas = root.querySelector('#canvas')!;
  canvas.innerHTML = '';
  if (!state) {
    return;
  }
  const svg = svgEl('svg', {
    viewBox: `0 0 ${CANVAS.width} ${CANVAS.height}`,
    width: '100%',
  });
  const positions = layoutPositions(state.quiver);

  const defs = svgEl('defs', {});
  const marker = svgEl('marker', {
    id: 'arrowhead', viewBox: '0 0 10 10', refX: '9', refY: '5',
    markerWidth: '7', markerHeight: '7', orient: 'auto-start-reverse',
  });
  marker.appendChild(svgEl('path', { d: 'M 0 0 L 10 5 L 0 10 z', fill: '#555' }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  for (const arrow of state.quiver.arrows) {
    const a = positions.get(arrow.from);
    const b = positions.get(arrow.to);
    if (!a || !b) {
      continue;
    }
    // shorten so the arrowhead stops at the circle boundary
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const dist = Math.max(1, Math.sqrt(dx * dx + dy * dy));
    const pad = 22 / dist;
    const line = svgEl('line', {
      x1: `${a.x + dx * pad}`, y1: `${a.y + dy * pad}`,
      x2: `${b.x - dx * pad}`, y2: `${b.y - dy * pad}`,
      stroke: '#555', 'stroke-width': arrow.mult > 1 ? '3' : '1.5',
      'marker-end': 'url(#arrowhead)',
    });
    svg.appendChild(line);
    if (arrow.mult > 1) {
      const label = svgEl('text', {
        x: `${(a.x + b.x) / 2 + 6}`, y: `${(a.y + b.y) / 2 - 6}`, class: 'mult',
      });
      label.textContent = `${arrow.mult}`;
      svg.appendChild(label);
    }
  }

  for (const vertex of state.quiver.vertices) {
    const p = positions.get(vertex.id)!;
    const color = state.colors[vertex.id] ?? 'frozen';
    const group = svgEl('g', { class: 'vertex' });
    const circle = svgEl('circle', {
      cx: `${p.x}`, cy: `${p.y}`, r: '17',
      class: `v-${color}${highlight.has(vertex.id) ? ' v-hint' : ''}`,
      'data-vertex': vertex.id,
    });
    const title = svgEl('title', {});
    title.textContent =
      color === 'frozen'
        ? `${vertex.id} (frozen)`
        : `${vertex.id}: ${color}\nc = ${formatCVector(state.basis, state.c[vertex.id])}`;
    circle.appendChild(title);
    if (color !== 'frozen') {
      circle.addEventListener('click', () => {
        void store.clickMutate(vertex.id);
      });
    }
    group.appendChild(circle);
    const text = svgEl('text', { x: `${p.x}`, y: `${p.y + 4}`, class: 'vlabel' });
    text.textContent = vertex.id;
    group.appendChild(text);
    svg.appendChild(group);
  }
  canvas.appendChild(svg);

  const trail = root.querySelector('#trail')!;
  trail.textContent = state.trail ? state.trail : '(empty trail)';
  const reportPanel = root.querySelector('#report')!;
  reportPanel.textContent = describeReport(store.report);
  const hintLine = root.querySelector('#hint')!;
  hintLine.textContent = store.hint ?? (store.error ? `error: ${store.error}` : '');
  const undoButton = root.querySelector('#undo') as HTMLButtonElement;
  undoButton.disabled = store.pending || !state.can_undo;
  const reportButton = root.querySelector('#ask-report') as HTMLButtonElement;
  reportButton.disabled = store.pending;
  const hintButton = root.querySelector('#hint-green') as HTMLButtonElement;
  hintButton.disabled = store.pending;
}
