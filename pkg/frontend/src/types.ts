// Payload types mirroring the engine's JSON schemas. The UI never computes
// mathematics; these are read-only projections of server state.

export interface QuiverVertex {
  id: string;
  frozen: boolean;
}

export interface QuiverArrow {
  from: string;
  to: string;
  mult: number;
}

export interface QuiverPayload {
  vertices: QuiverVertex[];
  arrows: QuiverArrow[];
}

export type VertexColor = 'green' | 'red' | 'frozen';

export interface SessionState {
  id: string;
  quiver: QuiverPayload;
  initial_quiver: QuiverPayload;
  colors: Record<string, VertexColor>;
  basis: string[];
  c: Record<string, number[]>;
  trail: string;
  can_undo: boolean;
}

export interface ReportStep {
  vertex: string;
  color: string;
  source: boolean;
  sink: boolean;
}

export interface SequenceReport {
  kind: 'green' | 'reddening' | 'maximal_green' | 'neither';
  basis: string[];
  steps: ReportStep[];
  sigma?: Record<string, string>;
  bps?: number[][];
}

export interface MutateResult {
  ok: boolean;
  state: SessionState;
  hint?: string;
}
