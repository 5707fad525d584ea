// Session store: the single source of UI truth, itself a pure projection of
// server state. Exactly one request may be in flight per session; clicks
// arriving while pending are dropped (buttons are disabled too, this is the
// belt to that suspender).

import { ApiClient } from './api.js';
import type { QuiverPayload, SequenceReport, SessionState, VertexColor } from './types.js';

export type StoreListener = (store: SessionStore) => void;

export class SessionStore {
  state: SessionState | null = null;
  report: SequenceReport | null = null;
  hint: string | null = null;
  error: string | null = null;
  pending = false;

  private listeners: StoreListener[] = [];

  constructor(private readonly client: ApiClient) {}

  subscribe(listener: StoreListener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener(this);
    }
  }

  private async run(action: () => Promise<void>): Promise<boolean> {
    if (this.pending) {
      return false;
    }
    this.pending = true;
    this.error = null;
    this.emit();
    try {
      await action();
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    } finally {
      this.pending = false;
      this.emit();
    }
    return true;
  }

  async startPreset(name: string): Promise<boolean> {
    return this.run(async () => {
      this.state = await this.client.createSession({ preset: name });
      this.report = null;
      this.hint = null;
    });
  }

  async startQuiver(quiver: QuiverPayload): Promise<boolean> {
    return this.run(async () => {
      this.state = await this.client.createSession({ quiver });
      this.report = null;
      this.hint = null;
    });
  }

  /** Re-project server state from a session id (page reload). */
  async resume(sessionId: string): Promise<boolean> {
    return this.run(async () => {
      this.state = await this.client.getState(sessionId);
      this.report = null;
      this.hint = null;
    });
  }

  async clickMutate(vertex: string): Promise<boolean> {
    if (!this.state) {
      return false;
    }
    const sessionId = this.state.id;
    return this.run(async () => {
      const result = await this.client.mutate(sessionId, vertex);
      this.state = result.state;
      this.hint = result.hint ?? null;
      if (result.ok) {
        this.report = null; // trail changed; stale report must not linger
      }
    });
  }

  async undo(): Promise<boolean> {
    if (!this.state || !this.state.can_undo) {
      return false;
    }
    const sessionId = this.state.id;
    return this.run(async () => {
      this.state = await this.client.undo(sessionId);
      this.report = null;
      this.hint = null;
    });
  }

  async fetchReport(): Promise<boolean> {
    if (!this.state) {
      return false;
    }
    const sessionId = this.state.id;
    return this.run(async () => {
      this.report = await this.client.report(sessionId);
    });
  }

  /** Vertices the engine currently classifies green (the hint highlight). */
  hintGreen(): string[] {
    if (!this.state) {
      return [];
    }
    return Object.entries(this.state.colors)
      .filter(([, color]) => color === 'green')
      .map(([id]) => id)
      .sort();
  }

  colorOf(vertex: string): VertexColor | undefined {
    return this.state?.colors[vertex];
  }

  trailSteps(): string[] {
    const trail = this.state?.trail ?? '';
    return trail ? trail.split(',') : [];
  }
}
