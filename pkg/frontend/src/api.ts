// Thin HTTP client for the session API. The fetch function is injected so
// the store can be tested against canned responses.

import type { MutateResult, QuiverPayload, SequenceReport, SessionState } from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async requestJson(method: string, path: string, body?: unknown): Promise<unknown> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : {};
    if (!response.ok && response.status !== 409) {
      const message = (payload as { error?: string }).error ?? `HTTP ${response.status}`;
      throw new ApiError(message, response.status);
    }
    return payload;
  }

  async presets(): Promise<string[]> {
    const payload = (await this.requestJson('GET', '/api/presets')) as { presets: string[] };
    return payload.presets;
  }

  async createSession(body: { preset?: string; quiver?: QuiverPayload }): Promise<SessionState> {
    const payload = (await this.requestJson('POST', '/api/session', body)) as {
      state: SessionState;
    };
    return payload.state;
  }

  async getState(sessionId: string): Promise<SessionState> {
    const payload = (await this.requestJson('GET', `/api/session/${sessionId}`)) as {
      state: SessionState;
    };
    return payload.state;
  }

  async mutate(sessionId: string, vertex: string): Promise<MutateResult> {
    const payload = (await this.requestJson('POST', `/api/session/${sessionId}/mutate`, {
      vertex,
    })) as { state: SessionState; error?: string; hint?: string };
    return { ok: payload.error === undefined, state: payload.state, hint: payload.hint };
  }

  async undo(sessionId: string): Promise<SessionState> {
    const payload = (await this.requestJson('POST', `/api/session/${sessionId}/undo`)) as {
      state: SessionState;
    };
    return payload.state;
  }

  async report(sessionId: string): Promise<SequenceReport> {
    return (await this.requestJson('GET', `/api/session/${sessionId}/report`)) as SequenceReport;
  }

  /** Raw report bytes, for byte-for-byte comparison with the CLI. */
  async reportRaw(sessionId: string): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/api/session/${sessionId}/report`, {
      method: 'GET',
    });
    if (!response.ok) {
      throw new ApiError(`HTTP ${response.status}`, response.status);
    }
    return response.text();
  }
}
