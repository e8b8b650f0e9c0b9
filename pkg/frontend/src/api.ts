/** Thin typed client for the session HTTP API. */

import type { Action, GraphSnapshot, MeshInfo } from "./types.js";

export interface CommandOutcome {
  ok: boolean;
  status: number;
  created?: number;
  error?: { code: string; message: string; hint?: string };
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  private base: string;
  private fetchFn: FetchLike;
  sessionId = "";

  constructor(base = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async createSession(): Promise<string> {
    const response = await this.fetchFn(this.url("/sessions"), { method: "POST" });
    const body = await response.json();
    this.sessionId = body.session_id;
    return this.sessionId;
  }

  async loadDocument(document: string): Promise<CommandOutcome> {
    const response = await this.fetchFn(
      this.url(`/sessions/${this.sessionId}/document`),
      { method: "PUT", body: document },
    );
    return this.outcome(response);
  }

  async sendPhrase(phrase: string): Promise<CommandOutcome> {
    return this.command({ phrase });
  }

  async sendAction(action: Action): Promise<CommandOutcome> {
    return this.command({ action });
  }

  private async command(body: object): Promise<CommandOutcome> {
    const response = await this.fetchFn(
      this.url(`/sessions/${this.sessionId}/commands`),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    return this.outcome(response);
  }

  private async outcome(response: Response): Promise<CommandOutcome> {
    const body = await response.json().catch(() => ({}));
    if (response.ok) {
      return { ok: true, status: response.status, created: body.created };
    }
    return { ok: false, status: response.status, error: body.error };
  }

  async graph(): Promise<GraphSnapshot> {
    const response = await this.fetchFn(this.url(`/sessions/${this.sessionId}/graph`));
    return response.json();
  }

  async geometry(): Promise<MeshInfo[]> {
    const response = await this.fetchFn(this.url(`/sessions/${this.sessionId}/geometry`));
    const body = await response.json();
    return body.meshes;
  }

  async grammar(): Promise<{ phrases: string[]; component_types: string[] }> {
    const response = await this.fetchFn(this.url(`/sessions/${this.sessionId}/grammar`));
    return response.json();
  }

  eventsUrl(): string {
    return this.url(`/sessions/${this.sessionId}/events`);
  }
}
