/** Typed client for the storydeck session service.
 *
 * The server is the single source of truth: every mutating call returns the
 * authoritative state (or the story outline), and the client re-renders
 * from that.  Optimistic concurrency uses the session revision number via
 * the If-Match header; on a 409 the client refetches the current revision
 * and retries the request once.
 */

import type {
  ChartSpecDoc,
  ExportFormat,
  FactDto,
  Outline,
  SessionInfo,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorType: string,
    detail: string,
  ) {
    super(`${errorType}: ${detail}`);
  }
}

interface DatasetEnvelope {
  format: "csv" | "json-records";
  content: string;
  id?: string;
  schema?: Record<string, string>;
}

export class ApiClient {
  revision = 0;

  constructor(
    readonly baseUrl: string,
    public sessionId: string | null = null,
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    retry = true,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.sessionId && method !== "GET") {
      headers["If-Match"] = String(this.revision);
    }
    const response = await fetch(this.url(path), {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 409 && retry) {
      const conflict = await response.json();
      this.revision = conflict.revision;
      return this.request<T>(method, path, body, false);
    }
    if (!response.ok) {
      const payload = await response.json().catch(() => ({}));
      throw new ApiError(
        response.status,
        payload.error ?? "HttpError",
        payload.detail ?? response.statusText,
      );
    }
    const result = (await response.json()) as T & { revision?: number };
    if (typeof result.revision === "number") this.revision = result.revision;
    return result;
  }

  async createSession(config?: Record<string, unknown>): Promise<string> {
    const created = await this.request<{ session_id: string }>(
      "POST",
      "/sessions",
      config ? { config } : {},
    );
    this.sessionId = created.session_id;
    return created.session_id;
  }

  getSession(): Promise<SessionInfo> {
    return this.request("GET", `/sessions/${this.sessionId}`);
  }

  async addDatasetCsv(content: string, id?: string, schema?: Record<string, string>): Promise<void> {
    const envelope: DatasetEnvelope = { format: "csv", content, id, schema };
    await this.request("POST", `/sessions/${this.sessionId}/datasets`, envelope);
  }

  addChart(doc: ChartSpecDoc & { id?: string; dataset_id?: string }): Promise<{
    chart_id: string;
    facts: FactDto[];
  }> {
    return this.request("POST", `/sessions/${this.sessionId}/charts`, doc);
  }

  addUserFact(body: {
    chart_id: string;
    fact_type?: string;
    focus?: string[];
    description?: string;
  }): Promise<FactDto> {
    return this.request("POST", `/sessions/${this.sessionId}/facts`, body);
  }

  patchFact(
    factId: string,
    patch: { fact_type?: string; focus?: string[]; description?: string },
  ): Promise<FactDto> {
    return this.request("PATCH", `/sessions/${this.sessionId}/facts/${factId}`, patch);
  }

  selectFact(factId: string): Promise<Outline> {
    return this.request("PUT", `/sessions/${this.sessionId}/story/facts/${factId}`);
  }

  deselectFact(factId: string): Promise<Outline> {
    return this.request("DELETE", `/sessions/${this.sessionId}/story/facts/${factId}`);
  }

  moveSlide(slideId: string, position: number): Promise<Outline> {
    return this.request("POST", `/sessions/${this.sessionId}/story/moves`, {
      op: "move_slide",
      slide_id: slideId,
      position,
    });
  }

  moveFact(factId: string, slideId: string, position: number): Promise<Outline> {
    return this.request("POST", `/sessions/${this.sessionId}/story/moves`, {
      op: "move_fact",
      fact_id: factId,
      slide_id: slideId,
      position,
    });
  }

  splitFact(factId: string): Promise<Outline> {
    return this.request("POST", `/sessions/${this.sessionId}/story/moves`, {
      op: "split",
      fact_id: factId,
    });
  }

  removeFact(factId: string): Promise<Outline> {
    return this.request("POST", `/sessions/${this.sessionId}/story/moves`, {
      op: "remove_fact",
      fact_id: factId,
    });
  }

  setSlideTitle(slideId: string, title: string): Promise<Outline> {
    return this.request(
      "PATCH",
      `/sessions/${this.sessionId}/story/slides/${slideId}/title`,
      { title },
    );
  }

  getStory(): Promise<Outline> {
    return this.request("GET", `/sessions/${this.sessionId}/story`);
  }

  async exportDeck(format: ExportFormat): Promise<string> {
    const response = await fetch(
      this.url(`/sessions/${this.sessionId}/export?format=${format}`),
      { method: "POST" },
    );
    if (!response.ok) {
      const payload = await response.json().catch(() => ({}));
      throw new ApiError(
        response.status,
        payload.error ?? "HttpError",
        payload.detail ?? response.statusText,
      );
    }
    return response.text();
  }
}
