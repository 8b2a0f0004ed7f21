import { chartQuery, type ViewState } from "./state.js";
import type { ChartDoc, ModelDoc, PatternsDoc, SessionListDoc } from "./types.js";

/**
 * Typed client over the gateway API.  One in-flight request per panel:
 * starting a new request for the same panel aborts the previous one, so the
 * latest state always wins.
 */
export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async get<T>(panel: string, path: string): Promise<T> {
    this.controllers.get(panel)?.abort();
    const controller = new AbortController();
    this.controllers.set(panel, controller);
    const response = await this.fetchFn(this.base + path, { signal: controller.signal });
    if (!response.ok) {
      throw new Error(`GET ${path} failed: ${response.status}`);
    }
    return (await response.json()) as T;
  }

  listSessions(): Promise<SessionListDoc> {
    return this.get("sessions", "/sessions");
  }

  getChart(state: ViewState): Promise<ChartDoc> {
    if (!state.session) return Promise.reject(new Error("no session selected"));
    return this.get("chart", `/sessions/${state.session}/chart?${chartQuery(state)}`);
  }

  getModelAt(session: string, timeMs: number | null): Promise<ModelDoc> {
    const query = timeMs === null ? "" : `?time=${timeMs}`;
    return this.get("model", `/sessions/${session}/model${query}`);
  }

  getPatterns(session: string): Promise<PatternsDoc> {
    return this.get("patterns", `/sessions/${session}/patterns`);
  }
}
