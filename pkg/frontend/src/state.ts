import { SORTS, type SortChoice } from "./types.js";

/** Everything the view needs; round-trips through the URL hash. */
export interface ViewState {
  session: string | null;
  sort: SortChoice;
  hideTypes: Set<string>;
  hideOps: Set<string>;
  hideKinds: Set<string>;
  hideDeleted: boolean;
  /** Replay cursor as epoch ms; null = final model. */
  replayPosition: number | null;
}

export function initialState(): ViewState {
  return {
    session: null,
    sort: "first_event",
    hideTypes: new Set(),
    hideOps: new Set(),
    hideKinds: new Set(),
    hideDeleted: false,
    replayPosition: null,
  };
}

function setParam(params: URLSearchParams, key: string, values: Set<string>): void {
  if (values.size > 0) {
    params.set(key, [...values].sort().join(","));
  }
}

/** Encode for location.hash; keys are the API's query vocabulary. */
export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.session) params.set("session", state.session);
  if (state.sort !== "first_event") params.set("sort", state.sort);
  setParam(params, "hide_types", state.hideTypes);
  setParam(params, "hide_ops", state.hideOps);
  setParam(params, "hide_kinds", state.hideKinds);
  if (state.hideDeleted) params.set("hide_deleted", "1");
  if (state.replayPosition !== null) params.set("replay", String(state.replayPosition));
  return params.toString();
}

function splitParam(params: URLSearchParams, key: string): Set<string> {
  const raw = params.get(key);
  return new Set(raw ? raw.split(",").filter((s) => s.length > 0) : []);
}

export function decodeState(encoded: string): ViewState {
  const params = new URLSearchParams(encoded.replace(/^#/, ""));
  const sortRaw = params.get("sort") ?? "first_event";
  const sort = (SORTS as readonly string[]).includes(sortRaw)
    ? (sortRaw as SortChoice)
    : "first_event";
  const replayRaw = params.get("replay");
  return {
    session: params.get("session"),
    sort,
    hideTypes: splitParam(params, "hide_types"),
    hideOps: splitParam(params, "hide_ops"),
    hideKinds: splitParam(params, "hide_kinds"),
    hideDeleted: params.get("hide_deleted") === "1",
    replayPosition: replayRaw === null ? null : Number(replayRaw),
  };
}

/** The chart query for a state; every state change maps to exactly one. */
export function chartQuery(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("sort", state.sort);
  setParam(params, "hide_types", state.hideTypes);
  setParam(params, "hide_ops", state.hideOps);
  setParam(params, "hide_kinds", state.hideKinds);
  if (state.hideDeleted) params.set("hide_elements_with", "delete");
  return params.toString();
}

export function statesEqual(a: ViewState, b: ViewState): boolean {
  return encodeState(a) === encodeState(b);
}

export function cloneState(state: ViewState): ViewState {
  return {
    ...state,
    hideTypes: new Set(state.hideTypes),
    hideOps: new Set(state.hideOps),
    hideKinds: new Set(state.hideKinds),
  };
}
