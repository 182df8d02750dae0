/** View state: one struct that always mirrors a valid window query.
 *
 * The state round-trips through the URL hash so every view is deep-linkable
 * and the back button replays exploration steps.
 */

import type { Mode, ViewKind } from "./types.js";

export interface ViewState {
  dataset: string;
  mode: Mode;
  q: string;
  selStep: number | null;
  selNode: number | null;
  windowStart: number;
  windowLen: number;
  view: ViewKind;
  wordCap: number;
  theta: number | null;
}

export const DEFAULT_STATE: ViewState = {
  dataset: "",
  mode: "posneg",
  q: "",
  selStep: null,
  selNode: null,
  windowStart: 0,
  windowLen: 6,
  view: "treemap",
  wordCap: 10,
  theta: null,
};

const MODES: Mode[] = ["search", "similar", "positive", "negative", "posneg"];

export function encodeState(s: ViewState): string {
  const params = new URLSearchParams();
  params.set("ds", s.dataset);
  params.set("mode", s.mode);
  if (s.mode === "search" && s.q) params.set("q", s.q);
  if (s.mode === "similar" && s.selStep !== null && s.selNode !== null) {
    params.set("sel_step", String(s.selStep));
    params.set("sel_node", String(s.selNode));
  }
  params.set("ws", String(s.windowStart));
  if (s.windowLen !== DEFAULT_STATE.windowLen) params.set("wl", String(s.windowLen));
  params.set("view", s.view);
  if (s.wordCap !== DEFAULT_STATE.wordCap) params.set("cap", String(s.wordCap));
  if (s.theta !== null) params.set("theta", String(s.theta));
  return params.toString();
}

export function decodeState(hash: string, base: ViewState = DEFAULT_STATE): ViewState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const state: ViewState = { ...base };
  const ds = params.get("ds");
  if (ds) state.dataset = ds;
  const mode = params.get("mode");
  if (mode && (MODES as string[]).includes(mode)) state.mode = mode as Mode;
  state.q = params.get("q") ?? state.q;
  const selStep = params.get("sel_step");
  const selNode = params.get("sel_node");
  if (selStep !== null && selNode !== null) {
    state.selStep = Number(selStep);
    state.selNode = Number(selNode);
  }
  const ws = params.get("ws");
  if (ws !== null && Number.isFinite(Number(ws))) state.windowStart = Number(ws);
  const wl = params.get("wl");
  if (wl !== null && Number(wl) >= 1) state.windowLen = Number(wl);
  const view = params.get("view");
  if (view === "treemap" || view === "list") state.view = view;
  const cap = params.get("cap");
  if (cap !== null && Number(cap) >= 1) state.wordCap = Number(cap);
  const theta = params.get("theta");
  if (theta !== null && Number.isFinite(Number(theta))) state.theta = Number(theta);
  return state;
}

/** Clamp the window into [0, stepCount - windowLen]. */
export function clampWindow(s: ViewState, stepCount: number): ViewState {
  const len = Math.max(1, Math.min(s.windowLen, stepCount));
  const maxStart = Math.max(0, stepCount - len);
  const start = Math.max(0, Math.min(s.windowStart, maxStart));
  return { ...s, windowStart: start, windowLen: len };
}

/** Query string for GET /datasets/{id}/window. */
export function windowQuery(s: ViewState): string {
  const params = new URLSearchParams();
  params.set("mode", s.mode);
  if (s.mode === "search") params.set("q", s.q);
  if (s.mode === "similar") {
    params.set("sel_step", String(s.selStep));
    params.set("sel_node", String(s.selNode));
  }
  params.set("window_start", String(s.windowStart));
  params.set("window_len", String(s.windowLen));
  params.set("view", s.view);
  params.set("word_cap", String(s.wordCap));
  if (s.theta !== null) params.set("theta", String(s.theta));
  return params.toString();
}

/** Query string for GET /datasets/{id}/series (whole timeline). */
export function seriesQuery(s: ViewState): string {
  const params = new URLSearchParams();
  params.set("mode", s.mode);
  if (s.mode === "search") params.set("q", s.q);
  if (s.mode === "similar") {
    params.set("sel_step", String(s.selStep));
    params.set("sel_node", String(s.selNode));
  }
  if (s.theta !== null) params.set("theta", String(s.theta));
  return params.toString();
}

/** A state is fetchable when its mode has the parameters it needs. */
export function isQueryable(s: ViewState): boolean {
  if (!s.dataset) return false;
  if (s.mode === "search") return s.q.length > 0;
  if (s.mode === "similar") return s.selStep !== null && s.selNode !== null;
  return true;
}
