/** App controller: state transitions, API calls, and full re-renders.
 *
 * Every user interaction maps to exactly one window query; in-flight fetches
 * are aborted when a newer interaction supersedes them, and fetch failures
 * surface as an inline banner without touching the current state.
 */

import { ApiClient } from "./api.js";
import {
  clampWindow,
  DEFAULT_STATE,
  decodeState,
  encodeState,
  isQueryable,
  seriesQuery,
  type ViewState,
  windowQuery,
} from "./state.js";
import {
  renderError,
  renderScentedWidget,
  renderSelection,
  renderWindow,
} from "./render.js";
import type { DatasetManifest, Mode, NodeDetail, Scene, SeriesPoint, ViewKind } from "./types.js";

export interface Host {
  render(html: string): void;
  setHash(hash: string): void;
}

export class App {
  state: ViewState = { ...DEFAULT_STATE };
  manifests: DatasetManifest[] = [];
  series: SeriesPoint[] = [];
  scenes: Scene[] = [];
  selection: NodeDetail | null = null;
  error: string | null = null;
  private inflight: AbortController | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly host: Host,
  ) {}

  get manifest(): DatasetManifest | null {
    return this.manifests.find((m) => m.dataset === this.state.dataset) ?? null;
  }

  get stepCount(): number {
    return this.manifest?.step_count ?? 0;
  }

  get labels(): string[] {
    return this.manifest?.step_labels ?? [];
  }

  async start(initialHash = ""): Promise<void> {
    this.manifests = await this.api.datasets();
    if (initialHash) {
      this.state = decodeState(initialHash, this.state);
    }
    if (!this.manifest && this.manifests.length > 0) {
      this.state.dataset = this.manifests[0].dataset;
    }
    await this.refresh();
  }

  /** Re-fetch series and scenes for the current state, then redraw. */
  async refresh(): Promise<void> {
    this.state = clampWindow(this.state, this.stepCount || this.state.windowLen);
    if (!isQueryable(this.state)) {
      this.draw();
      return;
    }
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const [series, scenes] = await Promise.all([
        this.api.series(this.state.dataset, seriesQuery(this.state), controller.signal),
        this.api.window(this.state.dataset, windowQuery(this.state), controller.signal),
      ]);
      if (this.inflight !== controller) return; // superseded meanwhile
      this.series = series;
      this.scenes = scenes;
      this.error = null;
      this.host.setHash(encodeState(this.state));
    } catch (err) {
      if (controller.signal.aborted) return;
      this.error = err instanceof Error ? err.message : String(err);
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
    this.draw();
  }

  async search(term: string): Promise<void> {
    if (!term) return;
    this.state = { ...this.state, mode: "search", q: term };
    await this.refresh();
  }

  async setMode(mode: Mode): Promise<void> {
    this.state = { ...this.state, mode };
    await this.refresh();
  }

  async setView(view: ViewKind): Promise<void> {
    this.state = { ...this.state, view };
    await this.refresh();
  }

  async setDataset(dataset: string): Promise<void> {
    this.state = { ...this.state, dataset, selStep: null, selNode: null };
    this.selection = null;
    await this.refresh();
  }

  /** Drag target of the scented widget's window bar. */
  async setWindowStart(start: number): Promise<void> {
    const clamped = clampWindow({ ...this.state, windowStart: start }, this.stepCount);
    if (clamped.windowStart === this.state.windowStart) {
      return;
    }
    this.state = clamped;
    await this.refresh();
  }

  /** Clicking a cell or list item selects that cluster. */
  async selectNode(step: number, node: number): Promise<void> {
    try {
      this.selection = await this.api.node(this.state.dataset, step, node);
      this.error = null;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.draw();
  }

  clearSelection(): void {
    this.selection = null;
    this.draw();
  }

  /** Pivot: score every cluster by similarity to the selected one. */
  async findSimilar(): Promise<void> {
    if (!this.selection) return;
    this.state = {
      ...this.state,
      mode: "similar",
      selStep: this.selection.step,
      selNode: this.selection.node,
    };
    await this.refresh();
  }

  /** Back/forward navigation: adopt the URL state and refetch. */
  async applyHash(hash: string): Promise<void> {
    this.state = decodeState(hash, { ...DEFAULT_STATE, dataset: this.state.dataset });
    await this.refresh();
  }

  html(): string {
    const options = this.manifests
      .map((m) => {
        const selected = m.dataset === this.state.dataset ? " selected" : "";
        return `<option value="${m.dataset}"${selected}>${m.dataset}</option>`;
      })
      .join("");
    const modeButtons = (["positive", "negative", "posneg"] as Mode[])
      .map((m) => {
        const active = this.state.mode === m ? " active" : "";
        return `<button data-action="mode" data-mode="${m}" class="mode${active}">${m}</button>`;
      })
      .join("");
    const viewButtons = (["treemap", "list"] as ViewKind[])
      .map((v) => {
        const active = this.state.view === v ? " active" : "";
        return `<button data-action="view" data-view="${v}" class="view${active}">${v}</button>`;
      })
      .join("");
    const labels = this.scenes.map((s) => this.labels[s.day] ?? `day ${s.day}`);
    return (
      `<header class="controls">` +
      `<select data-action="dataset">${options}</select>` +
      `<form data-action="search-form">` +
      `<input name="q" type="search" placeholder="topic keyword or #hashtag" ` +
      `value="${this.state.q.replace(/"/g, "&quot;")}">` +
      `<button type="submit">search</button></form>` +
      modeButtons +
      viewButtons +
      `</header>` +
      renderError(this.error) +
      renderScentedWidget(this.series, this.state.windowStart, this.state.windowLen) +
      renderSelection(this.selection) +
      renderWindow(this.scenes, labels)
    );
  }

  draw(): void {
    this.host.render(this.html());
  }
}
