import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App, type Host } from "../src/app.js";
import {
  MANIFEST,
  NODE_DETAIL,
  SENTIMENT_SERIES,
  listScene,
  treemapScene,
} from "./fixtures.js";

interface Call {
  url: string;
  signal?: AbortSignal;
}

function makeApp(overrides: Record<string, unknown> = {}) {
  const calls: Call[] = [];
  const fetchStub = async (url: string, signal?: AbortSignal) => {
    calls.push({ url, signal });
    for (const [prefix, value] of Object.entries(overrides)) {
      if (url.includes(prefix)) {
        if (value instanceof Error) throw value;
        return typeof value === "function" ? value(url) : value;
      }
    }
    if (overrides.__breakWindows && url.includes("/window")) {
      throw new Error("backend down");
    }
    if (url.endsWith("/datasets")) return [MANIFEST];
    if (url.includes("/series")) return SENTIMENT_SERIES;
    if (url.includes("/window")) {
      const params = new URLSearchParams(url.split("?")[1]);
      const start = Number(params.get("window_start") ?? "0");
      const len = Number(params.get("window_len") ?? "6");
      const view = params.get("view") ?? "treemap";
      return Array.from({ length: len }, (_, i) =>
        view === "list" ? listScene(start + i) : treemapScene(start + i),
      );
    }
    if (url.includes("/node/")) return NODE_DETAIL;
    throw new Error(`unexpected url ${url}`);
  };
  const frames: string[] = [];
  const hashes: string[] = [];
  const host: Host = {
    render: (html) => frames.push(html),
    setHash: (h) => hashes.push(h),
  };
  const app = new App(new ApiClient("", fetchStub), host);
  return { app, calls, frames, hashes };
}

describe("startup", () => {
  it("renders six panels for the default window length", async () => {
    const { app, frames } = makeApp();
    await app.start();
    const html = frames.at(-1)!;
    expect(html.match(/<figure class="panel"/g)).toHaveLength(6);
    expect(html).toContain("svg class=\"scented");
  });

  it("adopts state from the initial hash", async () => {
    const { app, calls } = makeApp();
    await app.start("#ds=toy&mode=negative&ws=2&view=list");
    expect(app.state.mode).toBe("negative");
    expect(app.state.windowStart).toBe(2);
    const windowCall = calls.find((c) => c.url.includes("/window"));
    expect(windowCall!.url).toContain("mode=negative");
    expect(windowCall!.url).toContain("view=list");
  });

  it("publishes the state to the url hash", async () => {
    const { app, hashes } = makeApp();
    await app.start();
    expect(hashes.at(-1)).toContain("ds=toy");
    expect(hashes.at(-1)).toContain("mode=posneg");
  });
});

describe("find similar round-trip", () => {
  it("selects a cluster, pivots to similar mode, and re-renders", async () => {
    const { app, calls, frames } = makeApp();
    await app.start();

    await app.selectNode(1, 2);
    expect(calls.some((c) => c.url.includes("/node/1/2"))).toBe(true);
    expect(frames.at(-1)).toContain('data-action="find-similar"');

    await app.findSimilar();
    expect(app.state.mode).toBe("similar");
    const similarCall = calls.filter((c) => c.url.includes("/window")).at(-1)!;
    expect(similarCall.url).toContain("mode=similar");
    expect(similarCall.url).toContain("sel_step=1");
    expect(similarCall.url).toContain("sel_node=2");
    expect(frames.at(-1)).toContain("figure class=\"panel\"");
  });
});

describe("view and window interactions", () => {
  it("toggling the view refetches the same antichain as a list", async () => {
    const { app, calls, frames } = makeApp();
    await app.start();
    await app.setView("list");
    const listCall = calls.filter((c) => c.url.includes("/window")).at(-1)!;
    expect(listCall.url).toContain("view=list");
    expect(frames.at(-1)).toContain('ol class="cluster-list"');
    expect(frames.at(-1)).toContain(">U: 5<");
  });

  it("dragging the window clamps into range and refetches", async () => {
    const { app, calls } = makeApp();
    await app.start();
    await app.setWindowStart(77);
    expect(app.state.windowStart).toBe(MANIFEST.step_count - 6);
    const last = calls.filter((c) => c.url.includes("/window")).at(-1)!;
    expect(last.url).toContain(`window_start=${MANIFEST.step_count - 6}`);
  });

  it("search submits a search-mode query", async () => {
    const { app, calls } = makeApp();
    await app.start();
    await app.search("#dnc2012");
    const last = calls.filter((c) => c.url.includes("/window")).at(-1)!;
    expect(last.url).toContain("mode=search");
    expect(last.url).toContain("q=%23dnc2012");
  });
});

describe("failure handling", () => {
  it("shows an inline banner and keeps the display on fetch failure", async () => {
    const overrides: Record<string, unknown> = {};
    const { app, frames } = makeApp(overrides);
    await app.start();
    const before = app.state;
    const panelsBefore = frames.at(-1)!.match(/<figure class="panel"/g)!.length;

    overrides.__breakWindows = true;
    await app.setWindowStart(1);
    expect(app.state.windowStart).toBe(1); // the interaction itself applies
    const html = frames.at(-1)!;
    expect(html).toContain("error-banner");
    // previous scenes still shown: the display content is unchanged
    expect(html.match(/<figure class="panel"/g)).toHaveLength(panelsBefore);
    expect(before.mode).toBe(app.state.mode);
  });

  it("aborts a superseded fetch", async () => {
    let resolveSlow: ((v: unknown) => void) | null = null;
    const { app, calls } = makeApp({
      "window_start=1": () =>
        new Promise((resolve) => {
          resolveSlow = resolve;
        }),
    });
    await app.start();
    const slow = app.setWindowStart(1);
    const fast = app.setWindowStart(2);
    await fast;
    const slowCall = calls.find((c) => c.url.includes("window_start=1"));
    expect(slowCall!.signal!.aborted).toBe(true);
    resolveSlow?.([]);
    await slow;
    // the superseding request's scenes won
    expect(app.scenes[0]!.day).toBe(2);
  });
});
