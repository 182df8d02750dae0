/** Thin typed client for the crowdlens HTTP API. */

import type { DatasetManifest, NodeDetail, Scene, SeriesPoint } from "./types.js";

export type FetchJson = (url: string, signal?: AbortSignal) => Promise<unknown>;

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(`API ${status}: ${detail}`);
  }
}

export const fetchJson: FetchJson = async (url, signal) => {
  const response = await fetch(url, { signal });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response.json();
};

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly get: FetchJson = fetchJson,
  ) {}

  datasets(signal?: AbortSignal): Promise<DatasetManifest[]> {
    return this.get(`${this.base}/datasets`, signal) as Promise<DatasetManifest[]>;
  }

  series(dataset: string, query: string, signal?: AbortSignal): Promise<SeriesPoint[]> {
    return this.get(
      `${this.base}/datasets/${encodeURIComponent(dataset)}/series?${query}`,
      signal,
    ) as Promise<SeriesPoint[]>;
  }

  window(dataset: string, query: string, signal?: AbortSignal): Promise<Scene[]> {
    return this.get(
      `${this.base}/datasets/${encodeURIComponent(dataset)}/window?${query}`,
      signal,
    ) as Promise<Scene[]>;
  }

  node(dataset: string, step: number, node: number, signal?: AbortSignal): Promise<NodeDetail> {
    return this.get(
      `${this.base}/datasets/${encodeURIComponent(dataset)}/node/${step}/${node}`,
      signal,
    ) as Promise<NodeDetail>;
  }
}
