/** Wire types mirroring the crowdlens HTTP API payloads. */

export type Mode = "search" | "similar" | "positive" | "negative" | "posneg";

export type ViewKind = "treemap" | "list";

export interface DatasetManifest {
  dataset: string;
  step_count: number;
  step_labels: string[];
  config: Record<string, unknown>;
}

export interface TopicPoint {
  step: number;
  users: number;
}

export interface SentimentPoint {
  step: number;
  pos: number;
  neg: number;
}

export type SeriesPoint = TopicPoint | SentimentPoint;

export function isSentimentPoint(p: SeriesPoint): p is SentimentPoint {
  return (p as SentimentPoint).pos !== undefined;
}

export interface SceneColor {
  hue: string;
  saturation: number;
  css: string;
}

export interface AntichainEntry {
  node: number;
  score: number;
}

export interface WordPlacement {
  text: string;
  x: number;
  y: number;
  size: number;
}

export interface TreemapCell {
  node: number;
  rect: [number, number, number, number];
  size: number;
  color: SceneColor;
  tags: [string, number][];
  words: WordPlacement[];
  degenerate?: boolean;
  overflow?: boolean;
}

export interface ListSceneItem {
  node: number;
  users: number;
  color: SceneColor;
  keywords: string[];
}

export interface Scene {
  day: number;
  view: ViewKind;
  theta?: number;
  antichain: AntichainEntry[];
  cells?: TreemapCell[];
  items?: ListSceneItem[];
}

export interface NodeSentiment {
  h: number;
  mu_pc: number;
  mu_nc: number;
}

export interface NodeDetail {
  step: number;
  node: number;
  parent: number | null;
  children: number[];
  size: number;
  tags: [string, number][];
  sent: NodeSentiment | null;
  centroid_top: [string, number][];
}
