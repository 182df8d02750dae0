/** Hand-built API payloads shaped exactly like server responses. */

import type { DatasetManifest, Scene, SentimentPoint } from "../src/types.js";

export const MANIFEST: DatasetManifest = {
  dataset: "toy",
  step_count: 8,
  step_labels: ["t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8"],
  config: { p: 2, k: 4, theta: 0.2 },
};

export const SENTIMENT_SERIES: SentimentPoint[] = [
  { step: 0, pos: 2.0, neg: 1.0 },
  { step: 1, pos: 0.0, neg: 3.0 },
  { step: 2, pos: 1.5, neg: 0.5 },
  { step: 3, pos: 0.4, neg: 0.0 },
  { step: 4, pos: 2.2, neg: 1.4 },
  { step: 5, pos: 0.9, neg: 2.6 },
  { step: 6, pos: 0.1, neg: 0.2 },
  { step: 7, pos: 1.1, neg: 1.9 },
];

export function treemapScene(day: number): Scene {
  return {
    day,
    view: "treemap",
    theta: 0.2,
    antichain: [
      { node: 2, score: 2.551171 },
      { node: 5, score: 1.276585 },
    ],
    cells: [
      {
        node: 2,
        rect: [0, 0, 0.3333333333333333, 1],
        size: 5,
        color: { hue: "neg_purple", saturation: 1, css: "hsl(275, 100.0%, 55.0%)" },
        tags: [["#storm", 0.61], ["flood", 0.32]],
        words: [
          { text: "#storm", x: 0, y: 0, size: 0.055 },
          { text: "flood", x: 0.23, y: 0, size: 0.044 },
        ],
      },
      {
        node: 5,
        rect: [0.3333333333333333, 0, 0.6666666666666667, 1],
        size: 10,
        color: { hue: "pos_tan", saturation: 0.5, css: "hsl(38, 50.0%, 72.5%)" },
        tags: [["#festival", 0.55]],
        words: [{ text: "#festival", x: 0.3333333333333333, y: 0, size: 0.055 }],
      },
    ],
  };
}

export function listScene(day: number): Scene {
  return {
    day,
    view: "list",
    theta: 0.2,
    antichain: [
      { node: 2, score: 2.551171 },
      { node: 5, score: 1.276585 },
    ],
    items: [
      {
        node: 2,
        users: 5,
        color: { hue: "neg_purple", saturation: 1, css: "hsl(275, 100.0%, 55.0%)" },
        keywords: ["#storm", "flood", "rain"],
      },
      {
        node: 5,
        users: 10,
        color: { hue: "pos_tan", saturation: 0.5, css: "hsl(38, 50.0%, 72.5%)" },
        keywords: ["#festival", "stage"],
      },
    ],
  };
}

export const NODE_DETAIL = {
  step: 1,
  node: 2,
  parent: 6,
  children: [],
  size: 5,
  tags: [["#storm", 0.61], ["flood", 0.32]] as [string, number][],
  sent: { h: -2.55, mu_pc: 0.01, mu_nc: 0.4 },
  centroid_top: [["#storm", 0.61]] as [string, number][],
};
