/** String renderers: server scenes in, SVG/HTML markup out.
 *
 * No scores, antichains, or geometry are computed here; every coordinate,
 * color, and ordering is taken verbatim from the scene JSON (treemap panels
 * use a unit viewBox so rect attributes are the raw server numbers).
 */

import type { Scene, SeriesPoint, NodeDetail } from "./types.js";
import { isSentimentPoint } from "./types.js";

export const WIDGET_W = 720;
export const WIDGET_H = 90;

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Scented navigation widget: per-day magnitude bars plus the window bar.
 *
 * Topic modes show one gray stream of user counts; sentiment modes show a
 * tan (positive) and a purple (negative) stream. Raw values ride along as
 * data attributes so the rendering is testable against the series JSON.
 */
export function renderScentedWidget(
  series: SeriesPoint[],
  windowStart: number,
  windowLen: number,
  width = WIDGET_W,
  height = WIDGET_H,
): string {
  const n = series.length;
  if (n === 0) return `<svg class="scented" width="${width}" height="${height}"></svg>`;
  const plotH = height - 14;
  const colW = width / n;
  const sentiment = series.some(isSentimentPoint);
  let peak = 0;
  for (const p of series) {
    peak = Math.max(peak, isSentimentPoint(p) ? Math.max(p.pos, p.neg) : p.users);
  }
  const scale = peak > 0 ? plotH / peak : 0;

  const bars: string[] = [];
  series.forEach((p, i) => {
    const x = i * colW;
    if (isSentimentPoint(p)) {
      const posH = p.pos * scale;
      const negH = p.neg * scale;
      bars.push(
        `<rect class="stream-pos" data-step="${p.step}" data-pos="${p.pos}" ` +
          `x="${x}" y="${plotH - posH}" width="${colW / 2}" height="${posH}"/>`,
        `<rect class="stream-neg" data-step="${p.step}" data-neg="${p.neg}" ` +
          `x="${x + colW / 2}" y="${plotH - negH}" width="${colW / 2}" height="${negH}"/>`,
      );
    } else {
      const h = p.users * scale;
      bars.push(
        `<rect class="stream-users" data-step="${p.step}" data-users="${p.users}" ` +
          `x="${x}" y="${plotH - h}" width="${colW}" height="${h}"/>`,
      );
    }
  });

  const winX = windowStart * colW;
  const winW = windowLen * colW;
  const windowBar =
    `<rect class="window-bar" data-role="window" x="${winX}" y="${plotH + 4}" ` +
    `width="${winW}" height="8"/>`;
  return (
    `<svg class="scented ${sentiment ? "sentiment" : "topic"}" width="${width}" ` +
    `height="${height}" data-steps="${n}">` +
    bars.join("") +
    windowBar +
    `</svg>`
  );
}

/** One day as a nested tag-cloud treemap (unit viewBox, raw coordinates). */
export function renderTreemapPanel(scene: Scene, label: string): string {
  const cells = scene.cells ?? [];
  const parts: string[] = [];
  for (const cell of cells) {
    const [x, y, w, h] = cell.rect;
    const tags = cell.tags.map(([t]) => t).join(" ");
    const score = scene.antichain.find((a) => a.node === cell.node)?.score ?? 0;
    const title = `U: ${cell.size} | score ${score} | ${tags}`;
    parts.push(
      `<rect class="cell" data-node="${cell.node}" data-step="${scene.day}" ` +
        `x="${x}" y="${y}" width="${w}" height="${h}" ` +
        `fill="${cell.color.css}"><title>${escapeHtml(title)}</title></rect>`,
    );
  }
  for (const cell of cells) {
    for (const word of cell.words) {
      parts.push(
        `<text class="tag" x="${word.x}" y="${word.y + word.size}" ` +
          `font-size="${word.size}">${escapeHtml(word.text)}</text>`,
      );
    }
  }
  return (
    `<figure class="panel" data-day="${scene.day}">` +
    `<figcaption>${escapeHtml(label)}</figcaption>` +
    `<svg class="treemap" viewBox="0 0 1 1" preserveAspectRatio="none">` +
    parts.join("") +
    `</svg></figure>`
  );
}

/** One day as the list equivalent: score order, uniform words, user counts. */
export function renderListPanel(scene: Scene, label: string): string {
  const items = (scene.items ?? [])
    .map((item) => {
      const words = item.keywords.map((k) => escapeHtml(k)).join(" ");
      return (
        `<li class="cluster" data-node="${item.node}" data-step="${scene.day}" ` +
        `style="background:${item.color.css}">` +
        `<span class="users">U: ${item.users}</span>` +
        `<span class="keywords">${words}</span></li>`
      );
    })
    .join("");
  return (
    `<figure class="panel" data-day="${scene.day}">` +
    `<figcaption>${escapeHtml(label)}</figcaption>` +
    `<ol class="cluster-list">${items}</ol></figure>`
  );
}

export function renderDayPanel(scene: Scene, label: string): string {
  return scene.view === "treemap"
    ? renderTreemapPanel(scene, label)
    : renderListPanel(scene, label);
}

/** The small-multiples strip: one panel per day of the window. */
export function renderWindow(scenes: Scene[], labels: string[]): string {
  if (scenes.length === 0) {
    return `<p class="placeholder">no matching discussions</p>`;
  }
  const panels = scenes
    .map((scene, i) => renderDayPanel(scene, labels[i] ?? `day ${scene.day}`))
    .join("");
  return `<div class="multiples">${panels}</div>`;
}

/** Selected-cluster summary with the similar-cluster pivot button. */
export function renderSelection(detail: NodeDetail | null): string {
  if (!detail) return "";
  const tags = detail.tags.slice(0, 10).map(([t]) => escapeHtml(t)).join(" ");
  const h = detail.sent ? ` | h ${detail.sent.h.toFixed(2)}` : "";
  return (
    `<div class="selection" data-step="${detail.step}" data-node="${detail.node}">` +
    `<span>day ${detail.step} / cluster ${detail.node} | U: ${detail.size}${h} | ${tags}</span>` +
    `<button data-action="find-similar" data-step="${detail.step}" ` +
    `data-node="${detail.node}">find similar</button>` +
    `<button data-action="clear-selection">clear</button></div>`
  );
}

export function renderError(message: string | null): string {
  if (!message) return "";
  return `<div class="error-banner">${escapeHtml(message)}</div>`;
}
