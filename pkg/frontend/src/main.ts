/** Browser bootstrap: DOM wiring for the App controller. */

import { ApiClient } from "./api.js";
import { App, type Host } from "./app.js";
import { WIDGET_W } from "./render.js";

function boot(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");

  const host: Host = {
    render(html) {
      root.innerHTML = html;
    },
    setHash(hash) {
      if (window.location.hash.replace(/^#/, "") !== hash) {
        history.pushState(null, "", `#${hash}`);
      }
    },
  };
  const app = new App(new ApiClient(""), host);

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action],[data-node]");
    if (!target) return;
    const action = target.dataset.action;
    if (action === "mode" && target.dataset.mode) {
      void app.setMode(target.dataset.mode as never);
    } else if (action === "view" && target.dataset.view) {
      void app.setView(target.dataset.view as never);
    } else if (action === "find-similar") {
      void app.findSimilar();
    } else if (action === "clear-selection") {
      app.clearSelection();
    } else if (target.dataset.node !== undefined && target.dataset.step !== undefined) {
      void app.selectNode(Number(target.dataset.step), Number(target.dataset.node));
    }
  });

  root.addEventListener("submit", (event) => {
    const form = event.target as HTMLFormElement;
    if (form.dataset.action === "search-form") {
      event.preventDefault();
      const input = form.querySelector<HTMLInputElement>("input[name=q]");
      if (input) void app.search(input.value.trim());
    }
  });

  root.addEventListener("change", (event) => {
    const select = event.target as HTMLSelectElement;
    if (select.dataset.action === "dataset") {
      void app.setDataset(select.value);
    }
  });

  // drag the black window bar across the scented widget
  let dragging = false;
  const stepAt = (event: PointerEvent): number => {
    const svg = root.querySelector<SVGSVGElement>("svg.scented");
    if (!svg) return 0;
    const steps = Number(svg.dataset.steps ?? "1");
    const rect = svg.getBoundingClientRect();
    const frac = (event.clientX - rect.left) / (rect.width || WIDGET_W);
    return Math.floor(frac * steps - app.state.windowLen / 2);
  };
  root.addEventListener("pointerdown", (event) => {
    const el = event.target as HTMLElement;
    if (el.closest("svg.scented")) {
      dragging = true;
      void app.setWindowStart(stepAt(event as PointerEvent));
    }
  });
  window.addEventListener("pointermove", (event) => {
    if (dragging) void app.setWindowStart(stepAt(event));
  });
  window.addEventListener("pointerup", () => {
    dragging = false;
  });

  window.addEventListener("hashchange", () => {
    void app.applyHash(window.location.hash);
  });

  void app.start(window.location.hash);
}

boot();
