"""Walkthrough: squarified treemaps, tag clouds, and the list equivalent.

The same antichain renders two ways: a nested treemap whose cell areas are
user counts (tag cloud inside each cell, saturation = score) and a list
ordered by score with explicit "U: <n>" user counts.
"""

from pathlib import Path

from crowdlens.layout import (Rect, build_list_scene, build_treemap_scene,
                              color_for, node_colors, squarify, tag_cloud)
from crowdlens.svg import window_svg

# squarify alone: areas proportional to weights, near-square cells
weights = [6, 6, 4, 3, 2, 2, 1]
for w, r in zip(weights, squarify(weights, Rect(0, 0, 6, 4))):
    aspect = max(r.w / r.h, r.h / r.w)
    print(f"weight {w}: {r.w:.2f} x {r.h:.2f} at ({r.x:.2f},{r.y:.2f}) "
          f"aspect {aspect:.2f}")

# a day's antichain as a full scene
from demos_common import toy_day  # noqa: E402  (shared fixture-style helper)
from crowdlens.explore import ScoredTree, find_max_antichain  # noqa: E402

hier, scores, h_by_node = toy_day()
antichain = find_max_antichain(ScoredTree(hier, scores, theta=0.2))
ordered = antichain.ordered()
print(f"\nantichain at theta=0.2: {sorted(antichain.node_ids)}")
window_max = max(abs(h_by_node[n]) for n in ordered)
colors = node_colors(hier, ordered, "posneg", scores, h_by_node, window_max)

treemap = build_treemap_scene(hier, ordered, scores, colors, step=0,
                              word_cap=10, theta=0.2)
listing = build_list_scene(hier, ordered, scores, colors, step=0,
                           word_cap=10, theta=0.2)

print("\ntreemap cells:")
for cell in treemap["cells"]:
    x, y, w, h = cell["rect"]
    print(f"  node {cell['node']}: {cell['size']} users, "
          f"{cell['color']['css']}, {len(cell['words'])} words placed")

print("\nlist items (score order):")
for item in listing["items"]:
    print(f"  U: {item['users']:<4} {item['color']['hue']:<13} "
          f"{' '.join(item['keywords'][:5])}")

out = Path("demo_output")
out.mkdir(exist_ok=True)
(out / "toy_day.svg").write_text(window_svg([treemap], labels=["toy day"]))
print(f"\nwrote {out / 'toy_day.svg'}")
