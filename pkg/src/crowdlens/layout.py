"""Display geometry: squarified treemaps, tag clouds, colors, and list views.

An ordered antichain becomes either a nested treemap (cell area proportional
to cluster user count, tag cloud inside each cell) or the equivalent list
(score order, uniform word size, explicit user counts). Match relevance is
drawn in yellow with saturation encoding the score; sentiment uses tan for
positive, purple for negative, and white for neutral, with saturation scaled
by the displayed window's strongest score.
"""

from dataclasses import dataclass, field

HUE_MATCH_YELLOW = 55
HUE_POS_TAN = 38
HUE_NEG_PURPLE = 275

FONT_MIN = 0.022
FONT_MAX = 0.055
CHAR_WIDTH_RATIO = 0.55
LINE_SPACING = 1.25


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if self.w < 0 or self.h < 0:
            raise ValueError("rect extents must be non-negative")

    @property
    def area(self):
        return self.w * self.h

    def as_list(self):
        return [self.x, self.y, self.w, self.h]


UNIT_RECT = Rect(0.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class Color:
    hue_class: str  # match_yellow | pos_tan | neg_purple | neutral_white
    saturation: float

    def css(self):
        """hsl() string; lightness slides 0.9 -> 0.55 as saturation rises."""
        hues = {"match_yellow": HUE_MATCH_YELLOW, "pos_tan": HUE_POS_TAN,
                "neg_purple": HUE_NEG_PURPLE, "neutral_white": 0}
        light = 0.9 - 0.35 * self.saturation
        return (f"hsl({hues[self.hue_class]}, {self.saturation * 100:.1f}%, "
                f"{light * 100:.1f}%)")

    def as_dict(self):
        return {"hue": self.hue_class, "saturation": self.saturation,
                "css": self.css()}


def color_for(score, mode_kind, day_max_abs_h=1.0):
    """Color for a node's score under the given mode.

    Match modes map the score (already in [0, 1]) straight to yellow
    saturation. Sentiment modes take the raw happiness index: sign picks the
    hue, saturation is |h| over the displayed window's maximum |h|.
    """
    if mode_kind in ("search", "similar"):
        return Color("match_yellow", min(1.0, max(0.0, score)))
    if score == 0.0 or day_max_abs_h <= 0.0:
        return Color("neutral_white", 0.0)
    sat = min(1.0, abs(score) / day_max_abs_h)
    return Color("pos_tan" if score > 0 else "neg_purple", sat)


def squarify(weights, rect):
    """Squarified treemap layout of positive weights inside rect.

    Returns one Rect per weight, in input order, tiling rect with areas
    proportional to the weights. Rows are built over the weights in
    non-increasing order, laid along the shorter side of the remaining
    rectangle, per the classic squarified heuristic.
    """
    if len(weights) == 0:
        return []
    total = 0.0
    for w in weights:
        if w <= 0:
            raise ValueError("squarify weights must be positive")
        total += w
    if rect.area <= 0:
        raise ValueError("squarify needs a rect with positive area")

    order = sorted(range(len(weights)), key=lambda i: -weights[i])
    areas = [weights[i] / total * rect.area for i in order]

    out = [None] * len(weights)
    remaining = rect
    row = []  # indices into order/areas
    row_sum = 0.0
    i = 0
    while i < len(areas):
        side = min(remaining.w, remaining.h)
        a = areas[i]
        if not row or _worst(row_sum + a, max(_row_max(row, areas), a),
                             min(_row_min(row, areas), a), side) \
                <= _worst(row_sum, _row_max(row, areas), _row_min(row, areas), side):
            row.append(i)
            row_sum += a
            i += 1
        else:
            remaining = _lay_row(row, areas, row_sum, remaining, out, order,
                                 final=False)
            row = []
            row_sum = 0.0
    _lay_row(row, areas, row_sum, remaining, out, order, final=True)
    return out


def _row_max(row, areas):
    return max((areas[i] for i in row), default=0.0)


def _row_min(row, areas):
    return min((areas[i] for i in row), default=float("inf"))


def _worst(s, r_max, r_min, side):
    """Worst aspect ratio of a row with area sum s laid along a side."""
    if s <= 0.0:
        return float("inf")
    w2 = side * side
    return max(w2 * r_max / (s * s), (s * s) / (w2 * r_min))


def _lay_row(row, areas, row_sum, remaining, out, order, final):
    """Place one row along the shorter side; returns the shrunk remainder."""
    if not row:
        return remaining
    vertical = remaining.w >= remaining.h  # strip on the left, items stacked
    side = remaining.h if vertical else remaining.w
    thick = row_sum / side
    if final:
        thick = remaining.w if vertical else remaining.h
    cum = 0.0
    for idx in row:
        a = areas[idx]
        start = cum / row_sum * side
        end = (cum + a) / row_sum * side
        cum += a
        if vertical:
            r = Rect(remaining.x, remaining.y + start, thick, end - start)
        else:
            r = Rect(remaining.x + start, remaining.y, end - start, thick)
        out[order[idx]] = r
    if vertical:
        return Rect(remaining.x + thick, remaining.y,
                    max(remaining.w - thick, 0.0), remaining.h)
    return Rect(remaining.x, remaining.y + thick, remaining.w,
                max(remaining.h - thick, 0.0))


@dataclass
class CellGeometry:
    node_id: int
    rect: Rect
    degenerate: bool = False


def layout_hierarchy(hierarchy, antichain_ids, viewport=UNIT_RECT,
                     include_frames=False):
    """Recursive squarified layout down to the antichain nodes.

    The recursion only descends into proper ancestors of antichain members, so
    clusters sharing a nearby ancestor stay spatially grouped. Cells are
    emitted exactly for antichain nodes, with area proportional to subtree
    user count; zero-size nodes get an epsilon share and a degeneracy flag.
    Ancestor frame rectangles are returned separately when requested.
    """
    wanted = set(antichain_ids)
    cells = {}
    frames = []

    def descend(nid, rect):
        node = hierarchy.node(nid)
        if nid in wanted:
            cells[nid] = CellGeometry(nid, rect, degenerate=node.size == 0)
            return
        if include_frames:
            frames.append(CellGeometry(nid, rect))
        children = hierarchy.children(nid)
        sizes = [hierarchy.node(c).size for c in children]
        eps = max(sum(sizes), 1) * 1e-9
        weights = [s if s > 0 else eps for s in sizes]
        for child, r in zip(children, squarify(weights, rect)):
            descend(child, r)

    if hierarchy.root is not None and wanted:
        descend(hierarchy.root, viewport)
    ordered = [cells[i] for i in antichain_ids]
    return (ordered, frames) if include_frames else (ordered, [])


@dataclass
class WordPlacement:
    text: str
    x: float
    y: float  # top edge; renderers add the baseline offset
    size: float


@dataclass
class TagCloudLayout:
    words: list = field(default_factory=list)
    overflow: bool = False


def tag_cloud(tags, cell, word_cap=10, font_min=FONT_MIN, font_max=FONT_MAX):
    """Greedy frequency-ordered tag cloud inside a cell.

    Font size is linear in the (dense) rank of the tag weight, so equal
    weights get equal sizes. Words wrap line by line in reading order; once a
    word no longer fits, the remainder is truncated and the overflow flag set.
    """
    take = list(tags[:word_cap])
    if not take:
        return TagCloudLayout([], overflow=False)
    distinct = sorted({w for _, w in take}, reverse=True)
    rank = {w: r for r, w in enumerate(distinct)}
    span = len(distinct) - 1

    def font(weight):
        if span == 0:
            return font_max
        return font_max - (font_max - font_min) * rank[weight] / span

    layout = TagCloudLayout()
    x = cell.x
    y = cell.y
    line_h = 0.0
    for term, weight in take:
        fs = font(weight)
        width = len(term) * fs * CHAR_WIDTH_RATIO
        if x > cell.x and x + width > cell.x + cell.w:
            y += line_h * LINE_SPACING
            x = cell.x
            line_h = 0.0
        if width > cell.w or y + fs > cell.y + cell.h:
            layout.overflow = True
            break
        layout.words.append(WordPlacement(term, x, y, fs))
        x += width + fs * CHAR_WIDTH_RATIO
        line_h = max(line_h, fs)
    return layout


@dataclass
class ListItem:
    node_id: int
    user_count: int
    color: Color
    keywords: list


def list_view(ordered_ids, hierarchy, colors, word_cap=10):
    """List equivalent of the treemap: same nodes, same colors, score order.

    Keywords are the node's frequency-ordered tags (terms only, uniform size);
    the user count is reported explicitly since size no longer encodes it.
    """
    items = []
    for nid in ordered_ids:
        node = hierarchy.node(nid)
        items.append(ListItem(nid, node.size, colors[nid],
                              [t for t, _ in node.tags[:word_cap]]))
    return items


def node_colors(hierarchy, ordered_ids, mode_kind, scores, h_by_node=None,
                window_max_abs_h=1.0):
    """Per-node colors shared by the treemap and list renderings."""
    colors = {}
    for nid in ordered_ids:
        if mode_kind in ("search", "similar"):
            colors[nid] = color_for(scores[nid], mode_kind)
        else:
            colors[nid] = color_for(h_by_node.get(nid, 0.0), mode_kind,
                                    window_max_abs_h)
    return colors


def build_treemap_scene(hierarchy, ordered_ids, scores, colors, step,
                        word_cap=10, theta=None, viewport=UNIT_RECT,
                        include_frames=False):
    """JSON-ready treemap scene for one day."""
    geometry, frames = layout_hierarchy(hierarchy, ordered_ids, viewport,
                                        include_frames)
    cells = []
    for geo in geometry:
        node = hierarchy.node(geo.node_id)
        cloud = tag_cloud(node.tags, geo.rect, word_cap)
        cell = {
            "node": geo.node_id,
            "rect": geo.rect.as_list(),
            "size": node.size,
            "color": colors[geo.node_id].as_dict(),
            "tags": [[t, w] for t, w in node.tags[:word_cap]],
            "words": [{"text": w.text, "x": w.x, "y": w.y, "size": w.size}
                      for w in cloud.words],
        }
        if cloud.overflow:
            cell["overflow"] = True
        if geo.degenerate:
            cell["degenerate"] = True
        cells.append(cell)
    scene = {
        "day": step,
        "view": "treemap",
        "antichain": [{"node": i, "score": scores[i]} for i in ordered_ids],
        "cells": cells,
    }
    if theta is not None:
        scene["theta"] = theta
    if include_frames:
        scene["frames"] = [{"node": f.node_id, "rect": f.rect.as_list()}
                           for f in frames]
    return scene


def build_list_scene(hierarchy, ordered_ids, scores, colors, step,
                     word_cap=10, theta=None):
    """JSON-ready list scene for one day (same antichain as the treemap)."""
    items = list_view(ordered_ids, hierarchy, colors, word_cap)
    scene = {
        "day": step,
        "view": "list",
        "antichain": [{"node": i, "score": scores[i]} for i in ordered_ids],
        "items": [{
            "node": it.node_id,
            "users": it.user_count,
            "color": it.color.as_dict(),
            "keywords": it.keywords,
        } for it in items],
    }
    if theta is not None:
        scene["theta"] = theta
    return scene


__all__ = [
    "Rect", "UNIT_RECT", "Color", "CellGeometry", "WordPlacement",
    "TagCloudLayout", "ListItem", "color_for", "squarify", "layout_hierarchy",
    "tag_cloud", "list_view", "node_colors", "build_treemap_scene",
    "build_list_scene",
]
