"""Standalone SVG rendering of treemap and list scenes (small multiples)."""

from xml.sax.saxutils import escape

PANEL_W = 320
PANEL_H = 320
PANEL_GAP = 12
LABEL_H = 18

LIST_ITEM_PAD = 4
LIST_FONT = 12


def _f(v):
    return f"{v:.4f}".rstrip("0").rstrip(".")


def scene_svg(scene, x0=0.0, y0=0.0, width=PANEL_W, height=PANEL_H):
    """One scene as a list of SVG element strings, offset to (x0, y0)."""
    parts = [f'<g transform="translate({_f(x0)},{_f(y0)})">']
    if scene["view"] == "treemap":
        for cell in scene["cells"]:
            x, y, w, h = cell["rect"]
            parts.append(
                f'<rect class="cell" x="{_f(x * width)}" y="{_f(y * height)}" '
                f'width="{_f(w * width)}" height="{_f(h * height)}" '
                f'fill="{cell["color"]["css"]}" stroke="#ffffff" '
                f'stroke-width="1"/>')
        for cell in scene["cells"]:
            for word in cell["words"]:
                size = word["size"] * height
                parts.append(
                    f'<text class="tag" x="{_f(word["x"] * width)}" '
                    f'y="{_f(word["y"] * height + size)}" '
                    f'font-size="{_f(size)}">{escape(word["text"])}</text>')
    else:
        y = 0.0
        item_h = 2 * LIST_FONT + 3 * LIST_ITEM_PAD
        for item in scene["items"]:
            parts.append(
                f'<rect class="item" x="0" y="{_f(y)}" width="{_f(width)}" '
                f'height="{_f(item_h)}" fill="{item["color"]["css"]}" '
                f'stroke="#cccccc" stroke-width="1"/>')
            parts.append(
                f'<text class="users" x="{LIST_ITEM_PAD}" '
                f'y="{_f(y + LIST_ITEM_PAD + LIST_FONT)}" '
                f'font-size="{LIST_FONT}" font-weight="bold">'
                f'U: {item["users"]}</text>')
            keywords = " ".join(item["keywords"])
            max_chars = max(int(width / (LIST_FONT * 0.55)), 1)
            parts.append(
                f'<text class="keywords" x="{LIST_ITEM_PAD}" '
                f'y="{_f(y + 2 * LIST_ITEM_PAD + 2 * LIST_FONT)}" '
                f'font-size="{LIST_FONT}">{escape(keywords[:max_chars])}</text>')
            y += item_h + LIST_ITEM_PAD
    parts.append("</g>")
    return parts


def window_svg(scenes, labels=None, panel_w=PANEL_W, panel_h=PANEL_H,
               gap=PANEL_GAP):
    """Small-multiples SVG document: one panel per day, side by side."""
    n = len(scenes)
    total_w = n * panel_w + (n + 1) * gap
    total_h = panel_h + 2 * gap + LABEL_H
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" '
        f'height="{total_h}" viewBox="0 0 {total_w} {total_h}" '
        f'font-family="sans-serif">',
    ]
    for i, scene in enumerate(scenes):
        x0 = gap + i * (panel_w + gap)
        label = labels[i] if labels else f"day {scene['day']}"
        parts.append(
            f'<text class="label" x="{_f(x0)}" y="{_f(gap + LABEL_H - 5)}" '
            f'font-size="13">{escape(str(label))}</text>')
        parts.extend(scene_svg(scene, x0, gap + LABEL_H, panel_w, panel_h))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


__all__ = ["scene_svg", "window_svg"]
