"""SVG pictures of placed solutions.

Rectangles are laid out left to right on one row; every ring becomes a
group of two concentric circles, the outer one in its type's color and
the inner one punched back to the page background.  Parents are drawn
before their nested children so material never hides a ring placed in a
hole.
"""

from __future__ import annotations

from .model import Instance, PlacedSolution

SCALE = 60.0
MARGIN = 14.0

# fill per type index, cycled
PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2")
HOLE_FILL = "#ffffff"
RECT_STROKE = "#333333"


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _depth(rings, i: int) -> int:
    d = 0
    j = rings[i].parent
    while j is not None:
        d += 1
        j = rings[j].parent
        if d > len(rings):  # defensive: cycle in parent links
            return d
    return d


def render_svg(instance: Instance, solution: PlacedSolution) -> str:
    w_px = instance.width * SCALE
    h_px = instance.height * SCALE
    count = max(1, solution.rectangle_count)
    total_w = count * w_px + (count + 1) * MARGIN
    total_h = h_px + 2 * MARGIN

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(total_w)}" height="{_fmt(total_h)}" '
        f'viewBox="0 0 {_fmt(total_w)} {_fmt(total_h)}" '
        f'style="background:{HOLE_FILL}">',
    ]
    for k in range(solution.rectangle_count):
        ox = MARGIN + k * (w_px + MARGIN)
        lines.append(
            f'<rect x="{_fmt(ox)}" y="{_fmt(MARGIN)}" width="{_fmt(w_px)}" '
            f'height="{_fmt(h_px)}" fill="none" stroke="{RECT_STROKE}" '
            'stroke-width="2"/>'
        )

    rings = solution.rings
    order = sorted(range(len(rings)), key=lambda i: (rings[i].rectangle, _depth(rings, i), i))
    for i in order:
        ring = rings[i]
        kind = instance.types[ring.type_index]
        ox = MARGIN + ring.rectangle * (w_px + MARGIN)
        cx = ox + ring.center_x * SCALE
        # flip: solution y grows upward, SVG y grows downward
        cy = MARGIN + (instance.height - ring.center_y) * SCALE
        fill = PALETTE[ring.type_index % len(PALETTE)]
        lines.append(f'<g class="ring" data-type="{ring.type_index}">')
        lines.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
            f'r="{_fmt(kind.outer_radius * SCALE)}" fill="{fill}" '
            f'stroke="{RECT_STROKE}" stroke-width="1"/>'
        )
        lines.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
            f'r="{_fmt(kind.inner_radius * SCALE)}" fill="{HOLE_FILL}"/>'
        )
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
