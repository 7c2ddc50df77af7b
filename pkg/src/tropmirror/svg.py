"""Plain SVG drawing of a plane tropical curve and its complement regions."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .tropical import TropicalComplex, curve_graph

SCALE = 60
MARGIN = 40
RAY_LENGTH = 1


def _bbox(points):
    xs = [p[0] for p in points] or [0.0]
    ys = [p[1] for p in points] or [0.0]
    return min(xs), max(xs), min(ys), max(ys)


def render_tropical_curve(tc: TropicalComplex) -> str:
    """Return an SVG 1.1 document.

    Bounded edges are solid, rays are dashed unit stubs and each complement
    region is labelled by its exponent.
    """
    w = tc.w
    g = curve_graph(tc)
    verts = [(float(x), float(y)) for x, y in g.vertices]
    segs, tips = [], []
    for e in g.edges:
        if e.bounded:
            segs.append((verts[e.tail], verts[e.head], e.weight, False))
        elif e.tail is not None:
            dx, dy = e.direction
            norm = (dx * dx + dy * dy) ** 0.5
            x0, y0 = verts[e.tail]
            tip = (x0 + RAY_LENGTH * dx / norm, y0 + RAY_LENGTH * dy / norm)
            tips.append(tip)
            segs.append((verts[e.tail], tip, e.weight, True))
        else:
            ax, ay = (float(c) for c in e.anchor)
            dx, dy = e.direction
            norm = (dx * dx + dy * dy) ** 0.5
            a = (ax - 2 * dx / norm, ay - 2 * dy / norm)
            b = (ax + 2 * dx / norm, ay + 2 * dy / norm)
            tips += [a, b]
            segs.append((a, b, e.weight, True))

    # label each region at the mean of the curve vertices on its boundary
    labels = []
    for comp in tc.components:
        around = [verts[i] for i, duals in enumerate(g.vertex_duals) if comp.label in duals]
        if not around:
            continue
        cx = sum(p[0] for p in around) / len(around)
        cy = sum(p[1] for p in around) / len(around)
        if not comp.bounded:
            # nudge unbounded labels away from the curve's centre
            ox = sum(v[0] for v in verts) / len(verts)
            oy = sum(v[1] for v in verts) / len(verts)
            dx, dy = cx - ox, cy - oy
            norm = (dx * dx + dy * dy) ** 0.5 or 1.0
            cx, cy = cx + 0.6 * dx / norm, cy + 0.6 * dy / norm
        labels.append((cx, cy, w.alphas[comp.label], comp.bounded))

    x0, x1, y0, y1 = _bbox(verts + tips + [(x, y) for x, y, _, _ in labels])
    width = (x1 - x0) * SCALE + 2 * MARGIN
    height = (y1 - y0) * SCALE + 2 * MARGIN

    def px(p):
        return (MARGIN + (p[0] - x0) * SCALE, MARGIN + (y1 - p[1]) * SCALE)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.2f} {height:.2f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for a, b, weight, dashed in segs:
        (ax, ay), (bx, by) = px(a), px(b)
        dash = ' stroke-dasharray="6 4"' if dashed else ""
        out.append(
            f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" '
            f'stroke="black" stroke-width="{1.5 * weight:.1f}"{dash}/>'
        )
    for v in verts:
        x, y = px(v)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="black"/>')
    for cx, cy, alpha, bounded in labels:
        x, y = px((cx, cy))
        colour = "firebrick" if bounded else "gray"
        text = escape("(" + ",".join(str(a) for a in alpha) + ")")
        out.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-size="12" text-anchor="middle" '
            f'fill="{colour}">{text}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"

