"""Brute-force reference implementations used only by the tests.

Nothing here imports the cue or geometry modules: boxes are integer
rectangles and every quantity is obtained by counting unit cells.
"""

from __future__ import annotations

from fractions import Fraction


def cells(box) -> set[tuple[int, int]]:
    x, y, w, h = (int(v) for v in box)
    return {(i, j) for i in range(x, x + w) for j in range(y, y + h)}


def pixel_iou(a, b) -> float:
    ca, cb = cells(a), cells(b)
    union = len(ca | cb)
    return len(ca & cb) / union if union else 0.0


def _span(lo: int, length: int) -> set[int]:
    return set(range(lo, lo + length))


def counted_iou(a, b) -> float:
    """Cell-count IoU for rectangles, counting each axis separately."""
    ax, ay, aw, ah = (int(v) for v in a)
    bx, by, bw, bh = (int(v) for v in b)
    inter = len(_span(ax, aw) & _span(bx, bw)) * len(_span(ay, ah) & _span(by, bh))
    union = aw * ah + bw * bh - inter
    return inter / union if union else 0.0


def _coords(obj):
    b = obj.bbox
    return int(b.x), int(b.y), int(b.w), int(b.h)


def oracle_direction(t, o, tau_loc: float) -> str | None:
    """Relative position of integer box ``t`` with respect to ``o`` by cell counting."""
    tx, ty, tw, th = _coords(t)
    ox, oy, ow, oh = _coords(o)

    def gap_and_overlap(p0, plen, q0, qlen):
        shared = len(_span(p0, plen) & _span(q0, qlen))
        gap = max(q0 - (p0 + plen), p0 - (q0 + qlen))
        return gap, Fraction(shared, min(plen, qlen)) if shared else Fraction(0)

    hgap, hsep = gap_and_overlap(tx, tw, ox, ow)
    vgap, vsep = gap_and_overlap(ty, th, oy, oh)
    if vgap > hgap:
        sep, t_mid, o_mid, names = vsep, 2 * ty + th, 2 * oy + oh, ("back", "front")
    else:
        sep, t_mid, o_mid, names = hsep, 2 * tx + tw, 2 * ox + ow, ("left", "right")
    if t_mid == o_mid or sep > Fraction(tau_loc).limit_denominator(10**6):
        return None
    return names[0] if t_mid < o_mid else names[1]


def oracle_location(t, others, tau_loc: float) -> str | None:
    if not 1 <= len(others) <= 2:
        return None
    dirs = [oracle_direction(t, o, tau_loc) for o in others]
    if None in dirs:
        return None
    if len(set(dirs)) == 1:
        return {"left": "on the left", "right": "on the right", "back": "in the back", "front": "in the front"}[dirs[0]]
    s = set(dirs)
    if s == {"left", "right"}:
        return "in the middle"
    if s == {"back", "front"}:
        return None
    v = (s & {"back", "front"}).pop()
    h = (s & {"left", "right"}).pop()
    return f"in the {v} {h}"


def oracle_size(t, others, ratio: float) -> str | None:
    if not others:
        return None
    area = len(cells(_coords(t)))
    areas = [len(cells(_coords(o))) for o in others]
    if area > 0 and all(area >= ratio * a for a in areas):
        return "bigger" if len(others) == 1 else "biggest"
    if all(a > 0 and area * ratio <= a for a in areas):
        return "smaller" if len(others) == 1 else "smallest"
    return None


def oracle_match(obj, detections, tau_iou: float):
    scored = [(counted_iou(_coords(obj), [int(v) for v in d.bbox.as_list()]), d.score, -k, d) for k, d in enumerate(detections)]
    if not scored:
        return None
    best = max(scored, key=lambda s: s[:3])
    return best[3] if best[0] > tau_iou else None


def oracle_denotation(ast, scene, detections, cfg) -> set[int]:
    """Objects satisfying every component of ``ast``, each judged against its whole class."""
    out = set()
    for obj in scene.objects:
        if obj.category != ast.noun:
            continue
        peers = [o for o in scene.objects if o.category == obj.category and o.object_id != obj.object_id]
        if ast.size is not None and oracle_size(obj, peers, cfg.size_ratio) != ast.size:
            continue
        if ast.location is not None and oracle_location(obj, peers, cfg.tau_loc) != ast.location:
            continue
        names = [*ast.colors, *([ast.attribute] if ast.attribute else [])]
        if names:
            det = oracle_match(obj, detections, cfg.tau_iou)
            if det is None:
                continue
            have = {a.name for a in det.attributes if a.score >= cfg.tau_attr}
            if not set(names) <= have:
                continue
        out.add(obj.object_id)
    return out
