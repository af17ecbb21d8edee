"""Join-coordinates and rectangular extensions.

Every element of a slim diagram is determined by the pair (number of
left-boundary join-irreducibles below it, same on the right).  For slim
rectangular diagrams the pairs determine order, covers and left-to-right
order, so they double as an exact construction medium: grids, multifork
extensions and rectangular extensions are all assembled as pair sets.
"""

from __future__ import annotations

from collections import namedtuple

from .diagram import CHAIN_OF_NARROWS, Diagram
from .errors import NotIndecomposable, NotSlim, TooSmall
from .slimming import anti_slim_ex, full_slimming_ex

CoordSet = namedtuple("CoordSet", "icp lcp rcp acp")

RectExtReport = namedtuple(
    "RectExtReport",
    "embeds_cover_preserving extension_rectangular lower_cover_condition congruence_preserving",
)


def join_coords(d):
    """Map element -> (left, right) join-coordinate pair."""
    cached = d._cache.get("join_coords")
    if cached is not None:
        return cached
    if not d.is_slim():
        raise NotSlim("join-coordinates require a slim diagram")
    bc = d.boundary_chains()
    jir = set(d.join_irreducibles())
    cs = [x for x in bc.left if x in jir]
    ds = [x for x in bc.right if x in jir]
    coords = {}
    for x in d.elements():
        left = sum(1 for c in cs if d.leq(c, x))
        right = sum(1 for e in ds if d.leq(e, x))
        coords[x] = (left, right)
    d._cache["join_coords"] = coords
    return coords


def coord_sets(d):
    """The internal / left / right / all coordinate-pair sets of the
    rectangular extension of a slim glued sum indecomposable diagram."""
    if not d.is_glued_sum_indecomposable():
        raise NotIndecomposable("coordinate-pair sets need an indecomposable diagram")
    coords = join_coords(d)
    icp = frozenset(coords.values())
    ml, mr = coords[d.top]
    lcp, rcp = _fill_pairs(icp, ml, mr)
    return CoordSet(icp, lcp, rcp, frozenset(icp | lcp | rcp))


def _fill_pairs(icp, ml, mr):
    """Left and right fill of a coordinate-pair set inside its box."""
    inf = float("inf")
    minj_above = [inf] * (ml + 1)  # min j'' over pairs with i'' > i'
    mini_above = [inf] * (mr + 1)
    for i, j in icp:
        for ii in range(i):
            if j < minj_above[ii]:
                minj_above[ii] = j
        for jj in range(j):
            if i < mini_above[jj]:
                mini_above[jj] = i
    rows = {}
    cols = {}
    for i, j in icp:
        rows.setdefault(j, set()).add(i)
        cols.setdefault(i, set()).add(j)
    lcp, rcp = set(), set()
    for i in range(ml + 1):
        for j in range(mr + 1):
            if (i, j) in icp:
                continue
            if any(ii < i and minj_above[ii] >= j for ii in rows.get(j, ())):
                lcp.add((i, j))
            if any(jj < j and mini_above[jj] >= i for jj in cols.get(i, ())):
                rcp.add((i, j))
    return frozenset(lcp), frozenset(rcp)


def diagram_from_pairs(pairs, ids=None):
    """Build the diagram of a coordinate-pair set under componentwise order.

    ids, when given, prescribes the element id of each pair; otherwise ids
    follow the canonical (sum, right) order.  Returns (diagram, id_of_pair).
    """
    pts = sorted(pairs, key=lambda p: (p[0] + p[1], p[1]))
    if ids is None:
        id_of = {p: i for i, p in enumerate(pts)}
    else:
        id_of = dict(ids)
    n = len(pts)
    pos = {p: k for k, p in enumerate(pts)}
    upmask = [0] * n
    covers = [[] for _ in range(n)]  # by sorted position
    for k in range(n - 1, -1, -1):
        a, b = pts[k]
        mask = 1 << k
        doms = [
            m
            for m in range(k + 1, n)
            if pts[m][0] >= a and pts[m][1] >= b
        ]
        for m in doms:  # ascending (sum, right) order
            if not (mask >> m) & 1:
                covers[k].append(m)
                mask |= upmask[m]
        upmask[k] = mask
    upper = [[] for _ in range(n)]
    lower = [[] for _ in range(n)]
    for k in range(n):
        x = id_of[pts[k]]
        ups = sorted((pts[m] for m in covers[k]), key=lambda p: -p[0])
        upper[x] = [id_of[p] for p in ups]
        for p in ups:
            lower[id_of[p]].append(pts[k])
    for x in range(n):
        lower[x] = [id_of[p] for p in sorted(lower[x], key=lambda p: -p[0])]
    return Diagram(upper, lower), id_of


def rect_extension(d):
    """The rectangular extension of a planar semimodular diagram.

    Returns (extension, embedding) with embedding[x] the image of x.
    Rectangular input is returned unchanged with the identity embedding.
    """
    if d.n < 3:
        raise TooSmall("no rectangular extension below three elements")
    if d.is_rectangular():
        return d, tuple(d.elements())
    if d.is_slim():
        return _extend_slim(d)
    s = full_slimming_ex(d)
    if s.diagram.is_rectangular():
        ext, emb_slim = s.diagram, tuple(s.diagram.elements())
    else:
        ext, emb_slim = _extend_slim(s.diagram)
    nu_ext = {emb_slim[b]: k for b, k in s.nu.items() if k}
    full, _, eyes_new = anti_slim_ex(ext, nu_ext)
    emb = [None] * d.n
    for new_id, old_id in enumerate(s.old_of_new):
        emb[old_id] = emb_slim[new_id]
    for b, eyes in s.eyes_by_cell.items():
        new_eyes = eyes_new[emb_slim[b]]
        for old_eye, new_eye in zip(eyes, new_eyes):
            emb[old_eye] = new_eye
    return full, tuple(emb)


def _embedding_pairs(d):
    """Stacked coordinate pairs of a slim diagram's elements.

    Indecomposable components use their join-coordinates; chain runs are
    folded into a canonical zigzag (left part first, ceil(len/2) steps).
    """
    dec = d.glued_sum_decompose()
    pairs = {}
    off_l = off_r = 0
    for sub, kind, mapping in zip(dec.components, dec.kinds, dec.mappings):
        if kind == CHAIN_OF_NARROWS:
            length = sub.n - 1
            h = (length + 1) // 2
            chain = sorted(sub.elements(), key=lambda x: sub.heights()[x])
            for t, x in enumerate(chain):
                pairs[mapping[x]] = (off_l + min(t, h), off_r + max(0, t - h))
            off_l += h
            off_r += length - h
        else:
            c = join_coords(sub)
            ml, mr = c[sub.top]
            for x, (l, r) in c.items():
                pairs[mapping[x]] = (off_l + l, off_r + r)
            off_l += ml
            off_r += mr
    return pairs, off_l, off_r


def _extend_slim(d):
    pairs, ml, mr = _embedding_pairs(d)
    icp = frozenset(pairs.values())
    lcp, rcp = _fill_pairs(icp, ml, mr)
    ext, id_of = diagram_from_pairs(icp | lcp | rcp)
    return ext, tuple(id_of[pairs[x]] for x in d.elements())


def verify_rect_extension(l, r, emb):
    """Check the four defining properties of a rectangular extension."""
    rectangular = r.is_rectangular()
    image = set(emb)
    cover_preserving = (
        len(image) == l.n
        and emb[l.bottom] == r.bottom
        and emb[l.top] == r.top
        and all(
            r.join(emb[x], emb[y]) == emb[l.join(x, y)]
            and r.meet(emb[x], emb[y]) == emb[l.meet(x, y)]
            for x in l.elements()
            for y in l.elements()
        )
        and all(
            r.is_edge(emb[x], emb[y])
            for x in l.elements()
            for y in l.upper_covers(x)
        )
    )
    lower_cover_condition = all(
        len(r.lower_covers(x)) <= 2
        for x in r.elements()
        if any(z not in image for z in r.lower_covers(x))
    )
    from .congruence import all_congruences, restrict_labels

    con_r = all_congruences(r)
    con_l = {c for c in all_congruences(l)}
    restricted = [restrict_labels(labels, emb) for labels in con_r]
    congruence_preserving = (
        len(set(restricted)) == len(con_r) and set(restricted) == con_l
    )
    return RectExtReport(
        cover_preserving, rectangular, lower_cover_condition, congruence_preserving
    )
