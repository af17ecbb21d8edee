"""Placements in the complex plane and SVG output.

Vertices of the slim part sit at delta + eps3 * (partial left weight sum)
+ eps * (partial right weight sum); eyes divide their cell's corner-to-
corner segment into equal parts.  All placement arithmetic is exact: an
element's position is kept as a pair of Fractions (the two weight sums),
floats appear only when emitting SVG.
"""

from __future__ import annotations

import cmath
from collections import namedtuple
from fractions import Fraction
from math import ceil, sqrt

from .coords import join_coords
from .diagram import CHAIN_OF_NARROWS, Edge
from .errors import IncompatibleTriplet, InconsistencyError, ValidationError
from .slimming import full_slimming_ex, jh_permutation

EPS = complex(-sqrt(2) / 2, sqrt(2) / 2)  # upper left unit step
EPS3 = EPS  # kept for clarity below; see position()
EPS_RIGHT = complex(sqrt(2) / 2, sqrt(2) / 2)  # upper right unit step

CoordTriplet = namedtuple("CoordTriplet", "delta rho_left rho_right")

NORMAL = "normal"
PRECIPITOUS = "precipitous"


class Placement:
    """Exact element positions: advance pairs (left sum, right sum)."""

    def __init__(self, diagram, advances, delta=0j):
        self.diagram = diagram
        self.advances = dict(advances)
        self.delta = complex(delta)

    def advance(self, x):
        return self.advances[x]

    def position(self, x):
        l, r = self.advances[x]
        return self.delta + float(l) * EPS + float(r) * EPS_RIGHT

    def positions(self):
        return {x: self.position(x) for x in self.diagram.elements()}

    def integer_advances(self):
        """Advances as exact integer pairs (requires denominator one)."""
        out = {}
        for x, (l, r) in self.advances.items():
            if l.denominator != 1 or r.denominator != 1:
                raise ValidationError(f"advance of {x} is not integral")
            out[x] = (int(l), int(r))
        return out


def _component_profile(d):
    """(kind, sub, mapping, slimming-or-None) per glued sum component."""
    dec = d.glued_sum_decompose()
    if not dec.components:  # singleton diagram
        return []
    out = []
    for sub, kind, mapping in zip(dec.components, dec.kinds, dec.mappings):
        if kind == CHAIN_OF_NARROWS:
            out.append((kind, sub, mapping, None))
        else:
            out.append((kind, sub, mapping, full_slimming_ex(sub)))
    return out


def place_b(d, triplet, check=True):
    """Place d according to a weight triplet (class with normal-slope
    boundaries).  Chain components fold left-first into any leftover
    weight budget."""
    profile = _component_profile(d)
    rho_l = [Fraction(w) for w in triplet.rho_left]
    rho_r = [Fraction(w) for w in triplet.rho_right]
    if any(w <= 0 for w in rho_l + rho_r):
        raise IncompatibleTriplet("weights must be positive")
    if d.n == 1:
        if rho_l or rho_r:
            raise IncompatibleTriplet("singleton diagram takes no weights")
        return Placement(d, {d.bottom: (Fraction(0), Fraction(0))}, triplet.delta)
    fixed_l = fixed_r = 0
    for kind, sub, m, s in profile:
        if kind != CHAIN_OF_NARROWS:
            l, r = join_coords(s.diagram)[s.diagram.top]
            fixed_l += l
            fixed_r += r
    chain_lengths = [sub.n - 1 for kind, sub, m, s in profile if kind == CHAIN_OF_NARROWS]
    slack = len(rho_l) - fixed_l
    if (
        slack < 0
        or len(rho_r) < fixed_r
        or slack + (len(rho_r) - fixed_r) != sum(chain_lengths)
    ):
        raise IncompatibleTriplet("weight vectors do not fit the diagram")
    splits = []
    for length in chain_lengths:
        take = min(length, slack)
        splits.append(take)
        slack -= take
    advances = {}
    base = (Fraction(0), Fraction(0))
    il = ir = 0
    chain_idx = 0
    for kind, sub, mapping, slim in profile:
        if kind == CHAIN_OF_NARROWS:
            h = splits[chain_idx]
            chain_idx += 1
            length = sub.n - 1
            chain = sorted(sub.elements(), key=lambda x: sub.heights()[x])
            for t, x in enumerate(chain):
                dl = sum(rho_l[il : il + min(t, h)], Fraction(0))
                dr = sum(rho_r[ir : ir + max(0, t - h)], Fraction(0))
                advances[mapping[x]] = (base[0] + dl, base[1] + dr)
            base = advances[mapping[chain[-1]]]
            il += h
            ir += length - h
        else:
            coords = join_coords(slim.diagram)
            ml, mr = coords[slim.diagram.top]
            for new_id, (l, r) in coords.items():
                dl = sum(rho_l[il : il + l], Fraction(0))
                dr = sum(rho_r[ir : ir + r], Fraction(0))
                advances[mapping[slim.old_of_new[new_id]]] = (
                    base[0] + dl,
                    base[1] + dr,
                )
            for b, eyes in slim.eyes_by_cell.items():
                cell = slim.diagram.cell_with_bottom(b)
                al = advances[mapping[slim.old_of_new[cell.left]]]
                ar = advances[mapping[slim.old_of_new[cell.right]]]
                for idx, eye in enumerate(eyes, start=1):
                    q = Fraction(idx, len(eyes) + 1)
                    advances[mapping[eye]] = (
                        al[0] + (ar[0] - al[0]) * q,
                        al[1] + (ar[1] - al[1]) * q,
                    )
            top = slim.old_of_new[slim.diagram.top]
            base = advances[mapping[top]]
            il += ml
            ir += mr
    placement = Placement(d, advances, triplet.delta)
    if check and not check_planar(placement):
        raise InconsistencyError("placement has crossing edges")
    return placement


def _canonical_extents(d):
    """(m_left, m_right) with chain components folded left-first."""
    profile = _component_profile(d)
    ml = mr = 0
    for kind, sub, mapping, slim in profile:
        if kind == CHAIN_OF_NARROWS:
            length = sub.n - 1
            h = ceil(length / 2)
            ml += h
            mr += length - h
        else:
            l, r = join_coords(slim.diagram)[slim.diagram.top]
            ml += l
            mr += r
    return ml, mr


def place_c(d, r=1, delta=0j, check=True):
    """Equidistant placement: every weight equals r."""
    if r <= 0:
        raise IncompatibleTriplet("scale must be positive")
    ml, mr = _canonical_extents(d)
    return place_b(d, CoordTriplet(delta, (r,) * ml, (r,) * mr), check=check)


def _mirror_auto(d):
    """The coordinate-swapping self-map of a slim diagram, if it exists."""
    coords = join_coords(d)
    by_pair = {p: x for x, p in coords.items()}
    try:
        return tuple(by_pair[(r, l)] for x, (l, r) in sorted(coords.items()))
    except KeyError:
        return None


def _canonical_component(sub, slim):
    """Canonical orientation and eye distribution of one indecomposable
    component: lexicographically smallest boundary pairing, then the
    lexicographically largest eye tuple along the canonical element list."""
    plain = jh_permutation(slim.diagram)
    flipped = jh_permutation(slim.diagram.mirror())
    if flipped < plain:
        canon = slim.diagram.mirror()
        nu = dict(slim.nu)
        mirrored = True
    else:
        canon = slim.diagram
        nu = dict(slim.nu)
        mirrored = False
    coords = join_coords(canon)
    order = sorted(canon.elements(), key=lambda x: (canon.heights()[x], -coords[x][0]))
    candidates = [tuple(nu.get(x, 0) for x in order)]
    auto = _mirror_auto(canon)
    if auto is not None:
        candidates.append(tuple(nu.get(auto[x], 0) for x in order))
    best = max(candidates)
    nu_final = {x: k for x, k in zip(order, best) if k}
    return canon, nu_final, mirrored


def place_d(d, check=True):
    """The canonical placement: unit weights, orientation chosen per
    component by the boundary pairing, eyes distributed canonically."""
    if d.n == 1:
        return Placement(d, {d.bottom: (Fraction(0), Fraction(0))})
    profile = _component_profile(d)
    advances = {}
    base = (Fraction(0), Fraction(0))
    for kind, sub, mapping, slim in profile:
        if kind == CHAIN_OF_NARROWS:
            length = sub.n - 1
            h = ceil(length / 2)
            chain = sorted(sub.elements(), key=lambda x: sub.heights()[x])
            for t, x in enumerate(chain):
                advances[mapping[x]] = (
                    base[0] + min(t, h),
                    base[1] + max(0, t - h),
                )
            base = advances[mapping[chain[-1]]]
            continue
        canon, nu_final, mirrored = _canonical_component(sub, slim)
        coords = join_coords(canon)
        for new_id, (l, r) in coords.items():
            advances[mapping[slim.old_of_new[new_id]]] = (
                base[0] + l,
                base[1] + r,
            )
        # original eyes, in canonical reading order, fill the slots of the
        # chosen distribution
        source = []
        for b in sorted(slim.nu, key=lambda b: coords[b]):
            eyes = slim.eyes_by_cell[b]
            source.extend(reversed(eyes) if mirrored else eyes)
        slots = []
        for b in sorted(nu_final, key=lambda b: coords[b]):
            cell = canon.cell_with_bottom(b)
            al = (base[0] + coords[cell.left][0], base[1] + coords[cell.left][1])
            ar = (base[0] + coords[cell.right][0], base[1] + coords[cell.right][1])
            k = nu_final[b]
            for idx in range(1, k + 1):
                q = Fraction(idx, k + 1)
                slots.append(
                    (al[0] + (ar[0] - al[0]) * q, al[1] + (ar[1] - al[1]) * q)
                )
        if len(source) != len(slots):
            raise InconsistencyError("eye redistribution changed the eye count")
        for eye, slot in zip(source, slots):
            advances[mapping[eye]] = slot
        base = advances[mapping[slim.old_of_new[canon.top]]]
    placement = Placement(d, advances)
    if check and not check_planar(placement):
        raise InconsistencyError("canonical placement has crossing edges")
    return placement


# -- geometric checks ---------------------------------------------------------


def slope_order_check(placement, d=None):
    """Order iff (geometrically below and slope within the normal fan)."""
    d = d or placement.diagram
    adv = placement.advances
    for x in d.elements():
        for y in d.elements():
            if x == y:
                continue
            dl = adv[y][0] - adv[x][0]
            dr = adv[y][1] - adv[x][1]
            geometric = dl >= 0 and dr >= 0 and (dl, dr) != (0, 0)
            if geometric != d.lt(x, y):
                return False
    return True


def edge_slope_classify(placement, d=None):
    """normal / precipitous per edge, cross-checked combinatorially."""
    d = d or placement.diagram
    adv = placement.advances
    out = {}
    for e in d.edges():
        dl = adv[e.top][0] - adv[e.bottom][0]
        dr = adv[e.top][1] - adv[e.bottom][1]
        if dl > 0 and dr > 0:
            geometric = PRECIPITOUS
        elif (dl > 0 and dr == 0) or (dl == 0 and dr > 0):
            geometric = NORMAL
        else:
            raise InconsistencyError(f"edge {e} does not ascend")
        lows = d.lower_covers(e.top)
        pos = lows.index(e.bottom)
        combinatorial = (
            PRECIPITOUS if len(lows) >= 3 and 0 < pos < len(lows) - 1 else NORMAL
        )
        if geometric != combinatorial:
            raise InconsistencyError(
                f"edge {e}: geometric slope {geometric}, combinatorial {combinatorial}"
            )
        out[e] = geometric
    return out


def check_planar(placement):
    """No two edges cross except at shared endpoints (exact arithmetic)."""
    d = placement.diagram
    adv = placement.advances
    denom = 1
    for l, r in adv.values():
        denom = _lcm(denom, _lcm(l.denominator, r.denominator))
    pts = {
        x: (int(l * denom), int(r * denom)) for x, (l, r) in adv.items()
    }
    segs = [(pts[e.bottom], pts[e.top], e) for e in d.edges()]
    for i, (a1, a2, ea) in enumerate(segs):
        for b1, b2, eb in segs[i + 1 :]:
            shared = {ea.bottom, ea.top} & {eb.bottom, eb.top}
            if shared:
                # sharing one endpoint is fine unless the segments overlap
                if len(shared) == 1 and _collinear_overlap(a1, a2, b1, b2):
                    return False
                continue
            if _segments_cross(a1, a2, b1, b2):
                return False
    return True


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def _orient(p, q, r):
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _on_segment(p, q, r):
    return (
        _orient(p, q, r) == 0
        and min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
        and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
    )


def _segments_cross(a1, a2, b1, b2):
    o1, o2 = _orient(a1, a2, b1), _orient(a1, a2, b2)
    o3, o4 = _orient(b1, b2, a1), _orient(b1, b2, a2)
    if o1 != o2 and o3 != o4:
        return True
    return any(
        _on_segment(p, q, r)
        for p, q, r in (
            (a1, a2, b1),
            (a1, a2, b2),
            (b1, b2, a1),
            (b1, b2, a2),
        )
    )


def _collinear_overlap(a1, a2, b1, b2):
    if _orient(a1, a2, b1) or _orient(a1, a2, b2):
        return False
    xs = sorted([a1, a2])
    ys = sorted([b1, b2])
    lo, hi = max(xs[0], ys[0]), min(xs[1], ys[1])
    return lo < hi


# -- SVG ----------------------------------------------------------------------


def emit_svg(placement, scale=48.0, margin=24.0, radius=4.0, labels=False):
    """Deterministic SVG: circles for vertices, segments for edges."""
    d = placement.diagram
    pos = {x: placement.position(x) for x in d.elements()}
    xs = [p.real for p in pos.values()]
    ys = [p.imag for p in pos.values()]
    x0, y1 = min(xs), max(ys)
    width = (max(xs) - x0) * scale + 2 * margin
    height = (y1 - min(ys)) * scale + 2 * margin

    def at(x):
        p = pos[x]
        return (
            margin + (p.real - x0) * scale,
            margin + (y1 - p.imag) * scale,
        )

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.1f}" height="{height:.1f}">'
    ]
    for e in d.edges():
        (xa, ya), (xb, yb) = at(e.bottom), at(e.top)
        lines.append(
            f'<line x1="{xa:.3f}" y1="{ya:.3f}" x2="{xb:.3f}" y2="{yb:.3f}" '
            f'stroke="black" stroke-width="1.5"/>'
        )
    for x in d.elements():
        cx, cy = at(x)
        lines.append(
            f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{radius}" '
            f'fill="white" stroke="black" stroke-width="1.5"/>'
        )
        if labels:
            lines.append(
                f'<text x="{cx + radius + 2:.3f}" y="{cy - 2:.3f}" '
                f'font-size="10">{x}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
