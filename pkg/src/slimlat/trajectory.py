"""Trajectories of slim diagrams.

A trajectory is the maximal chain of edges linked by "opposite sides of a
4-cell", traced from the left boundary to the right boundary.  Built on
top of two local walk primitives (next_edge / prev_edge).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram, Edge, FourCell
from .errors import InconsistencyError, NotSlim

UP = "up"
DOWN = "down"
HAT = "hat"


@dataclass(frozen=True)
class Trajectory:
    diagram: Diagram = field(repr=False)
    index: int
    edges: tuple
    kind: str

    @property
    def top_edge(self):
        return top_edge(self)

    def __iter__(self):
        return iter(self.edges)


def next_edge(d, e):
    """The edge following e (to its right) in its trajectory, or None."""
    x, y = e
    ups_x = d.upper_covers(x)
    i = ups_x.index(y)
    lows_y = d.lower_covers(y)
    j = lows_y.index(x)
    up_ok = i < len(ups_x) - 1
    down_ok = j < len(lows_y) - 1
    if up_ok and down_ok:
        raise InconsistencyError(f"edge {e} has two faces on its right")
    if up_ok:
        z = ups_x[i + 1]
        return Edge(z, d.join(y, z))
    if down_ok:
        z = lows_y[j + 1]
        return Edge(d.meet(x, z), z)
    return None


def prev_edge(d, e):
    """The edge preceding e (to its left) in its trajectory, or None."""
    x, y = e
    lows_y = d.lower_covers(y)
    j = lows_y.index(x)
    ups_x = d.upper_covers(x)
    i = ups_x.index(y)
    down_ok = j > 0
    up_ok = i > 0
    if down_ok and up_ok:
        raise InconsistencyError(f"edge {e} has two faces on its left")
    if down_ok:
        z = lows_y[j - 1]
        return Edge(d.meet(z, x), z)
    if up_ok:
        z = ups_x[i - 1]
        return Edge(z, d.join(z, y))
    return None


def trajectories(d):
    """All trajectories, traced left to right; they partition the edges."""
    cached = d._cache.get("trajectories")
    if cached is not None:
        return cached
    if not d.is_slim():
        raise NotSlim("trajectories are defined for slim diagrams")
    bc = d.boundary_chains()
    out = []
    seen = set()
    for x, y in zip(bc.left, bc.left[1:]):
        e = Edge(x, y)
        edges = [e]
        seen.add(e)
        while True:
            nxt = next_edge(d, edges[-1])
            if nxt is None:
                break
            edges.append(nxt)
            seen.add(nxt)
        edges = tuple(edges)
        out.append(Trajectory(d, len(out), edges, _classify_edges(d, edges)))
    if len(seen) != len(d.edges()):
        raise InconsistencyError("trajectories do not partition the edges")
    result = tuple(out)
    d._cache["trajectories"] = result
    return result


def trajectory_of(d, e):
    """The trajectory containing edge e."""
    idx = d._cache.get("traj_of_edge")
    if idx is None:
        idx = {}
        for t in trajectories(d):
            for g in t.edges:
                idx[g] = t
        d._cache["traj_of_edge"] = idx
    return idx[Edge(*e)]


def _classify_edges(d, edges):
    tops = [e.top for e in edges]
    rises = []
    for a, b in zip(tops, tops[1:]):
        if d.lt(a, b):
            rises.append(True)
        elif d.lt(b, a):
            rises.append(False)
        else:
            raise InconsistencyError("consecutive trajectory tops incomparable")
    if all(rises):
        return UP
    if not any(rises):
        return DOWN
    peak = rises.index(False)
    if not all(rises[:peak]) or any(rises[peak:]):
        raise InconsistencyError("trajectory is not up-then-down")
    return HAT


def classify(t):
    """Trajectory kind, cross-checked against the fork-top criterion."""
    d = t.diagram
    kind = _classify_edges(d, t.edges)
    if d.is_rectangular():
        e = top_edge(t)
        lows = d.lower_covers(e.top)
        pos = lows.index(e.bottom)
        looks_hat = len(lows) >= 3 and 0 < pos < len(lows) - 1
        if looks_hat != (kind == HAT):
            raise InconsistencyError(
                f"trajectory {t.index}: shape says {kind}, fork-top test disagrees"
            )
    return kind


def top_edge(t):
    """The unique edge whose top is above every other edge top."""
    d = t.diagram
    best = t.edges[0]
    for e in t.edges[1:]:
        if d.lt(best.top, e.top):
            best = e
    for e in t.edges:
        if not d.leq(e.top, best.top):
            raise InconsistencyError("trajectory tops have no maximum")
    return best


def cells_of_trajectory(d, t):
    """The 4-cells between consecutive edges of t, left to right."""
    out = []
    for e, f in zip(t.edges, t.edges[1:]):
        if d.lt(e.top, f.top):  # upward step
            out.append(FourCell(e.bottom, e.top, f.bottom, f.top))
        else:  # downward step
            out.append(FourCell(f.bottom, e.bottom, f.top, e.top))
    return tuple(out)


class TerritoryInfo:
    """Birth-stage data of a trajectory: halo cell and original territory."""

    def __init__(self, trajectory, yob, halo_cell, original_cells, before_top, after_top):
        self.trajectory = trajectory
        self.yob = yob
        self.halo_cell = halo_cell
        self.original_cells = original_cells
        self.before_top = before_top
        self.after_top = after_top

    def __repr__(self):
        return (
            f"TerritoryInfo(traj={self.trajectory.index}, yob={self.yob}, "
            f"halo={self.halo_cell}, cells={len(self.original_cells)})"
        )


def territory_info(d, seq, t):
    """Territory data for trajectory t of d with construction sequence seq."""
    from .multifork import ReplayContext

    ctx = ReplayContext.ensure(d, seq)
    top = ctx.translate_edge(top_edge(t))
    yob = ctx.edge_yob(top)
    halo = ctx.fork_cell(yob) if yob > 0 else None
    stage = ctx.stage(yob)
    birth = trajectory_of(stage, top)
    cells = cells_of_trajectory(stage, birth)
    peak = birth.edges.index(Edge(*top))
    before = tuple(c for i, c in enumerate(cells) if i < peak)
    after = tuple(c for i, c in enumerate(cells) if i >= peak)
    return TerritoryInfo(t, yob, halo, cells, before, after)


def is_descendant(u, v, seq):
    """True if u is younger than v and u's halo square lies within the
    original territory of v.  Decided exactly on join-coordinate quadrangles.
    """
    from .multifork import ReplayContext

    d = u.diagram
    ctx = ReplayContext.ensure(d, seq)
    yu = ctx.edge_yob(ctx.translate_edge(top_edge(u)))
    yv = ctx.edge_yob(ctx.translate_edge(top_edge(v)))
    if yu <= yv or yu == 0:
        return False
    halo = ctx.fork_cell(yu)
    halo_quad = ctx.cell_quad(halo)
    info = territory_info(d, seq, v)
    target = None
    centroid = _quad_centroid(halo_quad)
    for c in info.original_cells:
        quad = ctx.cell_quad(c)
        if _point_in_quad(quad, centroid):
            target = quad
            break
    if target is None:
        return False
    for corner in halo_quad:
        if not _point_in_quad(target, (4 * corner[0], 4 * corner[1])):
            raise InconsistencyError("halo square straddles a territory cell")
    return True


def _quad_centroid(quad):
    # scaled by 4 to stay integral
    return (sum(p[0] for p in quad), sum(p[1] for p in quad))


def _point_in_quad(quad, p4):
    """Point (scaled by 4) inside closed convex quad (unscaled corners)."""
    pts = [(4 * a, 4 * b) for a, b in quad]
    px, py = p4
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
        if cross < 0:
            return False
    return True
