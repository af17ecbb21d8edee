"""Multifork construction sequences of slim rectangular diagrams.

Every slim rectangular diagram arises from a grid by repeatedly inserting
a k-fold multifork into a distributive 4-cell: k new lower covers of the
cell's top (with the triangular block of elements they generate inside the
cell) plus k new elements on every edge of the two trajectories through
the cell, walking down-left and down-right to the boundary.
"""

from __future__ import annotations

import random
from collections import namedtuple

from .coords import diagram_from_pairs, join_coords
from .diagram import Edge
from .errors import (
    InconsistencyError,
    NotDistributiveCell,
    NotSlimRectangular,
    ValidationError,
)
from .trajectory import next_edge, prev_edge

Step = namedtuple("Step", "cell_bottom k")

MultiforkSequence = namedtuple("MultiforkSequence", "grid_m grid_n steps")


def grid(m, n):
    """The direct product of chains of lengths m and n, drawn with the
    m-chain on the lower left."""
    if m < 1 or n < 1:
        raise ValidationError("grid sides must be positive")
    pairs = {(a, b) for a in range(m + 1) for b in range(n + 1)}
    return diagram_from_pairs(pairs)[0]


def distributive_cells(d):
    """All 4-cells whose top generates a distributive ideal."""
    _require_slim_rectangular(d)
    out = []
    for cell in d.cells():
        ideal = [x for x in d.elements() if d.leq(x, cell.top)]
        if all(len(d.lower_covers(x)) <= 2 for x in ideal):
            out.append(cell)
    return tuple(out)


def _require_slim_rectangular(d):
    if not (d.is_slim() and d.is_rectangular()):
        raise NotSlimRectangular("operation requires a slim rectangular diagram")


def _wing_rows(d, cell):
    """Coordinate levels of the trajectory edges subdivided by a fork.

    Returns (rs, ls): the right-coordinates of the up-edges weakly left of
    [bottom, left] and the left-coordinates of the down-edges weakly right
    of [bottom, right].
    """
    coords = join_coords(d)
    rs = []
    e = Edge(cell.bottom, cell.left)
    while e is not None:
        rs.append(coords[e.bottom][1])
        e = prev_edge(d, e)
    ls = []
    e = Edge(cell.bottom, cell.right)
    while e is not None:
        ls.append(coords[e.bottom][0])
        e = next_edge(d, e)
    return rs, ls


def fork_growth(d, cell, k):
    """Number of elements a k-fold multifork at cell adds to d."""
    rs, ls = _wing_rows(d, cell)
    return k * (k + 1) // 2 + k * len(rs) + k * len(ls)


def multifork_extend(d, cell, k):
    """Insert a k-fold multifork at a distributive 4-cell.

    Existing elements keep their ids; the new elements are appended in
    canonical coordinate order.
    """
    _require_slim_rectangular(d)
    if k < 1:
        raise ValidationError("fork multiplicity must be positive")
    if d.cell_with_bottom(cell.bottom) != cell:
        raise NotDistributiveCell(f"{cell} is not a 4-cell of the diagram")
    if cell not in distributive_cells(d):
        raise NotDistributiveCell(f"{cell} is not distributive")
    coords = join_coords(d)
    i, j = coords[cell.top]
    rs, ls = _wing_rows(d, cell)

    def lift(p):
        a, b = p
        return (a + k if a >= i else a, b + k if b >= j else b)

    added = set()
    for dx in range(k):
        for dy in range(k - dx):
            added.add((i + dx, j + dy))
    for c in range(k):
        for r in rs:
            added.add((i + c, r))
        for l in ls:
            added.add((l, j + c))
    id_of = {lift(coords[x]): x for x in d.elements()}
    if len(id_of) != d.n or added & set(id_of):
        raise InconsistencyError("fork bands collide with existing elements")
    for idx, p in enumerate(sorted(added, key=lambda p: (p[0] + p[1], p[1]))):
        id_of[p] = d.n + idx
    return diagram_from_pairs(set(id_of), ids=id_of)[0]


def replay(seq):
    """Rebuild the diagram described by a multifork sequence."""
    return ReplayContext(seq).final


def decompose_sequence(d):
    """A multifork construction sequence for d, in LIFO normal form.

    Forks are peeled youngest-first: minimal fork tops before the rest,
    ties by smallest element id, and every removal is validated by
    re-inserting the fork and comparing coordinate sets.
    """
    _require_slim_rectangular(d)
    cur = d
    undo = []
    while True:
        tops = [x for x in cur.elements() if len(cur.lower_covers(x)) >= 3]
        if not tops:
            break
        # comparable fork tops are nested and the lower one is younger,
        # so minimal tops are tried first; every removal is validated by
        # re-inserting the fork
        minimal = sorted(
            w for w in tops if not any(cur.lt(v, w) for v in tops if v != w)
        )
        rest = sorted(set(tops) - set(minimal))
        for w in minimal + rest:
            result = _try_undo(cur, w)
            if result is not None:
                cur, bottom_pair, k = result
                undo.append((bottom_pair, k))
                break
        else:
            raise InconsistencyError("no removable multifork found")
    coords = join_coords(cur)
    m, n = coords[cur.top]
    if cur.n != (m + 1) * (n + 1):
        raise InconsistencyError("fork-free residue is not a grid")
    steps = []
    stage = grid(m, n)
    for bottom_pair, k in reversed(undo):
        cc = join_coords(stage)
        bottom_id = next(x for x, p in cc.items() if p == bottom_pair)
        steps.append(Step(bottom_id, k))
        stage = multifork_extend(stage, stage.cell_with_bottom(bottom_id), k)
    return MultiforkSequence(m, n, tuple(steps))


def _try_undo(cur, w):
    lows = cur.lower_covers(w)
    sources = lows[1:-1]
    k = len(sources)
    coords = join_coords(cur)
    i = min(coords[s][0] for s in sources)
    j = min(coords[s][1] for s in sources)
    if sorted(coords[s][0] for s in sources) != list(range(i, i + k)):
        return None
    if sorted(coords[s][1] for s in sources) != list(range(j, j + k)):
        return None
    if coords[w] != (i + k, j + k):
        return None

    def collapse(p):
        a, b = p
        return (a - k if a >= i + k else a, b - k if b >= j + k else b)

    keep = [
        x
        for x in cur.elements()
        if not (i <= coords[x][0] < i + k or j <= coords[x][1] < j + k)
    ]
    rank = {x: r for r, x in enumerate(sorted(keep))}
    ids = {collapse(coords[x]): rank[x] for x in keep}
    if len(ids) != len(keep):
        return None
    try:
        smaller, _ = diagram_from_pairs(set(ids), ids=ids)
    except ValidationError:
        return None
    bottom_pair = collapse(coords[cur.meet(lows[0], lows[-1])])
    bottom_id = ids.get(bottom_pair)
    if bottom_id is None:
        return None
    cell = smaller.cell_with_bottom(bottom_id)
    if cell is None:
        return None
    try:
        redo = multifork_extend(smaller, cell, k)
    except (NotDistributiveCell, NotSlimRectangular, InconsistencyError):
        return None
    if set(join_coords(redo).values()) != set(coords.values()):
        return None
    return smaller, bottom_pair, k


class BirthTable:
    """Stage of first appearance for elements and edges."""

    def __init__(self, element_yob, t):
        self.element_yob = tuple(element_yob)
        self.t = t

    def element(self, x):
        return self.element_yob[x]

    def edge(self, e):
        return max(self.element_yob[e[0]], self.element_yob[e[1]])


def birth_table(seq):
    ctx = ReplayContext(seq)
    return BirthTable(ctx.birth, len(seq.steps))


class ReplayContext:
    """Replayed stage diagrams of a multifork sequence, with geometry.

    Element ids are stable across stages, so stage-j cells can be read in
    the final diagram's join-coordinates.
    """

    def __init__(self, seq):
        self.seq = seq
        d = grid(seq.grid_m, seq.grid_n)
        self.stages = [d]
        self.fork_cells = [None]
        self.birth = [0] * d.n
        for stage_idx, step in enumerate(seq.steps, start=1):
            cell = d.cell_with_bottom(step.cell_bottom)
            if cell is None:
                raise ValidationError(f"step {stage_idx}: no cell at {step.cell_bottom}")
            bigger = multifork_extend(d, cell, step.k)
            self.birth.extend([stage_idx] * (bigger.n - d.n))
            self.fork_cells.append(cell)
            d = bigger
            self.stages.append(d)
        self.final = d
        self.coords = join_coords(d)
        self._translation = None

    @classmethod
    def ensure(cls, d, seq):
        """Context for seq bound to d (d must be directly similar to the
        replayed diagram; element references are translated)."""
        if isinstance(seq, ReplayContext):
            ctx = seq
        else:
            key = ("replay_ctx", seq)
            ctx = d._cache.get(key)
            if ctx is None:
                ctx = cls(seq)
                d._cache[key] = ctx
        if ctx.final != d and ctx._translation is None:
            from .slimming import similarity

            m = similarity(d, ctx.final)
            if m is None or m.mirrored:
                raise ValidationError("sequence does not replay to this diagram")
            ctx._translation = m.mapping
        return ctx

    def translate_edge(self, e):
        if self._translation is None:
            return Edge(*e)
        return Edge(self._translation[e[0]], self._translation[e[1]])

    def stage(self, j):
        return self.stages[j]

    def edge_yob(self, e):
        return max(self.birth[e[0]], self.birth[e[1]])

    def traj_yob(self, t):
        from .trajectory import top_edge

        return self.edge_yob(self.translate_edge(top_edge(t)))

    def fork_cell(self, j):
        return self.fork_cells[j]

    def cell_quad(self, cell):
        """Corner coordinates (bottom, left, top, right) of a cell, in the
        final diagram's join-coordinate plane."""
        c = self.coords
        return (c[cell.bottom], c[cell.left], c[cell.top], c[cell.right])


def random_slim_rectangular(seed, max_steps=4, max_k=3, grid_bounds=4, size_cap=80):
    """Reproducible random diagram: random grid plus random fork steps."""
    rng = random.Random(seed)
    m = rng.randint(1, grid_bounds)
    n = rng.randint(1, grid_bounds)
    d = grid(m, n)
    steps = []
    for _ in range(rng.randint(0, max_steps)):
        cells = distributive_cells(d)
        if not cells:
            break
        cell = rng.choice(cells)
        k = rng.randint(1, max_k)
        while k >= 1 and d.n + fork_growth(d, cell, k) > size_cap:
            k -= 1
        if k < 1:
            continue
        steps.append(Step(cell.bottom, k))
        d = multifork_extend(d, cell, k)
    return d, MultiforkSequence(m, n, tuple(steps))
