"""Finite planar lattice diagrams as combinatorial objects.

A diagram stores, per element, the upper covers in left-to-right order.
Lower-cover lists are derived (sorted by the left-of relation) and the
order relation is cached as bitmasks.  Diagrams are immutable values;
structural edits always build new diagrams.
"""

from __future__ import annotations

from collections import namedtuple
from functools import cmp_to_key

import numpy as np

from .errors import NotIncomparable, ParseError, ValidationError

Edge = namedtuple("Edge", "bottom top")

FourCell = namedtuple("FourCell", "bottom left right top")

BoundaryChains = namedtuple("BoundaryChains", "left right")

GluedSumDecomposition = namedtuple("GluedSumDecomposition", "components kinds mappings")

CHAIN_OF_NARROWS = "ChainOfNarrows"
INDECOMPOSABLE = "GluedSumIndecomposable"

# full λ-transitivity validation is cubic; skip it above this size
_TRANSITIVITY_CAP = 100


class Diagram:
    """Immutable planar lattice diagram with ordered cover lists."""

    __slots__ = ("_up", "_down", "_upset", "_downset", "_bottom", "_top", "_cache")

    def __init__(self, upper, lower, upset=None):
        self._up = tuple(tuple(u) for u in upper)
        self._down = tuple(tuple(d) for d in lower)
        n = len(self._up)
        if upset is None:
            upset = _closure_masks(self._up, n)
        self._upset = upset
        self._downset = _closure_masks(self._down, n)
        bottoms = [x for x in range(n) if not self._down[x]]
        tops = [x for x in range(n) if not self._up[x]]
        if len(bottoms) != 1 or len(tops) != 1:
            raise ValidationError("diagram must have a unique bottom and top")
        self._bottom = bottoms[0]
        self._top = tops[0]
        self._cache = {}

    # -- construction ----------------------------------------------------

    @classmethod
    def from_upper_covers(cls, upper, validate=True):
        """Build a diagram from left-to-right upper cover lists.

        Lower-cover lists are derived by sorting each element's lower
        covers with the left-of relation.  With ``validate`` the lattice
        axioms and the consistency of the left-of relation are checked.
        """
        n = len(upper)
        upper = [tuple(u) for u in upper]
        for x, ups in enumerate(upper):
            for y in ups:
                if not (0 <= y < n):
                    raise ValidationError(f"cover target {y} out of range")
                if y == x:
                    raise ValidationError(f"element {x} covers itself")
            if len(set(ups)) != len(ups):
                raise ValidationError(f"duplicate upper cover at element {x}")
        upset = _closure_masks(upper, n)
        for x, ups in enumerate(upper):
            for y in ups:
                if upset[y] & (1 << x):
                    raise ValidationError("cover relation contains a cycle")
        lower_raw = [[] for _ in range(n)]
        for x, ups in enumerate(upper):
            for y in ups:
                lower_raw[y].append(x)
        if validate:
            _check_lattice(upset, n)
            # non-cover "covers": y listed as upper cover of x but x < z < y
            for x, ups in enumerate(upper):
                for y in ups:
                    for z in range(n):
                        if z not in (x, y) and upset[x] & (1 << z) and upset[z] & (1 << y):
                            raise ValidationError(f"{x} -> {y} is not a covering pair")
        downset = _closure_masks(lower_raw, n)
        lower = [
            _sort_lower(lows, upper, upset, downset, validate)
            for lows in lower_raw
        ]
        d = cls(upper, lower, upset)
        if validate and n <= _TRANSITIVITY_CAP:
            _check_lambda_transitive(d)
        return d

    # -- basic queries ----------------------------------------------------

    @property
    def n(self):
        return len(self._up)

    def __len__(self):
        return len(self._up)

    @property
    def bottom(self):
        return self._bottom

    @property
    def top(self):
        return self._top

    def elements(self):
        return range(len(self._up))

    def upper_covers(self, x):
        return self._up[x]

    def lower_covers(self, x):
        return self._down[x]

    def leq(self, x, y):
        return bool(self._upset[x] & (1 << y))

    def lt(self, x, y):
        return x != y and self.leq(x, y)

    def comparable(self, x, y):
        return self.leq(x, y) or self.leq(y, x)

    def upset_mask(self, x):
        return self._upset[x]

    def downset_mask(self, x):
        return self._downset[x]

    def __eq__(self, other):
        return isinstance(other, Diagram) and self._up == other._up

    def __hash__(self):
        return hash(self._up)

    def __repr__(self):
        return f"Diagram(n={self.n})"

    # -- lattice operations ------------------------------------------------

    def join(self, x, y):
        mask = self._upset[x] & self._upset[y]
        return self._least_of(mask)

    def meet(self, x, y):
        mask = self._downset[x] & self._downset[y]
        return self._greatest_of(mask)

    def _least_of(self, mask):
        best = None
        h = self.heights()
        m = mask
        while m:
            z = (m & -m).bit_length() - 1
            if best is None or h[z] < h[best]:
                best = z
            m &= m - 1
        return best

    def _greatest_of(self, mask):
        best = None
        h = self.heights()
        m = mask
        while m:
            z = (m & -m).bit_length() - 1
            if best is None or h[z] > h[best]:
                best = z
            m &= m - 1
        return best

    def heights(self):
        """Length of a longest chain from the bottom, per element."""
        h = self._cache.get("heights")
        if h is None:
            n = self.n
            h = [0] * n
            for x in _topo_order(self._up, n):
                for y in self._up[x]:
                    if h[x] + 1 > h[y]:
                        h[y] = h[x] + 1
            h = tuple(h)
            self._cache["heights"] = h
        return h

    def length(self):
        return self.heights()[self._top]

    def join_table(self):
        """n*n int32 join table (lazy)."""
        t = self._cache.get("join_table")
        if t is None:
            t = self._op_table(self._upset, reverse=False)
            self._cache["join_table"] = t
        return t

    def meet_table(self):
        t = self._cache.get("meet_table")
        if t is None:
            t = self._op_table(self._downset, reverse=True)
            self._cache["meet_table"] = t
        return t

    def _op_table(self, masks, reverse):
        n = self.n
        leq = np.zeros((n, n), dtype=bool)
        for x in range(n):
            m = masks[x]
            while m:
                z = (m & -m).bit_length() - 1
                leq[x, z] = True
                m &= m - 1
        order = np.argsort(
            [-h if reverse else h for h in self.heights()], kind="stable"
        ).astype(np.int64)
        table = np.empty((n, n), dtype=np.int32)
        sorted_cols = leq[:, order]
        for x in range(n):
            cand = sorted_cols & sorted_cols[x]
            table[x] = order[np.argmax(cand, axis=1)]
        return table

    # -- edges and cells ----------------------------------------------------

    def edges(self):
        """All covering pairs, as Edge tuples in a canonical order."""
        e = self._cache.get("edges")
        if e is None:
            e = tuple(
                Edge(x, y) for x in range(self.n) for y in self._up[x]
            )
            self._cache["edges"] = e
        return e

    def is_edge(self, x, y):
        return y in self._up[x]

    def cells(self):
        """All 4-cells of a slim semimodular diagram, keyed by bottom.

        Consecutive upper covers of an element always span a covering
        square with empty interior here, so every cell arises this way.
        """
        cs = self._cache.get("cells")
        if cs is None:
            out = []
            for x in range(self.n):
                ups = self._up[x]
                for u, v in zip(ups, ups[1:]):
                    out.append(FourCell(x, u, v, self.join(u, v)))
            cs = tuple(out)
            self._cache["cells"] = cs
        return cs

    def cell_with_bottom(self, x):
        for c in self.cells():
            if c.bottom == x:
                return c
        return None

    # -- left / right -------------------------------------------------------

    def left_of(self, x, y):
        """True if x is on the left of y (x and y incomparable)."""
        if self.comparable(x, y):
            raise NotIncomparable(f"{x} and {y} are comparable")
        j = self.join(x, y)
        x1 = next(z for z in self._down[j] if self.leq(x, z))
        y1 = next(z for z in self._down[j] if self.leq(y, z))
        lows = self._down[j]
        return lows.index(x1) < lows.index(y1)

    def side_of_chain(self, chain, x):
        """-1, 0, +1 for x left of / on / right of a maximal chain."""
        chain_set = set(chain)
        if x in chain_set:
            return 0
        for c in chain:
            if not self.comparable(x, c):
                return -1 if self.left_of(x, c) else 1
        raise ValidationError("chain is not maximal: no incomparable witness")

    # -- boundary and decomposition ------------------------------------------

    def boundary_chains(self):
        bc = self._cache.get("boundary")
        if bc is None:
            left = [self._bottom]
            while self._up[left[-1]]:
                left.append(self._up[left[-1]][0])
            right = [self._bottom]
            while self._up[right[-1]]:
                right.append(self._up[right[-1]][-1])
            bc = BoundaryChains(tuple(left), tuple(right))
            self._cache["boundary"] = bc
        return bc

    def narrows(self):
        """Elements comparable to every element, in chain order."""
        full = (1 << self.n) - 1
        out = [
            x
            for x in range(self.n)
            if (self._upset[x] | self._downset[x]) == full
        ]
        out.sort(key=lambda x: self.heights()[x])
        return out

    def glued_sum_decompose(self):
        """Split at narrows into chain runs and indecomposable blocks."""
        if self.n == 1:
            return GluedSumDecomposition((), (), ())
        nar = self.narrows()
        components, kinds, mappings = [], [], []
        chain_run = [nar[0]]
        for w0, w1 in zip(nar, nar[1:]):
            between = [
                x
                for x in range(self.n)
                if x not in (w0, w1)
                and self.leq(w0, x)
                and self.leq(x, w1)
            ]
            if between:
                if len(chain_run) > 1:
                    sub, m = self.sub_diagram(chain_run)
                    components.append(sub)
                    kinds.append(CHAIN_OF_NARROWS)
                    mappings.append(m)
                sub, m = self.sub_diagram(sorted([w0, w1] + between))
                components.append(sub)
                kinds.append(INDECOMPOSABLE)
                mappings.append(m)
                chain_run = [w1]
            else:
                chain_run.append(w1)
        if len(chain_run) > 1:
            sub, m = self.sub_diagram(chain_run)
            components.append(sub)
            kinds.append(CHAIN_OF_NARROWS)
            mappings.append(m)
        return GluedSumDecomposition(tuple(components), tuple(kinds), tuple(mappings))

    def is_glued_sum_indecomposable(self):
        return self.n >= 4 and len(self.narrows()) == 2

    def sub_diagram(self, elements):
        """Induced diagram on an order-convex subset (e.g. an interval).

        Returns (diagram, mapping) with mapping[new_id] = old_id.
        """
        elements = sorted(elements)
        index = {old: new for new, old in enumerate(elements)}
        upper = [
            [index[y] for y in self._up[old] if y in index] for old in elements
        ]
        lower = [
            [index[y] for y in self._down[old] if y in index] for old in elements
        ]
        return Diagram(upper, lower), tuple(elements)

    def mirror(self):
        """Reflection over a vertical axis: all cover lists reversed."""
        upper = [tuple(reversed(u)) for u in self._up]
        lower = [tuple(reversed(d)) for d in self._down]
        return Diagram(upper, lower, self._upset)

    # -- structural predicates ------------------------------------------------

    def join_irreducibles(self):
        return tuple(x for x in range(self.n) if len(self._down[x]) == 1)

    def meet_irreducibles(self):
        return tuple(x for x in range(self.n) if len(self._up[x]) == 1)

    def is_semimodular(self):
        r = self._cache.get("semimodular")
        if r is None:
            r = True
            jt, mt = self.join_table(), self.meet_table()
            for a in range(self.n):
                for b in range(self.n):
                    m = mt[a, b]
                    if m != a and self.is_edge(m, a) and not self.is_edge(b, jt[a, b]):
                        r = False
                        break
                if not r:
                    break
            self._cache["semimodular"] = r
        return r

    def _jir_two_chains(self):
        """Join-irreducibles form the union of two chains (width <= 2)."""
        jir = self.join_irreducibles()
        for i, a in enumerate(jir):
            for b in jir[i + 1:]:
                if self.comparable(a, b):
                    continue
                for c in jir:
                    if c in (a, b):
                        continue
                    if not self.comparable(a, c) and not self.comparable(b, c):
                        return False
        return True

    def _has_cover_preserving_diamond(self):
        for u in range(self.n):
            ups = self._up[u]
            if len(ups) < 3:
                continue
            for i in range(len(ups)):
                for j in range(i + 1, len(ups)):
                    v = self.join(ups[i], ups[j])
                    if not (self.is_edge(ups[i], v) and self.is_edge(ups[j], v)):
                        continue
                    for k in range(len(ups)):
                        if k in (i, j):
                            continue
                        if self.is_edge(ups[k], v) and self.join(ups[i], ups[k]) == v:
                            return True
        return False

    def is_slim(self):
        """Slimness; on semimodular input both known criteria are compared."""
        r = self._cache.get("slim")
        if r is None:
            from .errors import InconsistencyError

            chains = self._jir_two_chains()
            if self.is_semimodular():
                diamond_free = not self._has_cover_preserving_diamond()
                if chains != diamond_free:
                    raise InconsistencyError(
                        "slimness criteria disagree on semimodular input"
                    )
            r = chains
            self._cache["slim"] = r
        return r

    def doubly_irreducibles(self):
        return tuple(
            x
            for x in range(self.n)
            if len(self._up[x]) == 1 and len(self._down[x]) == 1
        )

    def is_rectangular(self):
        """Exactly one doubly irreducible per boundary chain, complementary."""
        r = self._cache.get("rectangular")
        if r is None:
            di = set(self.doubly_irreducibles())
            bc = self.boundary_chains()
            interior_left = [x for x in bc.left if x in di and x not in (self._bottom, self._top)]
            interior_right = [x for x in bc.right if x in di and x not in (self._bottom, self._top)]
            r = (
                len(interior_left) == 1
                and len(interior_right) == 1
                and self.meet(interior_left[0], interior_right[0]) == self._bottom
                and self.join(interior_left[0], interior_right[0]) == self._top
            )
            self._cache["rectangular"] = r
        return r

    def corners(self):
        """(left corner, right corner) of a rectangular diagram."""
        di = set(self.doubly_irreducibles())
        bc = self.boundary_chains()
        lc = next(x for x in bc.left if x in di and x not in (self._bottom, self._top))
        rc = next(x for x in bc.right if x in di and x not in (self._bottom, self._top))
        return lc, rc

    # -- serialization -----------------------------------------------------

    def to_slat(self):
        lines = [f"elements {self.n}"]
        for x in range(self.n):
            lines.append(f"up {x}: {' '.join(str(y) for y in self._up[x])}".rstrip())
        return "\n".join(lines) + "\n"


def parse_diagram(text):
    """Parse .slat file contents into a validated Diagram."""
    n = None
    upper = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "elements":
            if n is not None:
                raise ParseError(f"line {lineno}: duplicate elements header")
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: bad elements header")
            n = int(parts[1])
            if n < 1:
                raise ParseError(f"line {lineno}: need at least one element")
            upper = [() for _ in range(n)]
        elif parts[0] == "up":
            if upper is None:
                raise ParseError(f"line {lineno}: 'up' before elements header")
            head = line[2:].split(":", 1)
            if len(head) != 2:
                raise ParseError(f"line {lineno}: missing ':'")
            try:
                x = int(head[0])
                covers = tuple(int(t) for t in head[1].split())
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
            if not (0 <= x < n):
                raise ParseError(f"line {lineno}: element {x} out of range")
            if x in seen:
                raise ParseError(f"line {lineno}: duplicate 'up {x}'")
            seen.add(x)
            upper[x] = covers
        else:
            raise ParseError(f"line {lineno}: unknown directive {parts[0]!r}")
    if upper is None:
        raise ParseError("missing elements header")
    return Diagram.from_upper_covers(upper, validate=True)


# -- internal helpers ---------------------------------------------------------


def _closure_masks(succ, n):
    """Reflexive-transitive closure as bitmasks, succ given as adjacency."""
    masks = [0] * n
    order = _topo_order(succ, n)
    for x in reversed(order):
        m = 1 << x
        for y in succ[x]:
            m |= masks[y]
        masks[x] = m
    return masks


def _topo_order(succ, n):
    indeg = [0] * n
    for x in range(n):
        for y in succ[x]:
            indeg[y] += 1
    stack = [x for x in range(n) if indeg[x] == 0]
    out = []
    while stack:
        x = stack.pop()
        out.append(x)
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                stack.append(y)
    if len(out) != n:
        raise ValidationError("cover relation contains a cycle")
    return out


def _check_lattice(upset, n):
    downset = [0] * n
    for x in range(n):
        m = upset[x]
        while m:
            z = (m & -m).bit_length() - 1
            downset[z] |= 1 << x
            m &= m - 1
    full = (1 << n) - 1
    bottoms = [x for x in range(n) if upset[x] == _union(upset)]
    if not bottoms:
        raise ValidationError("no bottom element")
    for x in range(n):
        for y in range(x + 1, n):
            for masks, kind in ((upset, "join"), (downset, "meet")):
                common = masks[x] & masks[y]
                if not common:
                    raise ValidationError(f"{kind} of {x},{y} does not exist")
                # unique extremal element whose cone covers all candidates
                found = False
                m = common
                while m:
                    z = (m & -m).bit_length() - 1
                    if masks[z] & common == common:
                        found = True
                        break
                    m &= m - 1
                if not found:
                    raise ValidationError(f"{kind} of {x},{y} does not exist")
    _ = full


def _union(masks):
    u = 0
    for m in masks:
        u |= m
    return u


def _sort_lower(lows, upper, upset, downset, validate):
    if len(lows) <= 1:
        return tuple(lows)

    def meet(x, y):
        common = downset[x] & downset[y]
        m = common
        while m:
            z = (m & -m).bit_length() - 1
            if downset[z] & common == common:
                return z
            m &= m - 1
        raise ValidationError(f"meet of {x},{y} does not exist")

    def cmp(u, v):
        z = meet(u, v)
        ups = upper[z]
        t1 = [t for t in ups if upset[t] & (1 << u)]
        t2 = [t for t in ups if upset[t] & (1 << v)]
        if not t1 or not t2:
            raise ValidationError(
                f"cannot orient lower covers {u},{v}: no branch at their meet"
            )
        sign = -1 if ups.index(t1[0]) < ups.index(t2[0]) else 1
        if validate:
            for a in t1:
                for b in t2:
                    s = -1 if ups.index(a) < ups.index(b) else 1
                    if s != sign:
                        raise ValidationError(
                            f"contradictory left-right orders for {u},{v}"
                        )
        return sign

    return tuple(sorted(lows, key=cmp_to_key(cmp)))


def _check_lambda_transitive(d):
    n = d.n
    incomp = [
        (x, y)
        for x in range(n)
        for y in range(n)
        if x != y and not d.comparable(x, y)
    ]
    left = {}
    for x, y in incomp:
        left[(x, y)] = d.left_of(x, y)
        if (y, x) in left and left[(y, x)] == left[(x, y)]:
            raise ValidationError(f"left-of not antisymmetric on {x},{y}")
    lefts = {(x, y) for (x, y), v in left.items() if v}
    for x, y in lefts:
        for z in range(n):
            if (y, z) in lefts and (x, z) in left and not left[(x, z)]:
                raise ValidationError(
                    f"left-of not transitive on {x},{y},{z}"
                )
