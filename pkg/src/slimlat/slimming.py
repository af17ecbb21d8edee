"""Full slimming, anti-slimming, and diagram comparison helpers.

An "eye" is a doubly irreducible element strictly inside a length-2
interval.  Full slimming removes all eyes (iterating until none remain)
and records, per surviving 4-cell bottom, how many eyes the cell carried.
"""

from __future__ import annotations

from collections import namedtuple
from functools import cmp_to_key

from .diagram import Diagram
from .errors import InconsistencyError, NuDomainError, ValidationError
from .trajectory import trajectories, trajectory_of

SimilarityMap = namedtuple("SimilarityMap", "mapping mirrored")

Slimming = namedtuple("Slimming", "diagram nu old_of_new eyes_by_cell")


def find_eyes(d):
    """All elements removed by full slimming, in removal order."""
    return tuple(e for e, _, _ in _removal_schedule(d))


def _removal_schedule(d):
    """(eye, lower, upper) triples in the canonical removal order.

    For semimodular input a single pass suffices, but we iterate to a
    fixpoint regardless.
    """
    alive = set(d.elements())
    up = {x: list(d.upper_covers(x)) for x in d.elements()}
    down = {x: list(d.lower_covers(x)) for x in d.elements()}
    schedule = []
    while True:
        eyes = []
        for x in sorted(alive):
            if x in (d.bottom, d.top):
                continue
            if len(up[x]) != 1 or len(down[x]) != 1:
                continue
            lo, hi = down[x][0], up[x][0]
            # an eye sits strictly inside its covering square: never the
            # outermost sibling on either end
            pos_up = up[lo].index(x)
            pos_dn = down[hi].index(x)
            if pos_up in (0, len(up[lo]) - 1) or pos_dn in (0, len(down[hi]) - 1):
                continue
            if _interval_length(up, alive, lo, hi) == 2:
                eyes.append((x, lo, hi))
        if not eyes:
            break
        eyes.sort(key=lambda t: (t[1], up[t[1]].index(t[0])))
        for x, lo, hi in eyes:
            alive.remove(x)
            up[lo].remove(x)
            down[hi].remove(x)
            schedule.append((x, lo, hi))
    return schedule


def _interval_length(up, alive, lo, hi):
    best = {lo: 0}
    order = [lo]
    for x in order:
        for y in up[x]:
            if y not in alive:
                continue
            # only walk inside the interval
            if y == hi or _reaches(up, alive, y, hi):
                if best[x] + 1 > best.get(y, -1):
                    best[y] = best[x] + 1
                    if y != hi:
                        order.append(y)
    return best.get(hi, -1)


def _reaches(up, alive, x, goal):
    stack = [x]
    seen = set()
    while stack:
        z = stack.pop()
        if z == goal:
            return True
        for y in up[z]:
            if y in alive and y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def full_slimming(d):
    """(slim diagram, eye-count map keyed by 4-cell bottoms)."""
    s = full_slimming_ex(d)
    return s.diagram, s.nu


def full_slimming_ex(d):
    """Full slimming with bookkeeping: id mapping and per-cell eye lists."""
    schedule = _removal_schedule(d)
    removed = {x for x, _, _ in schedule}
    survivors = [x for x in d.elements() if x not in removed]
    index = {old: new for new, old in enumerate(survivors)}
    upper = [
        [index[y] for y in d.upper_covers(old) if y not in removed]
        for old in survivors
    ]
    lower = [
        [index[y] for y in d.lower_covers(old) if y not in removed]
        for old in survivors
    ]
    slim = Diagram(upper, lower)
    eyes_by_cell = {}
    for x, lo, hi in schedule:
        eyes_by_cell.setdefault(index[lo], []).append(x)
    for b, eyes in eyes_by_cell.items():
        cell = slim.cell_with_bottom(b)
        if cell is None:
            raise InconsistencyError("removed eye does not sit in a 4-cell")
        eyes.sort(key=cmp_to_key(lambda u, v: -1 if d.left_of(u, v) else 1))
        eyes_by_cell[b] = tuple(eyes)
    nu = {b: len(eyes) for b, eyes in eyes_by_cell.items()}
    return Slimming(slim, nu, tuple(survivors), eyes_by_cell)


def anti_slim(d, nu):
    """Insert nu[b] eyes into the 4-cell with bottom b, for each b."""
    return anti_slim_ex(d, nu)[0]


def anti_slim_ex(d, nu):
    """Anti-slimming with bookkeeping.

    Returns (diagram, old_to_new, eyes_by_cell) where eyes_by_cell maps an
    old cell bottom to the new ids of its eyes, left to right.
    """
    cells = {}
    for b, k in sorted(nu.items()):
        if k < 0:
            raise NuDomainError(f"negative eye count at {b}")
        if k == 0:
            continue
        cell = d.cell_with_bottom(b)
        if cell is None:
            raise NuDomainError(f"element {b} is not the bottom of a 4-cell")
        cells[b] = cell
    old_to_new = tuple(range(d.n))
    upper = [list(d.upper_covers(x)) for x in d.elements()]
    lower = [list(d.lower_covers(x)) for x in d.elements()]
    eyes_by_cell = {}
    next_id = d.n
    for b, cell in sorted(cells.items()):
        k = nu[b]
        ids = list(range(next_id, next_id + k))
        next_id += k
        eyes_by_cell[b] = tuple(ids)
        pos = upper[b].index(cell.left) + 1
        upper[b][pos:pos] = ids
        pos = lower[cell.top].index(cell.left) + 1
        lower[cell.top][pos:pos] = ids
        for e in ids:
            upper.append([cell.top])
            lower.append([b])
    return Diagram(upper, lower), old_to_new, eyes_by_cell


def jh_permutation(d):
    """Pairing of left and right boundary edges along trajectories.

    One-line notation: result[i-1] = j means the i-th left boundary edge
    and the j-th right boundary edge lie on the same trajectory.
    """
    bc = d.boundary_chains()
    if len(bc.left) != len(bc.right):
        raise ValidationError("boundary chains of different length")
    right_index = {}
    for j, (x, y) in enumerate(zip(bc.right, bc.right[1:]), start=1):
        right_index[(x, y)] = j
    perm = []
    for x, y in zip(bc.left, bc.left[1:]):
        t = trajectory_of(d, (x, y))
        last = t.edges[-1]
        perm.append(right_index[(last.bottom, last.top)])
    return tuple(perm)


def mirror(d):
    return d.mirror()


def similarity(d1, d2):
    """A direct or mirrored similarity map d1 -> d2, if one exists.

    Slim diagrams only; the search is anchored on join-coordinates, which
    determine both the elements and the left-to-right cover order.
    """
    from .coords import join_coords

    if not (d1.is_slim() and d2.is_slim()):
        raise ValidationError("similarity search requires slim diagrams")
    if d1.n != d2.n:
        return None
    c1 = join_coords(d1)
    c2 = join_coords(d2)
    by_coord2 = {c: x for x, c in c2.items()}
    if len(by_coord2) != d2.n:
        return None
    for mirrored in (False, True):
        source = {x: ((r, l) if mirrored else (l, r)) for x, (l, r) in c1.items()}
        if set(source.values()) == set(by_coord2):
            mapping = tuple(by_coord2[source[x]] for x in d1.elements())
            return SimilarityMap(mapping, mirrored)
    return None


def similar_with_eyes(d1, d2, direct_only=True):
    """True if d1 and d2 are the same diagram up to relabeling.

    Compares the full slimmings by similarity and the eye counts through
    the matched cells.
    """
    s1 = full_slimming_ex(d1)
    s2 = full_slimming_ex(d2)
    m = similarity(s1.diagram, s2.diagram)
    if m is None or (direct_only and m.mirrored):
        return False
    for b, k in s1.nu.items():
        if s2.nu.get(m.mapping[b], 0) != k:
            return False
    for b, k in s2.nu.items():
        if k and s1.nu.get(m.mapping.index(b), 0) != k:
            return False
    return True
