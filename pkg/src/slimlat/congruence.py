"""Congruences, the trajectory-block poset, and the swing decider.

The ground truth is a brute-force closure: the smallest join/meet
compatible equivalence collapsing a covering pair.  Everything geometric
(trajectory blocks, descendants, swings) is tested against it.
"""

from __future__ import annotations

from collections import namedtuple
from itertools import combinations

from ._kernel import principal_closure
from .diagram import Edge
from .errors import NotPartialOrder, NotSlimRectangular
from .trajectory import HAT, is_descendant, top_edge, trajectories

JirConPoset = namedtuple("JirConPoset", "congruences leq")

StrajPoset = namedtuple("StrajPoset", "blocks sigma_hat tau_hat")

SwingWitness = namedtuple("SwingWitness", "r steps")

DOWN_PERSP = "down"
SWING = "swing"


def canon_labels(labels):
    """Canonical block labels (first-occurrence renumbering)."""
    seen = {}
    out = []
    for label in labels:
        out.append(seen.setdefault(label, len(seen)))
    return tuple(out)


def restrict_labels(labels, emb):
    return canon_labels(tuple(labels[e] for e in emb))


def principal_congruence(d, p):
    """Labels of the smallest congruence collapsing the edge p."""
    return edge_congruences(d)[Edge(*p)]


def blocks_of(labels):
    out = {}
    for x, label in enumerate(labels):
        out.setdefault(label, []).append(x)
    return tuple(frozenset(b) for b in out.values())


def edge_congruences(d):
    """Principal congruence labels for every edge (cached)."""
    cached = d._cache.get("edge_cons")
    if cached is None:
        jt, mt = d.join_table(), d.meet_table()
        cached = {
            e: canon_labels(principal_closure(jt, mt, e.bottom, e.top))
            for e in d.edges()
        }
        d._cache["edge_cons"] = cached
    return cached


def con_geq(d, p, q):
    """con(p) >= con(q): collapsing p already collapses q."""
    labels = principal_congruence(d, p)
    return labels[q[0]] == labels[q[1]]


def refines(fine, coarse):
    """fine <= coarse as congruences (every fine block inside a coarse one)."""
    image = {}
    for a, b in zip(fine, coarse):
        if image.setdefault(a, b) != b:
            return False
    return True


def join_labels(n, parts):
    """Join of congruences given by labelings: union-generated partition."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for labels in parts:
        rep = {}
        for x, label in enumerate(labels):
            if label in rep:
                parent[find(x)] = find(rep[label])
            else:
                rep[label] = x
    return canon_labels(tuple(find(x) for x in range(n)))


def jir_con_poset(d):
    """Distinct join-irreducible principal congruences, ordered by inclusion."""
    distinct = sorted(set(edge_congruences(d).values()))
    jir = []
    for theta in distinct:
        below = [phi for phi in distinct if phi != theta and refines(phi, theta)]
        if join_labels(d.n, below or [canon_labels(range(d.n))]) != theta:
            jir.append(theta)
    leq = frozenset(
        (a, b) for a in range(len(jir)) for b in range(len(jir))
        if refines(jir[a], jir[b])
    )
    return JirConPoset(tuple(jir), leq)


def all_congruences(d):
    """Every congruence, as the join-closure of the principal ones."""
    cached = d._cache.get("all_cons")
    if cached is not None:
        return cached
    n = d.n
    delta = canon_labels(range(n))
    jir = list(jir_con_poset(d).congruences)
    result = {delta}
    # congruences = joins of down-sets of join-irreducible ones
    frontier = {(): delta}
    for idx, theta in enumerate(jir):
        new = {}
        for key, labels in frontier.items():
            new[key + (idx,)] = join_labels(n, [labels, theta])
        frontier.update(new)
    result.update(frontier.values())
    cached = frozenset(result)
    d._cache["all_cons"] = cached
    return cached


# -- trajectory blocks ---------------------------------------------------------


def theta_blocks(d, trajs=None):
    """Partition of trajectories: hats sharing their top element are merged."""
    trajs = trajs if trajs is not None else trajectories(d)
    by_top = {}
    blocks = []
    for t in trajs:
        if t.kind == HAT:
            by_top.setdefault(top_edge(t).top, []).append(t.index)
        else:
            blocks.append((t.index,))
    blocks.extend(tuple(v) for v in by_top.values())
    return tuple(sorted(blocks))


def _sigma(d, trajs):
    """(u, v) pairs: u a hat, top(u) below top(v), bottoms not comparable so."""
    pairs = set()
    tops = {t.index: top_edge(t) for t in trajs}
    for u in trajs:
        if u.kind != HAT:
            continue
        for v in trajs:
            tu, tv = tops[u.index], tops[v.index]
            if d.leq(tu.top, tv.top) and not d.leq(tu.bottom, tv.bottom):
                pairs.add((u.index, v.index))
    return pairs


def _block_poset(d, blocks, sigma_pairs):
    of_traj = {}
    for bi, block in enumerate(blocks):
        for t in block:
            of_traj[t] = bi
    sigma_hat = set()
    for u, v in sigma_pairs:
        bu, bv = of_traj[u], of_traj[v]
        if bu != bv:
            sigma_hat.add((bu, bv))
    tau = {(b, b) for b in range(len(blocks))} | set(sigma_hat)
    changed = True
    while changed:
        changed = False
        for a, b in list(tau):
            for c, e in list(tau):
                if b == c and (a, e) not in tau:
                    tau.add((a, e))
                    changed = True
    for a, b in tau:
        if a != b and (b, a) in tau:
            raise NotPartialOrder(f"trajectory-block order has a cycle: {a}, {b}")
    return StrajPoset(blocks, frozenset(sigma_hat), frozenset(tau))


def straj_poset_definitional(d, trajs=None):
    """Trajectory-block poset from the top-edge comparison relation."""
    _require_rect(d)
    trajs = trajs if trajs is not None else trajectories(d)
    blocks = theta_blocks(d, trajs)
    return _block_poset(d, blocks, _sigma(d, trajs))


def straj_poset_geometric(d, seq):
    """Trajectory-block poset from the descendant relation."""
    _require_rect(d)
    trajs = trajectories(d)
    blocks = theta_blocks(d, trajs)
    pairs = set()
    for u in trajs:
        if u.kind != HAT:
            continue
        for v in trajs:
            if u.index != v.index and is_descendant(u, v, seq):
                pairs.add((u.index, v.index))
    return _block_poset(d, blocks, pairs)


def _require_rect(d):
    if not (d.is_slim() and d.is_rectangular()):
        raise NotSlimRectangular("trajectory blocks need a slim rectangular diagram")


def straj_jir_isomorphism(d, poset=None):
    """The map block -> con(any edge of it); None if not an isomorphism."""
    poset = poset or straj_poset_definitional(d)
    trajs = trajectories(d)
    cons = edge_congruences(d)
    image = []
    for block in poset.blocks:
        reps = {cons[e] for ti in block for e in trajs[ti].edges}
        if len(reps) != 1:
            return None
        image.append(reps.pop())
    jir = jir_con_poset(d)
    if sorted(image) != sorted(jir.congruences) or len(set(image)) != len(image):
        return None
    for a in range(len(image)):
        for b in range(len(image)):
            if ((a, b) in poset.tau_hat) != refines(image[a], image[b]):
                return None
    return tuple(image)


def coloring_check(d):
    """The edge -> trajectory-block map is a coloring for the block order."""
    poset = straj_poset_definitional(d)
    return _quasi_coloring_holds(d, poset.blocks, poset.tau_hat)


def _quasi_coloring_holds(d, blocks, order_pairs):
    of_traj = {}
    for bi, block in enumerate(blocks):
        for t in block:
            of_traj[t] = bi
    from .trajectory import trajectory_of

    edge_block = {e: of_traj[trajectory_of(d, e).index] for e in d.edges()}
    edges = d.edges()
    for p in edges:
        for q in edges:
            gamma_ge = (edge_block[q], edge_block[p]) in order_pairs
            if gamma_ge != con_geq(d, p, q):
                return False
    return True


# -- swings and perspectivities ------------------------------------------------


def up_persp(d, p, q):
    return (
        d.join(p[1], q[0]) == q[1] and d.meet(p[1], q[0]) == p[0]
    )


def down_persp(d, p, q):
    return up_persp(d, q, p)


def swings(d, p, q):
    if p[1] != q[1]:
        return False
    lows = d.lower_covers(p[1])
    if len(lows) < 3:
        return False
    pos = lows.index(q[0])
    return 0 < pos < len(lows) - 1


def _swing_reach(d):
    """Reflexive-transitive closure of (down-perspective or swing) steps.

    Down-perspectivity is reflexive and transitive and swings are
    transitive, so the alternating witness language reaches exactly the
    edges reachable through this single relation.
    """
    cached = d._cache.get("swing_reach")
    if cached is not None:
        return cached
    edges = d.edges()
    index = {e: i for i, e in enumerate(edges)}
    m = len(edges)
    reach = [0] * m
    for i, p in enumerate(edges):
        row = 1 << i
        for jdx, q in enumerate(edges):
            if i != jdx and (down_persp(d, p, q) or swings(d, p, q)):
                row |= 1 << jdx
        reach[i] = row
    for k in range(m):
        bit = 1 << k
        rk = reach[k]
        for i in range(m):
            if reach[i] & bit:
                reach[i] |= rk
    cached = (edges, index, reach)
    d._cache["swing_reach"] = cached
    return cached


def swing_decide(d, p, q, want_witness=False):
    """Decide con(p) >= con(q) by the up-then-(down/swing) reachability.

    Returns bool, or (bool, witness-or-None) when a witness is requested.
    """
    _require_rect(d)
    p, q = Edge(*p), Edge(*q)
    edges, index, reach = _swing_reach(d)
    qbit = 1 << index[q]
    hit = None
    for r in edges:
        if up_persp(d, p, r) and reach[index[r]] & qbit:
            hit = r
            break
    if not want_witness:
        return hit is not None
    if hit is None:
        return False, None
    return True, _build_witness(d, hit, q)


def _build_witness(d, r, q):
    """Shortest down/swing path r -> q, normalized to the alternating form."""
    edges, index, _ = _swing_reach(d)
    prev = {r: None}
    frontier = [r]
    while q not in prev:
        nxt = []
        for e in frontier:
            for f in edges:
                if f in prev or e == f:
                    continue
                if down_persp(d, e, f) or swings(d, e, f):
                    prev[f] = e
                    nxt.append(f)
        frontier = nxt
    path = [q]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    path.reverse()
    steps = []
    for e, f in zip(path, path[1:]):
        label = DOWN_PERSP if down_persp(d, e, f) else SWING
        if steps and steps[-1][0] == label:
            steps[-1] = (label, f)
        else:
            steps.append((label, f))
    if steps and steps[0][0] == SWING:
        steps.insert(0, (DOWN_PERSP, r))
    return SwingWitness(r, tuple(steps))


def witness_valid(d, p, q, witness):
    """Replay a witness under the three step predicates."""
    if not up_persp(d, p, witness.r):
        return False
    cur = witness.r
    for i, (label, e) in enumerate(witness.steps):
        expected = DOWN_PERSP if i % 2 == 0 else SWING
        if label != expected:
            return False
        ok = down_persp(d, cur, e) if label == DOWN_PERSP else swings(d, cur, e)
        if not ok:
            return False
        cur = e
    return cur == Edge(*q)
