"""Pure-Python fallback for the congruence closure kernel."""

import numpy as np


def principal_closure(join_t, meet_t, a0, b0):
    """Same contract as the compiled kernel; see _conclose.pyx."""
    n = join_t.shape[0]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    jt = join_t.tolist()
    mt = meet_t.tolist()
    queue = [(a0, b0)]
    head = 0
    while head < len(queue):
        a, b = queue[head]
        head += 1
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[rb] = ra
        ja, jb, ma, mb = jt[a], jt[b], mt[a], mt[b]
        for z in range(n):
            queue.append((ja[z], jb[z]))
            queue.append((ma[z], mb[z]))
    return np.array([find(x) for x in range(n)], dtype=np.int32)
