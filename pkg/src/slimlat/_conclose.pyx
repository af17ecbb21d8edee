# Union-find closure for principal lattice congruences.
#
# Worklist algorithm: merging a pair (a, b) obliges (a v z, b v z) and
# (a ^ z, b ^ z) for every z; each effective union enqueues 2n pairs, and
# there are at most n - 1 unions, so the queue is bounded by 2n(n-1) + 1.

import numpy as np


def principal_closure(int[:, ::1] join_t, int[:, ::1] meet_t, int a0, int b0):
    """Labels of the smallest congruence collapsing (a0, b0).

    join_t/meet_t are n*n int32 operation tables.  Returns an int32 array
    mapping each element to the index of its block representative.
    """
    cdef int n = join_t.shape[0]
    cdef long cap = 2 * <long> n * n + 4
    parent_arr = np.arange(n, dtype=np.int32)
    qa_arr = np.empty(cap, dtype=np.int32)
    qb_arr = np.empty(cap, dtype=np.int32)
    cdef int[::1] parent = parent_arr
    cdef int[::1] qa = qa_arr
    cdef int[::1] qb = qb_arr
    cdef long head = 0, tail = 0
    cdef int a, b, ra, rb, z, x, r

    qa[tail] = a0
    qb[tail] = b0
    tail += 1
    while head < tail:
        a = qa[head]
        b = qb[head]
        head += 1
        ra = a
        while parent[ra] != ra:
            parent[ra] = parent[parent[ra]]
            ra = parent[ra]
        rb = b
        while parent[rb] != rb:
            parent[rb] = parent[parent[rb]]
            rb = parent[rb]
        if ra == rb:
            continue
        parent[rb] = ra
        for z in range(n):
            qa[tail] = join_t[a, z]
            qb[tail] = join_t[b, z]
            tail += 1
            qa[tail] = meet_t[a, z]
            qb[tail] = meet_t[b, z]
            tail += 1
    for x in range(n):
        r = x
        while parent[r] != r:
            r = parent[r]
        parent[x] = r
    return parent_arr
