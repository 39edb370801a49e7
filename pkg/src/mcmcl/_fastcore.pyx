# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels: union-find edge scans and all-pairs tree distances."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t INT
ctypedef cnp.float64_t FLOAT


cdef inline INT _find(INT[::1] parent, INT a) nogil:
    cdef INT root = a, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


def union_find_scan(INT n, INT[::1] ei, INT[::1] ej, INT[::1] order):
    """Scan edges in ``order``; return the edge ids that joined two components.

    Stops once a single component remains (n - 1 accepted edges).
    """
    cdef INT[::1] parent = np.arange(n, dtype=np.int64)
    cdef INT[::1] rank = np.zeros(n, dtype=np.int64)
    out = np.empty(max(n - 1, 0), dtype=np.int64)
    cdef INT[::1] acc = out
    cdef INT k, e, a, b, m = order.shape[0], taken = 0
    with nogil:
        for k in range(m):
            if taken >= n - 1:
                break
            e = order[k]
            a = _find(parent, ei[e])
            b = _find(parent, ej[e])
            if a == b:
                continue
            if rank[a] < rank[b]:
                a, b = b, a
            parent[b] = a
            if rank[a] == rank[b]:
                rank[a] += 1
            acc[taken] = e
            taken += 1
    return out[:taken]


def component_labels(INT n, INT[::1] ei, INT[::1] ej):
    """Smallest node index of each node's connected component."""
    cdef INT[::1] parent = np.arange(n, dtype=np.int64)
    cdef INT k, a, b, m = ei.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef INT[::1] lab = out
    with nogil:
        for k in range(m):
            a = _find(parent, ei[k])
            b = _find(parent, ej[k])
            if a == b:
                continue
            # keep the smaller index as root
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
        for k in range(n):
            lab[k] = _find(parent, k)
    return out


def tree_distances(INT n, INT[::1] ei, INT[::1] ej, FLOAT[::1] w):
    """All-pairs path lengths in a tree given by its n - 1 edges.

    One depth-first traversal per root; entry (r, v) with r < v is taken
    from root r's traversal and mirrored, so the result is exactly symmetric.
    """
    cdef INT m = ei.shape[0], k, r, top, node, nb, p
    cdef INT[::1] deg = np.zeros(n + 1, dtype=np.int64)
    for k in range(m):
        deg[ei[k] + 1] += 1
        deg[ej[k] + 1] += 1
    for k in range(n):
        deg[k + 1] += deg[k]
    cdef INT[::1] fill = np.array(deg[:n], dtype=np.int64)
    cdef INT[::1] nbr = np.empty(2 * m, dtype=np.int64)
    cdef FLOAT[::1] nbw = np.empty(2 * m, dtype=np.float64)
    for k in range(m):
        nbr[fill[ei[k]]] = ej[k]
        nbw[fill[ei[k]]] = w[k]
        fill[ei[k]] += 1
        nbr[fill[ej[k]]] = ei[k]
        nbw[fill[ej[k]]] = w[k]
        fill[ej[k]] += 1

    out = np.zeros((n, n), dtype=np.float64)
    cdef FLOAT[:, ::1] d = out
    cdef FLOAT[::1] dist = np.zeros(n, dtype=np.float64)
    cdef INT[::1] stack = np.empty(n, dtype=np.int64)
    cdef INT[::1] parent = np.empty(n, dtype=np.int64)
    with nogil:
        for r in range(n):
            dist[r] = 0.0
            parent[r] = -1
            stack[0] = r
            top = 1
            while top > 0:
                top -= 1
                node = stack[top]
                for p in range(deg[node], deg[node + 1]):
                    nb = nbr[p]
                    if nb == parent[node]:
                        continue
                    parent[nb] = node
                    dist[nb] = dist[node] + nbw[p]
                    stack[top] = nb
                    top += 1
            for k in range(r + 1, n):
                d[r, k] = dist[k]
                d[k, r] = dist[k]
    return out
