"""Pure-Python versions of the compiled graph kernels.

Same signatures and the same floating-point operation order as
``_fastcore``, so both backends return bit-identical arrays.
"""

import numpy as np


def _find(parent, a):
    root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        parent[a], a = root, parent[a]
    return root


def union_find_scan(n, ei, ej, order):
    parent = list(range(n))
    rank = [0] * n
    ei = ei.tolist()
    ej = ej.tolist()
    taken = []
    for e in order.tolist():
        if len(taken) >= n - 1:
            break
        a = _find(parent, ei[e])
        b = _find(parent, ej[e])
        if a == b:
            continue
        if rank[a] < rank[b]:
            a, b = b, a
        parent[b] = a
        if rank[a] == rank[b]:
            rank[a] += 1
        taken.append(e)
    return np.array(taken, dtype=np.int64)


def component_labels(n, ei, ej):
    parent = list(range(n))
    for a, b in zip(ei.tolist(), ej.tolist()):
        a = _find(parent, a)
        b = _find(parent, b)
        if a == b:
            continue
        if a < b:
            parent[b] = a
        else:
            parent[a] = b
    return np.array([_find(parent, k) for k in range(n)], dtype=np.int64)


def tree_distances(n, ei, ej, w):
    adj = [[] for _ in range(n)]
    for a, b, x in zip(ei.tolist(), ej.tolist(), w.tolist()):
        adj[a].append((b, x))
        adj[b].append((a, x))
    out = np.zeros((n, n), dtype=np.float64)
    for r in range(n):
        dist = [0.0] * n
        parent = [-1] * n
        stack = [r]
        while stack:
            node = stack.pop()
            for nb, x in adj[node]:
                if nb == parent[node]:
                    continue
                parent[nb] = node
                dist[nb] = dist[node] + x
                stack.append(nb)
        row = dist[r + 1:]
        out[r, r + 1:] = row
        out[r + 1:, r] = row
    return out
