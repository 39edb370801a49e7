"""Pairwise distances, minimum spanning trees and the minimum-curvilinear kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import _core
from .dataset import check_matrix
from .partition import DataError

DISTANCES = ("euclidean", "correlation")
FACTORS = ("original", "sqrt", "log")


def euclidean_distance_matrix(x) -> np.ndarray:
    x = check_matrix(x)
    d = cdist(x, x)
    np.fill_diagonal(d, 0.0)
    return d


def correlation_distance_matrix(x) -> np.ndarray:
    """``1 - pearson(row_i, row_j)``; every row needs non-zero variance."""
    x = check_matrix(x)
    if x.shape[1] < 2:
        raise DataError("correlation distance needs at least 2 features")
    xc = x - x.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.einsum("ij,ij->i", xc, xc))
    flat = np.flatnonzero(norms <= 1e-12 * max(1.0, float(np.abs(x).max())))
    if flat.size:
        raise DataError(f"sample {flat[0]} is constant; correlation is undefined")
    z = xc / norms[:, None]
    r = np.clip(z @ z.T, -1.0, 1.0)
    d = 1.0 - r
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def distance_matrix(x, dist: str) -> np.ndarray:
    if dist == "euclidean":
        return euclidean_distance_matrix(x)
    if dist == "correlation":
        return correlation_distance_matrix(x)
    raise ValueError(f"unknown distance {dist!r}; expected one of {DISTANCES}")


def euclidean_similarity(d) -> np.ndarray:
    """``1 - d / max(d)`` off the diagonal, 0 on it."""
    d = np.asarray(d, dtype=np.float64)
    top = d.max()
    if top <= 0:
        raise DataError("all distances are zero; similarity is undefined")
    s = 1.0 - d / top
    np.fill_diagonal(s, 0.0)
    return s


def apply_factor(d, factor: str) -> np.ndarray:
    d = np.asarray(d, dtype=np.float64)
    if factor == "original":
        return d.copy()
    if factor == "sqrt":
        return np.sqrt(d)
    if factor == "log":
        return np.log1p(d)
    raise ValueError(f"unknown factor {factor!r}; expected one of {FACTORS}")


@dataclass
class SpanningTree:
    n: int
    i: np.ndarray
    j: np.ndarray
    weight: np.ndarray

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.i.tolist(), self.j.tolist(), self.weight.tolist()))

    @property
    def total_weight(self) -> float:
        return float(self.weight.sum())


def upper_edges(n: int):
    ii, jj = np.triu_indices(n, k=1)
    return ii.astype(np.int64), jj.astype(np.int64)


def minimum_spanning_tree(d) -> SpanningTree:
    """Kruskal's algorithm over all pairs of the dense distance matrix.

    Edges are ordered by (weight, i, j) with i < j, so equal-weight ties go
    to the lowest endpoint indices and the tree is unique.
    """
    d = np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    if n < 2 or d.shape != (n, n):
        raise DataError(f"need a square distance matrix with n >= 2, got {d.shape}")
    ii, jj = upper_edges(n)
    w = d[ii, jj]
    order = np.lexsort((jj, ii, w)).astype(np.int64)
    taken = _core.union_find_scan(n, ii, jj, order)
    taken = np.sort(taken)  # (i, j) order; the edge set is what matters
    return SpanningTree(n, ii[taken], jj[taken], w[taken])


def mc_distance_kernel(tree: SpanningTree) -> np.ndarray:
    """All-pairs path lengths over the spanning tree."""
    if tree.i.shape[0] != tree.n - 1:
        raise DataError(f"a tree on {tree.n} nodes has {tree.n - 1} edges, got {tree.i.shape[0]}")
    return _core.tree_distances(
        tree.n,
        np.ascontiguousarray(tree.i, dtype=np.int64),
        np.ascontiguousarray(tree.j, dtype=np.int64),
        np.ascontiguousarray(tree.weight, dtype=np.float64),
    )


def mc_kernel_from_distances(d, factor: str = "original") -> np.ndarray:
    """Factor transform, spanning tree, then tree path lengths."""
    return mc_distance_kernel(minimum_spanning_tree(apply_factor(d, factor)))
