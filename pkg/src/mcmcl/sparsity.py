"""Similarity inversion of MC kernels and connectivity-preserving sparsification."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .kernels import upper_edges
from .partition import DataError

log = logging.getLogger(__name__)

# selected_threshold value meaning "nothing was pruned"
NO_PRUNING = 0.0


def _check_threshold(t: float):
    if not 0.0 <= t < 1.0:
        raise DataError(f"threshold must lie in [0, 1), got {t}")


def mc_similarity_corr(mc, t: float = 0.0) -> np.ndarray:
    """``max(0, 1 - x - t)`` for correlation-based MC distances."""
    _check_threshold(t)
    w = np.maximum(0.0, 1.0 - np.asarray(mc, dtype=np.float64) - t)
    np.fill_diagonal(w, 0.0)
    return w


def mc_similarity_eucl(mc, t: float = 0.0) -> np.ndarray:
    """``max(0, 1 - x / max(x) - t)`` for Euclidean MC distances."""
    _check_threshold(t)
    mc = np.asarray(mc, dtype=np.float64)
    top = mc.max()
    if top <= 0:
        raise DataError("MC kernel is all zeros")
    w = np.maximum(0.0, 1.0 - mc / top - t)
    np.fill_diagonal(w, 0.0)
    return w


def prune_and_rescale(w, t: float) -> np.ndarray:
    """Zero weights at or below ``t`` and shift the rest down by ``t``."""
    _check_threshold(t)
    return _shift(w, t)


def _shift(w, t):
    # a candidate cutoff may equal the top weight 1, outside the public range
    return np.maximum(0.0, np.asarray(w, dtype=np.float64) - t)


def _positive_edges(w):
    n = w.shape[0]
    ii, jj = upper_edges(n)
    vals = w[ii, jj]
    keep = vals > 0
    return ii[keep], jj[keep], vals[keep]


def component_labels(w) -> np.ndarray:
    """Component id (smallest member index) of each node over positive edges."""
    w = np.asarray(w, dtype=np.float64)
    ii, jj, _ = _positive_edges(w)
    return _core.component_labels(w.shape[0], ii, jj)


def count_components(w) -> int:
    return int(np.unique(component_labels(w)).size)


@dataclass
class SparsityResult:
    network: np.ndarray
    selected_threshold: float
    thresholds_tested: np.ndarray
    pruned: bool = True
    warnings: list = field(default_factory=list)


def enforce_sparsity(w) -> SparsityResult:
    """Prune at the largest weight cutoff that keeps the network in one piece.

    Candidate cutoffs are the distinct positive weights in ascending order.
    The first cutoff that splits the network is rejected and the one before
    it is applied. If the very first cutoff already splits it, nothing is
    pruned.

    Rather than recounting components per candidate, the splitting cutoff is
    found directly: it is the smallest edge weight on a maximum spanning
    tree, since every cutoff below it keeps that tree and any cutoff at or
    above it removes the tree's only link across one cut.
    """
    w = np.asarray(w, dtype=np.float64)
    n = w.shape[0]
    ii, jj, vals = _positive_edges(w)
    candidates = np.unique(vals)
    if n == 1:
        return SparsityResult(w.copy(), NO_PRUNING, candidates[:0], pruned=False)
    order = np.lexsort((jj, ii, -vals)).astype(np.int64)
    taken = _core.union_find_scan(n, ii, jj, order)
    if taken.size < n - 1:
        raise DataError(f"similarity network already has {n - taken.size} components")
    bottleneck = vals[taken].min()
    k = int(np.searchsorted(candidates, bottleneck))
    tested = candidates[: k + 1]
    if k == 0:
        msg = "the first cutoff already disconnects the network; no pruning applied"
        log.warning(msg)
        return SparsityResult(w.copy(), NO_PRUNING, tested, pruned=False, warnings=[msg])
    t = float(candidates[k - 1])
    return SparsityResult(prune_and_rescale(w, t), t, tested)


def enforce_sparsity_scan(w) -> SparsityResult:
    """Candidate-by-candidate version of :func:`enforce_sparsity`.

    Quadratic in the number of distinct weights; kept as the reference the
    fast path is tested against.
    """
    w = np.asarray(w, dtype=np.float64)
    if count_components(w) > 1:
        raise DataError("similarity network is already disconnected")
    candidates = np.unique(w[w > 0])
    selected = None
    tested = []
    warn = []
    for pos, cutoff in enumerate(candidates):
        tested.append(cutoff)
        if count_components(_shift(w, cutoff)) > 1:
            if pos == 0:
                warn.append("the first cutoff already disconnects the network; no pruning applied")
            else:
                selected = float(candidates[pos - 1])
            break
        selected = float(cutoff)
    tested = np.array(tested)
    if selected is None:
        return SparsityResult(w.copy(), NO_PRUNING, tested, pruned=False, warnings=warn)
    return SparsityResult(prune_and_rescale(w, selected), selected, tested)
