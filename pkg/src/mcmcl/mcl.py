"""Markov clustering: flow simulation, attractor extraction and inflation search."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _core
from .kernels import distance_matrix, euclidean_similarity, mc_kernel_from_distances
from .partition import ClusterCountUnreachable, DataError, Partition
from .sparsity import count_components, enforce_sparsity, mc_similarity_corr, mc_similarity_eucl

log = logging.getLogger(__name__)

MIN_INFLATION = 1.1
MAX_INFLATION = 20.0
RESOLUTIONS = (0.1, 0.01, 0.001)


@dataclass(frozen=True)
class MclSettings:
    inflation: float = 2.0
    expansion_power: int = 2
    max_iterations: int = 200
    convergence_tol: float = 1e-9
    prune_floor: float = 1e-12
    attractor_tol: float = 1e-6


def add_self_loops(w) -> np.ndarray:
    """Set each diagonal entry to the node's largest incident weight (1 if isolated)."""
    w = np.array(w, dtype=np.float64)
    np.fill_diagonal(w, 0.0)
    loops = w.max(axis=0)
    loops[loops <= 0] = 1.0
    np.fill_diagonal(w, loops)
    return w


def normalize_columns(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    sums = m.sum(axis=0)
    if np.any(sums <= 0):
        raise DataError(f"column {int(np.flatnonzero(sums <= 0)[0])} has no mass")
    return m / sums


def expand(p, power: int = 2) -> np.ndarray:
    return np.linalg.matrix_power(p, power)


def inflate(p, r: float, prune_floor: float = 0.0) -> np.ndarray:
    """Entrywise power ``r``, flooring tiny entries, then column renormalisation.

    Columns are scaled by their maximum before the power (which cancels in
    the renormalisation) so large ``r`` cannot underflow a whole column;
    ``prune_floor`` is therefore relative to the column maximum.
    """
    if r <= 1:
        raise ValueError(f"inflation must exceed 1, got {r}")
    p = np.asarray(p, dtype=np.float64)
    top = p.max(axis=0)
    if np.any(top <= 0):
        raise DataError(f"column {int(np.flatnonzero(top <= 0)[0])} has no mass")
    q = np.power(p / top, r)
    if prune_floor > 0:
        q[q < prune_floor] = 0.0
    return q / q.sum(axis=0)


def extract_clusters(steady, attractor_tol: float = 1e-6) -> Partition:
    """Read clusters off a converged flow matrix.

    Attractors are nodes keeping diagonal mass above ``attractor_tol``.
    Every node is attached to the attractor row holding its column maximum
    (lowest index on ties); attractors sharing mass in any column are merged.
    """
    steady = np.asarray(steady, dtype=np.float64)
    n = steady.shape[0]
    attractors = np.flatnonzero(np.diag(steady) > attractor_tol)
    if attractors.size == 0:
        raise DataError("no attractor in flow matrix; the iteration has not converged")
    sub = steady[attractors]
    owner = attractors[np.argmax(sub, axis=0)]

    # attractors with mass in the same column belong together
    ai, aj = [], []
    for col in range(n):
        rows = attractors[sub[:, col] > attractor_tol]
        if rows.size > 1:
            ai.extend([rows[0]] * (rows.size - 1))
            aj.extend(rows[1:].tolist())
    comp = _core.component_labels(n, np.array(ai, dtype=np.int64), np.array(aj, dtype=np.int64))
    return Partition.from_labels(comp[owner])


@dataclass
class MclRun:
    partition: Partition
    iterations: int
    converged: bool
    column_sum_error: float


def mcl_iterate(w, settings: MclSettings = MclSettings(), trace=None) -> Partition:
    """Alternate expansion and inflation until the flow matrix stops changing.

    ``trace``, if given, is called with the matrix after every expand and
    inflate step.
    """
    return mcl_run(w, settings, trace).partition


def mcl_run(w, settings: MclSettings = MclSettings(), trace=None) -> MclRun:
    m = normalize_columns(add_self_loops(w))
    worst = float(np.abs(m.sum(axis=0) - 1).max())
    converged = False
    it = 0
    for it in range(1, settings.max_iterations + 1):
        prev = m
        m = expand(m, settings.expansion_power)
        if trace is not None:
            trace(m)
        worst = max(worst, float(np.abs(m.sum(axis=0) - 1).max()))
        m = inflate(m, settings.inflation, settings.prune_floor)
        if trace is not None:
            trace(m)
        worst = max(worst, float(np.abs(m.sum(axis=0) - 1).max()))
        if np.abs(m - prev).max() < settings.convergence_tol:
            converged = True
            break
    part = extract_clusters(m, settings.attractor_tol)
    if not converged:
        log.warning("MCL did not converge in %d iterations (inflation %.4g)", it, settings.inflation)
        part.info["warning"] = "not converged"
    part.info.update(inflation=settings.inflation, iterations=it, converged=converged)
    return MclRun(part, it, converged, worst)


def inflation_grid(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(round((hi - lo) / step)) + 1
    return np.round(lo + step * np.arange(count), 10)


def mcl_target_clusters(w, c: int, settings: MclSettings = MclSettings()) -> Partition:
    """Search the inflation value giving exactly ``c`` clusters.

    Bisects the grid 1.1, 1.2, ..., 20. When the bracket closes without a
    hit, the grid between the last two bracketing values is refined to step
    0.01 and then 0.001. Raises :class:`ClusterCountUnreachable` when the
    finest grid also misses, carrying the partition whose count was closest.
    """
    w = np.asarray(w, dtype=np.float64)
    n = w.shape[0]
    if not 1 <= c <= n:
        raise DataError(f"target cluster count must lie in [1, {n}], got {c}")
    cache: dict[float, Partition] = {}
    runs = 0

    def run(r):
        nonlocal runs
        key = round(float(r), 9)
        if key not in cache:
            runs += 1
            cache[key] = mcl_iterate(w, MclSettings(**{**settings.__dict__, "inflation": key}))
        return cache[key]

    # 1-based indices as in the reference procedure
    grid = inflation_grid(MIN_INFLATION, MAX_INFLATION, RESOLUTIONS[0])
    left, right = 1, len(grid)
    idx = (left + right) // 2
    last_left = last_right = idx
    found = None
    part = None
    n_clusters = 0
    for res in RESOLUTIONS:
        if left > right:
            if last_left == last_right:
                if n_clusters > c:
                    last_left -= 1
                else:
                    last_right += 1
            if last_right > len(grid) or last_left < 1:
                break
            grid = inflation_grid(grid[last_left - 1], grid[last_right - 1], res)
            left, right = 1, len(grid)
            idx = (left + right) // 2
        while n_clusters != c:
            part = run(grid[idx - 1])
            n_clusters = part.n_clusters
            last_left, last_right = left, right
            if n_clusters > c:
                right = idx - 1
            elif n_clusters < c:
                left = idx + 1
            if left > right:
                break
            idx = (left + right) // 2
        if n_clusters == c:
            found = part
            break

    if found is None:
        best = min(cache.values(), key=lambda p: (abs(p.n_clusters - c), p.info["inflation"]))
        best.failed = True
        best.info["mcl_runs"] = runs
        raise ClusterCountUnreachable(
            f"MCL could not produce {c} clusters (closest: {best.n_clusters})",
            best=best,
            achieved=[p.n_clusters for p in cache.values()],
        )
    found.info["mcl_runs"] = runs
    return found


def probe_budget() -> int:
    """Upper bound on MCL runs made by :func:`mcl_target_clusters`."""
    coarse = len(inflation_grid(MIN_INFLATION, MAX_INFLATION, RESOLUTIONS[0]))
    # a closed bracket is one coarser step wide, so each refinement has prev/res + 1 points
    return coarse + sum(int(round(prev / res)) + 1 for prev, res in zip(RESOLUTIONS, RESOLUTIONS[1:]))


def similarity_network(x, dist: str, factor: str | None) -> np.ndarray:
    """Similarity network fed to MCL; ``factor=None`` means plain MCL without the MC kernel.

    Correlation similarities are clipped at zero, Euclidean ones use
    ``1 - d / max(d)``.
    """
    d = distance_matrix(x, dist)
    if factor is None:
        if dist == "euclidean":
            return euclidean_similarity(d)
        return mc_similarity_corr(d)
    mc = mc_kernel_from_distances(d, factor)
    if dist == "euclidean":
        return mc_similarity_eucl(mc)
    return mc_similarity_corr(mc)


def sparse_network(w) -> np.ndarray:
    """Connectivity-preserving pruning; skipped if the inversion already split the network."""
    if count_components(w) > 1:
        log.info("similarity network is disconnected before pruning; pruning skipped")
        return w
    return enforce_sparsity(w).network


def mc_mcl(x, c: int, dist: str = "euclidean", factor: str = "original", settings: MclSettings = MclSettings()) -> Partition:
    """MC kernel, sparse similarity network, then MCL at the inflation giving ``c`` clusters."""
    return mcl_target_clusters(sparse_network(similarity_network(x, dist, factor)), c, settings)


def mcl(x, c: int, dist: str = "euclidean", settings: MclSettings = MclSettings()) -> Partition:
    """Plain MCL on the (sparsified) sample similarity network."""
    return mcl_target_clusters(sparse_network(similarity_network(x, dist, None)), c, settings)
