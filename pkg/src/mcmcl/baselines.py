"""Comparison methods: K-means, DBSCAN, affinity propagation and MC-AP."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .dataset import check_matrix
from .kernels import correlation_distance_matrix, distance_matrix, mc_kernel_from_distances
from .partition import ClusterCountUnreachable, DataError, Partition

log = logging.getLogger(__name__)


# --------------------------------------------------------------------- K-means

def _point_centroid_distances(x, centroids, dist):
    if dist == "euclidean":
        diff = x[:, None, :] - centroids[None, :, :]
        return np.einsum("ijk,ijk->ij", diff, diff)
    xc = x - x.mean(axis=1, keepdims=True)
    cc = centroids - centroids.mean(axis=1, keepdims=True)
    xn = np.linalg.norm(xc, axis=1)
    cn = np.linalg.norm(cc, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = (xc @ cc.T) / np.outer(xn, cn)
    # flat centroids correlate with nothing
    r = np.where(np.isfinite(r), r, 0.0)
    return 1.0 - np.clip(r, -1.0, 1.0)


def _lloyd(x, centroids, dist, max_iter, trace=None):
    k = centroids.shape[0]
    labels = None
    for _ in range(max_iter):
        dmat = _point_centroid_distances(x, centroids, dist)
        new = np.argmin(dmat, axis=1)
        counts = np.bincount(new, minlength=k)
        if np.any(counts == 0):
            cost = dmat[np.arange(len(new)), new]
            for empty in np.flatnonzero(counts == 0):
                # reseed to the point farthest from its centroid
                far = int(np.argmax(cost))
                new[far] = empty
                cost[far] = -np.inf
        if trace is not None:
            trace(float(dmat[np.arange(len(new)), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        centroids = np.stack([x[labels == j].mean(axis=0) for j in range(k)])
    obj = float(_point_centroid_distances(x, centroids, dist)[np.arange(len(labels)), labels].sum())
    return labels, centroids, obj


def kmeans(x, k: int, dist: str = "euclidean", restarts: int = 100, seed=0, max_iter: int = 300) -> Partition:
    """Lloyd's algorithm, best of ``restarts`` random initialisations.

    Euclidean runs minimise the within-cluster sum of squared distances;
    correlation runs assign by ``1 - pearson`` but still use mean centroids.
    """
    x = check_matrix(x)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise DataError(f"k must lie in [1, {n}], got {k}")
    if dist == "correlation":
        correlation_distance_matrix(x[:2])  # validates feature count
    rng = np.random.default_rng(seed)
    best = None
    for r in range(restarts):
        init = rng.choice(n, size=k, replace=False)
        labels, _, obj = _lloyd(x, x[init].copy(), dist, max_iter)
        if best is None or obj < best[0]:
            best = (obj, r, labels)
    part = Partition.from_labels(best[2])
    part.info.update(objective=best[0], restart=best[1])
    return part


# ---------------------------------------------------------------------- DBSCAN

@dataclass(frozen=True)
class DbscanParams:
    min_pts: int
    eps: float

    def __post_init__(self):
        if self.min_pts < 1 or not self.eps > 0:
            raise DataError(f"invalid DBSCAN parameters {self}")


def dbscan(d, params: DbscanParams) -> Partition:
    """Density clustering on a precomputed distance matrix (closed eps-balls).

    Noise points get label 0. A border point joins the cluster of its
    lowest-index core neighbour.
    """
    d = np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    near = d <= params.eps
    core = near.sum(axis=1) >= params.min_pts
    core_idx = np.flatnonzero(core)
    labels = np.zeros(n, dtype=np.int64)
    if core_idx.size:
        sub = near[np.ix_(core_idx, core_idx)]
        _, comp = connected_components(coo_matrix(sub), directed=False)
        labels[core_idx] = comp + 1
        border = np.flatnonzero(~core)
        if border.size:
            reach = near[np.ix_(border, core_idx)]
            has = reach.any(axis=1)
            first = np.argmax(reach, axis=1)
            labels[border[has]] = comp[first[has]] + 1
    part = Partition.from_labels(labels, noise=0)
    part.info.update(min_pts=params.min_pts, eps=params.eps)
    return part


def dbscan_target_clusters(d, c: int, max_bisections: int = 60) -> Partition:
    """Search (MinPts, Eps) for exactly ``c`` clusters with no noise.

    MinPts runs 1, 2, ..., n; for each, Eps is bisected between the
    smallest positive and the largest distance. Too few clusters lowers Eps,
    too many clusters or any noise raises it.
    """
    d = np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    if c < 1:
        raise DataError("target cluster count must be >= 1")
    pos = d[d > 0]
    if pos.size == 0:
        if c == 1:
            return dbscan(d, DbscanParams(1, 1.0))
        raise ClusterCountUnreachable("all distances are zero", achieved=[1])
    lo0, hi0 = float(pos.min()), float(pos.max())
    best = None
    achieved = set()
    for min_pts in range(1, n + 1):
        lo, hi = lo0, hi0
        for _ in range(max_bisections):
            eps = 0.5 * (lo + hi)
            part = dbscan(d, DbscanParams(min_pts, eps))
            k, noise = part.n_clusters, part.n_noise
            achieved.add(k)
            if best is None or (noise, abs(k - c)) < (best.n_noise, abs(best.n_clusters - c)):
                best = part
            if k == c and noise == 0:
                return part
            if k < c:
                hi = eps
            else:
                lo = eps
            if hi - lo <= 1e-12 * hi0:
                break
    best.failed = True
    raise ClusterCountUnreachable(f"DBSCAN could not produce {c} noise-free clusters", best=best, achieved=achieved)


# ------------------------------------------------------- affinity propagation

@dataclass(frozen=True)
class ApSettings:
    preference: float
    damping: float = 0.9
    max_iterations: int = 1000
    stable_window: int = 50
    seed: int = 0

    def __post_init__(self):
        if not 0.5 <= self.damping < 1:
            raise DataError(f"damping must lie in [0.5, 1), got {self.damping}")


def affinity_propagation(d, settings: ApSettings) -> Partition:
    """Frey-Dueck message passing on similarities ``-d`` with a shared preference."""
    d = np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    s = -d.copy()
    np.fill_diagonal(s, settings.preference)
    # tiny deterministic jitter breaks ties between identical similarities
    rng = np.random.default_rng(settings.seed)
    s += (np.finfo(np.float64).eps * np.abs(s) + np.finfo(np.float64).tiny * 100) * rng.standard_normal((n, n))

    lam = settings.damping
    a = np.zeros((n, n))
    r = np.zeros((n, n))
    rows = np.arange(n)
    history = np.zeros((n, settings.stable_window), dtype=bool)
    converged = False
    it = 0
    for it in range(1, settings.max_iterations + 1):
        as_ = a + s
        first = np.argmax(as_, axis=1)
        top = as_[rows, first]
        as_[rows, first] = -np.inf
        second = as_.max(axis=1)
        r_new = s - top[:, None]
        r_new[rows, first] = s[rows, first] - second
        r = lam * r + (1 - lam) * r_new

        rp = np.maximum(r, 0)
        rp[rows, rows] = r[rows, rows]
        a_new = rp.sum(axis=0)[None, :] - rp
        diag = a_new[rows, rows].copy()
        a_new = np.minimum(a_new, 0)
        a_new[rows, rows] = diag
        a = lam * a + (1 - lam) * a_new

        exemplar = (np.diag(a) + np.diag(r)) > 0
        history[:, it % settings.stable_window] = exemplar
        if it >= settings.stable_window:
            stable = np.all(history == history[:, :1], axis=1).all()
            if stable and exemplar.any():
                converged = True
                break

    ex = np.flatnonzero((np.diag(a) + np.diag(r)) > 0)
    if ex.size == 0:
        # degenerate: fall back to the single most self-responsible sample
        ex = np.array([int(np.argmax(np.diag(a) + np.diag(r)))])
    owner = ex[np.argmax(s[:, ex], axis=1)]
    owner[ex] = ex
    part = Partition.from_labels(owner)
    if not converged:
        log.warning("affinity propagation did not converge in %d iterations", it)
        part.info["warning"] = "not converged"
    part.info.update(preference=settings.preference, iterations=it, converged=converged, exemplars=ex.tolist())
    return part


def preference_range(d) -> tuple[float, float]:
    """Shared-preference bracket for the cluster-count search.

    The top is the largest off-diagonal similarity. The bottom is ``n``
    times the smallest one: below it a second exemplar costs more than it
    can gain over all samples, so the bracket reaches a single cluster.
    """
    n = d.shape[0]
    sims = -d[~np.eye(n, dtype=bool)]
    lo, hi = float(sims.min()), float(sims.max())
    return n * lo, hi


def ap_target_clusters(d, c: int, max_bisections: int = 60, **ap_kwargs) -> Partition:
    """Bisect the shared preference until AP returns ``c`` clusters.

    Returns the closest count found if ``c`` is never hit, marked ``failed``.
    """
    d = np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    if c < 1:
        raise DataError("target cluster count must be >= 1")
    lo, hi = preference_range(d)
    best = None
    for step in range(max_bisections):
        pref = 0.5 * (lo + hi)
        part = affinity_propagation(d, ApSettings(preference=pref, **ap_kwargs))
        k = part.n_clusters
        if best is None or abs(k - c) < abs(best.n_clusters - c):
            best = part
        if k == c:
            break
        if k < c:
            lo = pref
        else:
            hi = pref
        if hi - lo <= 1e-12 * max(1.0, abs(lo)):
            break
    best.info["bisections"] = step + 1
    if best.n_clusters != c:
        best.failed = True
    return best


def mc_ap(x, c: int, dist: str = "euclidean", **ap_kwargs) -> Partition:
    """Affinity propagation on minimum-curvilinear distances."""
    mc = mc_kernel_from_distances(distance_matrix(x, dist), "original")
    return ap_target_clusters(mc, c, **ap_kwargs)


def ap(x, c: int, dist: str = "euclidean", **ap_kwargs) -> Partition:
    return ap_target_clusters(distance_matrix(x, dist), c, **ap_kwargs)


def dbscan_auto(x, c: int, dist: str = "euclidean") -> Partition:
    return dbscan_target_clusters(distance_matrix(x, dist), c)
