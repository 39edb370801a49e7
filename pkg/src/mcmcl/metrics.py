"""Clustering agreement measures and rank aggregation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .partition import DataError, Partition


def _labels(p):
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def contingency(truth, pred) -> np.ndarray:
    truth, pred = _labels(truth), _labels(pred)
    if truth.shape[0] != pred.shape[0]:
        raise DataError(f"label vectors differ in length: {truth.shape[0]} vs {pred.shape[0]}")
    _, ti = np.unique(truth, return_inverse=True)
    _, pi = np.unique(pred, return_inverse=True)
    table = np.zeros((ti.max() + 1, pi.max() + 1), dtype=np.int64)
    np.add.at(table, (ti, pi), 1)
    return table


def accuracy(truth, pred, expected_clusters: int | None = None) -> float:
    """Fraction of samples agreeing under the best one-to-one cluster matching.

    With ``expected_clusters`` given, a prediction with a different cluster
    count (or one flagged as a failed search) scores 0.
    """
    table = contingency(truth, pred)
    if expected_clusters is not None and isinstance(pred, Partition):
        if pred.failed or pred.n_clusters != expected_clusters:
            return 0.0
    elif expected_clusters is not None and table.shape[1] != expected_clusters:
        return 0.0
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / table.sum())


def _comb2(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1) / 2


def adjusted_rand_index(truth, pred) -> float:
    """Hubert-Arabie adjusted Rand index."""
    table = contingency(truth, pred)
    n = table.sum()
    index = _comb2(table).sum()
    a = _comb2(table.sum(axis=1)).sum()
    b = _comb2(table.sum(axis=0)).sum()
    total = _comb2(n)
    expected = a * b / total if total else 0.0
    top = 0.5 * (a + b)
    if top == expected:
        # both all-singletons or both one cluster
        same = table.shape[0] == table.shape[1] and np.count_nonzero(table) == table.shape[0]
        return 1.0 if same else 0.0
    return float((index - expected) / (top - expected))


def _entropy(counts):
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def normalized_mutual_information(truth, pred) -> float:
    """``2 I(T;P) / (H(T) + H(P))`` with natural logs."""
    table = contingency(truth, pred).astype(np.float64)
    n = table.sum()
    ht = _entropy(table.sum(axis=1))
    hp = _entropy(table.sum(axis=0))
    if ht + hp == 0:
        return 1.0
    pij = table / n
    outer = np.outer(table.sum(axis=1), table.sum(axis=0)) / n**2
    nz = pij > 0
    mi = float((pij[nz] * np.log(pij[nz] / outer[nz])).sum())
    return float(min(1.0, max(0.0, 2 * mi / (ht + hp))))


@dataclass
class EvaluationReport:
    method: str
    acc: float
    ari: float
    nmi: float
    distance: str = "euclidean"
    norm: str = "raw"
    status: str = "ok"
    mean_rank: float = float("nan")
    extra: dict = field(default_factory=dict)


def evaluate(truth, pred: Partition, expected_clusters: int, method: str, **kwargs) -> EvaluationReport:
    return EvaluationReport(
        method=method,
        acc=accuracy(truth, pred, expected_clusters),
        ari=adjusted_rand_index(truth, pred),
        nmi=normalized_mutual_information(truth, pred),
        **kwargs,
    )


def dense_rank(values, decimals: int = 10) -> np.ndarray:
    """Rank 1 for the largest value; ties share a rank and no ranks are skipped."""
    vals = np.round(np.asarray(values, dtype=np.float64), decimals)
    distinct = np.unique(vals)[::-1]
    return np.searchsorted(-distinct, -vals) + 1


def mean_rank(reports: list[EvaluationReport], decimals: int = 10) -> list[EvaluationReport]:
    """Average the per-measure ranks of acc, ARI and NMI; sort ascending.

    ``decimals`` sets the rounding applied before ties are detected (use 2
    to rank values as printed in two-decimal tables).
    """
    if not reports:
        return []
    ranks = np.stack([dense_rank([getattr(r, m) for r in reports], decimals) for m in ("acc", "ari", "nmi")])
    for rep, col in zip(reports, ranks.T):
        rep.mean_rank = float(col.mean())
    return sorted(reports, key=lambda r: (round(r.mean_rank, 12), r.method, r.distance, r.norm))
