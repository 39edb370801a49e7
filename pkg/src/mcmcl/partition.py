"""Partition container shared by every clustering routine."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NOISE = 0


class DataError(ValueError):
    """Raised for malformed or out-of-domain input data."""


class ClusterCountUnreachable(RuntimeError):
    """A target-count search could not produce the requested number of clusters.

    The closest partition found is kept on ``best`` so callers can still
    score it (accuracy is 0 by convention, ARI/NMI are computed as usual).
    """

    def __init__(self, message: str, best: "Partition | None" = None, achieved=()):
        super().__init__(message)
        self.best = best
        self.achieved = tuple(sorted(set(achieved)))


def canonicalize_labels(labels, noise: int | None = None) -> np.ndarray:
    """Relabel cluster ids to 1..k by order of first appearance.

    Entries equal to ``noise`` are mapped to 0 and left out of the count.
    """
    labels = np.asarray(labels)
    out = np.zeros(labels.shape[0], dtype=np.int64)
    mapping: dict = {}
    for pos, lab in enumerate(labels.tolist()):
        if noise is not None and lab == noise:
            continue
        if lab not in mapping:
            mapping[lab] = len(mapping) + 1
        out[pos] = mapping[lab]
    return out


@dataclass
class Partition:
    """Cluster assignment of n samples.

    ``labels`` use 1..k for clusters and 0 for noise. ``failed`` marks a
    best-effort result from a search that missed its target count.
    """

    labels: np.ndarray
    failed: bool = False
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.labels = canonicalize_labels(self.labels, noise=NOISE)

    @classmethod
    def from_labels(cls, labels, noise=None, **kwargs) -> "Partition":
        """Build from arbitrary cluster ids; only ``noise`` (if given) becomes 0."""
        return cls(canonicalize_labels(labels, noise=noise), **kwargs)

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) if self.labels.size else 0

    @property
    def n_noise(self) -> int:
        return int(np.count_nonzero(self.labels == NOISE))

    def __len__(self):
        return self.labels.shape[0]
