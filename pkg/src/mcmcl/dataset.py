"""Loading, normalising, subsampling and synthesising data matrices."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .partition import DataError, canonicalize_labels

# Roll parameter and height ranges of the synthetic Swiss roll.
T_MIN = 1.5 * math.pi
T_MAX = 4.5 * math.pi
HEIGHT = 21.0


def check_matrix(x) -> np.ndarray:
    """Return ``x`` as a 2-D float array, raising DataError if it is not a valid data matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DataError(f"data matrix must be 2-D, got shape {x.shape}")
    if x.shape[0] < 2 or x.shape[1] < 1:
        raise DataError(f"data matrix needs n >= 2 samples and m >= 1 features, got {x.shape}")
    if not np.all(np.isfinite(x)):
        r, c = np.argwhere(~np.isfinite(x))[0]
        raise DataError(f"non-finite value at row {r}, column {c}")
    return x


def _sniff_delimiter(path: Path) -> str:
    return "\t" if path.suffix.lower() in (".tsv", ".tab", ".txt") else ","


def load_matrix(path, has_header: bool = False, delimiter: str | None = None) -> np.ndarray:
    """Read a delimited text file into an n x m float matrix.

    Rows are samples. Parse failures report the 1-based line and column.
    """
    path = Path(path)
    if delimiter is None:
        delimiter = _sniff_delimiter(path)
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
            if has_header and lineno == 1:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DataError(f"{path}: line {lineno} has {len(row)} fields, expected {width}")
            values = []
            for col, cell in enumerate(row, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise DataError(f"{path}: cannot parse {cell!r} at line {lineno}, column {col}") from None
                if not math.isfinite(v):
                    raise DataError(f"{path}: non-finite value {cell!r} at line {lineno}, column {col}")
                values.append(v)
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return check_matrix(np.array(rows))


def load_labels(path, has_header: bool = False) -> np.ndarray:
    """Read a single-column integer label file (0 means noise)."""
    path = Path(path)
    labels = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if has_header and lineno == 1:
                continue
            line = line.strip()
            if not line:
                continue
            try:
                labels.append(int(line))
            except ValueError:
                raise DataError(f"{path}: bad label {line!r} at line {lineno}") from None
    if not labels:
        raise DataError(f"{path}: no labels")
    return np.array(labels, dtype=np.int64)


def save_matrix(path, x, delimiter: str | None = None, fmt: str = "%.17g") -> None:
    path = Path(path)
    if delimiter is None:
        delimiter = _sniff_delimiter(path)
    np.savetxt(path, np.atleast_2d(x), delimiter=delimiter, fmt=fmt)


def save_labels(path, labels) -> None:
    np.savetxt(Path(path), np.asarray(labels, dtype=np.int64), fmt="%d")


def log_normalize(x) -> np.ndarray:
    """Entrywise log10(1 + x). Negative entries are rejected."""
    x = check_matrix(x)
    neg = np.argwhere(x < 0)
    if neg.size:
        r, c = neg[0]
        raise DataError(f"log normalisation needs non-negative data; row {r}, column {c} is {x[r, c]}")
    return np.log10(1.0 + x)


@dataclass(frozen=True)
class SwissRollSpec:
    n_points: int = 723
    seed: int = 1
    gap_fraction: float = 0.05
    height: float = HEIGHT

    def validate(self):
        if self.n_points < 3 or self.n_points % 3:
            raise DataError(f"n_points must be a positive multiple of 3, got {self.n_points}")
        if not 0 < self.gap_fraction < 0.2:
            raise DataError(f"gap_fraction must lie in (0, 0.2), got {self.gap_fraction}")
        if not self.height > 0:
            raise DataError(f"height must be positive, got {self.height}")


def section_bounds(gap_fraction: float) -> list[tuple[float, float]]:
    """Roll-parameter intervals of the three sections."""
    span = T_MAX - T_MIN
    gap = gap_fraction * span
    length = (span - 2 * gap) / 3
    return [(T_MIN + k * (length + gap), T_MIN + k * (length + gap) + length) for k in range(3)]


def generate_tripartite_swiss_roll(spec: SwissRollSpec = SwissRollSpec(), return_t: bool = False):
    """Sample a Swiss roll cut into three arcs separated by empty gaps.

    Points are ``(t cos t, h, t sin t)`` with ``t`` uniform inside each
    section and ``h`` uniform in [0, height]. Labels 1, 2, 3 follow the
    section order. With ``return_t`` the roll parameters are returned too.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    per = spec.n_points // 3
    t = np.concatenate([rng.uniform(lo, hi, per) for lo, hi in section_bounds(spec.gap_fraction)])
    labels = np.repeat(np.arange(1, 4), per)
    h = rng.uniform(0.0, spec.height, spec.n_points)
    x = np.column_stack([t * np.cos(t), h, t * np.sin(t)])
    if return_t:
        return x, labels, t
    return x, labels


def subsample_per_class(x, labels, per_class: int, seed=0):
    """Draw ``per_class`` samples from every class without replacement.

    Output keeps classes in order of first appearance; within a class the
    draw order is the random one.
    """
    x = np.asarray(x)
    labels = np.asarray(labels)
    if x.shape[0] != labels.shape[0]:
        raise DataError(f"{x.shape[0]} samples but {labels.shape[0]} labels")
    if per_class < 1:
        raise DataError("per_class must be at least 1")
    rng = np.random.default_rng(seed)
    picks = []
    for cls in dict.fromkeys(labels.tolist()):
        members = np.flatnonzero(labels == cls)
        if members.size < per_class:
            raise DataError(f"class {cls} has {members.size} samples, fewer than {per_class}")
        picks.append(rng.choice(members, size=per_class, replace=False))
    idx = np.concatenate(picks)
    return x[idx], labels[idx]


def canonical(labels) -> np.ndarray:
    """Ground-truth labels relabelled 1..k by first appearance (0 kept as noise)."""
    return canonicalize_labels(labels, noise=0)
