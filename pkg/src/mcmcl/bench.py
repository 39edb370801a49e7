"""Method x distance x normalisation grids and their tab-separated reports."""

from __future__ import annotations

import configparser
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import baselines, mcl
from .dataset import (
    SwissRollSpec,
    canonical,
    generate_tripartite_swiss_roll,
    load_labels,
    load_matrix,
    log_normalize,
    subsample_per_class,
)
from .metrics import EvaluationReport, dense_rank, evaluate, mean_rank
from .partition import ClusterCountUnreachable, DataError, Partition

log = logging.getLogger(__name__)

METHODS = ("MC-MCLo", "MC-MCLs", "MC-MCLl", "MCL", "AP", "MC-AP", "DBSCAN", "K-means")
DISTANCES = ("euclidean", "correlation")
NORMALIZATIONS = ("raw", "log")
REPORT_HEADER = ("method", "distance", "norm", "acc", "ari", "nmi", "mean_rank", "status")

_ALIASES = {
    "mc-mclo": "MC-MCLo", "mc-mcl-orig": "MC-MCLo", "mc-mcl-original": "MC-MCLo", "mc-mcl": "MC-MCLo",
    "mc-mcls": "MC-MCLs", "mc-mcl-sqrt": "MC-MCLs",
    "mc-mcll": "MC-MCLl", "mc-mcl-log": "MC-MCLl",
    "mcl": "MCL", "ap": "AP", "mc-ap": "MC-AP", "mcap": "MC-AP",
    "dbscan": "DBSCAN", "k-means": "K-means", "kmeans": "K-means",
}
_DIST_ALIASES = {"euclidean": "euclidean", "eucl": "euclidean", "correlation": "correlation", "corr": "correlation",
                 "pearson": "correlation"}


def method_name(name: str) -> str:
    key = name.strip().lower().replace("_", "-")
    if key not in _ALIASES:
        raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
    return _ALIASES[key]


def distance_name(name: str) -> str:
    key = name.strip().lower()
    if key not in _DIST_ALIASES:
        raise ValueError(f"unknown distance {name!r}; choose euclidean or correlation")
    return _DIST_ALIASES[key]


def run_method(method: str, x, c: int, dist: str, seed: int = 0) -> Partition:
    """Run one clustering method for ``c`` clusters; raises ClusterCountUnreachable on a missed target."""
    method = method_name(method)
    if method == "MC-MCLo":
        return mcl.mc_mcl(x, c, dist, "original")
    if method == "MC-MCLs":
        return mcl.mc_mcl(x, c, dist, "sqrt")
    if method == "MC-MCLl":
        return mcl.mc_mcl(x, c, dist, "log")
    if method == "MCL":
        return mcl.mcl(x, c, dist)
    if method == "AP":
        return baselines.ap(x, c, dist, seed=seed)
    if method == "MC-AP":
        return baselines.mc_ap(x, c, dist, seed=seed)
    if method == "DBSCAN":
        return baselines.dbscan_auto(x, c, dist)
    return baselines.kmeans(x, c, dist, seed=seed)


def run_cell(x, truth, method: str, dist: str, norm: str, c: int, seed: int = 0) -> tuple[EvaluationReport, Partition | None]:
    """Evaluate one grid cell. Failures are recorded in the report, never raised."""
    part = None
    status = "ok"
    start = time.perf_counter()
    try:
        data = log_normalize(x) if norm == "log" else x
        part = run_method(method, data, c, dist, seed)
        if part.failed:
            status = f"unreachable: closest {part.n_clusters} clusters"
    except ClusterCountUnreachable as exc:
        part = exc.best
        status = f"unreachable: closest {part.n_clusters if part is not None else 0} clusters"
    except DataError as exc:
        status = f"error: {exc}"
    extra = {"seconds": time.perf_counter() - start}
    if part is None:
        return EvaluationReport(method, 0.0, 0.0, 0.0, dist, norm, status, extra=extra), None
    rep = evaluate(truth, part, c, method, distance=dist, norm=norm, status=status, extra=extra)
    return rep, part


@dataclass
class BenchConfig:
    name: str
    expected_clusters: int
    methods: tuple = METHODS
    distances: tuple = ("euclidean",)
    normalizations: tuple = ("raw",)
    seed: int = 0
    swissroll: SwissRollSpec | None = None
    data: str | None = None
    labels: str | None = None
    has_header: bool = False
    delimiter: str | None = None
    per_class: int | None = None

    def __post_init__(self):
        if not self.methods or not self.distances or not self.normalizations:
            raise ValueError(f"dataset {self.name!r}: methods, distances and normalizations must be non-empty")
        self.methods = tuple(method_name(m) for m in self.methods)
        self.distances = tuple(distance_name(d) for d in self.distances)
        for norm in self.normalizations:
            if norm not in NORMALIZATIONS:
                raise ValueError(f"unknown normalization {norm!r}; choose raw or log")

    def load(self):
        if self.swissroll is not None:
            x, labels = generate_tripartite_swiss_roll(self.swissroll)
        else:
            if self.data is None or self.labels is None:
                raise DataError(f"dataset {self.name!r} needs both data and labels files")
            x = load_matrix(self.data, self.has_header, self.delimiter)
            labels = load_labels(self.labels)
        if x.shape[0] != labels.shape[0]:
            raise DataError(f"dataset {self.name!r}: {x.shape[0]} samples but {labels.shape[0]} labels")
        if self.per_class:
            x, labels = subsample_per_class(x, labels, self.per_class, self.seed)
        return x, canonical(labels)


@dataclass
class GridResult:
    name: str
    cells: list = field(default_factory=list)
    best: dict = field(default_factory=dict)
    table: list = field(default_factory=list)


_DIST_ORDER = {d: i for i, d in enumerate(DISTANCES)}
_NORM_ORDER = {n: i for i, n in enumerate(NORMALIZATIONS)}


def _cell_key(rep):
    return (METHODS.index(rep.method), _DIST_ORDER[rep.distance], _NORM_ORDER[rep.norm])


def run_grid(config: BenchConfig, jobs: int = 1) -> GridResult:
    """Run every (method, distance, normalisation) cell and rank the results.

    Each method keeps its best cell by mean rank over its own cells
    (ties: euclidean before correlation, raw before log); the best cells
    are then ranked against each other.
    """
    x, truth = config.load()
    keys = [(m, d, n) for m in config.methods for d in config.distances for n in config.normalizations]

    def work(key):
        m, d, n = key
        log.info("%s: %s / %s / %s", config.name, m, d, n)
        return run_cell(x, truth, m, d, n, config.expected_clusters, config.seed)[0]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(work, keys))
    else:
        cells = [work(k) for k in keys]
    cells.sort(key=_cell_key)

    result = GridResult(config.name, cells=cells)
    for m in config.methods:
        # cell reports keep their within-method mean rank
        own = mean_rank([c for c in cells if c.method == m])
        best = min(own, key=lambda r: (round(r.mean_rank, 12), _DIST_ORDER[r.distance], _NORM_ORDER[r.norm]))
        result.best[m] = best
    result.table = mean_rank([replace(r) for r in result.best.values()])
    return result


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def format_report(rows) -> str:
    lines = ["\t".join(REPORT_HEADER)]
    for r in rows:
        lines.append("\t".join([r.method, r.distance, r.norm, _fmt(r.acc), _fmt(r.ari), _fmt(r.nmi),
                                _fmt(r.mean_rank), r.status]))
    return "\n".join(lines) + "\n"


def summarize(results: list[GridResult]) -> str:
    """Cross-dataset table: per-dataset accuracy and accuracy rank, with their means."""
    names = [r.name for r in results]
    methods = [m for m in METHODS if all(m in r.best for r in results)]
    acc = np.array([[r.best[m].acc for r in results] for m in methods]).reshape(len(methods), len(results))
    ranks = np.stack([dense_rank(acc[:, j]) for j in range(len(results))], axis=1) if methods else acc
    mean_acc = acc.mean(axis=1) if methods else acc
    mean_rk = ranks.mean(axis=1) if methods else acc
    header = ["method"] + [f"{n}_acc" for n in names] + ["mean_acc"] + [f"{n}_rank" for n in names] + ["mean_rank"]
    order = sorted(range(len(methods)), key=lambda i: (-round(mean_acc[i], 12), methods[i]))
    lines = ["\t".join(header)]
    for i in order:
        row = [methods[i]] + [_fmt(v) for v in acc[i]] + [_fmt(mean_acc[i])]
        row += [str(int(v)) for v in ranks[i]] + [_fmt(mean_rk[i])]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def write_reports(results: list[GridResult], outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for res in results:
        for suffix, rows in (("", res.table), (".cells", res.cells)):
            path = outdir / f"{res.name}{suffix}.tsv"
            path.write_text(format_report(rows))
            written.append(path)
    path = outdir / "summary.tsv"
    path.write_text(summarize(results))
    written.append(path)
    return written


def _split(value: str) -> tuple:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def read_config(path, seed: int | None = None) -> list[BenchConfig]:
    """Parse a sectioned key = value file, one section per dataset.

    Keys: ``source`` (``swissroll`` or ``files``), ``expected_clusters``,
    ``methods`` (comma list or ``all``), ``distances``, ``normalizations``,
    ``seed``; Swiss-roll sections take ``n_points``, ``gap_fraction`` and ``height``;
    file sections take ``data``, ``labels``, ``has_header``, ``delimiter``
    and ``per_class``. Relative paths resolve against the config file.
    """
    path = Path(path)
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise DataError(f"cannot read config file {path}")
    configs = []
    for name in parser.sections():
        sec = parser[name]
        methods = sec.get("methods", "all")
        cfg_seed = seed if seed is not None else sec.getint("seed", 0)
        kwargs = dict(
            name=name,
            expected_clusters=sec.getint("expected_clusters"),
            methods=METHODS if methods.strip().lower() == "all" else _split(methods),
            distances=_split(sec.get("distances", "euclidean")),
            normalizations=_split(sec.get("normalizations", "raw")),
            seed=cfg_seed,
        )
        if kwargs["expected_clusters"] is None:
            raise DataError(f"[{name}] needs expected_clusters")
        source = sec.get("source", "files").strip().lower()
        if source == "swissroll":
            kwargs["swissroll"] = SwissRollSpec(
                n_points=sec.getint("n_points", 723),
                seed=cfg_seed,
                gap_fraction=sec.getfloat("gap_fraction", 0.05),
                height=sec.getfloat("height", SwissRollSpec.height),
            )
        elif source == "files":
            for key in ("data", "labels"):
                if key in sec:
                    p = Path(sec[key])
                    kwargs[key] = str(p if p.is_absolute() else path.parent / p)
            kwargs["has_header"] = sec.getboolean("has_header", False)
            delim = sec.get("delimiter")
            kwargs["delimiter"] = {"tab": "\t", "\\t": "\t", "comma": ","}.get(delim, delim)
            kwargs["per_class"] = sec.getint("per_class")
        else:
            raise DataError(f"[{name}] unknown source {source!r}")
        configs.append(BenchConfig(**kwargs))
    if not configs:
        raise DataError(f"{path} defines no dataset sections")
    return configs
