"""Command-line entry point: ``mcmcl cluster | bench | swissroll``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 missed cluster
target when ``--strict`` is given.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import bench
from .dataset import SwissRollSpec, generate_tripartite_swiss_roll, load_matrix, log_normalize, save_labels, save_matrix
from .partition import ClusterCountUnreachable, DataError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_UNREACHABLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcmcl", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("cluster", help="cluster one dataset and print one label per line")
    p.add_argument("--method", required=True, help="e.g. mc-mcl-log, mc-mcl-orig, mc-mcl-sqrt, mcl, ap, mc-ap, dbscan, kmeans")
    p.add_argument("--dist", default="euclidean")
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--header", action="store_true", help="skip the first line of the data file")
    p.add_argument("--delimiter")
    p.add_argument("--norm", choices=bench.NORMALIZATIONS, default="raw")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("bench", help="run the method grid from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="reports", help="output directory for the tsv reports")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("swissroll", help="write a tripartite Swiss roll and its labels")
    p.add_argument("--n", type=int, default=723)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--gap", type=float, default=0.05)
    p.add_argument("--height", type=float, default=SwissRollSpec.height)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", required=True)
    return parser


def _cluster(args) -> int:
    x = load_matrix(args.data, args.header, args.delimiter)
    if args.norm == "log":
        x = log_normalize(x)
    method = bench.method_name(args.method)
    dist = bench.distance_name(args.dist)
    code = EXIT_OK
    try:
        part = bench.run_method(method, x, args.clusters, dist, args.seed)
    except ClusterCountUnreachable as exc:
        part = exc.best
        print(f"warning: {exc}", file=sys.stderr)
        if args.strict or part is None:
            return EXIT_UNREACHABLE if args.strict else EXIT_DATA
    if part.failed:
        print(f"warning: {method} found {part.n_clusters} clusters, not {args.clusters}", file=sys.stderr)
        if args.strict:
            code = EXIT_UNREACHABLE
    sys.stdout.write("\n".join(str(v) for v in part.labels.tolist()) + "\n")
    return code


def _bench(args) -> int:
    configs = bench.read_config(args.config, seed=args.seed)
    results = [bench.run_grid(cfg, jobs=args.jobs) for cfg in configs]
    for path in bench.write_reports(results, args.out):
        print(path)
    failed = any(not c.status.startswith("ok") for r in results for c in r.cells)
    return EXIT_UNREACHABLE if (args.strict and failed) else EXIT_OK


def _swissroll(args) -> int:
    x, labels = generate_tripartite_swiss_roll(SwissRollSpec(args.n, args.seed, args.gap, args.height))
    save_matrix(args.out, x)
    save_labels(args.labels, labels)
    return EXIT_OK


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("mcmcl: a subcommand is required (cluster, bench, swissroll)")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(name)s: %(message)s")
        handler = {"cluster": _cluster, "bench": _bench, "swissroll": _swissroll}[args.command]
        return handler(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, DataError):
            print(f"data error: {exc}", file=sys.stderr)
            return EXIT_DATA
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
