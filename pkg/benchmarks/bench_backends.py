"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_backends.py [--sizes 200 500 1000] [--repeat 3]

Both backends get identical inputs; outputs are checked for bit equality.
"""

import argparse
import timeit

import numpy as np

from mcmcl import _pycore
from mcmcl.kernels import euclidean_distance_matrix, upper_edges

try:
    from mcmcl import _fastcore
except ImportError:
    _fastcore = None


def inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    d = euclidean_distance_matrix(rng.standard_normal((n, 3)))
    ii, jj = upper_edges(n)
    w = d[ii, jj]
    order = np.lexsort((jj, ii, w)).astype(np.int64)
    taken = _pycore.union_find_scan(n, ii, jj, order)
    ti, tj, tw = ii[taken], jj[taken], w[taken]
    # a sparse random graph for component labelling
    keep = rng.random(ii.size) < 1.5 / n
    return {
        "union_find_scan": (n, ii, jj, order),
        "tree_distances": (n, ti, tj, tw),
        "component_labels": (n, ii[keep], jj[keep]),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 500, 1000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _fastcore is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':<18}{'n':>6}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for n in args.sizes:
        for name, arg in inputs(n).items():
            py_fn = getattr(_pycore, name)
            t_py = min(timeit.repeat(lambda: py_fn(*arg), number=1, repeat=args.repeat))
            if _fastcore is None:
                print(f"{name:<18}{n:>6}{t_py:>12.4f}{'-':>12}{'-':>10}")
                continue
            fast_fn = getattr(_fastcore, name)
            if not np.array_equal(py_fn(*arg), fast_fn(*arg)):
                raise SystemExit(f"{name} differs between backends at n={n}")
            t_fast = min(timeit.repeat(lambda: fast_fn(*arg), number=1, repeat=args.repeat))
            print(f"{name:<18}{n:>6}{t_py:>12.4f}{t_fast:>12.4f}{t_py / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
