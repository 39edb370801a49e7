"""Backend selection for the graph kernels.

The compiled extension is used when importable; setting
``MCMCL_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _pycore

if os.environ.get("MCMCL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pycore
else:
    try:
        from . import _fastcore as _impl
    except ImportError:  # extension not built
        _impl = _pycore

BACKEND = "cython" if _impl is not _pycore else "python"

union_find_scan = _impl.union_find_scan
component_labels = _impl.component_labels
tree_distances = _impl.tree_distances
