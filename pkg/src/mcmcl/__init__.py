"""Markov clustering on minimum-curvilinear sparse similarity networks."""

from ._core import BACKEND
from .partition import ClusterCountUnreachable, DataError, Partition

__version__ = "0.1.0"
__all__ = ["BACKEND", "ClusterCountUnreachable", "DataError", "Partition", "__version__"]
