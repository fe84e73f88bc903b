"""Nodal counts, magnetic Hessians and secular functions on graphs.

Thin wrapper over the C++ library. Vertices and edges are 0-based, eigen
indices ``n`` are 1-based.
"""

from ._core import *  # noqa: F401,F403
from ._core import ConvergenceError, Error, InvalidInput, NonGenericError

__all__ = [name for name in dir() if not name.startswith("_")]
