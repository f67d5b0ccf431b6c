"""Exploration engine with two interchangeable lanes.

The compiled lane JIT-compiles the hot loops with numba; the fallback lane
reproduces the identical state graph with vectorized numpy.  Both expose the
same two entry points and agree on every output array, so everything above
this package is lane-agnostic.  Selection is explicit via RVCHECK_BACKEND
(auto, numba, numpy); auto prefers the compiled lane when numba imports.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np


class Backend:
    """Thin handle pairing a lane name with its two callables."""

    def __init__(self, name, build_graph, find_accepting_seed):
        self.name = name
        self._build = build_graph
        self._seed = find_accepting_seed

    def build_graph(self, init_sids, kind, bound, nfair, lc_includes_begmove,
                    move_tab, color_tab, max_states):
        init = np.asarray(init_sids, dtype=np.int64)
        return self._build(
            init, int(kind), int(bound), int(nfair),
            1 if lc_includes_begmove else 0,
            move_tab, color_tab, int(max_states),
        )

    def find_accepting_seed(self, states, indptr, succs, nfair, n_init):
        return int(self._seed(states, indptr, succs, int(nfair), int(n_init)))


def _numpy_backend() -> Backend:
    from . import numpy_backend as lane

    return Backend("numpy", lane.build_graph, lane.find_accepting_seed)


def _numba_backend() -> Backend:
    from . import kernels as lane

    return Backend("numba", lane.build_graph, lane.find_accepting_seed)


_CACHE: dict = {}


def get_backend(name: Optional[str] = None) -> Backend:
    """Resolve a lane by name, or by RVCHECK_BACKEND when name is None."""
    if name is None:
        name = os.environ.get("RVCHECK_BACKEND", "auto")
    name = name.strip().lower() or "auto"
    if name in _CACHE:
        return _CACHE[name]
    if name == "numpy":
        backend = _numpy_backend()
    elif name == "numba":
        backend = _numba_backend()
    elif name == "auto":
        try:
            backend = _numba_backend()
        except ImportError:
            backend = _numpy_backend()
    else:
        raise ValueError(
            f"unknown backend {name!r}: expected auto, numba, or numpy"
        )
    _CACHE[name] = backend
    return backend
