"""Counting-kernel backend selection.

The compiled extension (Cython) is preferred; the pure-Python kernels are the
fallback, selected when the extension is missing or when ORDGRAPH_PURE_PYTHON
is set to a nonzero value.  Both backends produce identical big-integer
results; benchmarks/bench_kernels.py compares their speed.

The compiled kernels use fixed 64-word row buffers (n <= 4096); larger graphs
transparently use the Python kernels.
"""

import os

from . import _count_py

_CY_WORD_LIMIT = 4096

try:
    from . import _count_cy
except ImportError:  # extension not built
    _count_cy = None

if os.environ.get("ORDGRAPH_PURE_PYTHON", "0") not in ("", "0"):
    _count_cy = None

BACKEND = "cython" if _count_cy is not None else "python"

if _count_cy is not None:
    import numpy as _np

    def _pack(n, rows):
        w = max(1, (n + 63) >> 6)
        buf = bytearray(b"".join(r.to_bytes(w * 8, "little") for r in rows))
        if not buf:
            return _np.zeros((0, 1), dtype=_np.uint64)
        return _np.frombuffer(buf, dtype=_np.uint64).reshape(n, w)

    def count_forks(n, rows, lo=0, hi=None):
        if n > _CY_WORD_LIMIT:
            return _count_py.count_forks(n, rows, lo, hi)
        if n == 0:
            return 0
        return _count_cy.count_forks(n, _pack(n, rows), lo, hi)

    def count_pattern(n, rows, fadj, induced, lo=0, hi=None):
        if n > _CY_WORD_LIMIT or len(fadj) > 16:
            return _count_py.count_pattern(n, rows, fadj, induced, lo, hi)
        if n == 0:
            return 1 if len(fadj) == 0 else 0
        return _count_cy.count_pattern(n, _pack(n, rows), fadj, induced, lo, hi)

else:
    count_forks = _count_py.count_forks
    count_pattern = _count_py.count_pattern

# Enumeration is Python-level on both backends; the hot paths only count.
enumerate_pattern = _count_py.enumerate_pattern
