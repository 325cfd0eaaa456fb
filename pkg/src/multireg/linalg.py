"""Exact linear algebra over F_p.

The elimination kernels come from the compiled ``_linalg_c`` extension when it
is importable and from the numpy fallback otherwise.  Set
``MULTIREG_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _linalg_py

BACKEND = "python"
if os.environ.get("MULTIREG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _linalg_c as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _linalg_py
else:
    _impl = _linalg_py

rref_modp = _impl.rref_modp
rank_modp = _impl.rank_modp


def nullspace_modp(A, p: int) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    R, pivots = rref_modp(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for row, pc in enumerate(pivots):
            basis[b, pc] = (-R[row, f]) % p
    return basis
