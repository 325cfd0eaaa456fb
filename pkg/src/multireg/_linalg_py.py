"""Dense Gaussian elimination over F_p, numpy fallback.

Row operations are vectorized over whole rows; this is the reference the
compiled kernels in ``_linalg_c`` are benchmarked and tested against.
"""
from __future__ import annotations

import numpy as np


def _as_matrix(A, p: int) -> np.ndarray:
    M = np.array(A, dtype=np.int64, copy=True)
    if M.ndim != 2:
        M = M.reshape(len(M), -1) if M.size else np.zeros((0, 0), dtype=np.int64)
    M %= p
    return M


def rref_modp(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of A over F_p.

    Returns the nonzero rows of the RREF and the pivot column of each row.
    """
    M = _as_matrix(A, p)
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = M[r] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            M[hit] = (M[hit] - np.outer(col[hit], M[r]) % p) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank_modp(A, p: int) -> int:
    M = _as_matrix(A, p)
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = M[r] * inv % p
        below = M[r + 1:, c]
        hit = np.nonzero(below)[0] + r + 1
        if hit.size:
            M[hit] = (M[hit] - np.outer(M[hit, c], M[r]) % p) % p
        r += 1
    return r
