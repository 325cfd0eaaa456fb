# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Dense Gaussian elimination over F_p (p < 2**31), compiled."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int64_t _inv(int64_t a, int64_t p):
    # extended Euclid; a is a nonzero residue
    cdef int64_t t = 0, nt = 1, r = p, nr = a, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _eliminate(int64_t[:, ::1] M, int64_t p, bint reduce_above, list pivots):
    cdef Py_ssize_t rows = M.shape[0], cols = M.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, start
    cdef int64_t inv, f, v
    for c in range(cols):
        if r == rows:
            break
        i = r
        while i < rows and M[i, c] == 0:
            i += 1
        if i == rows:
            continue
        if i != r:
            for j in range(c, cols):
                v = M[i, j]
                M[i, j] = M[r, j]
                M[r, j] = v
        inv = _inv(M[r, c], p)
        for j in range(c, cols):
            M[r, j] = M[r, j] * inv % p
        start = 0 if reduce_above else r + 1
        for i in range(start, rows):
            if i == r:
                continue
            f = M[i, c]
            if f == 0:
                continue
            f = p - f
            for j in range(c, cols):
                if M[r, j] != 0:
                    M[i, j] = (M[i, j] + f * M[r, j]) % p
        if pivots is not None:
            pivots.append(c)
        r += 1
    return r


def _prepare(A, long p):
    M = np.array(A, dtype=np.int64, copy=True)
    if M.ndim != 2:
        M = M.reshape(len(M), -1) if M.size else np.zeros((0, 0), dtype=np.int64)
    M %= p
    return np.ascontiguousarray(M)


def rref_modp(A, long p):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = _prepare(A, p)
    pivots = []
    cdef Py_ssize_t r = _eliminate(M, p, True, pivots)
    return M[:r], pivots


def rank_modp(A, long p):
    M = _prepare(A, p)
    return int(_eliminate(M, p, False, None))
