from __future__ import annotations

import numpy as np
import pytest
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from multireg import _linalg_py, linalg

P = 32003

backends = [_linalg_py]
try:
    from multireg import _linalg_c

    backends.append(_linalg_c)
except ImportError:  # extension not built
    pass


def _gf_rank(A, p):
    """Reference rank from sympy's GF(p) domain matrices."""
    if A.size == 0:
        return 0
    M = DomainMatrix([[GF(p)(int(x)) for x in row] for row in A.tolist()], A.shape, GF(p))
    return M.rank()


matrices = st.tuples(st.integers(0, 7), st.integers(0, 7)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(0, P - 1))
)


@pytest.mark.parametrize("mod", backends, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@given(A=matrices)
def test_rank_matches_sympy(mod, A):
    assert mod.rank_modp(A.copy(), P) == _gf_rank(A, P)


@pytest.mark.parametrize("mod", backends, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@given(A=matrices)
def test_rref_is_reduced_and_spans(mod, A):
    rows, pivots = mod.rref_modp(A.copy(), P)
    rows = np.asarray(rows) % P
    assert len(rows) == len(pivots) == _gf_rank(A, P)
    for r, c in enumerate(pivots):
        assert rows[r, c] == 1
        assert all(rows[q, c] == 0 for q in range(len(rows)) if q != r)
    assert list(pivots) == sorted(pivots)
    if len(rows):
        stacked = np.vstack([A % P, rows])
        assert _gf_rank(stacked, P) == len(rows)


@given(A=matrices)
def test_backends_agree(A):
    r1, p1 = _linalg_py.rref_modp(A.copy(), P)
    r2, p2 = linalg.rref_modp(A.copy(), P)
    assert list(p1) == list(p2)
    assert np.array_equal(np.asarray(r1) % P, np.asarray(r2) % P)


def test_small_prime_rank():
    A = np.array([[1, 2], [2, 4]], dtype=np.int64)
    assert linalg.rank_modp(A, 7) == 1
    B = np.array([[1, 2], [3, 4]], dtype=np.int64)
    assert linalg.rank_modp(B, 2) == 1
    assert linalg.rank_modp(B, 7) == 2


@given(A=matrices)
def test_nullspace(A):
    K = linalg.nullspace_modp(A.copy(), P)
    n = A.shape[1]
    assert len(K) == n - _gf_rank(A, P)
    if len(K):
        assert not np.any((A % P) @ np.asarray(K).T % P)


def test_backend_reported():
    assert linalg.BACKEND in ("cython", "python")


def test_pure_python_override():
    import os
    import subprocess
    import sys

    env = {**os.environ, "MULTIREG_PURE_PYTHON": "1"}
    out = subprocess.run(
        [sys.executable, "-c", "from multireg import linalg; print(linalg.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
