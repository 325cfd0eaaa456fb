"""Castelnuovo-Mumford regularity of homogeneous ideals.

Two independent routes:

* :func:`regularity` scans m upward and decides m-regularity with the
  Bayer-Stillman criterion, using random linear forms h_1, h_2, ...;
* :func:`regularity_via_gin` takes the initial ideal in grevlex after a
  random change of coordinates and reads off its largest minimal generator.

Both work degree by degree in R/I, written in the standard-monomial basis of
the ideal's Groebner basis.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import linalg
from .formulas import PreconditionError
from .groebner import Ideal, Quotient, max_generator_degree
from .hilbert import hilbert_numerator
from .ring import GREVLEX, Polynomial, enumerate_total_degree, random_linear_form

DEFAULT_TRIALS = 5
SCAN_LIMIT = 60


@dataclass
class StepCheck:
    """Outcome of one criterion step: condition (a) for h_i, then condition (b)."""

    i: int
    colon_ok: bool
    quotient_dims: tuple[int, int, int]  # H_J(m), H_J(m+1), H_(J,h)(m+1)
    full: bool
    remaining: int  # H_(J,h)(m)


@dataclass
class RegularityCertificate:
    m: int
    method: str
    forms: list[list[int]] = field(default_factory=list)
    checks: list[StepCheck] = field(default_factory=list)
    trial: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "RegularityCertificate":
        checks = [
            StepCheck(c["i"], c["colon_ok"], tuple(c["quotient_dims"]), c["full"], c["remaining"])
            for c in data.get("checks", [])
        ]
        return cls(data["m"], data["method"], [list(f) for f in data.get("forms", [])], checks, data.get("trial", 0))

    def replay(self, I: Ideal) -> bool:
        """Re-run the recorded forms and compare every check."""
        forms = [Polynomial.linear_form(f, I.shape.nvars, I.p) for f in self.forms]
        ok, checks = _criterion(I, self.m, forms)
        return ok and [asdict(c) for c in checks] == [asdict(c) for c in self.checks]


class _Graded:
    """dim (R/(I, h_1..h_i))_d via ranks inside (R/I)_d."""

    def __init__(self, Q: Quotient):
        self.Q = Q
        self.p = Q.p
        self._images: dict[tuple[int, int], np.ndarray] = {}

    def images(self, h: Polynomial, d: int) -> np.ndarray:
        # h * (R/I)_{d-1} inside (R/I)_d
        key = (id(h), d)
        if key not in self._images:
            if d < 1:
                self._images[key] = np.zeros((0, self.Q.dim(d)), dtype=np.int64)
            else:
                self._images[key] = self.Q.multiplication_matrix(h, d - 1)
        return self._images[key]

    def quotient_dim(self, forms: list[Polynomial], d: int) -> int:
        base = self.Q.dim(d)
        if not forms or base == 0:
            return base
        A = np.vstack([self.images(h, d) for h in forms])
        return base - linalg.rank_modp(A, self.p)


def _criterion(I: Ideal, m: int, forms: list[Polynomial]) -> tuple[bool, list[StepCheck]]:
    G = _Graded(Quotient(I))
    checks: list[StepCheck] = []
    if G.quotient_dim([], m) == 0:
        return True, checks
    for i in range(1, len(forms) + 1):
        prev, cur = forms[: i - 1], forms[:i]
        hm, hm1 = G.quotient_dim(prev, m), G.quotient_dim(prev, m + 1)
        hm1_new = G.quotient_dim(cur, m + 1)
        # ((J : h)_m = J_m  <=>  H_J(m) = H_J(m+1) - H_(J,h)(m+1)
        colon_ok = hm == hm1 - hm1_new
        remaining = G.quotient_dim(cur, m)
        checks.append(StepCheck(i, colon_ok, (hm, hm1, hm1_new), remaining == 0, remaining))
        if not colon_ok:
            return False, checks
        if remaining == 0:
            return True, checks
    return False, checks


def _max_forms(I: Ideal) -> int:
    shape = I.shape
    return min(shape.k + max(shape.dims), shape.nvars)


def _draw_forms(I: Ideal, count: int, rng, blockwise: bool) -> list[Polynomial]:
    shape, p = I.shape, I.p
    if not blockwise:
        return [random_linear_form(range(shape.nvars), shape.nvars, p, rng) for _ in range(count)]
    forms = []
    for j in range(count):
        i = j % shape.k
        forms.append(random_linear_form(shape.block(i), shape.nvars, p, rng))
    return forms


def is_m_regular(
    I: Ideal,
    m: int,
    rng,
    trials: int = DEFAULT_TRIALS,
    blockwise: bool = False,
    gen_degree: int | None = None,
) -> tuple[bool, RegularityCertificate | None]:
    """Decide m-regularity with random forms h_1, ..., h_j.

    True comes with a replayable certificate.  False means every trial
    failed, which for random forms over a large field is overwhelming
    evidence but not a proof.
    """
    if gen_degree is None:
        gen_degree = max_generator_degree(I)
    if gen_degree > m:
        raise PreconditionError(f"ideal has a minimal generator of degree {gen_degree} > m = {m}")
    count = _max_forms(I)
    for trial in range(trials):
        forms = _draw_forms(I, count, rng, blockwise)
        ok, checks = _criterion(I, m, forms)
        if ok:
            used = forms[: len(checks)]
            cert = RegularityCertificate(
                m=m,
                method="criterion",
                forms=[_coeff_vector(h, I.shape.nvars) for h in used],
                checks=checks,
                trial=trial,
            )
            return True, cert
    return False, None


def _coeff_vector(h: Polynomial, nvars: int) -> list[int]:
    vec = [0] * nvars
    for mono, c in h.terms.items():
        vec[mono.index(1)] = c
    return vec


def regularity(
    I: Ideal,
    rng,
    trials: int = DEFAULT_TRIALS,
    lower: int = 0,
    blockwise: bool = False,
) -> tuple[int, RegularityCertificate]:
    """Least m at which the criterion certifies m-regularity.

    The scan starts at max(largest minimal generator degree, lower); pass
    the regularity index as `lower` when it is known.
    """
    if I.is_zero():
        raise PreconditionError("regularity of the zero ideal is not defined here")
    if I.is_unit():
        raise PreconditionError("unit ideal")
    gen_degree = max_generator_degree(I)
    m = max(gen_degree, lower, 0)
    for _ in range(SCAN_LIMIT):
        ok, cert = is_m_regular(I, m, rng, trials, blockwise, gen_degree=gen_degree)
        if ok:
            return m, cert
        m += 1
    raise RuntimeError(f"no regularity certificate found up to degree {m}")


# ---------------------------------------------------------------------------
# generic initial ideal


class _Substitution:
    """Images of monomials under x_v -> sum_u A[v, u] x_u, as dense vectors per degree."""

    def __init__(self, A: np.ndarray, nvars: int, p: int):
        self.A, self.n, self.p = A % p, nvars, p
        self._basis: dict[int, tuple[list, dict]] = {}
        self._shift: dict[int, np.ndarray] = {}
        self._memo: dict[tuple, np.ndarray] = {}

    def basis(self, d: int):
        if d not in self._basis:
            monos = list(_all_monomials(self.n, d))
            self._basis[d] = (monos, {m: i for i, m in enumerate(monos)})
        return self._basis[d]

    def shift(self, d: int) -> np.ndarray:
        # shift[u, j] = index in degree d of x_u * (j-th monomial of degree d-1)
        if d not in self._shift:
            src, _ = self.basis(d - 1)
            _, idx = self.basis(d)
            S = np.empty((self.n, len(src)), dtype=np.int64)
            for u in range(self.n):
                for j, m in enumerate(src):
                    mm = list(m)
                    mm[u] += 1
                    S[u, j] = idx[tuple(mm)]
            self._shift[d] = S
        return self._shift[d]

    def image(self, m: tuple) -> np.ndarray:
        if m in self._memo:
            return self._memo[m]
        d = sum(m)
        if d == 0:
            vec = np.ones(1, dtype=np.int64)
        else:
            v = next(i for i, e in enumerate(m) if e)
            rest = list(m)
            rest[v] -= 1
            prev = self.image(tuple(rest))
            S = self.shift(d)
            vec = np.zeros(len(self.basis(d)[0]), dtype=np.int64)
            for u in range(self.n):
                c = int(self.A[v, u])
                if c:
                    np.add.at(vec, S[u], prev * c % self.p)
            vec %= self.p
        self._memo[m] = vec
        return vec


def _all_monomials(n: int, d: int):
    from itertools import combinations_with_replacement

    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for v in combo:
            e[v] += 1
        yield tuple(e)


def _random_invertible(n: int, p: int, rng) -> np.ndarray:
    while True:
        A = rng.integers(0, p, size=(n, n)).astype(np.int64)
        if linalg.rank_modp(A, p) == n:
            return A


def is_strongly_stable(gens: list[tuple]) -> bool:
    """Strong stability w.r.t. x_{N-1} > ... > x_0 (the grevlex variable order used here)."""
    gset = list(gens)

    def inside(m):
        return any(all(a <= b for a, b in zip(g, m)) for g in gset)

    n = len(gens[0]) if gens else 0
    for g in gset:
        for j in range(n):
            if not g[j]:
                continue
            for i in range(j + 1, n):
                mm = list(g)
                mm[j] -= 1
                mm[i] += 1
                if not inside(tuple(mm)):
                    return False
    return True


@dataclass
class GinResult:
    regularity: int
    generators: list[tuple]
    strongly_stable: bool
    degrees_scanned: int


def generic_initial_ideal(I: Ideal, rng, max_degree: int = SCAN_LIMIT) -> GinResult:
    """Minimal generators of in_grevlex(g I) for a random g in GL_N(F_p).

    Degree by degree, a basis of I_d is pushed through g and row reduced
    with columns in descending grevlex order; pivot columns are the leading
    monomials of (g I)_d.  Stops once the monomial ideal found so far has the
    Hilbert series of I (equal series plus containment means it is all of
    the initial ideal).
    """
    shape, p, n = I.shape, I.p, I.shape.nvars
    if I.is_zero():
        return GinResult(0, [], True, 0)
    target = hilbert_numerator(list(I.lead_terms))
    A = _random_invertible(n, p, rng)
    sub = _Substitution(A, n, p)
    Q = Quotient(I)
    key = GREVLEX.key
    gens: list[tuple] = []
    for d in range(0, max_degree + 1):
        monos, idx = sub.basis(d)
        leads_d = [u for u in enumerate_total_degree(shape, d) if not Q.is_standard(u)]
        if leads_d:
            # basis element u - NF(u) of I_d for every leading monomial u
            rows = np.zeros((len(leads_d), len(monos)), dtype=np.int64)
            for r, u in enumerate(leads_d):
                acc = sub.image(u).copy()
                for s_, c in Q.nf_monomial(u).items():
                    acc = (acc - c * sub.image(s_)) % p
                rows[r] = acc
            order = sorted(range(len(monos)), key=lambda j: key(monos[j]), reverse=True)
            _, pivots = linalg.rref_modp(rows[:, order], p)
            lead_monos = [monos[order[c]] for c in pivots]
            for u in lead_monos:
                if not any(all(a <= b for a, b in zip(g, u)) for g in gens):
                    gens.append(u)
        if gens and hilbert_numerator(gens) == target:
            reg = max(sum(g) for g in gens)
            return GinResult(reg, gens, is_strongly_stable(gens), d)
    raise RuntimeError(f"initial ideal not complete by degree {max_degree}")


def regularity_via_gin(I: Ideal, rng) -> int:
    """Largest degree of a minimal generator of the generic initial ideal."""
    return generic_initial_ideal(I, rng).regularity
