"""Hilbert functions, Hilbert polynomials and the regularity index.

Values come from counting standard monomials of the leading-term ideal: one
Groebner basis serves every degree.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groebner import Ideal
from .ring import (
    compositions,
    enumerate_monomials,
    enumerate_total_degree,
)


class StabilizationError(RuntimeError):
    """The interpolated Hilbert polynomial does not match at the check degree."""


def _inside(monos: Sequence[tuple], leads: Sequence[tuple]) -> np.ndarray:
    if not monos:
        return np.zeros(0, dtype=bool)
    M = np.asarray(monos, dtype=np.int32)
    hit = np.zeros(len(M), dtype=bool)
    for lead in leads:
        hit |= np.all(M >= np.asarray(lead, dtype=np.int32), axis=1)
    return hit


def multigraded_hilbert(I: Ideal, t: Sequence[int]) -> int:
    """dim_k (R/I)_t for a multidegree t."""
    t = I.shape.check_degree(t)
    monos = enumerate_monomials(I.shape, t)
    return len(monos) - int(_inside(monos, I.lead_terms).sum())


def _graded_direct(I: Ideal, t: int) -> int:
    monos = enumerate_total_degree(I.shape, t)
    return len(monos) - int(_inside(monos, I.lead_terms).sum())


def graded_hilbert(I: Ideal, t: int, check: bool = True) -> int:
    """H_{R/I}(t), the N^1-graded Hilbert function.

    With ``check`` the direct total-degree count is compared with the sum of
    multigraded values over all compositions of t.
    """
    if t < 0:
        raise ValueError("degree must be non-negative")
    direct = _graded_direct(I, t)
    if check:
        summed = sum(multigraded_hilbert(I, c) for c in compositions(t, I.shape.k))
        if summed != direct:
            raise AssertionError(f"composition identity fails at t={t}: {summed} != {direct}")
    return direct


@dataclass
class HilbertTable:
    """Multigraded values on a box [0, b_1] x ... x [0, b_k] plus total-degree values."""

    box: tuple[int, ...]
    values: dict = field(default_factory=dict)
    total: dict = field(default_factory=dict)

    def composition_sum(self, t: int) -> int:
        return sum(self.values[c] for c in compositions(t, len(self.box)) if c in self.values)


def hilbert_table(I: Ideal, box: Sequence[int] | int, max_total: int | None = None) -> HilbertTable:
    shape = I.shape
    if isinstance(box, int):
        box = (box,) * shape.k
    box = tuple(box)
    values = {}
    for t in itertools.product(*(range(b + 1) for b in box)):
        values[t] = multigraded_hilbert(I, t)
    if max_total is None:
        max_total = min(box)
    total = {t: _graded_direct(I, t) for t in range(max_total + 1)}
    return HilbertTable(box=box, values=values, total=total)


class HilbertPolynomial:
    """Polynomial in t with exact rational coefficients (ascending powers)."""

    def __init__(self, coeffs: Sequence):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, HilbertPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_integer_valued(self, upto: int = 20) -> bool:
        return all(self(t).denominator == 1 for t in range(upto + 1))

    @classmethod
    def binomial(cls, m: int, scale=1) -> "HilbertPolynomial":
        """scale * C(t + m, m) = scale * (t+m)(t+m-1)...(t+1)/m!."""
        poly = [Fraction(1)]
        for j in range(1, m + 1):
            # multiply by (t + j)
            nxt = [Fraction(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i] += c * j
                nxt[i + 1] += c
            poly = nxt
        f = Fraction(scale, math.factorial(m))
        return cls([c * f for c in poly])

    @classmethod
    def interpolate(cls, start: int, values: Sequence[int]) -> "HilbertPolynomial":
        """Unique polynomial of degree < len(values) through (start + i, values[i])."""
        # Newton forward differences in the basis C(t - start, j)
        diffs = [Fraction(v) for v in values]
        newton = []
        while diffs:
            newton.append(diffs[0])
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        coeffs = [Fraction(0)]
        basis = [Fraction(1)]  # C(t - start, j) as ascending coefficients
        for j, c in enumerate(newton):
            if j:
                nxt = [Fraction(0)] * (len(basis) + 1)
                shift = Fraction(-(start + j - 1))
                for i, b in enumerate(basis):
                    nxt[i] += b * shift / j
                    nxt[i + 1] += b / j
                basis = nxt
            coeffs += [Fraction(0)] * (len(basis) - len(coeffs))
            for i, b in enumerate(basis):
                coeffs[i] += c * b
        return cls(coeffs)

    def __repr__(self):
        terms = [f"{c}*t^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return "HP(" + (" + ".join(terms) or "0") + ")"


def hilbert_polynomial_reduced(s: int, k: int) -> HilbertPolynomial:
    """s * C(t + k - 1, k - 1): the Hilbert polynomial of s generic reduced points."""
    if s < 1 or k < 1:
        raise ValueError("need s >= 1 and k >= 1")
    return HilbertPolynomial.binomial(k - 1, s)


def hilbert_polynomial_empirical(I: Ideal, k: int, T: int) -> HilbertPolynomial:
    """Degree-(k-1) interpolant of H through t = T..T+k-1, checked at T+k.

    `k` is the Krull dimension of R/I; T must be past the regularity index.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    values = [graded_hilbert(I, t, check=False) for t in range(T, T + k)]
    hp = HilbertPolynomial.interpolate(T, values)
    check = graded_hilbert(I, T + k, check=False)
    if hp(T + k) != check:
        raise StabilizationError(f"H({T + k}) = {check} but interpolant gives {hp(T + k)}; raise T")
    return hp


def regularity_index(I: Ideal, hp: HilbertPolynomial, horizon: int) -> int:
    """Least t >= 0 with H(j) = HP(j) for all j in [t, horizon].

    Scans downward from the horizon; callers pick a horizon past every
    degree where H and HP could still differ.
    """
    t = horizon
    if graded_hilbert(I, t, check=False) != hp(t):
        raise StabilizationError(f"H and HP still differ at the horizon {horizon}")
    while t > 0 and graded_hilbert(I, t - 1, check=False) == hp(t - 1):
        t -= 1
    return t


def hilbert_numerator(gens: Sequence[tuple]) -> list[int]:
    """Numerator N(z) of the Hilbert series N(z) / (1 - z)^n of R/(gens) for a monomial ideal.

    Pivot recursion: N(M) = N(M + (x)) + z * N(M : x) for a variable x
    dividing at least two generators.  Coefficients are ascending in z.
    """
    return list(_numerator(_minimalize(gens)))


def _minimalize(gens) -> tuple:
    gens = sorted(set(tuple(g) for g in gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


_NUM_CACHE: dict = {}


def _numerator(gens: tuple) -> tuple:
    if gens in _NUM_CACHE:
        return _NUM_CACHE[gens]
    if not gens:
        res = (1,)
    elif not any(gens[0]):
        res = (0,)
    else:
        n = len(gens[0])
        counts = [sum(1 for g in gens if g[v]) for v in range(n)]
        v = max(range(n), key=lambda i: counts[i])
        if counts[v] <= 1:
            # pairwise coprime generators: product of (1 - z^deg)
            poly = [1]
            for g in gens:
                d = sum(g)
                poly = _poly_mul(poly, [1] + [0] * (d - 1) + [-1])
            res = tuple(poly)
        else:
            x = tuple(1 if i == v else 0 for i in range(n))
            with_x = _minimalize([g for g in gens if not g[v]] + [x])
            colon = _minimalize([tuple(a - 1 if i == v and a else a for i, a in enumerate(g)) for g in gens])
            res = tuple(_poly_add(list(_numerator(with_x)), [0] + list(_numerator(colon))))
    while len(res) > 1 and res[-1] == 0:
        res = res[:-1]
    if len(_NUM_CACHE) > 200_000:
        _NUM_CACHE.clear()
    _NUM_CACHE[gens] = res
    return res
