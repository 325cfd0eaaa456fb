"""Reduced Groebner bases and the ideal operations built on them.

Buchberger's algorithm runs on raw ``{monomial: residue}`` dicts for speed;
the public surface speaks :class:`~multireg.ring.Polynomial` and
:class:`Ideal`.
"""
from __future__ import annotations

import heapq
import itertools
import threading
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .ring import (
    GREVLEX,
    Elimination,
    FieldSpec,
    MonomialOrder,
    Polynomial,
    ShapeError,
    SpaceShape,
    divides,
    enumerate_total_degree,
    mono_div,
    mono_lcm,
)


class IdealError(ValueError):
    """Invalid ideal construction or incompatible rings."""


# ---------------------------------------------------------------------------
# raw kernels


class _Basis:
    """Leading data of a growing list of monic polynomials."""

    __slots__ = ("polys", "leads", "masks", "tails", "active")

    def __init__(self):
        self.polys: list[dict] = []
        self.leads: list[tuple] = []
        self.masks: list[int] = []
        self.tails: list[list] = []
        self.active: list[int] = []

    def add(self, f: dict, lead: tuple) -> int:
        self.polys.append(f)
        self.leads.append(lead)
        self.masks.append(_support_mask(lead))
        self.tails.append([(m, c) for m, c in f.items() if m != lead])
        return len(self.polys) - 1

    def find_divisor(self, m: tuple, mask: int) -> int:
        leads, masks = self.leads, self.masks
        for i in self.active:
            if masks[i] & ~mask == 0:
                lead = leads[i]
                for a, b in zip(lead, m):
                    if a > b:
                        break
                else:
                    return i
        return -1


def _support_mask(m: tuple) -> int:
    mask = 0
    for v, e in enumerate(m):
        if e:
            mask |= 1 << v
    return mask


def _reduce(f: dict, basis: _Basis, key, p: int, full: bool = True) -> dict:
    """Remainder of f on division by the active elements of `basis`.

    With ``full=False`` stops at the first irreducible leading term and
    returns the partially reduced polynomial.
    """
    f = dict(f)
    rem: dict = {}
    heap = [(-key(m), m) for m in f]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, 0)
        if not c:
            continue
        i = basis.find_divisor(m, _support_mask(m))
        if i < 0:
            rem[m] = c
            if not full:
                rem.update(f)
                return rem
            continue
        q = mono_div(m, basis.leads[i])
        for t, a in basis.tails[i]:
            mt = tuple(x + y for x, y in zip(q, t))
            old = f.get(mt)
            if old is None:
                f[mt] = (-c * a) % p
                heapq.heappush(heap, (-key(mt), mt))
            else:
                new = (old - c * a) % p
                if new:
                    f[mt] = new
                else:
                    del f[mt]
    return rem


def _monic(f: dict, lead: tuple, p: int) -> dict:
    inv = pow(f[lead], -1, p)
    if inv == 1:
        return f
    return {m: c * inv % p for m, c in f.items()}


def _lead(f: dict, key) -> tuple:
    return max(f, key=key)


def _spoly(f: dict, lf: tuple, g: dict, lg: tuple, p: int) -> dict:
    lcm = mono_lcm(lf, lg)
    u, v = mono_div(lcm, lf), mono_div(lcm, lg)
    out: dict = {}
    for m, c in f.items():
        if m != lf:
            mm = tuple(x + y for x, y in zip(m, u))
            out[mm] = c
    for m, c in g.items():
        if m != lg:
            mm = tuple(x + y for x, y in zip(m, v))
            s = (out.get(mm, 0) - c) % p
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
    return out


def _coprime(a: tuple, b: tuple) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def buchberger(gens: Iterable[dict], order: MonomialOrder, p: int) -> list[dict]:
    """Reduced Groebner basis of the ideal generated by `gens`.

    Pairs are selected by the normal strategy (smallest lcm first, by total
    degree then order) and pruned with the Gebauer-Moeller installation of
    Buchberger's product and chain criteria.  Output is monic and sorted by
    leading monomial, descending.
    """
    key = order.key
    basis = _Basis()
    pairs: dict[tuple[int, int], tuple] = {}  # (i, j) -> lcm
    heap: list = []
    counter = itertools.count()

    def insert(h: dict):
        lh = _lead(h, key)
        h = _monic(h, lh, p)
        idx = basis.add(h, lh)
        leads = basis.leads
        # Gebauer-Moeller update
        cand = [(g, mono_lcm(leads[g], lh)) for g in basis.active]
        kept = []
        for pos, (g, lcm_g) in enumerate(cand):
            if _coprime(leads[g], lh):
                kept.append((g, lcm_g))
                continue
            redundant = False
            for other, lcm_o in itertools.chain(cand[pos + 1:], kept):
                if divides(lcm_o, lcm_g):
                    redundant = True
                    break
            if not redundant:
                kept.append((g, lcm_g))
        new_pairs = [(g, lcm_g) for g, lcm_g in kept if not _coprime(leads[g], lh)]
        for (a, b), lcm_ab in list(pairs.items()):
            if (
                divides(lh, lcm_ab)
                and mono_lcm(leads[a], lh) != lcm_ab
                and mono_lcm(leads[b], lh) != lcm_ab
            ):
                del pairs[(a, b)]
        for g, lcm_g in new_pairs:
            pairs[(g, idx)] = lcm_g
            heapq.heappush(heap, (sum(lcm_g), key(lcm_g), next(counter), g, idx))
        basis.active = [g for g in basis.active if not divides(lh, leads[g])] + [idx]

    for f in gens:
        if not f:
            continue
        r = _reduce(f, basis, key, p)
        if r:
            insert(r)

    while heap:
        *_, a, b = heapq.heappop(heap)
        if (a, b) not in pairs:
            continue
        del pairs[(a, b)]
        s = _spoly(basis.polys[a], basis.leads[a], basis.polys[b], basis.leads[b], p)
        if not s:
            continue
        r = _reduce(s, basis, key, p)
        if r:
            insert(r)

    return _interreduce(basis, key, p)


def _interreduce(basis: _Basis, key, p: int) -> list[dict]:
    active = sorted(basis.active, key=lambda i: key(basis.leads[i]))
    out = []
    for i in active:
        lead = basis.leads[i]
        others = _Basis()
        for j in active:
            if j != i:
                others.add(basis.polys[j], basis.leads[j])
        others.active = list(range(len(others.polys)))
        tail = {m: c for m, c in basis.polys[i].items() if m != lead}
        reduced = _reduce(tail, others, key, p)
        reduced[lead] = 1
        out.append(reduced)
    out.sort(key=lambda f: key(_lead(f, key)), reverse=True)
    return out


def _division_basis(gb: Sequence[dict], key) -> _Basis:
    b = _Basis()
    for g in gb:
        b.add(g, _lead(g, key))
    b.active = list(range(len(b.polys)))
    return b


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """A homogeneous ideal of the multigraded ring, with a lazily cached reduced GB.

    The GB is computed at most once per instance (guarded by a lock); after
    that the object is read-only.
    """

    def __init__(
        self,
        gens: Iterable[Polynomial],
        shape: SpaceShape,
        field: FieldSpec | None = None,
        order: MonomialOrder = GREVLEX,
    ):
        self.shape = shape
        self.field = field or FieldSpec()
        self.order = order
        p, n = self.field.p, shape.nvars
        kept = []
        for g in gens:
            if g.nvars != n or g.p != p:
                raise ShapeError("generator does not live in the ideal's ring")
            if not g.is_homogeneous(shape):
                raise IdealError(f"generator {g.to_string(shape)} is not N^k-homogeneous")
            if g:
                kept.append(g)
        self.gens: tuple[Polynomial, ...] = tuple(kept)
        self._gb: tuple[Polynomial, ...] | None = None
        self._lock = threading.Lock()
        self._division: _Basis | None = None

    # -- construction helpers

    @classmethod
    def zero(cls, shape: SpaceShape, field: FieldSpec | None = None) -> "Ideal":
        return cls([], shape, field)

    def _same_ring(self, other: "Ideal"):
        if self.shape != other.shape or self.field != other.field:
            raise IdealError("ideals live in different rings")
        if self.order != other.order:
            raise IdealError("ideals use different monomial orders")

    def _with_gb(self, gb: Sequence[dict]) -> "Ideal":
        """New ideal generated by an already reduced GB."""
        n, p = self.shape.nvars, self.field.p
        polys = [Polynomial._raw(g, n, p) for g in gb]
        out = Ideal(polys, self.shape, self.field, self.order)
        out._gb = tuple(polys)
        return out

    # -- Groebner data

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def gb(self) -> tuple[Polynomial, ...]:
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    raw = buchberger([g.terms for g in self.gens], self.order, self.p)
                    n = self.shape.nvars
                    self._gb = tuple(Polynomial._raw(g, n, self.p) for g in raw)
        return self._gb

    def reduced_gb(self) -> tuple[Polynomial, ...]:
        return self.gb

    @property
    def lead_terms(self) -> tuple[tuple, ...]:
        return tuple(g.leading_monomial(self.order) for g in self.gb)

    def _basis(self) -> _Basis:
        if self._division is None:
            self._division = _division_basis([g.terms for g in self.gb], self.order.key)
        return self._division

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return any(g.degree() == 0 for g in self.gb)

    def max_gb_degree(self) -> int:
        return max((g.degree() for g in self.gb), default=-1)

    def normal_form(self, f: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
        """Remainder of f on division by the reduced GB (zero iff f is in I)."""
        if order is not None and order != self.order:
            raise IdealError(f"normal form requested in {order!r}, ideal uses {self.order!r}")
        if f.nvars != self.shape.nvars or f.p != self.p:
            raise ShapeError("polynomial does not live in the ideal's ring")
        if not f:
            return f
        r = _reduce(f.terms, self._basis(), self.order.key, self.p)
        return Polynomial._raw(r, f.nvars, f.p)

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    __contains__ = contains

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.field == other.field
            and self.order == other.order
            and self.gb == other.gb
        )

    __hash__ = None

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __pow__(self, m: int) -> "Ideal":
        return power(self, m)

    def __repr__(self):
        gens = ", ".join(g.to_string(self.shape) for g in self.gens[:4])
        more = ", ..." if len(self.gens) > 4 else ""
        return f"Ideal({gens}{more}) in {self.shape}"


def reduced_gb(I: Ideal) -> tuple[Polynomial, ...]:
    return I.gb


def normal_form(f: Polynomial, I: Ideal, order: MonomialOrder | None = None) -> Polynomial:
    return I.normal_form(f, order)


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    """(I, J): generator concatenation."""
    I._same_ring(J)
    return Ideal(I.gens + J.gens, I.shape, I.field, I.order)


def power(I: Ideal, m: int) -> Ideal:
    """I^m, generated by all m-fold products of generators."""
    if m < 1:
        raise IdealError("power must be at least 1")
    gens = list(dict.fromkeys(I.gb if len(I.gb) <= len(I.gens) else I.gens))
    prods = {}
    for combo in itertools.combinations_with_replacement(range(len(gens)), m):
        f = gens[combo[0]]
        for j in combo[1:]:
            f = f * gens[j]
        if f:
            prods[f] = None
    return Ideal(list(prods), I.shape, I.field, I.order)


def _lift(f: dict, aux_exp: int, scale: int, p: int, out: dict):
    for m, c in f.items():
        key = m + (aux_exp,)
        v = (out.get(key, 0) + scale * c) % p
        if v:
            out[key] = v
        else:
            out.pop(key, None)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J via an auxiliary variable w: (w I + (1 - w) J) ∩ R.

    The GB is taken in an order eliminating w; its w-free part is the reduced
    GB of the intersection in the ideal's own order.
    """
    I._same_ring(J)
    if I.order != GREVLEX:
        raise IdealError("intersection is implemented for grevlex ideals")
    n, p = I.shape.nvars, I.p
    if I.is_zero() or J.is_zero():
        return Ideal.zero(I.shape, I.field)
    gens = []
    for f in I.gb:
        g: dict = {}
        _lift(f.terms, 1, 1, p, g)
        gens.append(g)
    for f in J.gb:
        g = {}
        _lift(f.terms, 0, 1, p, g)
        _lift(f.terms, 1, -1, p, g)
        gens.append(g)
    gb = buchberger(gens, Elimination(n), p)
    kept = [{m[:n]: c for m, c in g.items()} for g in gb if all(m[n] == 0 for m in g)]
    return I._with_gb(kept)


def exact_divide(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """f / g, raising if g does not divide f."""
    p = f.p
    key = order.key
    lg = g.leading_monomial(order)
    inv = pow(g.terms[lg], -1, p)
    rest = dict(f.terms)
    quot: dict = {}
    while rest:
        lm = max(rest, key=key)
        if not divides(lg, lm):
            raise IdealError("polynomial division is not exact")
        q = mono_div(lm, lg)
        c = rest[lm] * inv % p
        quot[q] = c
        for m, a in g.terms.items():
            mm = tuple(x + y for x, y in zip(m, q))
            v = (rest.get(mm, 0) - c * a) % p
            if v:
                rest[mm] = v
            else:
                rest.pop(mm, None)
    return Polynomial._raw(quot, f.nvars, p)


def colon(I: Ideal, f: Polynomial) -> Ideal:
    """(I : f) = {g : g f in I}, as (I ∩ (f)) / f."""
    if not f:
        raise IdealError("colon by the zero polynomial")
    if not f.is_homogeneous(I.shape):
        raise IdealError("colon needs an N^k-homogeneous divisor")
    if f.degree() == 0:
        return I
    inter = intersect(I, Ideal([f], I.shape, I.field, I.order))
    quotients = [exact_divide(g, f, I.order) for g in inter.gb]
    return Ideal(quotients, I.shape, I.field, I.order)


# ---------------------------------------------------------------------------
# graded-piece data


def _count_in_monomial_ideal(monos: Sequence[tuple], leads: Sequence[tuple]) -> int:
    if not monos or not leads:
        return 0
    M = np.asarray(monos, dtype=np.int32)
    L = np.asarray(leads, dtype=np.int32)
    inside = np.zeros(len(M), dtype=bool)
    for lead in L:
        inside |= np.all(M >= lead, axis=1)
    return int(inside.sum())


def min_gen_degrees(I: Ideal, t_max: int) -> dict[int, int]:
    """Number of minimal generators of I in each total degree t <= t_max.

    The count in degree t is dim I_t - dim (R_1 I_{t-1}).  With G the reduced
    GB, R_1 I_{t-1} is the degree-t part of the ideal generated by G_{<t}; its
    dimension is the number of degree-t monomials divisible by a leading term
    of G_{<t}, plus the F_p-rank of the degree-t S-polynomial remainders
    modulo G_{<t}.
    """
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    key, p = I.order.key, I.p
    gb = [g.terms for g in I.gb]
    leads = [_lead(g, key) for g in gb]
    degs = [sum(l) for l in leads]
    out = {}
    for t in range(t_max + 1):
        new_here = sum(1 for d in degs if d == t)
        if t == 0 or new_here == 0:
            out[t] = new_here
            continue
        low = [i for i, d in enumerate(degs) if d < t]
        basis = _Basis()
        for i in low:
            basis.add(gb[i], leads[i])
        basis.active = list(range(len(low)))
        remainders = []
        for a, b in itertools.combinations(range(len(low)), 2):
            la, lb = basis.leads[a], basis.leads[b]
            lcm = mono_lcm(la, lb)
            if sum(lcm) != t or _coprime(la, lb):
                continue
            r = _reduce(_spoly(basis.polys[a], la, basis.polys[b], lb, p), basis, key, p)
            if r:
                remainders.append(r)
        rank = 0
        if remainders:
            cols = sorted({m for r in remainders for m in r})
            index = {m: j for j, m in enumerate(cols)}
            A = np.zeros((len(remainders), len(cols)), dtype=np.int64)
            for row, r in enumerate(remainders):
                for m, c in r.items():
                    A[row, index[m]] = c
            rank = linalg.rank_modp(A, p)
        out[t] = new_here - rank
    return out


def max_generator_degree(I: Ideal) -> int:
    counts = min_gen_degrees(I, max(I.max_gb_degree(), 0))
    return max((t for t, c in counts.items() if c), default=-1)


class Quotient:
    """Graded pieces of R/I written in the basis of standard monomials.

    Normal forms of monomials are memoized; ``vector(f)`` gives the
    coordinates of a homogeneous f modulo I.
    """

    def __init__(self, I: Ideal):
        self.ideal = I
        self.p = I.p
        self.key = I.order.key
        self._basis = I._basis()
        self._nf: dict[tuple, dict] = {}
        self._std: dict[int, tuple[list, dict]] = {}

    def standard(self, t: int) -> list[tuple]:
        return self._standard(t)[0]

    def _standard(self, t: int):
        if t not in self._std:
            b = self._basis
            monos = [
                m for m in enumerate_total_degree(self.ideal.shape, t, self.ideal.order)
                if b.find_divisor(m, _support_mask(m)) < 0
            ]
            self._std[t] = (monos, {m: i for i, m in enumerate(monos)})
        return self._std[t]

    def dim(self, t: int) -> int:
        return len(self.standard(t))

    def is_standard(self, u: tuple) -> bool:
        return self._basis.find_divisor(u, _support_mask(u)) < 0

    def nf_monomial(self, u: tuple) -> dict:
        memo, b, p = self._nf, self._basis, self.p
        if u in memo:
            return memo[u]
        stack = [u]
        while stack:
            m = stack[-1]
            if m in memo:
                stack.pop()
                continue
            i = b.find_divisor(m, _support_mask(m))
            if i < 0:
                memo[m] = {m: 1}
                stack.pop()
                continue
            q = mono_div(m, b.leads[i])
            shifted = [(tuple(x + y for x, y in zip(q, t)), a) for t, a in b.tails[i]]
            missing = [mt for mt, _ in shifted if mt not in memo]
            if missing:
                stack.extend(missing)
                continue
            acc: dict = {}
            for mt, a in shifted:
                for s, c in memo[mt].items():
                    v = (acc.get(s, 0) - a * c) % p
                    if v:
                        acc[s] = v
                    else:
                        acc.pop(s, None)
            memo[m] = acc
            stack.pop()
        return memo[u]

    def nf(self, f: Polynomial) -> dict:
        p = self.p
        acc: dict = {}
        for m, c in f.terms.items():
            for s, a in self.nf_monomial(m).items():
                v = (acc.get(s, 0) + a * c) % p
                if v:
                    acc[s] = v
                else:
                    acc.pop(s, None)
        return acc

    def vector(self, f: Polynomial, t: int) -> np.ndarray:
        _, index = self._standard(t)
        vec = np.zeros(len(index), dtype=np.int64)
        for s, c in self.nf(f).items():
            vec[index[s]] = c
        return vec

    def multiplication_matrix(self, h: Polynomial, t: int) -> np.ndarray:
        """Matrix of x -> h x from (R/I)_t to (R/I)_{t + deg h}; rows indexed by the source basis."""
        d = h.degree()
        src = self.standard(t)
        rows = [self.vector(h.mul_term(m), t + d) for m in src]
        if not rows:
            return np.zeros((0, self.dim(t + d)), dtype=np.int64)
        return np.vstack(rows)


def dim_ideal_total(I: Ideal, t: int) -> int:
    """dim_k I_t from the leading-term ideal."""
    monos = enumerate_total_degree(I.shape, t)
    return _count_in_monomial_ideal(monos, I.lead_terms)


__all__ = [
    "Ideal",
    "IdealError",
    "Quotient",
    "buchberger",
    "colon",
    "dim_ideal_total",
    "exact_divide",
    "ideal_sum",
    "intersect",
    "max_generator_degree",
    "min_gen_degrees",
    "normal_form",
    "power",
    "reduced_gb",
]
