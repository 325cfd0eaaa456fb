"""Point schemes in P^{n_1} x ... x P^{n_k} and their defining ideals."""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg
from .formulas import PreconditionError, d_values
from .groebner import Ideal, colon, intersect, power
from .ring import FieldSpec, Polynomial, SpaceShape, dim_graded_piece, enumerate_monomials

log = logging.getLogger(__name__)

DEFAULT_RETRIES = 20


class GenericityError(RuntimeError):
    """A randomized construction could not reach generic position within its retry cap."""


def _normalize_block(block: Sequence[int], p: int) -> tuple[int, ...]:
    vals = [int(x) % p for x in block]
    lead = next((x for x in vals if x), 0)
    if not lead:
        raise ValueError("a point block must be nonzero")
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in vals)


@dataclass(frozen=True)
class Point:
    """A point of the product space; blocks are projective, normalized so the
    first nonzero coordinate of each block is 1."""

    blocks: tuple[tuple[int, ...], ...]
    p: int

    @classmethod
    def make(cls, blocks: Sequence[Sequence[int]], p: int) -> "Point":
        return cls(tuple(_normalize_block(b, p) for b in blocks), p)

    @property
    def coords(self) -> tuple[int, ...]:
        """Flat coordinates (all blocks concatenated)."""
        return sum(self.blocks, ())

    def fits(self, shape: SpaceShape) -> bool:
        return tuple(len(b) - 1 for b in self.blocks) == shape.dims

    def projection(self, i: int) -> tuple[int, ...]:
        return self.blocks[i]


@dataclass
class PointScheme:
    """Z = m_1 P_1 + ... + m_s P_s with m_1 >= ... >= m_s (sorted on construction)."""

    shape: SpaceShape
    points: list[Point]
    mults: list[int] = field(default_factory=list)
    p: int = 32003
    seed: int | None = None

    def __post_init__(self):
        if not self.mults:
            self.mults = [1] * len(self.points)
        if len(self.mults) != len(self.points):
            raise ValueError("one multiplicity per point")
        if any(m < 1 for m in self.mults):
            raise ValueError("multiplicities must be positive")
        for P in self.points:
            if not P.fits(self.shape):
                raise ValueError(f"point {P.blocks} does not fit {self.shape}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be pairwise distinct")
        order = sorted(range(len(self.points)), key=lambda i: -self.mults[i])
        self.points = [self.points[i] for i in order]
        self.mults = [self.mults[i] for i in order]

    @property
    def s(self) -> int:
        return len(self.points)

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.p)

    def is_reduced(self) -> bool:
        return all(m == 1 for m in self.mults)

    def support(self) -> "PointScheme":
        return PointScheme(self.shape, list(self.points), [1] * self.s, self.p, self.seed)

    def with_mults(self, mults: Sequence[int]) -> "PointScheme":
        return PointScheme(self.shape, list(self.points), list(mults), self.p, self.seed)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "dims": list(self.shape.dims),
            "points": [[list(b) for b in P.blocks] for P in self.points],
            "mults": list(self.mults),
            "seed": self.seed,
        }

    def to_json(self, path: str | Path | None = None) -> str:
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            Path(path).write_text(text + "\n")
        return text

    @classmethod
    def from_dict(cls, data: dict) -> "PointScheme":
        p = int(data.get("p", 32003))
        shape = SpaceShape(tuple(data["dims"]))
        pts = [Point.make(blocks, p) for blocks in data["points"]]
        mults = list(data.get("mults") or [1] * len(pts))
        seed = data.get("seed")
        return cls(shape, pts, mults, p, None if seed is None else int(seed))

    @classmethod
    def from_json(cls, source: str | Path) -> "PointScheme":
        path = Path(source)
        text = path.read_text() if path.exists() else str(source)
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# ideals


def _forms_through(shape: SpaceShape, i: int, vectors: Sequence[Sequence[int]], p: int) -> np.ndarray:
    """Coefficient vectors of block-i linear forms vanishing at the given block vectors."""
    n = shape.dims[i] + 1
    if not vectors:
        return np.eye(n, dtype=np.int64)
    return linalg.nullspace_modp(np.array(vectors, dtype=np.int64).reshape(len(vectors), n), p)


def block_form(shape: SpaceShape, i: int, coeffs: Sequence[int], p: int) -> Polynomial:
    block = shape.block(i)
    return Polynomial.linear_form({v: int(c) for v, c in zip(block, coeffs)}, shape.nvars, p)


def point_ideal(P: Point, shape: SpaceShape, field: FieldSpec | None = None) -> Ideal:
    """Prime ideal of P: n_i independent block-i linear forms vanishing at P, for every i."""
    field = field or FieldSpec(P.p)
    if not P.fits(shape):
        raise ValueError("point does not fit the shape")
    gens = []
    for i, blk in enumerate(P.blocks):
        for row in _forms_through(shape, i, [blk], field.p):
            gens.append(block_form(shape, i, row, field.p))
    return Ideal(gens, shape, field)


def fat_point_ideal(Z: PointScheme) -> Ideal:
    """I_Z = p_1^{m_1} ∩ ... ∩ p_s^{m_s}."""
    field = Z.field
    I = None
    for P, m in zip(Z.points, Z.mults):
        prime = point_ideal(P, Z.shape, field)
        piece = power(prime, m) if m > 1 else prime
        I = piece if I is None else intersect(I, piece)
    if I is None:
        raise ValueError("empty point scheme")
    return I


def evaluation_rank(points: Sequence[Point], shape: SpaceShape, t: Sequence[int], p: int) -> int:
    """rank of R_t -> F_p^s, f -> (f(P_1), ..., f(P_s)); equals H_X(t) for reduced X."""
    monos = enumerate_monomials(shape, t)
    M = np.empty((len(points), len(monos)), dtype=np.int64)
    for r, P in enumerate(points):
        c = P.coords
        for col, m in enumerate(monos):
            v = 1
            for x, e in zip(c, m):
                if e:
                    v = v * pow(x, e, p) % p
            M[r, col] = v
    return linalg.rank_modp(M, p)


def is_generic_position(X: PointScheme) -> tuple[bool, tuple[int, ...] | None]:
    """Check H_X(t) = min(dim R_t, s) on the box [0, d_1 + 1] x ... x [0, d_k + 1].

    Returns (ok, first violating multidegree).  Outside the box the value is
    s by monotonicity, so the box decides.
    """
    if not X.is_reduced():
        raise PreconditionError("generic position is defined for reduced schemes")
    shape, s = X.shape, X.s
    box = [d + 1 for d in d_values(shape, s)]
    full: list[tuple[int, ...]] = []
    for t in itertools.product(*(range(b + 1) for b in box)):
        if any(all(a <= b for a, b in zip(f, t)) for f in full):
            continue  # H_X(t) >= H_X(f) = s and is capped at s
        want = min(dim_graded_piece(shape, t), s)
        got = evaluation_rank(X.points, shape, t, X.p)
        if got != want:
            return False, t
        if got == s:
            full.append(t)
    return True, None


def _random_block(n: int, p: int, rng) -> list[int]:
    while True:
        v = [int(x) for x in rng.integers(0, p, size=n + 1)]
        if any(v):
            return v


def random_point(shape: SpaceShape, p: int, rng) -> Point:
    return Point.make([_random_block(n, p, rng) for n in shape.dims], p)


def random_points(
    shape: SpaceShape,
    s: int,
    rng,
    p: int = 32003,
    retries: int = DEFAULT_RETRIES,
    seed: int | None = None,
) -> PointScheme:
    """s distinct uniformly random points, redrawn until they are in generic position."""
    if s < 1:
        raise ValueError("need s >= 1")
    for attempt in range(retries):
        pts: list[Point] = []
        while len(pts) < s:
            P = random_point(shape, p, rng)
            if P not in pts:
                pts.append(P)
        X = PointScheme(shape, pts, [1] * s, p, seed)
        ok, witness = is_generic_position(X)
        if ok:
            return X
        log.info("attempt %d: points not in generic position (witness %s)", attempt, witness)
    raise GenericityError(f"no generic support after {retries} attempts (p={p}, seed={seed})")


def find_nzd_linear_form(
    I: Ideal,
    i: int,
    rng,
    support: Sequence[Point] | None = None,
    retries: int = DEFAULT_RETRIES,
) -> Polynomial:
    """A random block-i linear form L with (I : L) = I.

    With `support` given, candidates vanishing at a support projection are
    skipped before the colon test.
    """
    shape, p = I.shape, I.p
    if not 0 <= i < shape.k:
        raise ValueError(f"factor index {i} out of range")
    for _ in range(retries):
        coeffs = _random_block(shape.dims[i], p, rng)
        if support is not None:
            if any(sum(c * x for c, x in zip(coeffs, P.blocks[i])) % p == 0 for P in support):
                continue
        L = block_form(shape, i, coeffs, p)
        if colon(I, L) == I:
            return L
    raise GenericityError(f"no non-zero divisor of degree e_{i + 1} found in {retries} attempts")


# ---------------------------------------------------------------------------
# separating products


def _form_through_avoiding(shape, i, through: Sequence[Point], avoid: Point, p, rng) -> list[int]:
    """Block-i linear form through the projections of `through`, nonzero at `avoid`."""
    K = _forms_through(shape, i, [P.blocks[i] for P in through], p)
    if len(K) == 0:
        raise GenericityError("projections span the whole factor; no hyperplane through them")
    target = avoid.blocks[i]
    values = [sum(int(a) * b for a, b in zip(row, target)) % p for row in K]
    if not any(values):
        raise GenericityError("every hyperplane through the points contains the avoided point")
    for _ in range(DEFAULT_RETRIES):
        weights = [int(w) for w in rng.integers(0, p, size=len(K))]
        if sum(w * v for w, v in zip(weights, values)) % p:
            return [int(sum(w * int(K[r, c]) for r, w in enumerate(weights)) % p) for c in range(K.shape[1])]
    raise GenericityError("could not draw a hyperplane avoiding the point")


def separating_product(
    support: Sequence[Point],
    mults: Sequence[int],
    a: Sequence[int],
    P: Point,
    shape: SpaceShape,
    rng,
    verify: bool = True,
) -> Polynomial:
    """Product of a_j block-j hyperplanes lying in J = ∩ p_i^{m_i} and not vanishing at P.

    Needs n_min * |a| >= sum m_i and |a| >= max m_i.  Follows the inductive
    construction: if some block j with a_j > 0 has fewer dimensions than
    there are points, peel off one hyperplane in that block through the n_j
    points of largest multiplicity and recurse with those multiplicities
    lowered by one.
    """
    a = shape.check_degree(a)
    if len(support) != len(mults):
        raise ValueError("one multiplicity per support point")
    p = P.p
    total_a = sum(a)
    if any(m < 1 for m in mults):
        raise PreconditionError("multiplicities must be positive")
    if min(shape.dims) * total_a < sum(mults) or (mults and total_a < max(mults)):
        raise PreconditionError(
            f"need n_min*|a| >= sum(m) and |a| >= max(m); got a={a}, mults={list(mults)}"
        )
    factors = _separating_factors(list(support), list(mults), list(a), P, shape, p, rng)
    L = Polynomial.constant(1, shape.nvars, p)
    for j, coeffs in factors:
        L = L * block_form(shape, j, coeffs, p)
    if L.evaluate(P.coords) == 0:
        raise GenericityError("separating product vanishes at the avoided point")
    if verify and support:
        J = fat_point_ideal(PointScheme(shape, list(support), list(mults), p))
        if not J.contains(L):
            raise GenericityError("separating product is not in J; support not generic enough")
    return L


def _separating_factors(pts, mults, a, P, shape, p, rng) -> list[tuple[int, list[int]]]:
    live = [(m, Q) for m, Q in zip(mults, pts) if m > 0]
    live.sort(key=lambda mq: -mq[0])
    mults = [m for m, _ in live]
    pts = [Q for _, Q in live]
    r = len(pts)
    short = [j for j in range(shape.k) if a[j] > 0 and shape.dims[j] < r]
    if not short:
        # every used block has room for a hyperplane through all r points
        out = []
        for j in range(shape.k):
            if a[j]:
                form = _form_through_avoiding(shape, j, pts, P, p, rng)
                out.extend([(j, form)] * a[j])
        return out
    j = short[0]
    n_j = shape.dims[j]
    form = _form_through_avoiding(shape, j, pts[:n_j], P, p, rng)
    lowered = [m - 1 for m in mults[:n_j]] + mults[n_j:]
    b = list(a)
    b[j] -= 1
    return [(j, form)] + _separating_factors(pts, lowered, b, P, shape, p, rng)
