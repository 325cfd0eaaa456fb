"""Closed-form regularity values and bounds for point schemes.

Everything here is exact integer arithmetic.  Shapes are normalized to
n_1 >= ... >= n_k before the fat-point bounds are evaluated.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

from .ring import SpaceShape


class PreconditionError(ValueError):
    """Arguments violate the hypotheses a bound or formula is stated under."""


def d_value(n: int, s: int) -> int:
    """Least d >= 0 with C(d + n, d) >= s."""
    if n < 1 or s < 1:
        raise PreconditionError("need n >= 1 and s >= 1")
    d = 0
    while math.comb(d + n, d) < s:
        d += 1
    return d


def d_values(shape: SpaceShape, s: int) -> tuple[int, ...]:
    return tuple(d_value(n, s) for n in shape.dims)


def big_d(shape: SpaceShape, s: int) -> int:
    """D = max(d_i + 1)."""
    return max(d_values(shape, s)) + 1


def reduced_regularity_formula(shape: SpaceShape, s: int) -> int:
    """Regularity of s reduced points in generic position: max(d_i + 1)."""
    return big_d(shape, s)


def _sorted_mults(mults: Sequence[int]) -> list[int]:
    ms = sorted((int(m) for m in mults), reverse=True)
    if not ms or ms[-1] < 1:
        raise PreconditionError(f"multiplicities must be positive, got {list(mults)}")
    return ms


def ceil_div_threshold(n: int, q: int) -> int:
    """min{t : n t >= q} written as floor((q + n - 1) / n)."""
    return (q + n - 1) // n


def ri_bound(shape: SpaceShape, mults: Sequence[int]) -> int:
    """Upper bound on the regularity index of R/I_Z for fat points with generic support.

    max{m_1 + m_2 - 1, floor((sum m_i + n_k - 2) / n_k)} with n_k the smallest
    factor dimension.
    """
    ms = _sorted_mults(mults)
    if len(ms) < 2:
        raise PreconditionError("the fat-point bound needs at least two points")
    n_k = min(shape.dims)
    return max(ms[0] + ms[1] - 1, (sum(ms) + n_k - 2) // n_k)


def ri_bound_all_factors(shape: SpaceShape, mults: Sequence[int]) -> int:
    """Same bound with the floor term maximized over every factor."""
    ms = _sorted_mults(mults)
    if len(ms) < 2:
        raise PreconditionError("the fat-point bound needs at least two points")
    return max([ms[0] + ms[1] - 1] + [(sum(ms) + n - 2) // n for n in shape.dims])


def fat_bound(shape: SpaceShape, mults: Sequence[int]) -> int:
    """Regularity bound: ri_bound + k."""
    return ri_bound(shape, mults) + shape.k


def single_point_ri(a: int, k: int) -> int:
    """Regularity index of R/p^a for a single point: a - k (may be negative)."""
    if a < 1 or k < 1:
        raise PreconditionError("need a >= 1 and k >= 1")
    return a - k


def artinian_threshold(shape: SpaceShape, mults: Sequence[int], a: int) -> int:
    """max{m_1 + a - 1, t} where t is least with n_k t >= sum m_i + a - 1.

    Bounds the regularity index of R/(J + p^a) when m_1 >= ... >= m_r >= a.
    """
    ms = _sorted_mults(mults)
    if a < 1 or ms[-1] < a:
        raise PreconditionError("need m_1 >= ... >= m_r >= a >= 1")
    n_k = min(shape.dims)
    return max(ms[0] + a - 1, ceil_div_threshold(n_k, sum(ms) + a - 1))


def binomial_inequality_check(n: int, a: int, b: int) -> bool:
    """C(a+b+n, a+b) <= C(a+n, a) C(b+n, b), evaluated exactly."""
    if min(n, a, b) < 1:
        raise PreconditionError("need n, a, b >= 1")
    return math.comb(a + b + n, a + b) <= math.comb(a + n, a) * math.comb(b + n, b)


@dataclass(frozen=True)
class BoundReport:
    dims: tuple[int, ...]
    mults: tuple[int, ...]
    d: tuple[int, ...]
    D: int
    reduced_reg: int
    ri_bound: int | None
    reg_bound: int | None
    pieces: dict

    def to_dict(self) -> dict:
        return asdict(self)


def bound_report(shape: SpaceShape, mults: Sequence[int]) -> BoundReport:
    ms = tuple(_sorted_mults(mults))
    s = len(ms)
    d = d_values(shape, s)
    pieces = {
        "pair_term": ms[0] + (ms[1] if s > 1 else 0) - 1,
        "floor_terms": {n: (sum(ms) + n - 2) // n for n in shape.dims},
    }
    rib = ri_bound(shape, ms) if s >= 2 else None
    return BoundReport(
        dims=shape.dims,
        mults=ms,
        d=d,
        D=max(d) + 1,
        reduced_reg=max(d) + 1,
        ri_bound=rib,
        reg_bound=None if rib is None else rib + shape.k,
        pieces=pieces,
    )
