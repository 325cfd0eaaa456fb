"""Multigraded polynomial ring over a prime field.

The ring has variables x_{i,j} (factor i, coordinate j) with deg x_{i,j} = e_i.
Internally variables are indexed flat, block by block, so x_{1,0} has index 0
and x_{k,n_k} has index N-1.  Monomials are plain exponent tuples.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple  # tuple[int, ...]
MultiDegree = tuple  # tuple[int, ...]

DEFAULT_PRIME = 32003
COUNT_MAX = 2**63 - 1


class ShapeError(ValueError):
    """Multidegree or exponent vector does not fit the ambient space."""


@dataclass(frozen=True)
class SpaceShape:
    """Dimensions n_1..n_k of the factors of P^{n_1} x ... x P^{n_k}."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims:
            raise ShapeError("need at least one projective factor")
        if any(n < 1 for n in dims):
            raise ShapeError(f"factor dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def nvars(self) -> int:
        return sum(n + 1 for n in self.dims)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, pos = [], 0
        for n in self.dims:
            out.append(pos)
            pos += n + 1
        return tuple(out)

    def block(self, i: int) -> range:
        """Flat indices of the variables of factor i (0-based)."""
        start = self.offsets[i]
        return range(start, start + self.dims[i] + 1)

    def var(self, i: int, j: int) -> int:
        if not 0 <= j <= self.dims[i]:
            raise ShapeError(f"no variable x_{{{i + 1},{j}}} in factor of dimension {self.dims[i]}")
        return self.offsets[i] + j

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        return tuple(i for i, n in enumerate(self.dims) for _ in range(n + 1))

    def var_name(self, v: int) -> str:
        i = self.block_of[v]
        return f"x{i + 1}_{v - self.offsets[i]}"

    def multidegree(self, exps: Sequence[int]) -> MultiDegree:
        if len(exps) != self.nvars:
            raise ShapeError(f"exponent vector of length {len(exps)}, expected {self.nvars}")
        return tuple(sum(exps[o:o + n + 1]) for o, n in zip(self.offsets, self.dims))

    def check_degree(self, t: Sequence[int]) -> MultiDegree:
        t = tuple(int(x) for x in t)
        if len(t) != self.k:
            raise ShapeError(f"multidegree {t} has length {len(t)}, expected {self.k}")
        if any(x < 0 for x in t):
            raise ShapeError(f"multidegree {t} has a negative entry")
        return t

    def normalized(self) -> tuple["SpaceShape", tuple[int, ...]]:
        """Shape sorted so that n_1 >= ... >= n_k, plus the permutation used."""
        perm = tuple(sorted(range(self.k), key=lambda i: -self.dims[i]))
        return SpaceShape(tuple(self.dims[i] for i in perm)), perm

    def __str__(self) -> str:
        return "x".join(f"P{n}" for n in self.dims)


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field F_p."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        from sympy import isprime

        if self.p < 2 or not isprime(self.p):
            raise ValueError(f"field characteristic must be prime, got {self.p}")
        # dense kernels multiply two residues in int64
        if self.p >= 2**31:
            raise ValueError("primes >= 2^31 are not supported")

    def inv(self, a: int) -> int:
        return pow(a, -1, self.p)


def _check_count(n: int) -> int:
    if n > COUNT_MAX:
        raise OverflowError(f"dimension {n} exceeds the 64-bit count type")
    return n


def dim_graded_piece(shape: SpaceShape, t: Sequence[int]) -> int:
    """dim_k R_t = prod_i C(t_i + n_i, n_i)."""
    t = shape.check_degree(t)
    return _check_count(math.prod(math.comb(ti + n, n) for ti, n in zip(t, shape.dims)))


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` non-negative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def dim_total_degree(shape: SpaceShape, t: int) -> int:
    if t < 0:
        raise ShapeError("total degree must be non-negative")
    return _check_count(sum(dim_graded_piece(shape, c) for c in compositions(t, shape.k)))


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """A monomial order given by an integer sort key (larger key = larger monomial).

    Keys are memoized; every order works on exponent tuples of a fixed length.
    """

    _BITS = 8  # exponents must stay below 2**_BITS

    name = "order"

    def __init__(self):
        self._cache: dict[Monomial, int] = {}

    def key(self, m: Monomial) -> int:
        try:
            return self._cache[m]
        except KeyError:
            if m and max(m) >= 1 << self._BITS:
                raise ShapeError(f"exponent too large for the order encoding: {m}")
            k = self._cache[m] = self._compute(m)
            return k

    def _compute(self, m: Monomial) -> int:
        raise NotImplementedError

    def sort(self, monos: Iterable[Monomial], descending: bool = False) -> list[Monomial]:
        return sorted(monos, key=self.key, reverse=descending)

    def __repr__(self) -> str:
        return f"<{self.name}>"

    def __eq__(self, other):
        return type(self) is type(other) and self._params() == other._params()

    def __hash__(self):
        return hash((type(self).__name__, self._params()))

    def _params(self):
        return ()


def _grevlex_int(m: Sequence[int], bits: int) -> int:
    # lexicographic on (deg, -a_0, -a_1, ...): index 0 is the smallest variable
    top = (1 << bits) - 1
    key = sum(m)
    for a in m:
        key = (key << bits) | (top - a)
    return key


class Grevlex(MonomialOrder):
    """Graded reverse lexicographic order with x_{1,0} < x_{1,1} < ... < x_{k,n_k}."""

    name = "grevlex"

    def _compute(self, m):
        return _grevlex_int(m, self._BITS)


class Lex(MonomialOrder):
    """Lexicographic order, x_{k,n_k} largest."""

    name = "lex"

    def _compute(self, m):
        key = 0
        for a in reversed(m):
            key = (key << self._BITS) | a
        return key


class Elimination(MonomialOrder):
    """Block order eliminating the variables with index >= split.

    Monomials are compared first by grevlex on the eliminated block, then by
    grevlex on the kept block.
    """

    name = "elimination"

    def __init__(self, split: int):
        super().__init__()
        self.split = split

    def _params(self):
        return (self.split,)

    def _compute(self, m):
        head, tail = m[: self.split], m[self.split:]
        width = (len(head) + 1) * self._BITS
        return (_grevlex_int(tail, self._BITS) << width) | _grevlex_int(head, self._BITS)

    def __repr__(self):
        return f"<elimination split={self.split}>"


GREVLEX = Grevlex()


# ---------------------------------------------------------------------------
# monomials


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def unit_vector(nvars: int, v: int, power: int = 1) -> Monomial:
    e = [0] * nvars
    e[v] = power
    return tuple(e)


def _block_monomials(size: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations_with_replacement(range(size), degree):
        e = [0] * size
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return out


def enumerate_monomials(shape: SpaceShape, t: Sequence[int], order: MonomialOrder = GREVLEX) -> list[Monomial]:
    """Basis of R_t, ascending in `order`."""
    t = shape.check_degree(t)
    pieces = [_block_monomials(n + 1, ti) for n, ti in zip(shape.dims, t)]
    monos = [sum(parts, ()) for parts in itertools.product(*pieces)]
    return order.sort(monos)


def enumerate_total_degree(shape: SpaceShape, t: int, order: MonomialOrder = GREVLEX) -> list[Monomial]:
    monos = []
    for c in compositions(t, shape.k):
        monos.extend(enumerate_monomials(shape, c, order))
    return order.sort(monos)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """A polynomial over F_p stored as {exponent tuple: nonzero residue}.

    Treat instances as immutable; arithmetic returns new objects.
    """

    __slots__ = ("terms", "nvars", "p")

    def __init__(self, terms: Mapping[Monomial, int], nvars: int, p: int = DEFAULT_PRIME):
        clean = {}
        for m, c in terms.items():
            c %= p
            if c:
                if len(m) != nvars:
                    raise ShapeError(f"monomial {m} in a ring with {nvars} variables")
                clean[tuple(m)] = c
        self.terms = clean
        self.nvars = nvars
        self.p = p

    @classmethod
    def _raw(cls, terms: dict, nvars: int, p: int) -> "Polynomial":
        # terms already reduced, nonzero and keyed by tuples
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.nvars = nvars
        obj.p = p
        return obj

    @classmethod
    def zero(cls, nvars: int, p: int = DEFAULT_PRIME) -> "Polynomial":
        return cls._raw({}, nvars, p)

    @classmethod
    def constant(cls, c: int, nvars: int, p: int = DEFAULT_PRIME) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars, p)

    @classmethod
    def monomial(cls, m: Monomial, nvars: int, p: int = DEFAULT_PRIME, coeff: int = 1) -> "Polynomial":
        return cls({tuple(m): coeff}, nvars, p)

    @classmethod
    def variable(cls, v: int, nvars: int, p: int = DEFAULT_PRIME) -> "Polynomial":
        return cls._raw({unit_vector(nvars, v): 1}, nvars, p)

    @classmethod
    def linear_form(cls, coeffs: Mapping[int, int] | Sequence[int], nvars: int, p: int = DEFAULT_PRIME) -> "Polynomial":
        """sum_v coeffs[v] * x_v; `coeffs` maps flat variable index to coefficient."""
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        return cls({unit_vector(nvars, v): c for v, c in items}, nvars, p)

    def _compatible(self, other: "Polynomial"):
        if self.nvars != other.nvars or self.p != other.p:
            raise ShapeError("polynomials live in different rings")

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == Polynomial.constant(other, self.nvars, self.p)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.p, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.nvars, self.p)
        self._compatible(other)
        p = self.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out, self.nvars, p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return Polynomial._raw({m: p - c for m, c in self.terms.items()}, self.nvars, p)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.nvars, self.p)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self.p
        if isinstance(other, int):
            c = other % p
            if not c:
                return Polynomial.zero(self.nvars, p)
            return Polynomial._raw({m: a * c % p for m, a in self.terms.items()}, self.nvars, p)
        self._compatible(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return Polynomial._raw({m: c for m, c in out.items() if c}, self.nvars, p)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = Polynomial.constant(1, self.nvars, self.p)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def mul_term(self, m: Monomial, c: int = 1) -> "Polynomial":
        p = self.p
        return Polynomial._raw(
            {tuple(x + y for x, y in zip(t, m)): a * c % p for t, a in self.terms.items()}, self.nvars, p
        )

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def multidegrees(self, shape: SpaceShape) -> set:
        return {shape.multidegree(m) for m in self.terms}

    def multidegree(self, shape: SpaceShape) -> MultiDegree:
        degs = self.multidegrees(shape)
        if len(degs) != 1:
            raise ShapeError("polynomial is not N^k-homogeneous")
        return degs.pop()

    def is_homogeneous(self, shape: SpaceShape | None = None) -> bool:
        """N^1-homogeneity, or N^k-homogeneity when a shape is given."""
        if shape is not None:
            return len(self.multidegrees(shape)) <= 1
        return len({sum(m) for m in self.terms}) <= 1

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> int:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        return self * pow(self.leading_coefficient(order), -1, self.p)

    def evaluate(self, point: Sequence[int]) -> int:
        """Value at a flat coordinate vector (all blocks concatenated)."""
        p = self.p
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * pow(x, e, p) % p
            total += v
        return total % p

    def to_string(self, shape: SpaceShape | None = None, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        names = [shape.var_name(v) if shape else f"x{v}" for v in range(self.nvars)]
        parts = []
        for m in order.sort(self.terms, descending=True):
            c = self.terms[m]
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.to_string()})"


def random_linear_form(vars_: Iterable[int], nvars: int, p: int, rng) -> Polynomial:
    """Uniformly random nonzero linear form supported on `vars_`."""
    vars_ = list(vars_)
    while True:
        coeffs = {v: int(rng.integers(0, p)) for v in vars_}
        if any(coeffs.values()):
            return Polynomial.linear_form(coeffs, nvars, p)
