from __future__ import annotations

import numpy as np
import pytest
import sympy

from multireg.groebner import (
    Ideal,
    IdealError,
    Quotient,
    buchberger,
    colon,
    dim_ideal_total,
    exact_divide,
    ideal_sum,
    intersect,
    max_generator_degree,
    min_gen_degrees,
    normal_form,
    power,
)
from multireg import linalg
from multireg.ring import GREVLEX, Lex, Polynomial, SpaceShape, enumerate_monomials, enumerate_total_degree

P = 32003


def to_sympy(f: Polynomial, syms):
    return sum(c * sympy.prod([s**e for s, e in zip(syms, m)]) for m, c in f.terms.items())


def sympy_reduced_gb(polys, nvars, p):
    """Reference GB: sympy grevlex with generators listed largest variable first."""
    syms = sympy.symbols(f"x0:{nvars}")
    gens_desc = list(reversed(syms))
    G = sympy.groebner([to_sympy(f, syms) for f in polys], *gens_desc, order="grevlex", modulus=p)
    out = set()
    for g in G.exprs:
        poly = sympy.Poly(g, *syms, modulus=p)
        terms = {}
        for mono, c in poly.terms():
            terms[tuple(mono)] = int(c) % p
        f = Polynomial(terms, nvars, p).monic(GREVLEX)
        out.add(f)
    return out


def random_form(shape, multideg, rng, p=P, nterms=3):
    monos = enumerate_monomials(shape, multideg)
    idx = rng.choice(len(monos), size=min(nterms, len(monos)), replace=False)
    return Polynomial({monos[i]: int(rng.integers(1, p)) for i in idx}, shape.nvars, p)


def v(shape, i, j):
    return Polynomial.variable(shape.var(i, j), shape.nvars, P)


@pytest.mark.parametrize("seed", range(6))
def test_gb_matches_sympy(seed):
    rng = np.random.default_rng(seed)
    shape = SpaceShape((1, 1)) if seed % 2 else SpaceShape((2,))
    degs = [(1, 1), (2, 1), (1, 2)] if shape.k == 2 else [(2,), (2,), (3,)]
    gens = [random_form(shape, d, rng) for d in degs]
    I = Ideal(gens, shape)
    assert set(I.gb) == sympy_reduced_gb(gens, shape.nvars, P)


def test_reduced_gb_properties(rng):
    shape = SpaceShape((2, 1))
    gens = [random_form(shape, d, rng) for d in [(1, 1), (1, 1), (2, 0)]]
    G = Ideal(gens, shape).gb
    leads = [g.leading_monomial() for g in G]
    for g, lm in zip(G, leads):
        assert g.leading_coefficient() == 1
        for other in leads:
            if other != lm:
                # no term of g is divisible by another leading monomial
                assert not any(all(a <= b for a, b in zip(other, m)) for m in g.terms)


def test_normal_form_and_membership():
    shape = SpaceShape((1, 1))
    x0, x1, y0, y1 = v(shape, 0, 0), v(shape, 0, 1), v(shape, 1, 0), v(shape, 1, 1)
    I = Ideal([x0 * y1 - x1 * y0], shape)
    assert I.contains((x0 * y1 - x1 * y0) * (x0 + x1))
    assert not I.contains(x0 * y0)
    f = x0 * y1 * 3
    r = normal_form(f, I)
    assert I.contains(f - r)


def test_non_homogeneous_rejected():
    shape = SpaceShape((1, 1))
    with pytest.raises(IdealError):
        Ideal([v(shape, 0, 0) + v(shape, 1, 0)], shape)


def test_order_mismatch_rejected():
    shape = SpaceShape((1,))
    I = Ideal([v(shape, 0, 0) ** 2], shape)
    with pytest.raises(IdealError):
        I.normal_form(v(shape, 0, 1), order=Lex())


def test_intersection_of_monomial_ideals():
    shape = SpaceShape((2,))
    x, y, z = (v(shape, 0, j) for j in range(3))
    I = Ideal([x * y, z], shape)
    J = Ideal([y**2, x * z], shape)
    # lcm-based intersection of monomial ideals
    expected = Ideal([x * y**2, x * y * z, y**2 * z, x * z], shape)
    assert intersect(I, J) == expected


def test_intersection_contained_in_both(rng):
    shape = SpaceShape((1, 1))
    I = Ideal([random_form(shape, (1, 0), rng), random_form(shape, (0, 1), rng)], shape)
    J = Ideal([random_form(shape, (1, 0), rng), random_form(shape, (0, 1), rng)], shape)
    K = intersect(I, J)
    assert I.contains_ideal(K) and J.contains_ideal(K)
    # dimension count: dim (I ∩ J)_t = dim I_t + dim J_t - dim (I + J)_t
    for t in range(1, 4):
        assert dim_ideal_total(K, t) == dim_ideal_total(I, t) + dim_ideal_total(J, t) - dim_ideal_total(I + J, t)


def test_colon_by_variable():
    shape = SpaceShape((2,))
    x, y, z = (v(shape, 0, j) for j in range(3))
    I = Ideal([x**2 * y, x * z], shape)
    assert colon(I, x) == Ideal([x * y, z], shape)
    assert colon(I, z) == Ideal([x], shape)


def test_exact_divide():
    shape = SpaceShape((1,))
    x, y = v(shape, 0, 0), v(shape, 0, 1)
    f = (x + y) * (x - 2 * y)
    assert exact_divide(f, x + y) == x - 2 * y
    with pytest.raises(Exception):
        exact_divide(f + x * y, x + y)


def test_power_and_sum():
    shape = SpaceShape((1, 1))
    m = Ideal([v(shape, 0, 1), v(shape, 1, 1)], shape)
    sq = power(m, 2)
    assert len(sq.gb) == 3
    assert (m ** 2) == sq
    assert ideal_sum(m, Ideal([v(shape, 0, 0)], shape)).contains(v(shape, 0, 0) * v(shape, 1, 0))


def brute_min_gens(I, t):
    """dim I_t - dim (R_1 I_{t-1}) by explicit spanning sets."""
    shape = I.shape
    monos = enumerate_total_degree(shape, t)
    col = {m: i for i, m in enumerate(monos)}
    Q = Quotient(I)

    def rows_of(polys):
        A = np.zeros((len(polys), len(monos)), dtype=np.int64)
        for r, f in enumerate(polys):
            for m, c in f.terms.items():
                A[r, col[m]] = c
        return A

    # basis of I_{t-1}: u - NF(u) for non-standard u
    prev = []
    for u in enumerate_total_degree(shape, t - 1) if t >= 1 else []:
        if not Q.is_standard(u):
            mono = Polynomial.monomial(u, shape.nvars, I.p)
            prev.append(mono - normal_form(mono, I))
    prods = [f * Polynomial.variable(x, shape.nvars, I.p) for f in prev for x in range(shape.nvars)]
    dim_It = len(monos) - Q.dim(t)
    span = linalg.rank_modp(rows_of(prods), I.p) if prods else 0
    return dim_It - span


@pytest.mark.parametrize("seed", range(4))
def test_min_gen_degrees_against_linear_algebra(seed):
    rng = np.random.default_rng(100 + seed)
    shape = SpaceShape((1, 1))
    gens = [random_form(shape, d, rng, nterms=2) for d in [(1, 1), (1, 1), (2, 1), (0, 3)]]
    I = Ideal(gens, shape)
    counts = min_gen_degrees(I, 5)
    for t in range(1, 6):
        assert counts.get(t, 0) == brute_min_gens(I, t)
    assert max_generator_degree(I) == max(t for t, c in counts.items() if c)


def test_quotient_basis_and_multiplication():
    shape = SpaceShape((1,))
    y = v(shape, 0, 1)
    I = Ideal([y**2], shape)
    Q = Quotient(I)
    assert Q.dim(3) == 2
    M = Q.multiplication_matrix(y, 1)
    # y * {x, y} -> {xy, 0}: rank 1
    assert linalg.rank_modp(M, P) == 1


def test_buchberger_unit():
    assert buchberger([{(0, 0): 5}], GREVLEX, P) == [{(0, 0): 1}]


def test_equality_ignores_generators():
    shape = SpaceShape((1,))
    x, y = v(shape, 0, 0), v(shape, 0, 1)
    assert Ideal([x, y], shape) == Ideal([x + y, x - y], shape)
    assert Ideal([x], shape) != Ideal([y], shape)
