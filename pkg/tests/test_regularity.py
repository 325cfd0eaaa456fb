from __future__ import annotations

import json

import pytest

from multireg.formulas import PreconditionError, reduced_regularity_formula
from multireg.groebner import Ideal, power
from multireg.points import fat_point_ideal, find_nzd_linear_form, point_ideal, random_points
from multireg.regularity import (
    RegularityCertificate,
    generic_initial_ideal,
    is_m_regular,
    is_strongly_stable,
    regularity,
    regularity_via_gin,
)
from multireg.ring import Polynomial, SpaceShape

P = 32003


def variables(shape):
    return [Polynomial.variable(i, shape.nvars, P) for i in range(shape.nvars)]


def known_ideals():
    s2 = SpaceShape((2,))
    x, y, z = variables(s2)
    s1 = SpaceShape((1,))
    a, b = variables(s1)
    s11 = SpaceShape((1, 1))
    x0, x1, y0, y1 = variables(s11)
    return [
        ("complete intersection 2,3", Ideal([x**2, y**3], s2), 4),
        ("complete intersection 2,2,2", Ideal([x**2, y**2, z**2], s2), 4),
        ("x^2, xy", Ideal([a**2, a * b], s1), 2),
        ("maximal ideal squared", power(Ideal([x, y, z], s2), 2), 2),
        ("linear", Ideal([x, y], s2), 1),
        ("bilinear hypersurface", Ideal([x0 * y0 + x1 * y1], s11), 2),
        ("x^3 y^2", Ideal([a**3 * b**2], s1), 5),
        ("monomial curve-ish", Ideal([x**2, x * y, y**3], s2), 3),
    ]


@pytest.mark.parametrize("name,I,reg", known_ideals(), ids=[c[0] for c in known_ideals()])
def test_known_regularities(name, I, reg, rng):
    m, cert = regularity(I, rng)
    assert m == reg
    assert regularity_via_gin(I, rng) == reg
    assert cert.replay(I)


@pytest.mark.parametrize("a", [1, 2, 3, 4])
@pytest.mark.parametrize("dims", [(2,), (1, 1), (2, 1)])
def test_power_of_point_ideal(dims, a, rng):
    shape = SpaceShape(dims)
    X = random_points(shape, 1, rng)
    I = power(point_ideal(X.points[0], shape), a)
    assert regularity(I, rng)[0] == a


def test_not_regular_below_generator_degree(rng):
    shape = SpaceShape((1,))
    a, b = variables(shape)
    with pytest.raises(PreconditionError):
        is_m_regular(Ideal([a**3], shape), 2, rng)


def test_is_m_regular_monotone(rng):
    shape = SpaceShape((2,))
    x, y, z = variables(shape)
    I = Ideal([x**2, y**3], shape)
    assert [is_m_regular(I, m, rng)[0] for m in range(3, 7)] == [False, True, True, True]


def test_certificate_json_round_trip(rng):
    X = random_points(SpaceShape((1, 1)), 3, rng)
    I = fat_point_ideal(X)
    m, cert = regularity(I, rng)
    back = RegularityCertificate.from_dict(json.loads(cert.to_json()))
    assert back == cert
    assert back.replay(I)
    # the same forms do not certify one degree lower
    lower = RegularityCertificate.from_dict({**cert.to_dict(), "m": m - 1})
    assert not lower.replay(I)


def test_blockwise_forms_agree(rng):
    X = random_points(SpaceShape((2, 1)), 4, rng)
    I = fat_point_ideal(X)
    assert regularity(I, rng, blockwise=True)[0] == regularity(I, rng)[0]


def test_unit_and_zero_rejected(rng):
    shape = SpaceShape((1,))
    with pytest.raises(PreconditionError):
        regularity(Ideal([], shape), rng)
    with pytest.raises(PreconditionError):
        regularity(Ideal([Polynomial.constant(1, 2, P)], shape), rng)


def test_strong_stability():
    # variables ordered x_0 < x_1 < x_2; moves go towards larger variables
    assert is_strongly_stable([(0, 0, 1), (0, 1, 0)])
    assert not is_strongly_stable([(0, 1, 0)])
    assert is_strongly_stable([(0, 0, 1), (0, 2, 0), (1, 1, 0)])
    # x_0 x_1 -> x_1^2 leaves (x_2, x_0 x_1)
    assert not is_strongly_stable([(0, 0, 1), (1, 1, 0)])


@pytest.mark.parametrize("dims,s", [((1, 1), 4), ((2, 1), 3), ((2,), 5), ((1, 1, 1), 3)])
def test_gin_strongly_stable_on_points(dims, s, rng):
    X = random_points(SpaceShape(dims), s, rng)
    I = fat_point_ideal(X)
    res = generic_initial_ideal(I, rng)
    assert res.strongly_stable
    assert res.regularity == reduced_regularity_formula(X.shape, s)


def test_adding_nzd_keeps_regularity(rng):
    X = random_points(SpaceShape((1, 1)), 4, rng)
    I = fat_point_ideal(X)
    L = find_nzd_linear_form(I, 0, rng, support=X.points)
    J = Ideal(list(I.gens) + [L], X.shape)
    assert regularity(J, rng)[0] == regularity(I, rng)[0]
