"""Ring arithmetic, derivations, substitution, and serialization."""

import random
from fractions import Fraction

import pytest

from diffalg import (
    Context,
    DiffPoly,
    Monomial,
    StructuralError,
    poly_from_json,
    poly_to_json,
    to_text,
)
from diffalg.algebra import monomial_cmp, var_from_json, var_to_json

import gen

CTX = Context(2, 1)


def X(j, ctx=CTX):
    return DiffPoly.variable(ctx, ctx.x(j))


def U(*order, i=1, ctx=CTX):
    return DiffPoly.variable(ctx, ctx.u(i, order))


def C(c, ctx=CTX):
    return DiffPoly.constant(ctx, c)


def test_context_validation():
    with pytest.raises(StructuralError):
        Context(0, 1)
    with pytest.raises(StructuralError):
        CTX.x(3)
    with pytest.raises(StructuralError):
        CTX.u(2, (0, 0))
    with pytest.raises(StructuralError):
        CTX.u(1, (0, 0, 0))


def test_ring_ops():
    assert (X(1) + U(0, 0)) + (-X(1)) == U(0, 0)
    assert U(0, 0) * U(0, 0) == U(0, 0) ** 2
    f = X(1) * U(1, 0) + C(Fraction(3, 2))
    assert f.scale(0).is_zero()
    assert f - f == DiffPoly.zero(CTX)
    assert 2 * f == f + f


def test_ambient_mismatch():
    other = Context(2, 2)
    with pytest.raises(StructuralError):
        X(1) + DiffPoly.variable(other, other.x(1))


def test_partial():
    assert (X(1) ** 2).partial(CTX.x(1)) == 2 * X(1)
    assert (U(1, 0) * X(2)).partial(CTX.u(1, (1, 0))) == X(2)
    assert X(1).partial(CTX.u(1, (0, 0))).is_zero()


def test_total_derivative():
    assert U(0, 0).total_derivative(1) == U(1, 0)
    assert (X(1) * U(0, 0)).total_derivative(1) == U(0, 0) + X(1) * U(1, 0)
    assert X(1).total_derivative(2).is_zero()


def test_total_derivative_multi():
    f = X(1) * U(0, 1) + C(7)
    assert f.total_derivative_multi((0, 0)) == f
    assert U(0, 0).total_derivative_multi((1, 1)) == U(1, 1)
    assert (X(1) ** 2).total_derivative_multi((2, 0)) == C(2)


def test_substitute():
    v = CTX.u(1, (0, 0))
    f = U(0, 0) ** 2
    assert f.substitute(v, X(1) + C(1)) == X(1) ** 2 + 2 * X(1) + C(1)
    g = X(1) * U(1, 0) + U(0, 0)
    assert g.substitute(v, U(0, 0)) == g
    assert X(1).substitute(v, U(1, 1)) == X(1)


def test_support_derivs():
    assert (X(1) ** 2 + C(3)).support_derivs() == set()
    ctx = Context(2, 2)
    f = DiffPoly.variable(ctx, ctx.u(1, (1, 0))) * DiffPoly.variable(ctx, ctx.u(2, (0, 1)))
    assert f.support_derivs() == {ctx.u(1, (1, 0)), ctx.u(2, (0, 1))}
    assert DiffPoly.zero(CTX).support_derivs() == set()


def test_leibniz_and_commutation_randomized():
    rng = random.Random(421)
    for _ in range(60):
        ctx = Context(rng.randint(1, 3), rng.randint(1, 3))
        f = gen.rand_poly(rng, ctx)
        g = gen.rand_poly(rng, ctx)
        for k in range(1, ctx.n + 1):
            assert (f * g).total_derivative(k) == f.total_derivative(k) * g + f * g.total_derivative(k)
        if ctx.n >= 2:
            assert f.total_derivative(1).total_derivative(2) == f.total_derivative(2).total_derivative(1)


def test_derivative_linearity_randomized():
    rng = random.Random(422)
    for _ in range(40):
        ctx = Context(2, 2)
        f, g = gen.rand_poly(rng, ctx), gen.rand_poly(rng, ctx)
        c = gen.rand_coeff(rng)
        assert (f + g.scale(c)).total_derivative(1) == f.total_derivative(1) + g.total_derivative(1).scale(c)
        v = gen.rand_variable(rng, ctx, 4)
        assert (f + g.scale(c)).partial(v) == f.partial(v) + g.partial(v).scale(c)


def test_semigroup_action_randomized():
    rng = random.Random(423)
    for _ in range(25):
        ctx = Context(2, 1)
        f = gen.rand_poly(rng, ctx, terms=3, max_degree=2, max_order=2)
        a = gen.rand_index(rng, 2, 2)
        b = gen.rand_index(rng, 2, 2)
        lhs = f.total_derivative_multi(a).total_derivative_multi(b)
        from diffalg import multiindex as mi

        assert lhs == f.total_derivative_multi(mi.add(a, b))


def test_monomial_order():
    one = Monomial.one()
    x1 = Monomial.of(CTX.x(1))
    x2 = Monomial.of(CTX.x(2))
    u = Monomial.of(CTX.u(1, (0, 0)))
    assert monomial_cmp(one, x1) < 0  # degree first
    assert monomial_cmp(x1, x2) < 0  # greater variable wins at equal degree
    assert monomial_cmp(x2, u) < 0  # x variables rank below u variables
    assert monomial_cmp(u, u) == 0


def test_json_round_trip_examples():
    f = X(1) ** 2 * U(2, 0) - C(Fraction(3, 4)) * U(0, 1) + C(5)
    data = poly_to_json(f)
    assert poly_from_json(CTX, data) == f
    assert poly_to_json(poly_from_json(CTX, data)) == data
    assert poly_to_json(DiffPoly.zero(CTX)) == []
    assert poly_from_json(CTX, []) == DiffPoly.zero(CTX)


def test_json_round_trip_randomized():
    rng = random.Random(424)
    for _ in range(50):
        ctx = Context(rng.randint(1, 3), rng.randint(1, 2))
        f = gen.rand_poly(rng, ctx)
        assert poly_from_json(ctx, poly_to_json(f)) == f


def test_var_json():
    assert var_to_json(CTX.x(2)) == ["x", 2]
    assert var_to_json(CTX.u(1, (2, 0))) == ["u", 1, [2, 0]]
    assert var_from_json(CTX, ["u", 1, [0, 1]]) == CTX.u(1, (0, 1))
    with pytest.raises(StructuralError):
        var_from_json(CTX, ["y", 1])
    with pytest.raises(StructuralError):
        var_from_json(CTX, ["u", 1, [0, -1]])


def test_json_rejects_bad_terms():
    with pytest.raises(StructuralError):
        poly_from_json(CTX, [{"c": "0.5", "m": []}])  # decimals are not rationals
    with pytest.raises(StructuralError):
        poly_from_json(CTX, [{"c": "1", "m": [[["x", 1], 0]]}])
    with pytest.raises(StructuralError):
        poly_from_json(CTX, {"c": "1"})


def test_to_text():
    assert to_text(U(2, 0) - U(0, 1)) == "u[1,(2,0)] - u[1,(0,1)]"
    assert to_text(DiffPoly.zero(CTX)) == "0"
    assert to_text(C(Fraction(-1, 2)) * X(1) ** 2) == "-1/2*x[1]^2"
