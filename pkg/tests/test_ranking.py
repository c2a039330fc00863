"""Ranking comparison rules, class keys, and the compatibility audit."""

import random

import pytest

from diffalg import BASE, Context, DiffPoly, Ranking, StructuralError, audit_compatibility
from diffalg.algebra import shift_deriv
from diffalg.ranking import ClassKey

import gen

CTX = Context(2, 2)
ORD = Ranking.orderly(CTX)
ELIM = Ranking.elimination(CTX)


def D(i, *order):
    return CTX.u(i, order)


def broken_ranking(ctx):
    # compares the unknown index only: shifts leave the key unchanged,
    # so axiom (b) fails with equality
    return Ranking.from_weights(ctx, [[1] + [0] * ctx.n])


def test_orderly_compare():
    assert ORD.compare(D(1, 0, 1), D(1, 2, 0)) == -1
    assert ORD.compare(D(1, 1, 0), D(2, 1, 0)) == -1
    assert ORD.compare(D(1, 1, 1), D(1, 1, 1)) == 0
    assert ORD.compare(D(1, 1, 1), D(1, 2, 0)) == -1  # same order, lex on alpha


def test_elimination_compare():
    for a in [(0, 0), (5, 5), (0, 3)]:
        for b in [(0, 0), (1, 0)]:
            assert ELIM.compare(D(1, *a), D(2, *b)) == -1


def test_class_key_ordering():
    assert BASE < ClassKey((0, 1))
    assert ClassKey((1, 1)) < ClassKey((1, 2))
    assert BASE.is_base and BASE.to_json() == "base"
    assert ClassKey((2, 1, 2, 0)).to_json() == [2, 1, 2, 0]


def test_class_of():
    x1 = DiffPoly.variable(CTX, CTX.x(1))
    assert ORD.class_of(x1 * x1 + DiffPoly.constant(CTX, 1)) == BASE
    f = DiffPoly.variable(CTX, D(1, 0, 1)) + DiffPoly.variable(CTX, D(1, 2, 0))
    assert ORD.class_of(f) == ORD.key(D(1, 2, 0))
    assert ORD.class_of(f.scale(-7)) == ORD.class_of(f)
    assert ORD.class_of(DiffPoly.zero(CTX)) == BASE


def test_class_of_sum_bound():
    rng = random.Random(77)
    for _ in range(40):
        f, g = gen.rand_poly(rng, CTX), gen.rand_poly(rng, CTX)
        cf, cg, cs = ORD.class_of(f), ORD.class_of(g), ORD.class_of(f + g)
        assert cs <= max(cf, cg)
        if cf != cg:
            assert cs == max(cf, cg)


def test_leading_derivative():
    f = DiffPoly.variable(CTX, D(1, 2, 0)) - DiffPoly.variable(CTX, D(1, 0, 1))
    lead = ORD.leading_derivative(f)
    assert lead.deriv == D(1, 2, 0) and not lead.block_tie
    assert ORD.leading_derivative(DiffPoly.variable(CTX, CTX.x(1))) is None
    g = DiffPoly.variable(CTX, D(2, 0, 1)) + DiffPoly.variable(CTX, D(1, 5, 5))
    assert ELIM.leading_derivative(g).deriv == D(2, 0, 1)


def test_leading_derivative_block_tie():
    # single-row weight rule: total order only -> coarse blocks
    coarse = Ranking.from_weights(CTX, [[0, 1, 1]])
    f = DiffPoly.variable(CTX, D(1, 1, 0)) + DiffPoly.variable(CTX, D(1, 0, 1))
    lead = coarse.leading_derivative(f)
    assert lead.block_tie
    assert lead.deriv == D(1, 1, 0)  # lexicographically largest in the block


def test_compare_totality_transitivity():
    rng = random.Random(78)
    for rk in (ORD, ELIM):
        for _ in range(200):
            u, v, w = (gen.rand_deriv(rng, CTX, 4) for _ in range(3))
            cuv, cvw, cuw = rk.compare(u, v), rk.compare(v, w), rk.compare(u, w)
            assert cuv in (-1, 0, 1)
            assert cuv == -rk.compare(v, u)
            if rk.is_total and cuv == 0:
                assert u == v
            if cuv <= 0 and cvw <= 0:
                assert cuw <= 0


def test_audit_builtin_rankings_clean():
    for rk in (ORD, ELIM, Ranking.orderly(Context(3, 3))):
        report = audit_compatibility(rk, 2000, exhaustive_order=3)
        assert report.ok, report.counterexamples[:3]
        assert report.checked_a > 0 and report.checked_b > 0


def test_audit_weight_ranking_clean():
    rk = Ranking.from_weights(CTX, [[0, 1, 1], [1, 0, 0], [0, 1, 0]])
    assert audit_compatibility(rk, 2000).ok


def test_audit_broken_ranking_reports_b():
    report = audit_compatibility(broken_ranking(CTX), 500)
    assert not report.ok
    assert any(c.axiom == "b" for c in report.counterexamples)
    bad = next(c for c in report.counterexamples if c.axiom == "b")
    rk = broken_ranking(CTX)
    assert rk.compare(bad.u, shift_deriv(bad.u, bad.direction, CTX.n)) == 0


def test_audit_negated_weights_fail():
    # negated total order: shifting strictly decreases the key
    rk = Ranking.from_weights(CTX, [[0, -1, -1], [1, 0, 0], [0, 1, 0]])
    report = audit_compatibility(rk, 500)
    assert any(c.axiom == "b" for c in report.counterexamples)


def test_axioms_hold_randomized():
    rng = random.Random(79)
    for rk in (ORD, ELIM):
        for _ in range(300):
            u = gen.rand_deriv(rng, CTX, 5)
            v = gen.rand_deriv(rng, CTX, 5)
            k = rng.randint(1, CTX.n)
            su, sv = shift_deriv(u, k, CTX.n), shift_deriv(v, k, CTX.n)
            assert rk.compare(u, su) == -1
            if rk.compare(u, v) == -1:
                assert rk.compare(su, sv) == -1


def test_derivation_preserves_class_order():
    # when the shifted top derivatives survive with nonzero coefficient,
    # strict class order is preserved by every total derivative
    rng = random.Random(80)
    checked = 0
    for _ in range(400):
        f1, f2 = gen.rand_poly(rng, CTX), gen.rand_poly(rng, CTX)
        lead1, lead2 = ORD.leading_derivative(f1), ORD.leading_derivative(f2)
        if lead1 is None or lead2 is None:
            continue
        if not ORD.class_of(f1) < ORD.class_of(f2):
            continue
        for k in range(1, CTX.n + 1):
            d1, d2 = f1.total_derivative(k), f2.total_derivative(k)
            s1 = shift_deriv(lead1.deriv, k, CTX.n)
            s2 = shift_deriv(lead2.deriv, k, CTX.n)
            if s1 not in d1.support_derivs() or s2 not in d2.support_derivs():
                continue
            checked += 1
            assert ORD.class_of(d1) < ORD.class_of(d2)
    assert checked > 50


def test_from_spec():
    assert Ranking.from_spec(CTX, "orderly") == ORD
    assert Ranking.from_spec(CTX, "elimination") == ELIM
    rk = Ranking.from_spec(CTX, {"weights": [["1/2", 1, 0], [0, 0, 1], [0, 1, 0]]})
    assert rk.kind == "weights"
    with pytest.raises(StructuralError):
        Ranking.from_spec(CTX, "grevlex")
    with pytest.raises(StructuralError):
        Ranking.from_spec(CTX, {"weights": [[1, 0]]})  # wrong row width
    with pytest.raises(StructuralError):
        Ranking.from_spec(CTX, {"weights": []})


def test_sample_budget_validation():
    with pytest.raises(StructuralError):
        audit_compatibility(ORD, 0)
