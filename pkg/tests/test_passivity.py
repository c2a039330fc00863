"""Pair compatibility checks, verdicts, coincident leads, and the census."""

import random

import pytest

from diffalg import (
    Context,
    DiffPoly,
    MembershipInstance,
    Ranking,
    SolvedForm,
    SolvedSystem,
    StructuralError,
    autoreduce,
    check_pair,
    coincident_lead_analysis,
    divide_by_normalized,
    is_passive,
    membership,
    normalized_slice,
    prolong,
    quotient_census,
    reduce,
    tau_generators,
)
from diffalg.oracle import prolong_within_class, variables_within_class

import gen

CTX = Context(2, 1)
ORD = Ranking.orderly(CTX)


def X(j, ctx=CTX):
    return DiffPoly.variable(ctx, ctx.x(j))


def U(*order, i=1, ctx=CTX):
    return DiffPoly.variable(ctx, ctx.u(i, order))


def D(*order, i=1, ctx=CTX):
    return ctx.u(i, order)


def system(*forms, rk=ORD):
    return SolvedSystem(tuple(forms), rk)


def heat():
    return system(SolvedForm(D(2, 0), -U(0, 1)))


def gradient(rhs2):
    return system(
        SolvedForm(D(1, 0), DiffPoly.zero(CTX)),
        SolvedForm(D(0, 1), -rhs2),
    )


def obstructed():
    return system(
        SolvedForm(D(2, 0), -U(0, 1)),
        SolvedForm(D(1, 1), -U(1, 0)),
    )


def test_check_pair_satisfied():
    sys_ = gradient(X(2))
    taus = tau_generators(sys_.leads())
    result = check_pair(sys_, taus[0])
    assert result.status == "satisfied"
    assert result.combination.is_zero() and result.remainder.is_zero()


def test_check_pair_inconsistent():
    sys_ = gradient(X(1))
    result = check_pair(sys_, tau_generators(sys_.leads())[0])
    assert result.status == "inconsistent"
    assert result.remainder == DiffPoly.constant(CTX, 1)


def test_check_pair_obstructed():
    sys_ = obstructed()
    result = check_pair(sys_, tau_generators(sys_.leads())[0])
    assert result.status == "obstructed"
    assert result.remainder == U(0, 1) - U(0, 2)


def test_is_passive_heat():
    report = is_passive(heat(), order_bound=2)
    assert report.verdict == "passive"
    assert report.pairs == []
    assert report.exit_code == 0
    assert report.theta == ORD.key(D(2, 0))
    assert report.normalized is not None and report.normalized.certified


def test_is_passive_gradient_verdicts():
    ok = is_passive(gradient(X(2)))
    assert ok.verdict == "passive" and ok.exit_code == 0
    assert all(p.status == "satisfied" for p in ok.pairs)
    bad = is_passive(gradient(X(1)))
    assert bad.verdict == "inconsistent" and bad.exit_code == 3
    assert bad.pairs[0].remainder == DiffPoly.constant(CTX, 1)
    assert bad.census is None and bad.normalized is None
    obs = is_passive(obstructed())
    assert obs.verdict == "not-passive" and obs.exit_code == 2


def test_is_passive_unsolvable_system():
    sys_ = system(SolvedForm(D(0, 1), -U(2, 0)))
    report = is_passive(sys_)
    assert report.verdict == "not-passive"
    assert not report.solvability.ok and report.pairs == []


def test_is_passive_empty_system():
    report = is_passive(system(), order_bound=3)
    assert report.verdict == "passive"
    assert report.theta is None
    assert len(report.census.parametric) == 10  # all of order <= 3, n = m = ...


def test_verdict_stable_under_autoreduce():
    for sys_ in (heat(), gradient(X(2)), gradient(X(1)), obstructed()):
        assert is_passive(sys_).verdict == is_passive(autoreduce(sys_)).verdict


def test_satisfied_pairs_oracle_certified():
    # each satisfied combination really lies in the bounded prolonged ideal
    sys_ = gradient(X(2))
    taus = tau_generators(sys_.leads())
    for tau in taus:
        result = check_pair(sys_, tau)
        assert result.status == "satisfied"
        if result.combination.is_zero():
            continue
        gens = prolong(sys_, 3)
        inst = MembershipInstance(result.combination, gens, 3, 3)
        cert = membership(inst)
        assert cert is not None and cert.verify(inst)


def test_obstruction_is_genuine():
    # the obstruction remainder is not reachable from orbit elements whose
    # class stays at or below the combination's class
    sys_ = obstructed()
    result = check_pair(sys_, tau_generators(sys_.leads())[0])
    assert result.status == "obstructed"
    bound = result.class_bound
    gens = prolong_within_class(sys_, bound, 4)
    pool = variables_within_class(CTX, ORD, bound, 4)
    inst = MembershipInstance(result.remainder, gens, 3, 4, pool=pool)
    assert membership(inst) is None


def test_quotient_census_heat():
    census = quotient_census(heat(), 2)
    parametric = {(v.i, v.order) for v in census.parametric}
    assert parametric == {(1, (0, 0)), (1, (1, 0)), (1, (0, 1)), (1, (1, 1)), (1, (0, 2))}
    assert census.counts == {0: 1, 1: 2, 2: 2}


def test_quotient_census_empty_system():
    ctx = Context(1, 1)
    sys_ = SolvedSystem((), Ranking.orderly(ctx))
    census = quotient_census(sys_, 5)
    assert len(census.parametric) == 6 and census.principal == []


def test_quotient_census_gradient_cone():
    census = quotient_census(gradient(X(2)), 3)
    assert [(v.i, v.order) for v in census.parametric] == [(1, (0, 0))]
    assert census.counts == {0: 1, 1: 0, 2: 0, 3: 0}


def test_census_brute_force_cone_match():
    # independent enumeration: parametric iff no lead divides the exponent
    for sys_, bound in ((heat(), 5), (gradient(X(2)), 4), (obstructed(), 4)):
        census = quotient_census(sys_, bound)
        leads = [(eq.lead.i, eq.lead.order) for eq in sys_.equations]
        expected = set()
        from diffalg import multiindex as mi

        for a in mi.iter_up_to_order(2, bound):
            covered = any(
                i == 1 and all(x >= y for x, y in zip(a, order)) for i, order in leads
            )
            if not covered:
                expected.add((1, a))
        assert {(v.i, v.order) for v in census.parametric} == expected


def test_census_monotone_under_extension():
    base = heat()
    extended = system(
        SolvedForm(D(2, 0), -U(0, 1)),
        SolvedForm(D(0, 1), DiffPoly.zero(CTX)),
    )
    assert is_passive(extended).verdict == "passive"
    c_base = quotient_census(base, 5).counts
    c_ext = quotient_census(extended, 5).counts
    assert all(c_ext[o] <= c_base[o] for o in c_base)


def test_passive_reduce_divide_agreement():
    rng = random.Random(70)
    for sys_ in (heat(), gradient(X(2))):
        report = is_passive(sys_)
        assert report.verdict == "passive"
        for _ in range(25):
            f = gen.rand_poly(rng, CTX, terms=3, max_degree=2, max_order=3)
            res = reduce(f, sys_)
            bound = max(3, res.max_eliminated_order(), f.max_deriv_order())
            forms = normalized_slice(sys_, bound).forms
            assert divide_by_normalized(f, forms) == res.remainder


def test_coincident_leads_merge():
    eq = SolvedForm(D(1, 0), -X(2))
    report = coincident_lead_analysis([eq, SolvedForm(D(1, 0), -X(2))], ORD)
    assert report.verdict == "ok"
    assert len(report.system.equations) == 1
    assert report.relations[0].status == "merged"


def test_coincident_leads_contradiction():
    report = coincident_lead_analysis(
        [SolvedForm(D(1, 0), -X(2)), SolvedForm(D(1, 0), -X(1))], ORD
    )
    assert report.verdict == "inconsistent"
    assert report.system is None
    assert report.relations[0].remainder == X(2) - X(1)


def test_coincident_leads_derived_relation():
    report = coincident_lead_analysis(
        [SolvedForm(D(1, 1), -X(2)), SolvedForm(D(1, 1), -U(0, 1))], ORD
    )
    assert report.verdict == "obstructed"
    assert report.relations[0].status == "obstructed"


def test_coincident_leads_distinct_passthrough():
    forms = [SolvedForm(D(1, 0), DiffPoly.zero(CTX)), SolvedForm(D(0, 1), -X(2))]
    report = coincident_lead_analysis(forms, ORD)
    assert report.verdict == "ok" and report.relations == []
    assert list(report.system.equations) == forms


def test_check_pair_requires_solvable():
    sys_ = system(SolvedForm(D(0, 1), -U(2, 0)), SolvedForm(D(1, 0), DiffPoly.zero(CTX)))
    taus = tau_generators(sys_.leads())
    with pytest.raises(StructuralError):
        check_pair(sys_, taus[0])
