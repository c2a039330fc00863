"""Brute-force bounded ideal-membership certificates.

This is the independent cross-check used by the tests: membership of a target
in the ideal spanned by a finite generator list is decided, at explicit
bounds, by solving one exact linear system for the cofactors.  A certificate
is checkable by plain polynomial arithmetic; a refusal only means "not at
these bounds" and is treated as non-membership solely in negative controls
where the bounds provably dominate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from . import linalg, multiindex as mi
from .algebra import (
    Context,
    Deriv,
    DiffPoly,
    Indep,
    Monomial,
    Variable,
    monomial_sort_key,
    poly_to_json,
    var_key,
)
from .errors import StructuralError
from .normal import SolvedSystem


def prolong(sys: SolvedSystem, order_bound: int) -> list[DiffPoly]:
    """All derivative images of the equations whose shifted lead stays within
    the order bound, as explicit polynomials."""
    out = []
    for eq in sys.equations:
        room = order_bound - mi.order(eq.lead.order)
        if room < 0:
            continue
        poly = eq.poly()
        for shift in mi.iter_up_to_order(sys.ctx.n, room):
            out.append(poly.total_derivative_multi(shift))
    return out


def prolong_within_class(sys: SolvedSystem, class_bound, order_bound: int) -> list[DiffPoly]:
    """Prolongations whose shifted lead has ranking class at most class_bound.

    This is the generator list for the class-restricted membership question:
    whether a polynomial of a given class is reachable from orbit elements
    that do not exceed that class.
    """
    rk = sys.ranking
    out = []
    for eq in sys.equations:
        room = order_bound - mi.order(eq.lead.order)
        if room < 0:
            continue
        poly = eq.poly()
        for shift in mi.iter_up_to_order(sys.ctx.n, room):
            shifted = Deriv(eq.lead.i, mi.add(eq.lead.order, shift))
            if rk.key(shifted) <= class_bound:
                out.append(poly.total_derivative_multi(shift))
    return out


def variables_within_class(ctx: Context, rk, class_bound, order_bound: int) -> list[Variable]:
    """Cofactor pool for class-restricted membership: every independent
    variable plus every derivative of class at most class_bound, up to the
    order bound."""
    pool: list[Variable] = [Indep(j) for j in range(1, ctx.n + 1)]
    for i in range(1, ctx.m + 1):
        for a in mi.iter_up_to_order(ctx.n, order_bound):
            v = Deriv(i, a)
            if rk.key(v) <= class_bound:
                pool.append(v)
    return sorted(pool, key=var_key)


@dataclass
class MembershipInstance:
    target: DiffPoly
    generators: list[DiffPoly]
    cofactor_degree: int
    order_bound: int
    pool: Optional[Sequence[Variable]] = None  # cofactor variables; default inferred

    def __post_init__(self):
        for g in self.generators:
            if g.ctx != self.target.ctx:
                raise StructuralError("generator ambient differs from target ambient")


@dataclass
class Certificate:
    cofactors: list[DiffPoly]

    def expand(self, generators: list[DiffPoly]) -> DiffPoly:
        total = DiffPoly.zero(generators[0].ctx) if generators else None
        if total is None:
            raise StructuralError("certificate without generators")
        for q, g in zip(self.cofactors, generators):
            total = total + q * g
        return total

    def verify(self, inst: MembershipInstance) -> bool:
        if not inst.generators:
            return inst.target.is_zero() and not self.cofactors
        return self.expand(inst.generators) == inst.target

    def to_json(self) -> list:
        return [poly_to_json(q) for q in self.cofactors]


def _default_pool(inst: MembershipInstance) -> list[Variable]:
    ctx = inst.target.ctx
    pool: set[Variable] = {Indep(j) for j in range(1, ctx.n + 1)}
    for p in [inst.target, *inst.generators]:
        for mono in p.terms:
            for v, _ in mono.exps:
                pool.add(v)
    kept = [
        v
        for v in pool
        if not isinstance(v, Deriv) or mi.order(v.order) <= inst.order_bound
    ]
    return sorted(kept, key=var_key)


def _monomials_over(pool: Sequence[Variable], degree: int) -> list[Monomial]:
    out = [Monomial.one()]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(pool, d):
            out.append(Monomial((v, combo.count(v)) for v in set(combo)))
    return sorted(set(out), key=monomial_sort_key)


def membership(inst: MembershipInstance) -> Optional[Certificate]:
    """Search for cofactors q_i with  target = sum q_i * g_i,  each q_i
    supported on monomials over the pool with total degree at most
    cofactor_degree.  Returns the certificate, or None (refusal at bounds)."""
    ctx = inst.target.ctx
    if not inst.generators:
        return Certificate([]) if inst.target.is_zero() else None
    pool = list(inst.pool) if inst.pool is not None else _default_pool(inst)
    basis = _monomials_over(pool, inst.cofactor_degree)

    columns: list[DiffPoly] = []
    for g in inst.generators:
        for mono in basis:
            columns.append(DiffPoly.monomial(ctx, mono) * g)

    row_index: dict[Monomial, int] = {}

    def row_of(mono: Monomial) -> int:
        if mono not in row_index:
            row_index[mono] = len(row_index)
        return row_index[mono]

    by_row: dict[int, linalg.Row] = {}
    for col, poly in enumerate(columns):
        for mono, c in poly.terms.items():
            by_row.setdefault(row_of(mono), {})[col] = c
    rhs_map: dict[int, Fraction] = {}
    for mono, c in inst.target.terms.items():
        rhs_map[row_of(mono)] = c

    nrows = len(row_index)
    rows = [by_row.get(r, {}) for r in range(nrows)]
    rhs = [rhs_map.get(r, Fraction(0)) for r in range(nrows)]
    solution = linalg.solve(rows, rhs, len(columns))
    if solution is None:
        return None

    cofactors = []
    pos = 0
    for _ in inst.generators:
        terms: dict[Monomial, Fraction] = {}
        for mono in basis:
            c = solution[pos]
            pos += 1
            if c:
                terms[mono] = terms.get(mono, Fraction(0)) + c
        cofactors.append(DiffPoly(ctx, terms))
    return Certificate(cofactors)
