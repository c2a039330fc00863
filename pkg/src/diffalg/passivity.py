"""The passivity decision for solved systems, with its quotient report.

For every pair of equations whose leads share an unknown, the paired diamond
shifts raise both leads onto their common join; the difference of the two
prolonged equations drops strictly below that join.  Reducing it against the
system decides the pair:

    remainder 0                      the pair is compatible (satisfied)
    remainder without derivatives    a nonzero relation among the x's alone
                                     (inconsistent)
    anything else                    a genuine obstruction, reported verbatim

A system is passive when it is conditionally solvable and every pair is
satisfied.  Passive systems get a census of principal versus parametric
derivatives up to an order bound (the bounded shape of the quotient algebra)
and a normalized bounded presentation whose leads are exactly the orbit of
the leading derivatives.  Obstructed systems are reported, never repaired.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import multiindex as mi
from .algebra import Deriv, DiffPoly, poly_to_json, var_to_json
from .errors import StructuralError
from .normal import (
    DEFAULT_MAX_STEPS,
    SliceResult,
    SolvabilityReport,
    SolvedForm,
    SolvedSystem,
    autoreduce,
    check_conditionally_solvable,
    find_principal,
    normalized_slice,
    reduce,
)
from .ranking import ClassKey, Ranking
from .syzygy import TauPair, operator_apply, tau_generators

SATISFIED = "satisfied"
OBSTRUCTED = "obstructed"
INCONSISTENT = "inconsistent"

PASSIVE = "passive"
NOT_PASSIVE = "not-passive"

DEFAULT_ORDER_BOUND = 6
DEFAULT_DEGREE_BOUND = 3

EXIT_FOR_VERDICT = {PASSIVE: 0, NOT_PASSIVE: 2, INCONSISTENT: 3}


@dataclass
class CompatibilityResult:
    pair: tuple[int, int]
    tau: TauPair
    combination: DiffPoly
    remainder: DiffPoly
    status: str
    class_bound: ClassKey

    def to_json(self) -> dict:
        return {
            "i": self.pair[0],
            "j": self.pair[1],
            "shift_i": list(self.tau.shift_i),
            "shift_j": list(self.tau.shift_j),
            "combination": poly_to_json(self.combination),
            "remainder": poly_to_json(self.remainder),
            "status": self.status,
            "class_bound": self.class_bound.to_json(),
        }


def check_pair(
    sys: SolvedSystem, tau: TauPair, max_steps: int = DEFAULT_MAX_STEPS
) -> CompatibilityResult:
    """Decide one cross-derivative pair by reduction.

    The combination's top derivative (the shifted join of the two leads)
    cancels identically by construction; what is left is reduced and
    classified by its remainder.
    """
    combination = operator_apply(tau.vector(len(sys.equations)), sys)
    lead_i = sys.equations[tau.i].lead
    join = Deriv(lead_i.i, mi.add(lead_i.order, tau.shift_i))
    if join in combination.support_derivs():
        raise StructuralError(
            f"pair ({tau.i}, {tau.j}): top derivative {join} failed to cancel"
        )
    remainder = reduce(combination, sys, max_steps).remainder
    if remainder.is_zero():
        status = SATISFIED
    elif not remainder.support_derivs():
        status = INCONSISTENT
    else:
        status = OBSTRUCTED
    return CompatibilityResult(
        pair=(tau.i, tau.j),
        tau=tau,
        combination=combination,
        remainder=remainder,
        status=status,
        class_bound=sys.ranking.class_of(combination),
    )


@dataclass
class Census:
    order_bound: int
    principal: list[Deriv]
    parametric: list[Deriv]
    counts: dict[int, int]  # total order -> number of parametric derivatives

    def to_json(self) -> dict:
        return {
            "order_bound": self.order_bound,
            "principal": [var_to_json(v) for v in self.principal],
            "parametric": [var_to_json(v) for v in self.parametric],
            "counts": {str(o): c for o, c in sorted(self.counts.items())},
            "parametric_total": len(self.parametric),
        }


def quotient_census(sys: SolvedSystem, order_bound: int) -> Census:
    """Classify every derivative variable up to the order bound as principal
    (in some lead's orbit) or parametric (free in the quotient)."""
    ctx = sys.ctx
    principal: list[Deriv] = []
    parametric: list[Deriv] = []
    counts: dict[int, int] = {o: 0 for o in range(order_bound + 1)}
    for i in range(1, ctx.m + 1):
        for a in mi.iter_up_to_order(ctx.n, order_bound):
            v = Deriv(i, a)
            if find_principal(sys, v) is not None:
                principal.append(v)
            else:
                parametric.append(v)
                counts[mi.order(a)] += 1
    principal.sort(key=lambda v: (v.i, v.order))
    parametric.sort(key=lambda v: (v.i, v.order))
    return Census(order_bound, principal, parametric, counts)


@dataclass
class NormalizedSliceSummary:
    order_bound: int
    forms: list[SolvedForm]
    coherent: bool
    leads_match_orbit: bool
    tails_reduced: bool

    @property
    def certified(self) -> bool:
        return self.coherent and self.leads_match_orbit and self.tails_reduced

    def to_json(self) -> dict:
        return {
            "order_bound": self.order_bound,
            "certified": self.certified,
            "coherent": self.coherent,
            "leads_match_orbit": self.leads_match_orbit,
            "tails_reduced": self.tails_reduced,
            "generators": [
                {"lead": var_to_json(f.lead), "tail": poly_to_json(f.tail)}
                for f in self.forms
            ],
        }


def _certify_slice(sys: SolvedSystem, order_bound: int, max_steps: int) -> NormalizedSliceSummary:
    slice_result: SliceResult = normalized_slice(sys, order_bound, max_steps)
    slice_leads = {f.lead for f in slice_result.forms}
    orbit: set[Deriv] = set()
    for eq in sys.equations:
        room = order_bound - mi.order(eq.lead.order)
        for shift in mi.iter_up_to_order(sys.ctx.n, max(room, -1)):
            orbit.add(Deriv(eq.lead.i, mi.add(eq.lead.order, shift)))
    tails_reduced = all(
        find_principal(sys, v) is None
        for f in slice_result.forms
        for v in f.tail.support_derivs()
    )
    return NormalizedSliceSummary(
        order_bound=order_bound,
        forms=slice_result.forms,
        coherent=slice_result.coherent,
        leads_match_orbit=slice_leads == orbit,
        tails_reduced=tails_reduced,
    )


@dataclass
class PassivityReport:
    verdict: str
    theta: Optional[ClassKey]
    solvability: SolvabilityReport
    pairs: list[CompatibilityResult]
    census: Optional[Census] = None
    normalized: Optional[NormalizedSliceSummary] = None

    @property
    def exit_code(self) -> int:
        return EXIT_FOR_VERDICT[self.verdict]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "theta": self.theta.to_json() if self.theta is not None else None,
            "solvable": self.solvability.to_json(),
            "pairs": [p.to_json() for p in self.pairs],
            "census": self.census.to_json() if self.census is not None else None,
            "normalized_slice": self.normalized.to_json() if self.normalized is not None else None,
        }


def is_passive(
    sys: SolvedSystem,
    order_bound: int = DEFAULT_ORDER_BOUND,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> PassivityReport:
    """Full passivity decision.

    Runs the solvability check, generates the pair generators, decides each
    pair, and on a passive verdict attaches the quotient census and the
    certified bounded normalized presentation of the autoreduced system.
    theta is the least class among the equations' leads: shifting only raises
    class, so the orbit minimum is attained on the equations themselves.
    """
    solvability = check_conditionally_solvable(sys)
    theta = min((sys.ranking.key(eq.lead) for eq in sys.equations), default=None)
    if not solvability.ok:
        return PassivityReport(NOT_PASSIVE, theta, solvability, [])
    pairs = [check_pair(sys, tau, max_steps) for tau in tau_generators(sys.leads())]
    if any(p.status == INCONSISTENT for p in pairs):
        verdict = INCONSISTENT
    elif any(p.status == OBSTRUCTED for p in pairs):
        verdict = NOT_PASSIVE
    else:
        verdict = PASSIVE
    report = PassivityReport(verdict, theta, solvability, pairs)
    if verdict == PASSIVE:
        reduced = autoreduce(sys, max_steps)
        report.census = quotient_census(sys, order_bound)
        report.normalized = _certify_slice(reduced, order_bound, max_steps)
    return report


# -- coincident leads ----------------------------------------------------------


@dataclass
class DerivedRelation:
    lead: Deriv
    first_eq: int
    second_eq: int
    remainder: DiffPoly
    status: str  # "merged", "inconsistent" or "obstructed"

    def to_json(self) -> dict:
        return {
            "lead": var_to_json(self.lead),
            "first_eq": self.first_eq,
            "second_eq": self.second_eq,
            "remainder": poly_to_json(self.remainder),
            "status": self.status,
        }


@dataclass
class CoincidenceReport:
    verdict: str  # "ok", "inconsistent" or "obstructed"
    system: Optional[SolvedSystem]
    relations: list[DerivedRelation] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "relations": [r.to_json() for r in self.relations],
        }


def coincident_lead_analysis(
    raw: Sequence[SolvedForm],
    ranking: Ranking,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> CoincidenceReport:
    """Merge equations sharing a lead, or report what keeps them apart.

    For each duplicate the tail difference (class strictly below the shared
    lead) is reduced against the deduplicated system.  Zero means a true
    duplicate; a nonzero base remainder is a contradiction among the x's; a
    nonzero remainder with derivatives is a derived relation the input must
    already imply, reported rather than dropped.
    """
    first_at: dict[Deriv, int] = {}
    keep: list[SolvedForm] = []
    dupes: list[tuple[int, int, SolvedForm]] = []
    for idx, form in enumerate(raw):
        if form.lead in first_at:
            dupes.append((first_at[form.lead], idx, form))
        else:
            first_at[form.lead] = idx
            keep.append(form)
    base = SolvedSystem(tuple(keep), ranking)
    if not dupes:
        return CoincidenceReport("ok", base)

    reducible = check_conditionally_solvable(base).ok
    relations: list[DerivedRelation] = []
    for first_idx, dup_idx, form in dupes:
        diff = form.tail - raw[first_idx].tail
        remainder = reduce(diff, base, max_steps).remainder if reducible else diff
        if remainder.is_zero():
            status = "merged"
        elif not remainder.support_derivs():
            status = INCONSISTENT
        else:
            status = OBSTRUCTED
        relations.append(DerivedRelation(form.lead, first_idx, dup_idx, remainder, status))
    if any(r.status == INCONSISTENT for r in relations):
        verdict = INCONSISTENT
    elif any(r.status == OBSTRUCTED for r in relations):
        verdict = OBSTRUCTED
    else:
        verdict = "ok"
    return CoincidenceReport(verdict, base if verdict == "ok" else None, relations)
