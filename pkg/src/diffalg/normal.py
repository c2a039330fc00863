"""Solved forms, division with remainder, and autoreduction.

An equation is stored as f = lead + tail where lead is a single derivative
variable and tail is a polynomial not depending on it; the induced rewrite
rule is lead -> -tail.  A system under a ranking is conditionally solvable
when every tail's class sits strictly below its lead's class; that descent is
what makes the rewriting terminate.

reduce() eliminates, greatest first, every derivative variable lying in some
equation's orbit (the principal derivatives), by substituting the prolonged
rewrite rule.  The remainder depends only on the x's and the parametric
derivatives.  divide_by_normalized() is the one-shot variant for normalized
sets, whose tails mention no lead at all: there the remainder is independent
of substitution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import multiindex as mi
from .algebra import Context, Deriv, DiffPoly, to_text, var_to_json
from .errors import ReductionLimitError, StructuralError
from .ranking import Ranking

DEFAULT_MAX_STEPS = 10**5


@dataclass(frozen=True)
class SolvedForm:
    """f = lead + tail, with tail free of lead."""

    lead: Deriv
    tail: DiffPoly

    def __post_init__(self):
        self.tail.ctx.check_var(self.lead)
        if self.lead in self.tail.support_derivs():
            raise StructuralError(
                f"tail of solved form depends on its own lead {self.lead}"
            )

    @property
    def ctx(self) -> Context:
        return self.tail.ctx

    def poly(self) -> DiffPoly:
        return DiffPoly.variable(self.ctx, self.lead) + self.tail

    def rhs(self) -> DiffPoly:
        """The rewrite image of the lead: -tail."""
        return -self.tail


@dataclass(frozen=True)
class SolvedSystem:
    """A finite list of solved forms over one ambient, with its ranking."""

    equations: tuple[SolvedForm, ...]
    ranking: Ranking

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        for eq in self.equations:
            if eq.ctx != self.ranking.ctx:
                raise StructuralError("equation ambient differs from ranking ambient")
        leads = [eq.lead for eq in self.equations]
        if len(set(leads)) != len(leads):
            raise StructuralError(
                "coincident leads; run coincident_lead_analysis on the raw list first"
            )

    @property
    def ctx(self) -> Context:
        return self.ranking.ctx

    def __len__(self):
        return len(self.equations)

    def without(self, idx: int) -> "SolvedSystem":
        eqs = self.equations[:idx] + self.equations[idx + 1:]
        return SolvedSystem(eqs, self.ranking)

    def leads(self) -> list[Deriv]:
        return [eq.lead for eq in self.equations]


@dataclass
class SolvabilityReport:
    ok: bool
    violations: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations}


def check_conditionally_solvable(sys: SolvedSystem) -> SolvabilityReport:
    """Every equation must have class(tail) strictly below class(lead)."""
    rk = sys.ranking
    violations = []
    for idx, eq in enumerate(sys.equations):
        lead_key = rk.key(eq.lead)
        tail_key = rk.class_of(eq.tail)
        if not tail_key < lead_key:
            violations.append(
                {
                    "eq": idx,
                    "lead": var_to_json(eq.lead),
                    "lead_class": lead_key.to_json(),
                    "tail_class": tail_key.to_json(),
                }
            )
    return SolvabilityReport(ok=not violations, violations=violations)


def find_principal(sys: SolvedSystem, v: Deriv) -> Optional[tuple[int, mi.Index]]:
    """The equation whose lead's orbit contains v, with the shift.

    Among several matches the smallest |shift| wins, ties broken
    lexicographically on the shift.  None when v is parametric.
    """
    best = None
    for idx, eq in enumerate(sys.equations):
        if eq.lead.i != v.i:
            continue
        shift = mi.try_subtract(eq.lead.order, v.order)
        if shift is None:
            continue
        rank = (mi.order(shift), shift)
        if best is None or rank < best[0]:
            best = (rank, idx, shift)
    if best is None:
        return None
    return best[1], best[2]


@dataclass(frozen=True)
class ReduceStep:
    eq: int
    shift: mi.Index
    eliminated: Deriv

    def to_json(self) -> dict:
        return {
            "eq": self.eq,
            "shift": list(self.shift),
            "eliminated": var_to_json(self.eliminated),
        }


@dataclass
class ReduceResult:
    remainder: DiffPoly
    trace: list[ReduceStep]

    def max_eliminated_order(self) -> int:
        return max((mi.order(s.eliminated.order) for s in self.trace), default=0)


def _principal_support(sys: SolvedSystem, f: DiffPoly) -> list[tuple[Deriv, int, mi.Index]]:
    out = []
    for v in f.support_derivs():
        hit = find_principal(sys, v)
        if hit is not None:
            out.append((v, hit[0], hit[1]))
    return out


def reduce(f: DiffPoly, sys: SolvedSystem, max_steps: int = DEFAULT_MAX_STEPS) -> ReduceResult:
    """Divide f by the orbit of the system, greatest principal derivative
    first, and return the remainder with the full rewrite trace."""
    solv = check_conditionally_solvable(sys)
    if not solv.ok:
        raise StructuralError(
            f"system is not conditionally solvable: {solv.violations}"
        )
    if f.ctx != sys.ctx:
        raise StructuralError("polynomial ambient differs from system ambient")
    rk = sys.ranking
    trace: list[ReduceStep] = []
    current = f
    steps = 0
    while True:
        hits = _principal_support(sys, current)
        if not hits:
            return ReduceResult(current, trace)
        steps += 1
        if steps > max_steps:
            raise ReductionLimitError(max_steps, to_text(current))
        v, idx, shift = max(hits, key=lambda h: (rk.key(h[0]), (h[0].i, h[0].order)))
        replacement = sys.equations[idx].rhs().total_derivative_multi(shift)
        current = current.substitute(v, replacement)
        trace.append(ReduceStep(idx, shift, v))


def autoreduce(sys: SolvedSystem, max_steps: int = DEFAULT_MAX_STEPS) -> SolvedSystem:
    """Reduce every tail against the other equations' orbits.

    Leads never change, so principality is static and a single pass settles:
    once a tail is free of the other leads' orbits it stays free.
    """
    eqs = list(sys.equations)
    for s in range(len(eqs)):
        others = SolvedSystem(tuple(eqs[:s] + eqs[s + 1:]), sys.ranking)
        if not len(others):
            continue
        reduced = reduce(eqs[s].tail, others, max_steps).remainder
        eqs[s] = SolvedForm(eqs[s].lead, reduced)
    return SolvedSystem(tuple(eqs), sys.ranking)


def divide_by_normalized(
    f: DiffPoly,
    forms: Sequence[SolvedForm],
    order: Optional[Sequence[int]] = None,
) -> DiffPoly:
    """Remainder of f modulo a normalized set: pairwise-distinct leads, every
    tail free of every lead.  Substitution order is irrelevant to the result;
    an explicit order may be passed to exercise exactly that."""
    leads = [b.lead for b in forms]
    if len(set(leads)) != len(leads):
        raise StructuralError("normalized set has coincident leads")
    lead_set = set(leads)
    for pos, b in enumerate(forms):
        if f.ctx != b.ctx:
            raise StructuralError("ambient mismatch in normalized set")
        overlap = b.tail.support_derivs() & lead_set
        if overlap:
            raise StructuralError(
                f"set is not normalized: tail {pos} mentions lead(s) {sorted((v.i, v.order) for v in overlap)}"
            )
    seq = list(order) if order is not None else list(range(len(forms)))
    if sorted(seq) != list(range(len(forms))):
        raise StructuralError("order must be a permutation of the form indices")
    out = f
    for pos in seq:
        out = out.substitute(forms[pos].lead, forms[pos].rhs())
    return out


@dataclass
class SliceResult:
    """Bounded normalized presentation of a system's orbit ideal: one solved
    form per orbit derivative within the order bound, tail fully reduced."""

    forms: list[SolvedForm]
    mismatches: list[dict]

    @property
    def coherent(self) -> bool:
        return not self.mismatches


def normalized_slice(
    sys: SolvedSystem, order_bound: int, max_steps: int = DEFAULT_MAX_STEPS
) -> SliceResult:
    """Prolong every equation through the order bound and normalize each
    prolongation's tail by full reduction.  Orbit derivatives reachable from
    two equations must agree on the normalized tail; disagreements are
    reported as mismatches (they cannot occur for passive systems)."""
    ctx = sys.ctx
    by_lead: dict[Deriv, tuple[DiffPoly, int, mi.Index]] = {}
    mismatches: list[dict] = []
    for idx, eq in enumerate(sys.equations):
        room = order_bound - mi.order(eq.lead.order)
        if room < 0:
            continue
        for shift in mi.iter_up_to_order(ctx.n, room):
            v = Deriv(eq.lead.i, mi.add(eq.lead.order, shift))
            tail = eq.tail.total_derivative_multi(shift)
            r = reduce(tail, sys, max_steps).remainder
            if v in by_lead:
                prev = by_lead[v][0]
                if prev != r:
                    mismatches.append(
                        {
                            "lead": var_to_json(v),
                            "first": {"eq": by_lead[v][1], "shift": list(by_lead[v][2])},
                            "second": {"eq": idx, "shift": list(shift)},
                        }
                    )
            else:
                by_lead[v] = (r, idx, shift)
    forms = [
        SolvedForm(v, data[0])
        for v, data in sorted(by_lead.items(), key=lambda kv: (kv[0].i, kv[0].order))
    ]
    return SliceResult(forms, mismatches)
