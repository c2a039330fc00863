"""Rankings of derivative variables and the shift-compatibility audit.

A ranking is a total preorder on the derivative variables u^i_alpha.  The two
built-ins are total orders:

    orderly      compare |alpha|, then i, then alpha lexicographically
    elimination  compare i, then |alpha|, then alpha lexicographically

Custom rankings are weight rules: a sequence of linear functionals on
(i, alpha), applied in order, first difference decides.  A weight rule with
too few rows is a legitimate coarse ranking (distinct variables may tie); the
tie shows up as equal class keys and is flagged wherever a single leading
derivative is required.

Being usable for reduction demands two axioms about the shift action
u^i_alpha -> u^i_{alpha+e_k}:

    (a)  u < v  implies  shift_k(u) < shift_k(v)   for every direction k
    (b)  u < shift_k(u)                            for every direction k

audit_compatibility checks both on an exhaustive bounded range plus a sampled
range and reports every counterexample verbatim.  It never raises: a failed
audit is a result, not an error.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from . import multiindex as mi
from .algebra import Context, Deriv, DiffPoly, shift_deriv, var_to_json
from .errors import StructuralError


@dataclass(frozen=True, order=True)
class ClassKey:
    """Totally ordered key of a ranking block.  The empty key is the bottom
    element ("base"), reserved for polynomials with no derivative variables."""

    parts: tuple = ()

    @property
    def is_base(self) -> bool:
        return not self.parts

    def to_json(self):
        if self.is_base:
            return "base"
        return [p if isinstance(p, int) else str(p) for p in self.parts]


BASE = ClassKey(())


class Lead(NamedTuple):
    deriv: Deriv
    block_tie: bool


RankingSpec = Union[str, dict]


@dataclass(frozen=True)
class Ranking:
    """A named comparison rule over derivative variables of one ambient."""

    ctx: Context
    kind: str
    weights: tuple[tuple[Fraction, ...], ...] = ()

    @classmethod
    def orderly(cls, ctx: Context) -> "Ranking":
        return cls(ctx, "orderly")

    @classmethod
    def elimination(cls, ctx: Context) -> "Ranking":
        return cls(ctx, "elimination")

    @classmethod
    def from_weights(cls, ctx: Context, rows) -> "Ranking":
        parsed = []
        for r, row in enumerate(rows):
            if len(row) != ctx.n + 1:
                raise StructuralError(
                    f"weight row {r} has {len(row)} entries, expected {ctx.n + 1}"
                    " (one for the unknown index, then one per direction)"
                )
            if any(isinstance(x, float) for x in row):
                raise StructuralError(
                    f"weight row {r}: floats are not accepted; use integers or 'p/q' strings"
                )
            try:
                parsed.append(tuple(Fraction(x) for x in row))
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise StructuralError(f"weight row {r}: {exc}") from None
        if not parsed:
            raise StructuralError("weight ranking needs at least one row")
        return cls(ctx, "weights", tuple(parsed))

    @classmethod
    def from_spec(cls, ctx: Context, spec: RankingSpec) -> "Ranking":
        if spec == "orderly":
            return cls.orderly(ctx)
        if spec == "elimination":
            return cls.elimination(ctx)
        if isinstance(spec, dict) and set(spec) == {"weights"}:
            return cls.from_weights(ctx, spec["weights"])
        raise StructuralError(
            f"bad ranking spec {spec!r}; expected 'orderly', 'elimination',"
            " or {'weights': [[...], ...]}"
        )

    def to_spec(self) -> RankingSpec:
        if self.kind == "weights":
            return {"weights": [[str(x) for x in row] for row in self.weights]}
        return self.kind

    # -- comparison ----------------------------------------------------------

    def key(self, v: Deriv) -> ClassKey:
        self.ctx.check_var(v)
        if self.kind == "orderly":
            return ClassKey((mi.order(v.order), v.i) + v.order)
        if self.kind == "elimination":
            return ClassKey((v.i, mi.order(v.order)) + v.order)
        vec = (Fraction(v.i),) + tuple(Fraction(a) for a in v.order)
        return ClassKey(tuple(sum(w * x for w, x in zip(row, vec)) for row in self.weights))

    def compare(self, u: Deriv, v: Deriv) -> int:
        """-1, 0 or 1.  Zero either means u == v or a coarse-ranking tie."""
        ku, kv = self.key(u), self.key(v)
        if ku < kv:
            return -1
        if kv < ku:
            return 1
        return 0

    @property
    def is_total(self) -> bool:
        """Whether equal keys imply equal variables (no coarse blocks)."""
        return self.kind in ("orderly", "elimination")

    # -- induced structure on polynomials -------------------------------------

    def class_of(self, f: DiffPoly) -> ClassKey:
        """The maximal key among the derivative variables of f; base when f
        has none (including f = 0)."""
        return max((self.key(v) for v in f.support_derivs()), default=BASE)

    def leading_derivative(self, f: DiffPoly) -> Optional[Lead]:
        """The ranking-maximal derivative variable of f, or None when f has
        no derivative variables.  When the top block of a coarse ranking holds
        several support derivatives, the (i, alpha)-lexicographically largest
        is returned with block_tie set."""
        derivs = f.support_derivs()
        if not derivs:
            return None
        top_key = max(self.key(v) for v in derivs)
        block = [v for v in derivs if self.key(v) == top_key]
        best = max(block, key=lambda v: (v.i, v.order))
        return Lead(best, len(block) > 1)


# -- compatibility audit -------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    axiom: str  # "a" or "b"
    u: Deriv
    v: Optional[Deriv]
    direction: int

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "u": var_to_json(self.u),
            "v": var_to_json(self.v) if self.v is not None else None,
            "direction": self.direction,
        }


@dataclass
class AuditReport:
    exhaustive_order: int
    samples: int
    checked_a: int = 0
    checked_b: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "exhaustive_order": self.exhaustive_order,
            "samples": self.samples,
            "checked_a": self.checked_a,
            "checked_b": self.checked_b,
            "counterexamples": [c.to_json() for c in self.counterexamples],
        }


def _all_derivs(ctx: Context, order_bound: int) -> list[Deriv]:
    return [
        Deriv(i, a)
        for i in range(1, ctx.m + 1)
        for a in mi.iter_up_to_order(ctx.n, order_bound)
    ]


def audit_compatibility(
    rk: Ranking,
    sample_budget: int,
    exhaustive_order: int = 3,
    sample_order: int = 8,
    seed: int = 0,
) -> AuditReport:
    """Check axioms (a) and (b) for every shift direction.

    Exhaustive part: all derivative variables of order <= exhaustive_order.
    Sampled part: sample_budget random pairs of order <= sample_order.
    Counterexamples are recorded verbatim; duplicates are not deduplicated
    beyond the first occurrence per (axiom, u, v, direction).
    """
    if sample_budget < 1:
        raise StructuralError("sample_budget must be >= 1")
    ctx = rk.ctx
    report = AuditReport(exhaustive_order=exhaustive_order, samples=sample_budget)
    seen: set[tuple] = set()

    def check_b(u: Deriv, k: int) -> None:
        report.checked_b += 1
        if rk.compare(u, shift_deriv(u, k, ctx.n)) != -1:
            key = ("b", u, None, k)
            if key not in seen:
                seen.add(key)
                report.counterexamples.append(Counterexample("b", u, None, k))

    def check_a(u: Deriv, v: Deriv, k: int) -> None:
        if rk.compare(u, v) != -1:
            return
        report.checked_a += 1
        if rk.compare(shift_deriv(u, k, ctx.n), shift_deriv(v, k, ctx.n)) != -1:
            key = ("a", u, v, k)
            if key not in seen:
                seen.add(key)
                report.counterexamples.append(Counterexample("a", u, v, k))

    pool = _all_derivs(ctx, exhaustive_order)
    for u in pool:
        for k in range(1, ctx.n + 1):
            check_b(u, k)
    for u in pool:
        for v in pool:
            for k in range(1, ctx.n + 1):
                check_a(u, v, k)

    rng = random.Random(seed)
    indices = list(mi.iter_up_to_order(ctx.n, sample_order))
    for _ in range(sample_budget):
        u = Deriv(rng.randint(1, ctx.m), rng.choice(indices))
        v = Deriv(rng.randint(1, ctx.m), rng.choice(indices))
        k = rng.randint(1, ctx.n)
        check_b(u, k)
        check_a(u, v, k)
    return report
