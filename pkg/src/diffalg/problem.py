"""Problem files: the JSON surface for systems of solved equations.

Schema:

    {
      "n": 2, "m": 1,
      "ranking": "orderly" | "elimination" | {"weights": [[...], ...]},
      "equations": [
        {"lead": ["u", i, [a, ...]], "tail": [ {"c": "p/q", "m": [...]}, ... ]}
      ],
      "bounds": {"order_bound": 6, "degree_bound": 3, "max_steps": 100000}
    }

"bounds" and its fields are optional.  Weight rankings must pass the
compatibility audit before the file is accepted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .algebra import Context, Deriv, poly_from_json, poly_to_json, var_from_json, var_to_json
from .errors import StructuralError
from .normal import DEFAULT_MAX_STEPS, SolvedForm
from .passivity import DEFAULT_DEGREE_BOUND, DEFAULT_ORDER_BOUND
from .ranking import Ranking, audit_compatibility

AUDIT_GATE_SAMPLES = 2000
AUDIT_GATE_ORDER = 3


@dataclass
class Bounds:
    order_bound: int = DEFAULT_ORDER_BOUND
    degree_bound: int = DEFAULT_DEGREE_BOUND
    max_steps: int = DEFAULT_MAX_STEPS


@dataclass
class Problem:
    ctx: Context
    ranking: Ranking
    forms: list[SolvedForm]
    bounds: Bounds


def _require(data: dict, key: str, kind, where: str):
    if key not in data:
        raise StructuralError(f"{where}: missing field {key!r}")
    value = data[key]
    if not isinstance(value, kind):
        raise StructuralError(
            f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def problem_from_dict(data: dict, gate_ranking: bool = True) -> Problem:
    if not isinstance(data, dict):
        raise StructuralError("problem file must be a JSON object")
    n = _require(data, "n", int, "problem")
    m = _require(data, "m", int, "problem")
    ctx = Context(n, m)

    ranking_spec = data.get("ranking", "orderly")
    ranking = Ranking.from_spec(ctx, ranking_spec)
    if gate_ranking and ranking.kind == "weights":
        audit = audit_compatibility(
            ranking, AUDIT_GATE_SAMPLES, exhaustive_order=AUDIT_GATE_ORDER
        )
        if not audit.ok:
            bad = audit.counterexamples[0].to_json()
            raise StructuralError(
                f"weight ranking fails the compatibility audit; first counterexample: {bad}"
            )

    equations = _require(data, "equations", list, "problem")
    forms: list[SolvedForm] = []
    for idx, entry in enumerate(equations):
        where = f"equations[{idx}]"
        if not isinstance(entry, dict):
            raise StructuralError(f"{where}: expected object")
        lead = var_from_json(ctx, _require(entry, "lead", list, where))
        if not isinstance(lead, Deriv):
            raise StructuralError(f"{where}.lead: must be a derivative variable")
        tail = poly_from_json(ctx, _require(entry, "tail", list, where))
        try:
            forms.append(SolvedForm(lead, tail))
        except StructuralError as exc:
            raise StructuralError(f"{where}: {exc}") from None

    bounds = Bounds()
    raw_bounds = data.get("bounds", {})
    if not isinstance(raw_bounds, dict):
        raise StructuralError("problem.bounds: expected object")
    for key in raw_bounds:
        if key not in ("order_bound", "degree_bound", "max_steps"):
            raise StructuralError(f"problem.bounds: unknown field {key!r}")
        value = raw_bounds[key]
        if not isinstance(value, int) or value < 0:
            raise StructuralError(f"problem.bounds.{key}: expected nonnegative integer")
        setattr(bounds, key, value)
    return Problem(ctx, ranking, forms, bounds)


def problem_to_dict(problem: Problem) -> dict:
    """Inverse of problem_from_dict up to JSON formatting: parsing the result
    reproduces the same system, ranking, and bounds."""
    return {
        "n": problem.ctx.n,
        "m": problem.ctx.m,
        "ranking": problem.ranking.to_spec(),
        "equations": [
            {"lead": var_to_json(form.lead), "tail": poly_to_json(form.tail)}
            for form in problem.forms
        ],
        "bounds": {
            "order_bound": problem.bounds.order_bound,
            "degree_bound": problem.bounds.degree_bound,
            "max_steps": problem.bounds.max_steps,
        },
    }


def load_problem(
    path: str, ranking_override: Optional[str] = None, gate_ranking: bool = True
) -> Problem:
    """Parse a problem file.  A ranking override is either one of the
    built-in names or inline JSON for a weight rule.  gate_ranking=False skips
    the audit gate so the audit command itself can examine a failing rule."""
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if ranking_override is not None:
        if not isinstance(data, dict):
            raise StructuralError("problem file must be a JSON object")
        if ranking_override in ("orderly", "elimination"):
            data["ranking"] = ranking_override
        else:
            try:
                data["ranking"] = json.loads(ranking_override)
            except json.JSONDecodeError as exc:
                raise StructuralError(f"bad --ranking value: {exc}") from None
    return problem_from_dict(data, gate_ranking)
