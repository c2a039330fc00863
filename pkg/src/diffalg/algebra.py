"""Exact differential polynomials over the rationals.

The variable set has two kinds of members: independent variables x_j
(j in 1..n) and derivative variables u^i_alpha (unknown i in 1..m, exponent
alpha a multi-index of length n).  A DiffPoly is a finitely supported
rational-linear combination of monomials in these variables, kept canonical:
no zero coefficients, no zero exponents, structural equality.

Total derivative operators D_k combine the partial derivative with respect
to x_k with the chain rule over every derivative variable:

    D_k f = df/dx_k + sum over (i, alpha) of df/du^i_alpha * u^i_{alpha+e_k}

The sum is finite because f has finite support.  All arithmetic is exact
(fractions.Fraction); nothing in this module rounds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Optional, Union

from . import multiindex as mi
from .errors import StructuralError


@dataclass(frozen=True)
class Indep:
    """The independent variable x_j."""

    j: int


@dataclass(frozen=True)
class Deriv:
    """The derivative variable u^i_alpha."""

    i: int
    order: mi.Index


Variable = Union[Indep, Deriv]

Rational = Union[Fraction, int]


def var_key(v: Variable) -> tuple:
    """Canonical structural order on variables: x's first by index, then u's
    by (unknown, exponent).  Used for monomial layout and display, independent
    of any ranking."""
    if isinstance(v, Indep):
        return (0, v.j)
    return (1, v.i) + v.order


def shift_deriv(v: Deriv, k: int, n: int) -> Deriv:
    """u^i_alpha -> u^i_{alpha+e_k}."""
    return Deriv(v.i, mi.add(v.order, mi.unit(n, k)))


@dataclass(frozen=True)
class Context:
    """Ambient dimensions: n independent variables, m unknowns.

    Every polynomial carries its context; mixing contexts is a structural
    error.  Variables should be built through x() and u() so index bounds are
    checked at the boundary.
    """

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise StructuralError(f"ambient ({self.n}, {self.m}) must be positive")

    def x(self, j: int) -> Indep:
        if not 1 <= j <= self.n:
            raise StructuralError(f"x index {j} out of range 1..{self.n}")
        return Indep(j)

    def u(self, i: int, order: Iterable[int]) -> Deriv:
        if not 1 <= i <= self.m:
            raise StructuralError(f"u index {i} out of range 1..{self.m}")
        return Deriv(i, mi.validate(order, self.n))

    def check_var(self, v: Variable) -> Variable:
        if isinstance(v, Indep):
            return self.x(v.j)
        return self.u(v.i, v.order)


class Monomial:
    """A power product of variables, stored as a sorted tuple of
    (variable, positive exponent) pairs."""

    __slots__ = ("exps",)

    def __init__(self, exps: Iterable[tuple[Variable, int]] = ()):
        pairs = [(v, e) for v, e in exps if e != 0]
        if any(e < 0 for _, e in pairs):
            raise StructuralError("negative exponent in monomial")
        pairs.sort(key=lambda p: var_key(p[0]))
        self.exps = tuple(pairs)

    @classmethod
    def one(cls) -> "Monomial":
        return cls(())

    @classmethod
    def of(cls, v: Variable, e: int = 1) -> "Monomial":
        return cls(((v, e),))

    def __hash__(self):
        return hash(self.exps)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __repr__(self):
        return f"Monomial({self.exps!r})"

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def exp_of(self, v: Variable) -> int:
        for w, e in self.exps:
            if w == v:
                return e
        return 0

    def variables(self) -> tuple[Variable, ...]:
        return tuple(v for v, _ in self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        merged = dict(self.exps)
        for v, e in other.exps:
            merged[v] = merged.get(v, 0) + e
        return Monomial(merged.items())

    def without(self, v: Variable, count: int = 1) -> "Monomial":
        """Divide out v^count; count must not exceed the stored exponent."""
        out = []
        for w, e in self.exps:
            if w == v:
                if e < count:
                    raise StructuralError(f"cannot remove {v}^{count} from {self}")
                if e > count:
                    out.append((w, e - count))
            else:
                out.append((w, e))
        return Monomial(out)

    def drop(self, v: Variable) -> "Monomial":
        """Remove v entirely."""
        return Monomial((w, e) for w, e in self.exps if w != v)


def _lex_cmp(a: Monomial, b: Monomial) -> int:
    # Lexicographic with priority to the greatest variable: walk both
    # exponent lists from their largest variable down; the first position
    # where either the variable or its exponent is larger decides.
    ia, ib = len(a.exps) - 1, len(b.exps) - 1
    while ia >= 0 or ib >= 0:
        if ia < 0:
            return -1
        if ib < 0:
            return 1
        (va, xa), (vb, xb) = a.exps[ia], b.exps[ib]
        ka, kb = var_key(va), var_key(vb)
        if ka != kb:
            return 1 if ka > kb else -1
        if xa != xb:
            return 1 if xa > xb else -1
        ia -= 1
        ib -= 1
    return 0


def monomial_cmp(a: Monomial, b: Monomial) -> int:
    """Graded, then lexicographic toward the greatest variable; x variables
    rank below u variables.  Fixes display and serialization order only."""
    if a.degree != b.degree:
        return 1 if a.degree > b.degree else -1
    return _lex_cmp(a, b)


monomial_sort_key = cmp_to_key(monomial_cmp)


class DiffPoly:
    """Immutable sparse polynomial: Monomial -> nonzero Fraction."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Optional[dict[Monomial, Rational]] = None):
        canonical: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    canonical[m] = c
        self.ctx = ctx
        self.terms = canonical

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ctx: Context) -> "DiffPoly":
        return cls(ctx)

    @classmethod
    def constant(cls, ctx: Context, c: Rational) -> "DiffPoly":
        return cls(ctx, {Monomial.one(): Fraction(c)})

    @classmethod
    def variable(cls, ctx: Context, v: Variable) -> "DiffPoly":
        return cls(ctx, {Monomial.of(ctx.check_var(v)): Fraction(1)})

    @classmethod
    def monomial(cls, ctx: Context, m: Monomial, c: Rational = 1) -> "DiffPoly":
        return cls(ctx, {m: Fraction(c)})

    # -- basics --------------------------------------------------------------

    def _check_ctx(self, other: "DiffPoly") -> None:
        if self.ctx != other.ctx:
            raise StructuralError(f"ambient mismatch: {self.ctx} vs {other.ctx}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, DiffPoly)
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self.terms.items(), key=lambda t: monomial_sort_key(t[0])))))

    def __repr__(self):
        return f"DiffPoly({to_text(self)})"

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        self._check_ctx(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            res[m] = res.get(m, Fraction(0)) + c
        return DiffPoly(self.ctx, res)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def __mul__(self, other: Union["DiffPoly", Rational]) -> "DiffPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_ctx(other)
        res: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                res[m] = res.get(m, Fraction(0)) + c1 * c2
        return DiffPoly(self.ctx, res)

    def __rmul__(self, other: Rational) -> "DiffPoly":
        return self.scale(other)

    def __pow__(self, e: int) -> "DiffPoly":
        if e < 0:
            raise StructuralError("negative power of a polynomial")
        result = DiffPoly.constant(self.ctx, 1)
        for _ in range(e):
            result = result * self
        return result

    def scale(self, c: Rational) -> "DiffPoly":
        c = Fraction(c)
        return DiffPoly(self.ctx, {m: c * x for m, x in self.terms.items()})

    # -- calculus ------------------------------------------------------------

    def partial(self, v: Variable) -> "DiffPoly":
        """Formal partial derivative with respect to the single variable v."""
        res: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m.exp_of(v)
            if e:
                dm = m.without(v)
                res[dm] = res.get(dm, Fraction(0)) + c * e
        return DiffPoly(self.ctx, res)

    def total_derivative(self, k: int) -> "DiffPoly":
        """D_k: the x_k partial plus the chain-rule sum over all derivative
        variables present in the support."""
        n = self.ctx.n
        if not 1 <= k <= n:
            raise StructuralError(f"direction {k} out of range 1..{n}")
        res: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for v, e in m.exps:
                coeff = c * e
                if isinstance(v, Indep):
                    if v.j == k:
                        dm = m.without(v)
                        res[dm] = res.get(dm, Fraction(0)) + coeff
                else:
                    dm = m.without(v) * Monomial.of(shift_deriv(v, k, n))
                    res[dm] = res.get(dm, Fraction(0)) + coeff
        return DiffPoly(self.ctx, res)

    def total_derivative_multi(self, a: mi.Index) -> "DiffPoly":
        """D^a, evaluated direction by direction in ascending direction index.
        The result is independent of that traversal order."""
        mi.validate(a, self.ctx.n)
        f = self
        for k, reps in enumerate(a, start=1):
            for _ in range(reps):
                f = f.total_derivative(k)
        return f

    # -- structure -----------------------------------------------------------

    def substitute(self, v: Variable, g: "DiffPoly") -> "DiffPoly":
        """Replace every occurrence of v by g, expanded and canonicalized."""
        self._check_ctx(g)
        powers: dict[int, DiffPoly] = {0: DiffPoly.constant(self.ctx, 1)}

        def power(e: int) -> "DiffPoly":
            while e not in powers:
                top = max(powers)
                powers[top + 1] = powers[top] * g
            return powers[e]

        out = DiffPoly.zero(self.ctx)
        untouched: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m.exp_of(v)
            if e == 0:
                untouched[m] = c
            else:
                out = out + DiffPoly.monomial(self.ctx, m.drop(v), c) * power(e)
        return out + DiffPoly(self.ctx, untouched)

    def support_derivs(self) -> set[Deriv]:
        """All derivative variables with nonzero coefficient somewhere in f.
        Empty exactly when f lies in the plain polynomial ring over the x's."""
        out: set[Deriv] = set()
        for m in self.terms:
            for v, _ in m.exps:
                if isinstance(v, Deriv):
                    out.add(v)
        return out

    def degree(self) -> int:
        """Total degree; zero polynomial reports 0."""
        return max((m.degree for m in self.terms), default=0)

    def max_deriv_order(self) -> int:
        """Largest |alpha| among support derivatives; 0 if there are none."""
        return max((mi.order(v.order) for v in self.support_derivs()), default=0)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending canonical monomial order (leading first)."""
        return sorted(self.terms.items(), key=lambda t: monomial_sort_key(t[0]), reverse=True)


# -- serialization -----------------------------------------------------------


def var_to_json(v: Variable) -> list:
    if isinstance(v, Indep):
        return ["x", v.j]
    return ["u", v.i, list(v.order)]


def var_from_json(ctx: Context, data) -> Variable:
    if not isinstance(data, list) or not data or data[0] not in ("x", "u"):
        raise StructuralError(f"bad variable {data!r}; expected ['x', j] or ['u', i, [a...]]")
    if data[0] == "x":
        if len(data) != 2 or not isinstance(data[1], int):
            raise StructuralError(f"bad independent variable {data!r}")
        return ctx.x(data[1])
    if len(data) != 3 or not isinstance(data[1], int) or not isinstance(data[2], list):
        raise StructuralError(f"bad derivative variable {data!r}")
    return ctx.u(data[1], data[2])


def _frac_to_str(c: Fraction) -> str:
    return str(c)


_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def _frac_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str) and _RATIONAL_RE.match(s):
        return Fraction(s)
    raise StructuralError(f"bad rational {s!r}; expected a decimal-free 'p' or 'p/q' string")


def poly_to_json(p: DiffPoly) -> list:
    """List of {"c": rational string, "m": [[variable, exponent], ...]},
    leading term first.  Round-trips bit-exactly."""
    out = []
    for m, c in p.sorted_terms():
        out.append({"c": _frac_to_str(c), "m": [[var_to_json(v), e] for v, e in m.exps]})
    return out


def poly_from_json(ctx: Context, data) -> DiffPoly:
    if not isinstance(data, list):
        raise StructuralError(f"polynomial must be a list of terms, got {type(data).__name__}")
    acc: dict[Monomial, Fraction] = {}
    for t, term in enumerate(data):
        if not isinstance(term, dict) or "c" not in term or "m" not in term:
            raise StructuralError(f"term {t}: expected object with 'c' and 'm'")
        c = _frac_from_str(term["c"])
        pairs = []
        for entry in term["m"]:
            if not isinstance(entry, list) or len(entry) != 2:
                raise StructuralError(f"term {t}: bad factor {entry!r}")
            v = var_from_json(ctx, entry[0])
            e = entry[1]
            if not isinstance(e, int) or e <= 0:
                raise StructuralError(f"term {t}: exponent must be a positive integer, got {e!r}")
            pairs.append((v, e))
        m = Monomial(pairs)
        acc[m] = acc.get(m, Fraction(0)) + c
    return DiffPoly(ctx, acc)


# -- human-readable rendering (logs only, never parsed back) ------------------


def _var_text(v: Variable) -> str:
    if isinstance(v, Indep):
        return f"x[{v.j}]"
    return f"u[{v.i},({','.join(str(e) for e in v.order)})]"


def _mono_text(m: Monomial) -> str:
    if not m.exps:
        return "1"
    return "*".join(
        _var_text(v) + (f"^{e}" if e > 1 else "") for v, e in m.exps
    )


def to_text(p: DiffPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for idx, (m, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        mag = -c if neg else c
        if m.exps and mag == 1:
            body = _mono_text(m)
        elif m.exps:
            body = f"{mag}*{_mono_text(m)}"
        else:
            body = str(mag)
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)
