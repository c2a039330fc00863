"""Arithmetic on exponent multi-indices: fixed-length tuples over the naturals.

A multi-index is a plain tuple of nonnegative ints of length n (the number of
independent variables).  The diamond product of a and b is the shift that
raises a to the componentwise join of a and b.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Optional

from .errors import StructuralError

Index = tuple[int, ...]


def validate(a: Index, n: int) -> Index:
    a = tuple(a)
    if len(a) != n:
        raise StructuralError(f"multi-index {a} has length {len(a)}, expected {n}")
    if any(not isinstance(e, int) or e < 0 for e in a):
        raise StructuralError(f"multi-index {a} has a negative or non-integer entry")
    return a


def _same_length(a: Index, b: Index) -> None:
    if len(a) != len(b):
        raise StructuralError(f"multi-index length mismatch: {a} vs {b}")


def zero(n: int) -> Index:
    return (0,) * n


def unit(n: int, k: int) -> Index:
    """Unit index e_k, direction k in 1..n."""
    if not 1 <= k <= n:
        raise StructuralError(f"direction {k} out of range 1..{n}")
    return tuple(1 if t == k - 1 else 0 for t in range(n))


def order(a: Index) -> int:
    """Total order |a|."""
    return sum(a)


def add(a: Index, b: Index) -> Index:
    _same_length(a, b)
    return tuple(x + y for x, y in zip(a, b))


def join(a: Index, b: Index) -> Index:
    """Componentwise maximum."""
    _same_length(a, b)
    return tuple(max(x, y) for x, y in zip(a, b))


def diamond(a: Index, b: Index) -> Index:
    """The shift with a + diamond(a, b) == join(a, b)."""
    _same_length(a, b)
    return tuple(max(x, y) - x for x, y in zip(a, b))


def try_subtract(a: Index, b: Index) -> Optional[Index]:
    """b - a when b dominates a componentwise, else None."""
    _same_length(a, b)
    if any(y < x for x, y in zip(a, b)):
        return None
    return tuple(y - x for x, y in zip(a, b))


def iter_up_to_order(n: int, bound: int) -> Iterator[Index]:
    """All multi-indices of length n with total order <= bound, graded then
    lexicographic, ascending."""
    for total in range(bound + 1):
        for a in product(range(total + 1), repeat=n):
            if sum(a) == total:
                yield a
