"""Exact combinatorial primitives.

Counts are plain Python ints (unbounded), rationals are
:class:`fractions.Fraction`. Floats only appear in the Stirling helpers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .errors import RangeError, ResourceError

DEFAULT_COMPOSITION_CAP = 10**7


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def compositions(k: int, s: int) -> Iterator[tuple[int, ...]]:
    """Yield every k-tuple of nonnegative ints summing to s, lexicographically."""
    if k < 1:
        raise ValueError(f"compositions needs k >= 1, got {k}")
    if s < 0:
        raise ValueError(f"compositions needs s >= 0, got {s}")

    prefix: list[int] = []

    def rec(parts_left: int, remaining: int) -> Iterator[tuple[int, ...]]:
        if parts_left == 1:
            yield (*prefix, remaining)
            return
        for first in range(remaining + 1):
            prefix.append(first)
            yield from rec(parts_left - 1, remaining - first)
            prefix.pop()

    yield from rec(k, s)


def composition_count(k: int, s: int) -> int:
    return binomial(s + k - 1, k - 1)


def composition_product_sum(k: int, s: int, B: int, cap: int = DEFAULT_COMPOSITION_CAP) -> int:
    """Sum over compositions (d_1..d_k) of s of prod C(B, d_i), by enumeration.

    Equals C(B*k, s) by Vandermonde; this routine exists to check that
    identity the slow way, so it refuses jobs larger than ``cap`` tuples.
    """
    if k < 1 or s < 0:
        raise ValueError(f"need k >= 1 and s >= 0, got k={k}, s={s}")
    n_tuples = composition_count(k, s)
    if n_tuples > cap:
        raise ResourceError(f"{n_tuples} compositions of {s} into {k} parts exceeds cap {cap}")
    row = [binomial(B, d) for d in range(s + 1)]
    total = 0
    for comp in compositions(k, s):
        prod = 1
        for d in comp:
            prod *= row[d]
            if not prod:
                break
        total += prod
    return total


def stirling_factorial_lower(n: int) -> float:
    """sqrt(2*pi*n) * (n/e)**n, a lower bound on n!."""
    if n < 1:
        raise ValueError(f"stirling_factorial_lower needs n >= 1, got {n}")
    try:
        return math.sqrt(2 * math.pi * n) * (n / math.e) ** n
    except OverflowError as exc:
        raise RangeError(f"Stirling value for n={n} overflows a double") from exc


def ceil_fraction(q: Fraction | int) -> int:
    return -((-q.numerator) // q.denominator) if isinstance(q, Fraction) else int(q)


def to_fraction(value: Fraction | int | float | str) -> Fraction:
    """Exact rational from user input; floats go through their shortest repr."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    return Fraction(value)


def format_count(value: int) -> str:
    return str(value)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den) if den else 1)
