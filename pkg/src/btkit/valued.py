"""Rational numbers with a p-adic valuation.

The field is Q with the additive valuation v_p, the valuation ring is Z
localised at p.  Completeness plays no role anywhere in this package, so no
p-adic expansions are ever formed and all arithmetic is exact.

Valuations are additive throughout: v(p) = 1, v(0) = inf.  A larger norm
corresponds to a smaller additive valuation, so "entry of maximal norm"
translates to "entry of minimal valuation".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Scalar = Union[int, Fraction]

INF = math.inf

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=64)
def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or p >= 2**64 or not is_prime(p):
        raise ValueError(f"{p!r} is not a supported prime")
    return p


@dataclass(frozen=True)
class PrimeConfig:
    """The uniformiser p of Z_(p); validated on construction."""

    p: int

    def __post_init__(self):
        check_prime(self.p)


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def valuation(x: Scalar, p: int) -> int | float:
    """Return v_p(x), or ``INF`` for zero."""
    check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def is_in_R(x: Scalar, p: int) -> bool:
    check_prime(p)
    return Fraction(x).denominator % p != 0


def is_unit(x: Scalar, p: int) -> bool:
    # unit of Z_(p): valuation exactly zero
    return x != 0 and valuation(x, p) == 0


def unit_part(x: Scalar, p: int) -> Fraction:
    """Return u with x = u * p**v(x) and v(u) = 0."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no unit part")
    return x / Fraction(p) ** valuation(x, p)


def reduce_mod(x: Scalar, p: int, c: int) -> Fraction:
    """Canonical representative of x modulo p**c * Z_(p).

    The result lies in [0, p**c) and its denominator is a power of p.  Every
    class of Q / p**c Z_(p) has exactly one such representative.
    """
    check_prime(p)
    y = Fraction(x) / Fraction(p) ** c
    n, d = y.numerator, y.denominator
    s = _vp_int(d, p)
    if s == 0:
        return Fraction(0)
    ps = p**s
    r = Fraction(n * pow(d // ps, -1, ps) % ps, ps)
    return r * Fraction(p) ** c


def format_scalar(x: Scalar) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_scalar(text: str | int) -> Fraction:
    if isinstance(text, bool):
        raise ValueError(f"not a scalar: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a scalar: {text!r}")
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a scalar: {text!r}") from exc
    if "." in text or "e" in text.lower():
        raise ValueError(f"scalars must be written as num/den: {text!r}")
    return value
