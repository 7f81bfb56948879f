"""Random test objects: rationals, invertible matrices, GL_n(Z_(p)) and SL_2 elements.

GL_n(Z_(p)) elements are built as products of elementary matrices with
integral multipliers, unit diagonals and swaps, so no rejection is needed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .matrices import Matrix, det, diag, elementary, identity, mul, swap_matrix


def random_rational(rng: random.Random, bound: int = 10**4) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


def random_nonzero_rational(rng: random.Random, bound: int = 10**4) -> Fraction:
    while True:
        x = random_rational(rng, bound)
        if x:
            return x


def random_integral(rng: random.Random, p: int, bound: int = 9) -> Fraction:
    """Element of Z_(p): denominator prime to p."""
    while True:
        den = rng.randint(1, bound)
        if den % p:
            return Fraction(rng.randint(-bound, bound), den)


def random_unit(rng: random.Random, p: int, bound: int = 9) -> Fraction:
    while True:
        x = random_integral(rng, p, bound)
        if x and x.numerator % p:
            return x


def random_invertible(rng: random.Random, n: int, bound: int = 10**4) -> Matrix:
    while True:
        g = Matrix([[random_rational(rng, bound) for _ in range(n)] for _ in range(n)])
        if det(g) != 0:
            return g


def random_glr(rng: random.Random, n: int, p: int, steps: int = 4) -> Matrix:
    g = diag([random_unit(rng, p) for _ in range(n)])
    for _ in range(steps):
        op = rng.randrange(3) if n > 1 else 2
        if op == 0:
            i, j = rng.sample(range(n), 2)
            g = mul(elementary(n, i, j, random_integral(rng, p)), g)
        elif op == 1:
            i, j = rng.sample(range(n), 2)
            g = mul(g, swap_matrix(n, i, j))
        else:
            g = mul(g, diag([random_unit(rng, p) for _ in range(n)]))
    return g


def random_sl2(rng: random.Random, steps: int = 4, bound: int = 30) -> Matrix:
    """Product of rational transvections; det exactly 1, entries not integral."""
    g = identity(2)
    for _ in range(steps):
        c = random_nonzero_rational(rng, bound)
        i, j = rng.choice(((0, 1), (1, 0)))
        g = mul(g, elementary(2, i, j, c))
    return g


def random_scalar_matrix(rng: random.Random, p: int, n: int = 2) -> Matrix:
    alpha = Fraction(p) ** rng.randint(-3, 3) * random_unit(rng, p)
    return diag([alpha] * n)
