"""Cartan decomposition of GL_n(Q) with respect to GL_n(Z_(p)).

Every invertible g can be written k1 * g * k2 = diag(p**f_0, ..., p**f_{n-1})
with k1, k2 in GL_n(Z_(p)) and f_0 >= ... >= f_{n-1}; the tuple f is unique.

The existence proof is a Gaussian elimination: move an entry of minimal
valuation to the bottom-right corner, clear its row and column (the
multipliers are integral because the pivot has minimal valuation), and
repeat on the leading block.  ``invariant_exponents_oracle`` recovers f from
minors alone and shares no code with the elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .matrices import (
    Matrix,
    NotInvertible,
    diag,
    in_GLnR,
    is_diagonal,
)
from .valued import INF, check_prime, unit_part, valuation


@dataclass(frozen=True)
class CartanFactorisation:
    k1: Matrix
    k2: Matrix
    f: tuple[int, ...]

    def diagonal(self, p: int) -> Matrix:
        return diag([Fraction(p) ** e for e in self.f])

    def verify(self, g: Matrix, p: int) -> bool:
        """Check every invariant of the factorisation against g."""
        return (
            in_GLnR(self.k1, p)
            and in_GLnR(self.k2, p)
            and all(a >= b for a, b in zip(self.f, self.f[1:]))
            and self.k1 @ g @ self.k2 == self.diagonal(p)
        )


class _Reducer:
    """Running state A = K1 * g * K2 on plain lists of Fractions."""

    def __init__(self, g: Matrix, p: int):
        self.p = p
        self.n = n = g.n
        self.a = g.to_lists()
        self.k1 = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        self.k2 = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap_rows(self, i, j):
        if i != j:
            for m in (self.a, self.k1):
                m[i], m[j] = m[j], m[i]

    def swap_cols(self, i, j):
        if i != j:
            for m in (self.a, self.k2):
                for row in m:
                    row[i], row[j] = row[j], row[i]

    def add_row(self, target, source, c):
        for m in (self.a, self.k1):
            src = m[source]
            m[target] = [x + c * y for x, y in zip(m[target], src)]

    def add_col(self, target, source, c):
        for m in (self.a, self.k2):
            for row in m:
                row[target] += c * row[source]

    def scale_row(self, i, c):
        for m in (self.a, self.k1):
            m[i] = [c * x for x in m[i]]

    def normalize_corner(self, size):
        """Bring an entry of minimal valuation in the leading size x size block
        to position (size-1, size-1).  Ties go to the smallest (row, col)."""
        best, best_v = None, INF
        for i in range(size):
            row = self.a[i]
            for j in range(size):
                if row[j] != 0:
                    v = valuation(row[j], self.p)
                    if v < best_v:
                        best, best_v = (i, j), v
        if best is None:
            raise NotInvertible("not invertible")
        self.swap_rows(best[0], size - 1)
        self.swap_cols(best[1], size - 1)

    def clear_corner(self, size):
        last = size - 1
        pivot = self.a[last][last]
        for i in range(last):
            if self.a[i][last] != 0:
                self.add_row(i, last, -self.a[i][last] / pivot)
        for j in range(last):
            if self.a[last][j] != 0:
                self.add_col(j, last, -self.a[last][j] / pivot)

    def diagonalize(self):
        for size in range(self.n, 0, -1):
            self.normalize_corner(size)
            self.clear_corner(size)
        # antitone by construction already; the sort only guards the invariant
        vals = [valuation(self.a[i][i], self.p) for i in range(self.n)]
        for i in range(self.n):
            j = max(range(i, self.n), key=lambda k: (vals[k], -k))
            if vals[j] > vals[i]:
                self.swap_rows(i, j)
                self.swap_cols(i, j)
                vals[i], vals[j] = vals[j], vals[i]

    def matrices(self):
        return Matrix(self.k1), Matrix(self.k2)


def normalize_corner(g: Matrix, p: int) -> tuple[Matrix, Matrix]:
    """Permutation matrices k1, k2 putting an entry of minimal valuation of g
    at the bottom-right corner of k1 * g * k2."""
    check_prime(p)
    if all(x == 0 for x in g.entries()):
        raise ValueError("zero matrix has no corner normalisation")
    r = _Reducer(g, p)
    r.normalize_corner(g.n)
    return r.matrices()


def reduce_to_monotone_diag(g: Matrix, p: int) -> tuple[Matrix, Matrix]:
    """k1, k2 in GL_n(Z_(p)) with k1 * g * k2 diagonal and its valuations
    non-increasing along the diagonal."""
    check_prime(p)
    r = _Reducer(g, p)
    r.diagonalize()
    return r.matrices()


def cartan_decompose(g: Matrix, p: int) -> CartanFactorisation:
    check_prime(p)
    r = _Reducer(g, p)
    r.diagonalize()
    f = []
    for i in range(g.n):
        d = r.a[i][i]
        f.append(valuation(d, p))
        # absorb the unit part into the left factor
        u = unit_part(d, p)
        if u != 1:
            r.scale_row(i, 1 / u)
    k1, k2 = r.matrices()
    return CartanFactorisation(k1=k1, k2=k2, f=tuple(f))


def _leibniz_det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= m[i][j]
            if term == 0:
                break
        total += term
    return total


def invariant_exponents_oracle(g: Matrix, p: int) -> tuple[int, ...]:
    """Invariant exponents from determinantal divisors.

    e_k is the minimal valuation of the k x k minors; the ascending exponents
    are the successive differences e_k - e_{k-1}.  Returned in antitone order.
    """
    check_prime(p)
    n = g.n
    rows = g.rows
    e = [0]
    for k in range(1, n + 1):
        best = INF
        for ri in combinations(range(n), k):
            for ci in combinations(range(n), k):
                minor = _leibniz_det([[rows[i][j] for j in ci] for i in ri])
                if minor != 0:
                    best = min(best, valuation(minor, p))
        if best == INF:
            raise NotInvertible("not invertible")
        e.append(best)
    ascending = [e[k] - e[k - 1] for k in range(1, n + 1)]
    return tuple(reversed(ascending))


def coarse_decompose(g: Matrix, p: int) -> tuple[Matrix, Matrix, Matrix]:
    """(k1, t, k2) with t = k1 * g * k2 diagonal; valid over any valuation ring."""
    k1, k2 = reduce_to_monotone_diag(g, p)
    t = k1 @ g @ k2
    assert is_diagonal(t)
    return k1, t, k2


__all__ = [
    "CartanFactorisation",
    "NotInvertible",
    "cartan_decompose",
    "coarse_decompose",
    "invariant_exponents_oracle",
    "normalize_corner",
    "reduce_to_monotone_diag",
]
