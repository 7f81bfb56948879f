"""Exact square matrices over Q and the GL_n(Z_(p)) predicates."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .valued import INF, Scalar, format_scalar, parse_scalar, valuation


class NotInvertible(ArithmeticError):
    pass


def _exact(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating-point entries are not exact")
    return Fraction(x)


class Matrix:
    """Immutable n x n matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        rows = tuple(tuple(_exact(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _trusted(cls, rows: tuple[tuple[Fraction, ...], ...]) -> "Matrix":
        m = cls.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "_hash", None)
        return m

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.rows))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_scalar(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mul(self, other)

    def scaled(self, c: Scalar) -> "Matrix":
        c = _exact(c)
        return Matrix._trusted(tuple(tuple(c * x for x in r) for r in self.rows))

    def entries(self) -> Iterable[Fraction]:
        for r in self.rows:
            yield from r

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    def to_json(self) -> list[list[str]]:
        return [[format_scalar(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]]) -> "Matrix":
        if not isinstance(data, (list, tuple)):
            raise ValueError("matrix must be a list of rows")
        rows = []
        for row in data:
            if not isinstance(row, (list, tuple)):
                raise ValueError("matrix rows must be lists")
            rows.append([parse_scalar(x) for x in row])
        return cls(rows)


def identity(n: int) -> Matrix:
    one, zero = Fraction(1), Fraction(0)
    return Matrix._trusted(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))


def diag(values: Sequence[Scalar]) -> Matrix:
    n = len(values)
    return Matrix([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])


def zero_matrix(n: int) -> Matrix:
    return Matrix._trusted(tuple((Fraction(0),) * n for _ in range(n)))


def mul(a: Matrix, b: Matrix) -> Matrix:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    cols = list(zip(*b.rows))
    return Matrix._trusted(
        tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in a.rows)
    )


def det(a: Matrix) -> Fraction:
    """Determinant by Gaussian elimination over Q."""
    m = a.to_lists()
    n = a.n
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        pv = m[col][col]
        result *= pv
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] / pv
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return result


def inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises NotInvertible for singular input."""
    n = a.n
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a.rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise NotInvertible("not invertible")
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return Matrix._trusted(tuple(tuple(r[n:]) for r in m))


def swap_matrix(n: int, i: int, j: int) -> Matrix:
    """Permutation matrix exchanging rows i and j under left multiplication."""
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"bad swap indices ({i}, {j}) for n={n}")
    rows = [[int(r == c) for c in range(n)] for r in range(n)]
    rows[i], rows[j] = rows[j], rows[i]
    return Matrix(rows)


def elementary(n: int, i: int, j: int, c: Scalar) -> Matrix:
    """Identity plus c at (i, j); left multiplication adds c * row j to row i."""
    if i == j:
        raise ValueError("elementary matrix needs i != j")
    rows = [[int(r == s) for s in range(n)] for r in range(n)]
    rows[i][j] = c
    return Matrix(rows)


def coeffs_inf_valuation(g: Matrix, p: int) -> int | float:
    """Minimal valuation among the entries (the entry of largest norm)."""
    return min((valuation(x, p) for x in g.entries()), default=INF)


def in_GLnR(g: Matrix, p: int) -> bool:
    if any(x.denominator % p == 0 for x in g.entries()):
        return False
    d = det(g)
    return d != 0 and valuation(d, p) == 0


def is_diagonal(g: Matrix) -> bool:
    return all(g.rows[i][j] == 0 for i in range(g.n) for j in range(g.n) if i != j)


def is_monotone_diag(g: Matrix, p: int) -> bool:
    """Diagonal with additive valuations non-increasing down the diagonal."""
    if not is_diagonal(g):
        return False
    vals = [valuation(g.rows[i][i], p) for i in range(g.n)]
    return all(x >= y for x, y in zip(vals, vals[1:]))
