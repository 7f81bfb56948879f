"""Z_(p)-lattices in Q^2, their homothety classes, distances and the GL_2 action.

A lattice is stored by a basis matrix whose columns span it.  Equality is
decided through a Hermite-type normal form: every lattice has a unique basis
of the shape

    (p**a, b), (0, p**c)        with b in [0, p**c) and p-power denominator,

i.e. the basis matrix [[p**a, 0], [b, p**c]].  ``CanonicalLattice`` stores the
triple (a, c, b).  Homothety shifts a and c by the same integer, so each
vertex of the tree has exactly one canonical lattice with min(a, c) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cartan import cartan_decompose
from .matrices import Matrix, NotInvertible, det, in_GLnR, inverse, mul
from .valued import (
    INF,
    Scalar,
    check_prime,
    format_scalar,
    parse_scalar,
    reduce_mod,
    unit_part,
    valuation,
)

Vector = Sequence[Scalar]


@dataclass(frozen=True)
class LatticeRep:
    """Lattice spanned over Z_(p) by the columns of an invertible 2x2 matrix."""

    basis: Matrix

    def __post_init__(self):
        if self.basis.n != 2:
            raise ValueError("lattices live in Q^2")
        if det(self.basis) == 0:
            raise NotInvertible("basis of a lattice must be invertible")

    @classmethod
    def from_columns(cls, e: Vector, f: Vector) -> "LatticeRep":
        return cls(Matrix([[e[0], f[0]], [e[1], f[1]]]))

    @classmethod
    def standard(cls) -> "LatticeRep":
        return cls(Matrix([[1, 0], [0, 1]]))

    def scaled(self, alpha: Scalar) -> "LatticeRep":
        return LatticeRep(self.basis.scaled(alpha))

    def columns(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        return self.basis.column(0), self.basis.column(1)


@dataclass(frozen=True, order=True)
class CanonicalLattice:
    a: int
    c: int
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "b", Fraction(self.b))
        if not 0 <= self.b:
            raise ValueError("b must be non-negative")

    def basis(self, p: int) -> Matrix:
        P = Fraction(p)
        return Matrix([[P**self.a, 0], [self.b, P**self.c]])

    def lattice(self, p: int) -> LatticeRep:
        return LatticeRep(self.basis(p))

    def triple(self) -> tuple[int, int, Fraction]:
        return (self.a, self.c, self.b)

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.c), format_scalar(self.b)]

    @classmethod
    def from_json(cls, data) -> "CanonicalLattice":
        a, c, b = _parse_triple(data)
        return cls(a, c, b)


@dataclass(frozen=True, order=True)
class Vertex(CanonicalLattice):
    """Canonical lattice normalised by homothety: min(a, c) == 0."""

    def __post_init__(self):
        super().__post_init__()
        if min(self.a, self.c) != 0:
            raise ValueError(f"vertex triple needs min(a, c) == 0, got {self.triple()}")

    def __str__(self):
        return "(" + ",".join(self.to_json()) + ")"


def _parse_triple(data) -> tuple[int, int, Fraction]:
    if isinstance(data, str):
        data = data.strip().strip("()[]").split(",")
    if not isinstance(data, (list, tuple)) or len(data) != 3:
        raise ValueError(f"expected a triple (a, c, b), got {data!r}")
    a, c, b = (parse_scalar(x if not isinstance(x, str) else x.strip()) for x in data)
    if a.denominator != 1 or c.denominator != 1:
        raise ValueError("a and c must be integers")
    return int(a), int(c), b


def standard_vertex() -> Vertex:
    return Vertex(0, 0, Fraction(0))


def is_lattice(generators: Sequence[Vector]) -> bool:
    """A finite generating set spans a lattice iff it has rank 2 over Q."""
    gens = [tuple(Fraction(x) for x in v) for v in generators]
    if any(len(v) != 2 for v in gens):
        raise ValueError("generators must be vectors in Q^2")
    for i, u in enumerate(gens):
        for v in gens[i + 1 :]:
            if u[0] * v[1] - u[1] * v[0] != 0:
                return True
    return False


def _hermite(gens: list[list[Fraction]], p: int) -> CanonicalLattice:
    """Column reduction over Z_(p) of an arbitrary generating list."""
    # first coordinate: its ideal is generated by an entry of minimal valuation
    tops = [(valuation(v[0], p), i) for i, v in enumerate(gens) if v[0] != 0]
    if not tops:
        raise ValueError("generators do not span a lattice")
    _, k = min(tops)
    e = gens[k]
    rest = []
    for i, v in enumerate(gens):
        if i != k:
            c = v[0] / e[0]
            rest.append(v[1] - c * e[1])
    # remaining vectors are (0, y); their ideal gives p**c
    bottoms = [(valuation(y, p), y) for y in rest if y != 0]
    if not bottoms:
        raise ValueError("generators do not span a lattice")
    c_exp, _ = min(bottoms)
    u = unit_part(e[0], p)
    a_exp = valuation(e[0], p)
    b = reduce_mod(e[1] / u, p, c_exp)
    return CanonicalLattice(a_exp, c_exp, b)


def lattice_from_generators(generators: Sequence[Vector], p: int) -> CanonicalLattice:
    check_prime(p)
    gens = [[Fraction(x) for x in v] for v in generators]
    if not is_lattice(gens):
        raise ValueError("generators do not span a lattice")
    return _hermite(gens, p)


def canonicalize(L: LatticeRep, p: int) -> CanonicalLattice:
    check_prime(p)
    e, f = L.columns()
    return _hermite([list(e), list(f)], p)


def _as_canonical(L, p) -> CanonicalLattice:
    if isinstance(L, CanonicalLattice):
        return L
    return canonicalize(L, p)


def vertex_of_canonical(L: CanonicalLattice, p: int) -> Vertex:
    m = min(L.a, L.c)
    b = reduce_mod(L.b / Fraction(p) ** m, p, L.c - m)
    return Vertex(L.a - m, L.c - m, b)


def vertex_of(L: LatticeRep | CanonicalLattice, p: int) -> Vertex:
    return vertex_of_canonical(_as_canonical(L, p), p)


def _basis(L, p) -> Matrix:
    if isinstance(L, LatticeRep):
        return L.basis
    return L.basis(p)


def contains(L: LatticeRep | CanonicalLattice, M: LatticeRep | CanonicalLattice, p: int) -> bool:
    """M is a subset of L: the coordinates of M's basis in L's basis are integral."""
    coords = mul(inverse(_basis(L, p)), _basis(M, p))
    return all(x.denominator % p != 0 for x in coords.entries())


def contains_vector(L: LatticeRep | CanonicalLattice, v: Vector, p: int) -> bool:
    inv = inverse(_basis(L, p))
    x = [Fraction(v[0]), Fraction(v[1])]
    coords = [inv[i, 0] * x[0] + inv[i, 1] * x[1] for i in range(2)]
    return all(t.denominator % p != 0 for t in coords)


@dataclass(frozen=True)
class NormalBasisPair:
    """Basis (e, f) of M with (p**f0 e, p**f1 f) a basis of L, f0 >= f1."""

    basisM: Matrix
    f: tuple[int, int]

    def basisL(self, p: int) -> Matrix:
        P = Fraction(p)
        e, f = self.basisM.column(0), self.basisM.column(1)
        s, t = P ** self.f[0], P ** self.f[1]
        return Matrix([[s * e[0], t * f[0]], [s * e[1], t * f[1]]])


def normal_basis_pair(M: LatticeRep, L: LatticeRep, p: int) -> NormalBasisPair:
    g, h = _basis(M, p), _basis(L, p)
    fact = cartan_decompose(mul(inverse(g), h), p)
    # k1 g^-1 h k2 = D  =>  h k2 = (g k1^-1) D
    return NormalBasisPair(basisM=mul(g, inverse(fact.k1)), f=tuple(fact.f))


def exponents(M, L, p: int) -> tuple[int, int]:
    return normal_basis_pair(M, L, p).f


def dist(M: LatticeRep | CanonicalLattice, L: LatticeRep | CanonicalLattice, p: int) -> int:
    f0, f1 = normal_basis_pair(M, L, p).f
    return f0 - f1


def vertex_dist(v: Vertex, w: Vertex, p: int) -> int:
    return dist(v, w, p)


def act(g: Matrix, L: LatticeRep) -> LatticeRep:
    return LatticeRep(mul(g, L.basis))


def act_vertex(g: Matrix, v: Vertex, p: int) -> Vertex:
    return vertex_of(LatticeRep(mul(g, v.basis(p))), p)


def lattice_valuation(L: LatticeRep | CanonicalLattice, p: int) -> int:
    if isinstance(L, CanonicalLattice):
        return L.a + L.c
    return valuation(det(L.basis), p)


def is_even(L: LatticeRep | CanonicalLattice, p: int) -> bool:
    return lattice_valuation(L, p) % 2 == 0


def in_stabilizer_form(g: Matrix, p: int) -> bool:
    """g lies in Q^x * GL_2(Z_(p))."""
    m = min(valuation(x, p) for x in g.entries())
    if m == INF:
        return False
    return in_GLnR(g.scaled(Fraction(p) ** -m), p)
