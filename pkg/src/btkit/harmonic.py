"""Weighted Laplacians on graphs and the explicit right inverse on tree balls.

For a weight w: V -> A^x and an edge function h with values in an A-module,

    (laplace_w h)(v) = w(v) * sum of h(e) over edges e containing v.

On a finite ball of a tree this is only meaningful at interior vertices,
where every incident edge is present.  ``laplace_preimage`` builds, level by
level away from the root, an h with laplace_w h = f on the interior: each
vertex v pushes w(v)^-1 f(v) - h(o_v) onto one fixed outward edge d_v and
zero onto the others, where o_v is the edge from v towards the root.

``finite_graph_laplace_solve`` solves the same equations by exact rational
elimination on any finite graph and returns a left-kernel certificate when
they are inconsistent (e.g. on even cycles).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Callable, Mapping, Sequence

from .lattices import is_even
from .tree import Ball, vertex_permutation
from .matrices import Matrix


class IncompleteIncidence(ValueError):
    pass


# -- coefficient modules ---------------------------------------------------


class IntegerModule:
    """A = M = Z."""

    modulus = None
    zero = 0

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, a, x):
        return a * x

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def unit_inverse(self, a):
        if not self.is_unit(a):
            raise ValueError(f"{a} is not a unit")
        return a

    def normalize(self, x):
        return x

    def random_element(self, rng: random.Random, bound: int = 20):
        return rng.randint(-bound, bound)

    def random_unit(self, rng: random.Random):
        return rng.choice((1, -1))

    def to_json(self, x):
        return str(x)

    def from_json(self, x):
        return int(x)

    def __repr__(self):
        return "IntegerModule()"


class ZModN(IntegerModule):
    """A = M = Z/NZ, elements stored as residues in [0, N)."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("modulus must be at least 2")
        self.modulus = n
        self.zero = 0

    def add(self, x, y):
        return (x + y) % self.modulus

    def neg(self, x):
        return -x % self.modulus

    def scale(self, a, x):
        return a * x % self.modulus

    def is_unit(self, a) -> bool:
        return gcd(a, self.modulus) == 1

    def unit_inverse(self, a):
        return pow(a, -1, self.modulus)

    def normalize(self, x):
        return x % self.modulus

    def random_element(self, rng, bound=None):
        return rng.randrange(self.modulus)

    def random_unit(self, rng):
        while True:
            a = rng.randrange(1, self.modulus)
            if self.is_unit(a):
                return a

    def __repr__(self):
        return f"ZModN({self.modulus})"


class ProductModule:
    """M = base**k with componentwise operations; scalars act diagonally."""

    def __init__(self, base: IntegerModule, k: int):
        self.base = base
        self.k = k
        self.modulus = base.modulus
        self.zero = (base.zero,) * k

    def add(self, x, y):
        return tuple(self.base.add(a, b) for a, b in zip(x, y))

    def neg(self, x):
        return tuple(self.base.neg(a) for a in x)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, a, x):
        return tuple(self.base.scale(a, t) for t in x)

    def is_unit(self, a):
        return self.base.is_unit(a)

    def unit_inverse(self, a):
        return self.base.unit_inverse(a)

    def normalize(self, x):
        return tuple(self.base.normalize(t) for t in x)

    def random_element(self, rng, bound=20):
        return tuple(self.base.random_element(rng, bound) for _ in range(self.k))

    def random_unit(self, rng):
        return self.base.random_unit(rng)

    def to_json(self, x):
        return [self.base.to_json(t) for t in x]

    def from_json(self, x):
        return tuple(self.base.from_json(t) for t in x)

    def __repr__(self):
        return f"ProductModule({self.base!r}, {self.k})"


INTEGERS = IntegerModule()


# -- weights ---------------------------------------------------------------


@dataclass(frozen=True)
class WeightFunction:
    """Per-vertex units of A together with their inverses."""

    values: tuple
    inverses: tuple
    modulus: int | None = None

    def __post_init__(self):
        if len(self.values) != len(self.inverses):
            raise ValueError("values and inverses differ in length")
        for u, v in zip(self.values, self.inverses):
            prod = u * v
            ok = prod == 1 if self.modulus is None else (prod - 1) % self.modulus == 0
            if not ok:
                raise ValueError(f"{v} is not an inverse of {u}")

    @classmethod
    def of_units(cls, values: Sequence, module=INTEGERS) -> "WeightFunction":
        values = tuple(values)
        return cls(values, tuple(module.unit_inverse(u) for u in values), module.modulus)

    def __len__(self):
        return len(self.values)


def trivial_weight(n: int, module=INTEGERS) -> WeightFunction:
    return WeightFunction.of_units([1] * n, module)


def w_par(v, p: int) -> int:
    """+1 on even vertices, -1 on odd ones."""
    return 1 if is_even(v, p) else -1


def parity_weight(b: Ball, module=INTEGERS) -> WeightFunction:
    return WeightFunction.of_units([w_par(v, b.p) for v in b.vertices], module)


def random_unit_weight(n: int, rng: random.Random, module=INTEGERS) -> WeightFunction:
    return WeightFunction.of_units([module.random_unit(rng) for _ in range(n)], module)


# -- graphs ----------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGraph:
    """Simple undirected graph on vertices 0..n-1."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    incident: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple((min(i, j), max(i, j)) for i, j in self.edges)
        if any(i == j for i, j in edges):
            raise ValueError("loops are not allowed")
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edge")
        if any(not (0 <= i < self.num_vertices and 0 <= j < self.num_vertices) for i, j in edges):
            raise ValueError("edge endpoint out of range")
        object.__setattr__(self, "edges", edges)
        inc: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for k, (i, j) in enumerate(edges):
            inc[i].append(k)
            inc[j].append(k)
        object.__setattr__(self, "incident", tuple(tuple(x) for x in inc))

    @classmethod
    def cycle(cls, n: int) -> "FiniteGraph":
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "FiniteGraph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def from_ball(cls, b: Ball) -> "FiniteGraph":
        return cls(b.num_vertices, b.edges)

    def interior(self) -> list[int]:
        return list(range(self.num_vertices))

    def sort_key(self, i: int):
        return i


def _other(edge: tuple[int, int], v: int) -> int:
    i, j = edge
    return j if i == v else i


# -- laplacian -------------------------------------------------------------


def _value_at(f, v):
    try:
        return f[v]
    except (KeyError, IndexError):
        raise KeyError(f"vertex function has no value at vertex {v}") from None


def laplace(
    graph: Ball | FiniteGraph,
    w: WeightFunction,
    h: Sequence,
    module=INTEGERS,
    at: Sequence[int] | None = None,
) -> dict[int, Any]:
    """Evaluate laplace_w h at the interior vertices (or at the given ones)."""
    if len(h) != len(graph.edges):
        raise ValueError("cochain is not defined on exactly the graph's edges")
    interior = graph.interior()
    allowed = set(interior)
    targets = interior if at is None else list(at)
    out = {}
    for v in targets:
        if v not in allowed:
            raise IncompleteIncidence(f"incomplete incidence at vertex {v}")
        total = module.zero
        for k in graph.incident[v]:
            total = module.add(total, h[k])
        out[v] = module.scale(w.values[v], total)
    return out


def is_harmonic(b: Ball, h: Sequence, module=INTEGERS) -> bool:
    """h lies in the kernel of the parity-weighted Laplacian on the interior."""
    values = laplace(b, parity_weight(b, module), h, module)
    zero = module.normalize(module.zero)
    return all(module.normalize(x) == zero for x in values.values())


def weight_factorization_check(b, w: WeightFunction, h: Sequence, module=INTEGERS) -> bool:
    """laplace_w h == w * laplace_1 h pointwise on the interior."""
    weighted = laplace(b, w, h, module)
    plain = laplace(b, trivial_weight(len(w), module), h, module)
    return all(
        module.normalize(weighted[v]) == module.normalize(module.scale(w.values[v], plain[v]))
        for v in weighted
    )


# -- orientation and the preimage -----------------------------------------


@dataclass(frozen=True)
class OrientedEdgeInfo:
    """Edges oriented away from a root of a tree.

    ``inbound[v]`` is the edge o_v pointing from v towards the root (None at
    the root); ``outward[v]`` lists Out_v sorted by the target's sort key.
    """

    root: int
    depth: tuple[int, ...]
    source: tuple[int, ...]
    target: tuple[int, ...]
    inbound: tuple[int | None, ...]
    outward: tuple[tuple[int, ...], ...]


def _is_tree(graph) -> bool:
    n = graph.num_vertices
    if n == 0 or len(graph.edges) != n - 1:
        return False
    return all(d is not None for d in _depths(graph, 0))


def _depths(graph, root):
    depth: list[int | None] = [None] * graph.num_vertices
    depth[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for k in graph.incident[u]:
            w = _other(graph.edges[k], u)
            if depth[w] is None:
                depth[w] = depth[u] + 1
                queue.append(w)
    return depth


def orient(graph: Ball | FiniteGraph, root: int = 0) -> OrientedEdgeInfo:
    if not _is_tree(graph):
        raise ValueError("orientation needs a tree")
    depth = _depths(graph, root)
    source, target = [], []
    inbound: list[int | None] = [None] * graph.num_vertices
    outward: list[list[int]] = [[] for _ in range(graph.num_vertices)]
    for k, (i, j) in enumerate(graph.edges):
        s, t = (i, j) if depth[i] < depth[j] else (j, i)
        source.append(s)
        target.append(t)
        inbound[t] = k
        outward[s].append(k)
    for cone in outward:
        cone.sort(key=lambda k: graph.sort_key(target[k]))
    return OrientedEdgeInfo(
        root=root,
        depth=tuple(depth),
        source=tuple(source),
        target=tuple(target),
        inbound=tuple(inbound),
        outward=tuple(tuple(c) for c in outward),
    )


def distinguished_edge(v: int, oriented: OrientedEdgeInfo) -> int:
    """The outward edge of v whose target sorts first."""
    cone = oriented.outward[v]
    if not cone:
        raise ValueError("leaf has no outward edge")
    return cone[0]


def laplace_preimage(
    b: Ball | FiniteGraph,
    w: WeightFunction,
    f: Mapping[int, Any] | Sequence,
    module=INTEGERS,
    choose: Callable[[int, OrientedEdgeInfo], int] = distinguished_edge,
    radius: int | None = None,
) -> list:
    """Edge function h with laplace_w h = f at every vertex of depth < radius.

    Edges are filled in order of their target's depth.  An edge e with
    source v gets w(v)^-1 f(v) - h(o_v) if it is v's distinguished edge and 0
    otherwise (o_v is absent at the root).  Edges farther out than the radius
    keep the value 0.
    """
    if radius is None:
        radius = getattr(b, "radius", None)
    if radius is None or radius < 1:
        raise ValueError("preimage needs radius >= 1")
    info = orient(b)
    for v, d in enumerate(info.depth):
        if d < radius and not info.outward[v]:
            raise ValueError(f"leaf has no outward edge (vertex {v} at depth {d})")
    h = [module.zero] * len(b.edges)
    by_level: dict[int, list[int]] = {}
    for k, t in enumerate(info.target):
        by_level.setdefault(info.depth[t], []).append(k)
    chosen: dict[int, int] = {}
    for level in range(1, radius + 1):
        for k in by_level.get(level, ()):
            v = info.source[k]
            if v not in chosen:
                chosen[v] = choose(v, info)
            if k != chosen[v]:
                continue
            value = module.scale(w.inverses[v], _value_at(f, v))
            if info.inbound[v] is not None:
                value = module.sub(value, h[info.inbound[v]])
            h[k] = value
        if __debug__:
            for v in {info.source[k] for k in by_level.get(level, ())}:
                total = module.zero
                for k in b.incident[v]:
                    total = module.add(total, h[k])
                lhs = module.normalize(module.scale(w.values[v], total))
                assert lhs == module.normalize(_value_at(f, v)), f"identity fails at {v}"
    return h


# -- exact solve on arbitrary finite graphs --------------------------------


@dataclass(frozen=True)
class SolveResult:
    """Either a solution h or a certificate y with y^T A = 0 and y . f != 0."""

    feasible: bool
    solution: tuple[Fraction, ...] | None = None
    certificate: dict[int, Fraction] | None = None


def laplace_system(graph, w: WeightFunction, rows: Sequence[int]) -> list[list[Fraction]]:
    """Coefficient matrix of laplace_w restricted to the given vertex rows."""
    m = [[Fraction(0)] * len(graph.edges) for _ in rows]
    for r, v in enumerate(rows):
        for k in graph.incident[v]:
            m[r][k] = Fraction(w.values[v])
    return m


def finite_graph_laplace_solve(
    graph: Ball | FiniteGraph, w: WeightFunction, f: Mapping[int, Any] | Sequence
) -> SolveResult:
    """Solve laplace_w h = f over Q at the vertices where f is given."""
    if isinstance(f, Mapping):
        rows = sorted(f)
        rhs = [Fraction(f[v]) for v in rows]
    else:
        rows = list(range(len(f)))
        rhs = [Fraction(x) for x in f]
    a = laplace_system(graph, w, rows)
    n_rows, n_cols = len(rows), len(graph.edges)
    # augmented with the identity to track row combinations
    aug = [
        a[r] + [rhs[r]] + [Fraction(int(r == s)) for s in range(n_rows)] for r in range(n_rows)
    ]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if aug[i][n_cols] != 0:
            y = {rows[s]: aug[i][n_cols + 1 + s] for s in range(n_rows) if aug[i][n_cols + 1 + s] != 0}
            return SolveResult(feasible=False, certificate=y)
    h = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        h[c] = aug[i][n_cols]
    return SolveResult(feasible=True, solution=tuple(h))


def verify_certificate(graph, w: WeightFunction, f: Mapping[int, Any], y: Mapping[int, Fraction]) -> bool:
    """y kills every column of the system and pairs non-trivially with f."""
    rows = sorted(f)
    a = laplace_system(graph, w, rows)
    for k in range(len(graph.edges)):
        if sum(y.get(v, 0) * a[r][k] for r, v in enumerate(rows)) != 0:
            return False
    return sum(y.get(v, 0) * Fraction(f[v]) for v in rows) != 0


# -- transport along the stabiliser ---------------------------------------


def edge_permutation(b: Ball, g: Matrix) -> list[int]:
    """Edge index map k -> index of g . edges[k]; g must preserve the ball."""
    perm = vertex_permutation(b, g)
    lookup = {e: k for k, e in enumerate(b.edges)}
    out = []
    for i, j in b.edges:
        gi, gj = perm[i], perm[j]
        out.append(lookup[(gi, gj)] if (gi, gj) in lookup else lookup[(gj, gi)])
    return out


def pull_back_cochain(b: Ball, h: Sequence, g: Matrix) -> list:
    """(h o g)(e) = h(g . e)."""
    return [h[k] for k in edge_permutation(b, g)]


__all__ = [
    "FiniteGraph",
    "INTEGERS",
    "IncompleteIncidence",
    "IntegerModule",
    "OrientedEdgeInfo",
    "ProductModule",
    "SolveResult",
    "WeightFunction",
    "ZModN",
    "distinguished_edge",
    "edge_permutation",
    "finite_graph_laplace_solve",
    "is_harmonic",
    "laplace",
    "laplace_preimage",
    "laplace_system",
    "orient",
    "parity_weight",
    "pull_back_cochain",
    "random_unit_weight",
    "trivial_weight",
    "verify_certificate",
    "w_par",
    "weight_factorization_check",
]
