"""Finite balls in the Bruhat-Tits tree of GL_2(Q) at a prime p.

The tree is never materialised as a whole; ``ball`` runs a BFS from a root
vertex using ``neighbours``, which enumerates the p + 1 lines of the residue
plane L / pL.  Vertex order inside a ball is BFS discovery order, with
neighbours visited in increasing (a, c, b) order, so every derived structure
(edge order, exports, the distinguished edges of the harmonic module) is
reproducible.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .lattices import (
    CanonicalLattice,
    LatticeRep,
    Vertex,
    act_vertex,
    canonicalize,
    in_stabilizer_form,
    is_even,
    standard_vertex,
    vertex_dist,
    vertex_of,
)
from .matrices import Matrix
from .valued import PrimeConfig, check_prime


def is_neighbour(v: Vertex, w: Vertex, p: int) -> bool:
    return vertex_dist(v, w, p) == 1


def standard_neighbours(L: CanonicalLattice | LatticeRep, p: int) -> list[CanonicalLattice]:
    """The p + 1 lattices M with pL < M < L, one per line of L / pL.

    For a basis (e, f) of L the lines are spanned by e + t*f (t = 0..p-1) and
    by f; the corresponding lattices are <e + t*f, p*f> and <f, p*e>.
    """
    check_prime(p)
    basis = L.basis if isinstance(L, LatticeRep) else L.basis(p)
    e, f = basis.column(0), basis.column(1)
    out = []
    for t in range(p):
        v = (e[0] + t * f[0], e[1] + t * f[1])
        out.append(canonicalize(LatticeRep.from_columns(v, (p * f[0], p * f[1])), p))
    out.append(canonicalize(LatticeRep.from_columns(f, (p * e[0], p * e[1])), p))
    return out


def neighbours(v: Vertex, p: int) -> list[Vertex]:
    """Adjacent vertices of v, sorted by (a, c, b)."""
    return sorted(vertex_of(M, p) for M in standard_neighbours(v, p))


class NotInBall(KeyError):
    pass


@dataclass(frozen=True)
class Ball:
    """Vertices within ``radius`` of ``root`` and all tree edges among them.

    ``edges`` holds index pairs (i, j) with vertices[i] < vertices[j] in the
    (a, c, b) order; index 0 is the root.
    """

    p: int
    root: Vertex
    radius: int
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[int, int], ...]

    @cached_property
    def index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in self.vertices]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in self.vertices]
        for k, (i, j) in enumerate(self.edges):
            inc[i].append(k)
            inc[j].append(k)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def depth(self) -> tuple[int | None, ...]:
        """Graph distance to the root inside the ball (None if unreachable)."""
        return tuple(_bfs(self.adjacency, self.index.get(self.root, 0)))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def interior(self) -> list[int]:
        """Vertices whose full neighbourhood lies in the ball."""
        return [i for i, d in enumerate(self.depth) if d is not None and d < self.radius]

    def sort_key(self, i: int):
        return self.vertices[i].triple()

    def edge_key(self, k: int) -> tuple[Vertex, Vertex]:
        i, j = self.edges[k]
        return self.vertices[i], self.vertices[j]

    def parity(self) -> list[int]:
        return [0 if is_even(v, self.p) else 1 for v in self.vertices]


def _bfs(adj, start) -> list[int | None]:
    dist: list[int | None] = [None] * len(adj)
    if not adj:
        return dist
    dist[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _edge(i: int, j: int, vertices) -> tuple[int, int]:
    return (i, j) if vertices[i] < vertices[j] else (j, i)


def ball(root: Vertex, radius: int, p: int) -> Ball:
    PrimeConfig(p)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    vertices: list[Vertex] = [root]
    index = {root: 0}
    depth = [0]
    edges: list[tuple[int, int]] = []
    seen_edges: set[tuple[int, int]] = set()
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in neighbours(vertices[u], p):
            j = index.get(w)
            if j is None:
                if depth[u] >= radius:
                    continue
                j = len(vertices)
                index[w] = j
                vertices.append(w)
                depth.append(depth[u] + 1)
                queue.append(j)
            e = _edge(u, j, vertices)
            if e not in seen_edges:
                seen_edges.add(e)
                edges.append(e)
    return Ball(p=p, root=root, radius=radius, vertices=tuple(vertices), edges=tuple(edges))


def ball_size(p: int, radius: int) -> int:
    """Vertex count of a radius-r ball in a (p+1)-regular tree."""
    if radius == 0:
        return 1
    return 1 + (p + 1) * (p**radius - 1) // (p - 1)


def check_tree(b: Ball) -> bool:
    if not b.vertices:
        return False
    connected = all(d is not None for d in _bfs(b.adjacency, 0))
    return connected and len(set(b.edges)) == len(b.edges) == len(b.vertices) - 1


def graph_dist(b: Ball, v: Vertex, w: Vertex) -> int:
    try:
        i, j = b.index[v], b.index[w]
    except KeyError as exc:
        raise NotInBall(f"vertex {exc.args[0]} is not in the ball") from None
    d = _bfs(b.adjacency, i)[j]
    if d is None:
        raise ValueError("vertices are not connected inside the ball")
    return d


def transitive_witness(v: Vertex, p: int) -> Matrix:
    """g with g . v0 = v: the canonical basis of v's representative."""
    return v.basis(p)


def stabilizes_standard(g: Matrix, p: int) -> bool:
    return in_stabilizer_form(g, p)


def vertex_permutation(b: Ball, g: Matrix) -> list[int]:
    """Index map i -> index of g . vertices[i]; g must map the ball onto itself."""
    out = []
    for v in b.vertices:
        w = act_vertex(g, v, b.p)
        if w not in b.index:
            raise NotInBall(f"{w} leaves the ball")
        out.append(b.index[w])
    return out


def export_dot(b: Ball) -> str:
    parity = b.parity()
    lines = [
        "graph bruhat_tits {",
        f'  graph [p="{b.p}", radius="{b.radius}", root="{b.root}"];',
        "  node [shape=circle];",
    ]
    for i, v in enumerate(b.vertices):
        kind = "odd" if parity[i] else "even"
        lines.append(f'  n{i} [label="{v}", parity="{kind}", depth="{b.depth[i]}"];')
    for i, j in b.edges:
        lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def ball_to_dict(b: Ball) -> dict:
    return {
        "p": b.p,
        "root": b.root.to_json(),
        "radius": b.radius,
        "vertices": [v.to_json() for v in b.vertices],
        "edges": [list(e) for e in b.edges],
        "parity": b.parity(),
    }


def export_json(b: Ball) -> str:
    return json.dumps(ball_to_dict(b), separators=(",", ":"))


def ball_from_dict(data: dict) -> Ball:
    try:
        p = int(data["p"])
        PrimeConfig(p)
        vertices = tuple(Vertex.from_json(v) for v in data["vertices"])
        edges = tuple((int(i), int(j)) for i, j in data["edges"])
        b = Ball(
            p=p,
            root=Vertex.from_json(data["root"]),
            radius=int(data["radius"]),
            vertices=vertices,
            edges=edges,
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ball: {exc}") from exc
    if any(not (0 <= i < len(vertices) and 0 <= j < len(vertices)) for i, j in edges):
        raise ValueError("edge index out of range")
    if "parity" in data and list(data["parity"]) != b.parity():
        raise ValueError("parity field disagrees with the vertices")
    return b


def parse_ball_json(text: str) -> Ball:
    return ball_from_dict(json.loads(text))


def iter_vertex_pairs(b: Ball) -> Iterable[tuple[Vertex, Vertex]]:
    for i, v in enumerate(b.vertices):
        for w in b.vertices[i:]:
            yield v, w


__all__ = [
    "Ball",
    "NotInBall",
    "ball",
    "ball_from_dict",
    "ball_size",
    "ball_to_dict",
    "check_tree",
    "export_dot",
    "export_json",
    "graph_dist",
    "is_neighbour",
    "neighbours",
    "parse_ball_json",
    "stabilizes_standard",
    "standard_neighbours",
    "standard_vertex",
    "transitive_witness",
    "vertex_permutation",
]
