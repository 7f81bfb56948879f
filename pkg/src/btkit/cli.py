"""Command-line interface.

Every subcommand reads a JSON payload from a file path or stdin (except
``ball`` and ``selftest``) and writes JSON (or DOT) to stdout.  Exact values
travel as strings ("num/den"); exponents, indices and counts are plain JSON
integers.

Exit codes: 0 success (an infeasible ``solve`` is a success reporting
"feasible": false), 1 unreadable or malformed input, 2 domain error such as a
singular matrix.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import harmonic as hm
from .cartan import cartan_decompose, invariant_exponents_oracle
from .lattices import (
    LatticeRep,
    Vertex,
    exponents,
    is_even,
    lattice_from_generators,
    standard_vertex,
    vertex_of,
)
from .matrices import Matrix, NotInvertible, in_GLnR
from .tree import ball, ball_to_dict, check_tree, export_dot, export_json, neighbours
from .valued import PrimeConfig, format_scalar, parse_scalar


class InputError(ValueError):
    pass


class DomainError(ValueError):
    pass


def _load(path: str | None):
    try:
        if path in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read input: {exc}") from exc


def _field(payload, key):
    if isinstance(payload, dict):
        if key not in payload:
            raise InputError(f"missing field {key!r}")
        return payload[key]
    return payload


def _parse(fn, *args):
    try:
        return fn(*args)
    except InputError:
        raise
    except (ValueError, TypeError, KeyError, IndexError, NotInvertible) as exc:
        raise InputError(str(exc)) from exc


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, separators=(",", ":"), sort_keys=False) + "\n")


def _prime(args) -> int:
    try:
        return PrimeConfig(args.p).p
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _root(args) -> Vertex:
    if args.root is None:
        return standard_vertex()
    return _parse(Vertex.from_json, args.root)


# -- subcommands -----------------------------------------------------------


def cmd_cartan(args):
    p = _prime(args)
    g = _parse(Matrix.from_json, _field(_load(args.input), "matrix"))
    try:
        fact = cartan_decompose(g, p)
    except NotInvertible as exc:
        raise DomainError(str(exc)) from exc
    if not fact.verify(g, p):
        raise DomainError("internal check failed")
    _emit(
        {
            "p": p,
            "n": g.n,
            "f": list(fact.f),
            "k1": fact.k1.to_json(),
            "k2": fact.k2.to_json(),
            "oracle_f": list(invariant_exponents_oracle(g, p)),
        }
    )


def cmd_vertex(args):
    p = _prime(args)
    gens = _field(_load(args.input), "generators")
    vectors = _parse(lambda: [[parse_scalar(x) for x in v] for v in gens])
    L = _parse(lattice_from_generators, vectors, p)
    v = vertex_of(L, p)
    _emit({"p": p, "lattice": L.to_json(), "vertex": v.to_json(), "even": is_even(v, p)})


def cmd_dist(args):
    p = _prime(args)
    payload = _load(args.input)
    if not isinstance(payload, dict):
        raise InputError("dist expects {\"a\": matrix, \"b\": matrix}")
    A = _parse(lambda: LatticeRep(Matrix.from_json(payload["a"])))
    B = _parse(lambda: LatticeRep(Matrix.from_json(payload["b"])))
    f0, f1 = exponents(A, B, p)
    _emit({"p": p, "dist": f0 - f1, "exponents": [f0, f1]})


def cmd_neighbours(args):
    p = _prime(args)
    v = _parse(Vertex.from_json, _field(_load(args.input), "vertex"))
    _emit({"p": p, "vertex": v.to_json(), "neighbours": [w.to_json() for w in neighbours(v, p)]})


def cmd_ball(args):
    p = _prime(args)
    b = ball(_root(args), args.radius, p)
    if not check_tree(b):
        raise DomainError("ball is not a tree")
    if args.format == "dot":
        sys.stdout.write(export_dot(b))
    else:
        sys.stdout.write(export_json(b) + "\n")


def _ball_from_payload(args, payload):
    p = _prime(args)
    radius = args.radius if args.radius is not None else payload.get("radius")
    if radius is None:
        raise InputError("radius missing (use --radius or a 'radius' field)")
    root = _parse(Vertex.from_json, payload["root"]) if "root" in payload else _root(args)
    return ball(root, _parse(int, radius), p)


def _weights(args, payload, b_or_graph, n):
    if args.weight == "trivial":
        return hm.trivial_weight(n)
    if args.weight == "parity":
        if not hasattr(b_or_graph, "vertices"):
            raise InputError("parity weights need a tree ball")
        return hm.parity_weight(b_or_graph)
    values = _parse(lambda: [int(x) for x in _field(payload, "weights")])
    if len(values) != n:
        raise InputError("one weight per vertex required")
    try:
        return hm.WeightFunction.of_units(values)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _payload_dict(args):
    payload = _load(args.input)
    if not isinstance(payload, dict):
        raise InputError("expected a JSON object")
    return payload


def cmd_laplace(args):
    payload = _payload_dict(args)
    b = _ball_from_payload(args, payload)
    h = _parse(lambda: [int(x) for x in payload["cochain"]])
    if len(h) != len(b.edges):
        raise InputError(f"cochain needs {len(b.edges)} values")
    w = _weights(args, payload, b, b.num_vertices)
    values = hm.laplace(b, w, h)
    _emit(
        {
            "ball": ball_to_dict(b),
            "values": [str(values[i]) if i in values else None for i in range(b.num_vertices)],
        }
    )


def cmd_preimage(args):
    payload = _payload_dict(args)
    b = _ball_from_payload(args, payload)
    raw = _field(payload, "f")
    if len(raw) != b.num_vertices:
        raise InputError(f"f needs {b.num_vertices} entries (null allowed at the boundary)")
    f = {}
    for i in b.interior():
        if raw[i] is None:
            raise InputError(f"f missing at interior vertex {i}")
        f[i] = _parse(int, raw[i])
    w = _weights(args, payload, b, b.num_vertices)
    try:
        h = hm.laplace_preimage(b, w, f)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    _emit({"ball": ball_to_dict(b), "cochain": [str(x) for x in h]})


def cmd_solve(args):
    payload = _payload_dict(args)
    try:
        n = payload["vertices"]
        n = len(n) if isinstance(n, list) else int(n)
        graph = hm.FiniteGraph(n, tuple((int(i), int(j)) for i, j in payload["edges"]))
        raw = payload["f"]
        if len(raw) != n:
            raise ValueError(f"f needs {n} entries")
        f = {i: parse_scalar(x) for i, x in enumerate(raw) if x is not None}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    w = _weights(args, payload, graph, n)
    res = hm.finite_graph_laplace_solve(graph, w, f)
    if res.feasible:
        _emit({"feasible": True, "solution": [format_scalar(x) for x in res.solution]})
    else:
        cert = [format_scalar(res.certificate.get(i, Fraction(0))) for i in range(n)]
        _emit({"feasible": False, "certificate": cert})


def cmd_selftest(args):
    from .sampling import random_glr, random_invertible

    seed = int(os.environ.get("BTKIT_SEED", "0"))
    p = _prime(args)
    rng = random.Random(seed)
    failures = 0
    trials = args.trials
    for _ in range(trials):
        n = rng.choice((2, 3))
        g = random_invertible(rng, n, bound=50)
        fact = cartan_decompose(g, p)
        r, s = random_glr(rng, n, p), random_glr(rng, n, p)
        ok = (
            fact.verify(g, p)
            and fact.f == invariant_exponents_oracle(g, p)
            and cartan_decompose(r @ g @ s, p).f == fact.f
            and in_GLnR(r, p)
        )
        failures += not ok
    b = ball(standard_vertex(), 3, p)
    w = hm.random_unit_weight(b.num_vertices, rng)
    f = {i: rng.randint(-9, 9) for i in b.interior()}
    h = hm.laplace_preimage(b, w, f)
    failures += hm.laplace(b, w, h) != f
    failures += not check_tree(b)
    _emit({"seed": seed, "p": p, "checks": trials + 2, "failures": int(failures)})
    if failures:
        raise DomainError("self-test failed")


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="btkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, takes_input=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--p", type=int, required=True, help="the prime")
        if takes_input:
            sp.add_argument("input", nargs="?", default="-", help="JSON file, or - for stdin")
        sp.set_defaults(func=fn)
        return sp

    add("cartan", cmd_cartan, "Cartan decomposition of an invertible matrix")
    add("vertex", cmd_vertex, "canonical lattice and vertex of a generating set")
    add("dist", cmd_dist, "distance between two lattices given by basis matrices")
    add("neighbours", cmd_neighbours, "the p+1 neighbours of a vertex")
    sp = add("ball", cmd_ball, "export a ball of the tree", takes_input=False)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--format", choices=("dot", "json"), default="json")
    sp.add_argument("--root", default=None, help="root vertex as a,c,b (default 0,0,0)")
    for name, fn, help_ in (
        ("laplace", cmd_laplace, "evaluate the weighted Laplacian of a cochain on a ball"),
        ("preimage", cmd_preimage, "cochain whose Laplacian is a given vertex function"),
        ("solve", cmd_solve, "exact solve of the Laplacian equations on a finite graph"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--weight", choices=("trivial", "parity", "file"), default="trivial")
        if name != "solve":
            sp.add_argument("--radius", type=int, default=None)
            sp.add_argument("--root", default=None)
    sp = add("selftest", cmd_selftest, "randomised self-test (seed from BTKIT_SEED)", takes_input=False)
    sp.add_argument("--trials", type=int, default=20)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        args.func(args)
    except InputError as exc:
        print(f"btkit: input error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, NotInvertible, hm.IncompleteIncidence) as exc:
        print(f"btkit: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
