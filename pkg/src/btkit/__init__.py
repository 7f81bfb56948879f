"""Exact Cartan decomposition, the Bruhat-Tits tree of GL_2(Q) at p, and tree Laplacians."""

from .cartan import (
    CartanFactorisation,
    cartan_decompose,
    coarse_decompose,
    invariant_exponents_oracle,
    normalize_corner,
    reduce_to_monotone_diag,
)
from .harmonic import (
    FiniteGraph,
    IntegerModule,
    ProductModule,
    WeightFunction,
    ZModN,
    distinguished_edge,
    finite_graph_laplace_solve,
    is_harmonic,
    laplace,
    laplace_preimage,
    orient,
    parity_weight,
    trivial_weight,
    w_par,
    weight_factorization_check,
)
from .lattices import (
    CanonicalLattice,
    LatticeRep,
    NormalBasisPair,
    Vertex,
    act,
    act_vertex,
    canonicalize,
    dist,
    is_even,
    is_lattice,
    lattice_valuation,
    normal_basis_pair,
    standard_vertex,
    vertex_dist,
    vertex_of,
)
from .matrices import (
    Matrix,
    NotInvertible,
    coeffs_inf_valuation,
    det,
    diag,
    identity,
    in_GLnR,
    inverse,
    is_monotone_diag,
    mul,
    swap_matrix,
)
from .tree import (
    Ball,
    ball,
    check_tree,
    export_dot,
    export_json,
    graph_dist,
    is_neighbour,
    neighbours,
    parse_ball_json,
    stabilizes_standard,
    standard_neighbours,
    transitive_witness,
)
from .valued import INF, PrimeConfig, is_in_R, unit_part, valuation

__version__ = "0.1.0"
