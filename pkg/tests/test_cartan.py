from fractions import Fraction

import pytest

from btkit.cartan import (
    cartan_decompose,
    coarse_decompose,
    invariant_exponents_oracle,
    normalize_corner,
    reduce_to_monotone_diag,
)
from btkit.matrices import (
    Matrix,
    NotInvertible,
    coeffs_inf_valuation,
    det,
    diag,
    identity,
    in_GLnR,
    is_diagonal,
    is_monotone_diag,
)
from btkit.sampling import random_glr, random_invertible, random_unit
from btkit.valued import valuation


def corner_valuation(g, k1, k2, p):
    n = g.n
    return valuation((k1 @ g @ k2)[n - 1, n - 1], p)


class TestNormalizeCorner:
    def test_already_normal(self):
        p = 3
        g = diag([p, 1])
        k1, k2 = normalize_corner(g, p)
        assert corner_valuation(g, k1, k2, p) == 0
        assert k1 == k2 == identity(2)

    def test_needs_swaps(self):
        p = 3
        g = diag([Fraction(1, p), 1])
        k1, k2 = normalize_corner(g, p)
        assert corner_valuation(g, k1, k2, p) == -1
        assert in_GLnR(k1, p) and in_GLnR(k2, p)

    def test_unique_minimum_off_diagonal(self):
        p = 2
        g = Matrix([[4, Fraction(1, 8), 2], [1, 6, 8], [2, 1, 12]])
        brute = min(valuation(x, p) for x in g.entries() if x)
        k1, k2 = normalize_corner(g, p)
        assert corner_valuation(g, k1, k2, p) == brute == -3
        # permutation matrices only
        for k in (k1, k2):
            assert sorted(k.entries()) == [0] * 6 + [1] * 3

    def test_zero_matrix(self):
        with pytest.raises(ValueError):
            normalize_corner(Matrix([[0, 0], [0, 0]]), 2)


class TestMonotoneDiag:
    def test_identity(self):
        k1, k2 = reduce_to_monotone_diag(identity(3), 5)
        assert k1 @ identity(3) @ k2 == identity(3)

    def test_swapped_diagonal(self):
        p = 3
        g = diag([1, p])
        k1, k2 = reduce_to_monotone_diag(g, p)
        t = k1 @ g @ k2
        assert is_monotone_diag(t, p)
        assert [valuation(t[i, i], p) for i in range(2)] == [1, 0]

    def test_determinantal_oracle_example(self):
        p = 2
        g = Matrix([[1, 1], [1, 1 + p]])
        # det valuation 1, minimal entry valuation 0
        assert valuation(det(g), p) == 1
        assert coeffs_inf_valuation(g, p) == 0
        k1, k2 = reduce_to_monotone_diag(g, p)
        t = k1 @ g @ k2
        assert is_monotone_diag(t, p)
        assert [valuation(t[i, i], p) for i in range(2)] == [1, 0]
        assert coeffs_inf_valuation(t, p) == coeffs_inf_valuation(g, p)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_coarse_decomposition(self, rng, p):
        for n in (1, 2, 3, 5):
            g = random_invertible(rng, n, bound=100)
            k1, t, k2 = coarse_decompose(g, p)
            assert is_diagonal(t) and in_GLnR(k1, p) and in_GLnR(k2, p)
            assert is_monotone_diag(t, p)
            assert coeffs_inf_valuation(t, p) == coeffs_inf_valuation(g, p)

    def test_singular(self):
        with pytest.raises(NotInvertible):
            reduce_to_monotone_diag(Matrix([[1, 2], [2, 4]]), 3)


class TestCartan:
    def test_identity(self):
        assert cartan_decompose(identity(4), 2).f == (0, 0, 0, 0)

    def test_diag(self):
        p = 3
        fact = cartan_decompose(diag([1, p]), p)
        assert fact.f == (1, 0)
        assert fact.verify(diag([1, p]), p)

    def test_upper_unipotent(self):
        p = 3
        g = Matrix([[1, Fraction(1, p)], [0, 1]])
        fact = cartan_decompose(g, p)
        assert fact.f == (1, -1) == invariant_exponents_oracle(g, p)
        assert fact.verify(g, p)

    def test_units_absorbed(self):
        p = 5
        g = diag([Fraction(3, 7) * p**2, Fraction(-2), Fraction(4, 3 * p)])
        fact = cartan_decompose(g, p)
        assert fact.f == (2, 0, -1)
        assert fact.k1 @ g @ fact.k2 == diag([p**2, 1, Fraction(1, p)])

    def test_singular(self):
        with pytest.raises(NotInvertible):
            cartan_decompose(Matrix([[1, 2, 3], [4, 5, 6], [5, 7, 9]]), 2)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_random_roundtrip_and_oracle(self, rng, p):
        for n in (1, 2, 3, 4, 5, 6):
            g = random_invertible(rng, n, bound=30)
            fact = cartan_decompose(g, p)
            assert fact.verify(g, p)
            assert sum(fact.f) == valuation(det(g), p)
            if n <= 5:
                assert fact.f == invariant_exponents_oracle(g, p)

    @pytest.mark.parametrize("p", [2, 3])
    def test_uniqueness_under_GLnR(self, rng, p):
        for n in (2, 3):
            g = random_invertible(rng, n, bound=100)
            f = cartan_decompose(g, p).f
            for _ in range(5):
                r, s = random_glr(rng, n, p), random_glr(rng, n, p)
                assert cartan_decompose(r @ g @ s, p).f == f

    def test_uniformiser_choice(self, rng):
        # writing the diagonal as u * p^f with other units gives the same f
        p = 3
        f = (4, 1, 1, -2)
        for _ in range(10):
            t = diag([random_unit(rng, p) * Fraction(p) ** e for e in f])
            assert cartan_decompose(t, p).f == f


class TestOracle:
    def test_diag(self):
        assert invariant_exponents_oracle(diag([4, 1]), 2) == (2, 0)

    def test_GLnR_elements(self, rng):
        for _ in range(10):
            k = random_glr(rng, 3, 3)
            assert invariant_exponents_oracle(k, 3) == (0, 0, 0)

    def test_singular(self):
        with pytest.raises(NotInvertible):
            invariant_exponents_oracle(Matrix([[1, 1], [1, 1]]), 2)
