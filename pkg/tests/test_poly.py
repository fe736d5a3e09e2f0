import numpy as np
import pytest

from src.algebra.emult import matrix_rank
from src.algebra.poly import (
    companion_matrix, degree, is_irreducible, poly_gcd, poly_mod, poly_mul, random_irreducible, trim,
)


def P(*coeffs):
    return np.array(coeffs, dtype=np.int64)


class TestPolyArithmetic:
    def test_trim_and_degree(self):
        assert list(trim(P(1, 2, 0, 0))) == [1, 2]
        assert degree(P(0, 0)) == -1

    def test_mul_and_mod_over_f5(self, f5):
        # (x + 1)(x + 4) = x^2 + 4 over F5
        assert list(poly_mul(P(1, 1), P(4, 1), f5)) == [4, 0, 1]
        assert list(poly_mod(P(4, 0, 1), P(1, 1), f5)) == []

    def test_gcd_is_monic(self, f5):
        g = poly_gcd(P(4, 0, 1), P(2, 2), f5)
        assert list(g) == [1, 1]


class TestIrreducibility:
    def test_known_polynomials_over_f5(self, f5):
        # -2 = 3 is not a square mod 5
        assert is_irreducible(P(2, 0, 1), f5)
        assert not is_irreducible(P(4, 0, 1), f5)

    def test_non_monic_rejected(self, f5):
        assert not is_irreducible(P(1, 0, 2), f5)

    @pytest.mark.parametrize("n", [4, 8])
    def test_random_irreducible_gives_full_rank_companion_powers(self, n, gf256, rng):
        f = random_irreducible(n, gf256, rng)
        assert is_irreducible(f, gf256)
        c = companion_matrix(f, gf256)
        powers = [np.eye(n, dtype=np.int64)]
        for _ in range(n - 1):
            nxt = gf256.sum_array(gf256.mul_array(powers[-1][:, :, None], c[None, :, :]), axis=1)
            powers.append(nxt)
        assert matrix_rank(np.stack([p.ravel() for p in powers]), gf256) == n
