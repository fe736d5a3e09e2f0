import pytest

from src.algebra.braid import BraidWord, Permutation
from src.algebra.cburau import (
    CBPair, LaurentMatrix, LaurentPoly, cb_evaluate, cb_generator, cb_multiply, cb_of_word, format_matrix,
)
from src.algebra.emult import TValues
from src.core.errors import BraidError, DimensionError


def t(j, power=1, nvars=3):
    return LaurentPoly.variable(nvars, j, power)


def const(c, nvars=3):
    return LaurentPoly.constant(nvars, c)


class TestLaurentPoly:
    def test_ring_operations(self):
        assert (t(1) + const(1)) * (t(1) - const(1)) == t(1, 2) - const(1)
        assert t(2) * t(2, -1) == const(1)
        assert (t(1) - t(1)).is_zero()

    def test_zero_coefficients_dropped(self):
        p = LaurentPoly(3, {(1, 0, 0): 2, (0, 1, 0): 0})
        assert p.terms == {(1, 0, 0): 2}

    def test_substitute_renames_variables(self):
        perm = Permutation((2, 3, 1))
        assert (t(1) * t(3, -2)).substitute(perm) == t(2) * t(1, -2)

    def test_evaluate(self, f5):
        tvals = TValues((2, 3, 4))
        # 2*t1 - t2^-1 at (2, 3, 4) = 4 - 2 = 2 over F5
        p = LaurentPoly(3, {(1, 0, 0): 2, (0, -1, 0): -1})
        assert p.evaluate(tvals, f5) == 2

    def test_mixed_variable_counts(self):
        with pytest.raises(DimensionError):
            t(1) + LaurentPoly.variable(4, 1)


class TestColoredBurau:
    def test_generator_rows(self):
        pair = cb_generator(2, 1, 4)
        row = pair.matrix.rows[1]
        assert row[0] == LaurentPoly.variable(4, 2)
        assert row[1] == LaurentPoly.variable(4, 2, coeff=-1)
        assert row[2] == LaurentPoly.constant(4, 1)
        assert pair.perm == Permutation((1, 3, 2, 4))

    def test_first_generator_drops_column_zero(self):
        row = cb_generator(1, 1, 3).matrix.rows[0]
        assert row == (t(1) * const(-1), const(1), LaurentPoly(3))

    @pytest.mark.parametrize("i", [1, 2, 3, 4])
    def test_generator_times_inverse_is_identity(self, i):
        n = 5
        assert cb_multiply(cb_generator(i, 1, n), cb_generator(i, -1, n)) == CBPair.identity(n)
        assert cb_multiply(cb_generator(i, -1, n), cb_generator(i, 1, n)) == CBPair.identity(n)

    def test_braid_relation(self):
        assert cb_of_word(BraidWord(3, (1, 2, 1))) == cb_of_word(BraidWord(3, (2, 1, 2)))
        assert cb_of_word(BraidWord(4, (-2, -3, -2))) == cb_of_word(BraidWord(4, (-3, -2, -3)))
        assert cb_of_word(BraidWord(4, (2, 3, 2))) == cb_of_word(BraidWord(4, (3, 2, 3)))

    def test_far_generators_commute(self):
        assert cb_of_word(BraidWord(5, (1, 3))) == cb_of_word(BraidWord(5, (3, 1)))
        assert cb_of_word(BraidWord(5, (-1, 4))) == cb_of_word(BraidWord(5, (4, -1)))

    def test_known_product(self):
        pair = cb_of_word(BraidWord(3, (1, 2, 1)))
        rows = pair.matrix.rows
        assert rows[0] == (LaurentPoly(3), t(1) * const(-1), const(1))
        assert rows[1] == (t(1) * t(2) * const(-1), LaurentPoly(3), const(1))
        assert pair.perm == Permutation((3, 2, 1))

    def test_bad_generator(self):
        with pytest.raises(BraidError):
            cb_generator(3, 1, 3)
        with pytest.raises(BraidError):
            cb_generator(1, 2, 3)

    def test_evaluate_first_generator(self, f5):
        state = cb_evaluate(cb_generator(1, 1, 4), TValues((2, 3, 4, 2)), f5)
        assert state.matrix[0].tolist() == [3, 1, 0, 0]
        assert state.perm == Permutation((2, 1, 3, 4))

    def test_format_matrix(self):
        text = format_matrix(LaurentMatrix.identity(2).substitute(Permutation((2, 1))))
        assert text.count("[") == 2
        assert "1" in text
