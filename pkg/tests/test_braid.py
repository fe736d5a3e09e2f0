import pytest

from src.algebra.braid import (
    BraidWord, ConjugateSet, Permutation, compose, conjugate, free_reduce, make_pure_word, permutation_of,
    random_word, sorting_letters,
)
from src.algebra.emult import EMultState, emult, probably_equal_braids, random_matrix, random_tvalues
from src.core.errors import BraidError

FUZZ_RUNS = 1000


def with_cancellations(word, pairs, rng):
    """Insert `pairs` adjacent b_i^e b_i^-e pairs at random positions."""
    letters = list(word.letters)
    for _ in range(pairs):
        i = int(rng.integers(1, word.n_strands)) * int(rng.choice((-1, 1)))
        at = int(rng.integers(0, len(letters) + 1))
        letters[at:at] = [i, -i]
    return BraidWord(word.n_strands, tuple(letters))


class TestPermutation:
    def test_compose_applies_right_first(self):
        p = Permutation((2, 3, 1))
        r = Permutation((1, 3, 2))
        # (p o r)(2) = p(3) = 1
        assert compose(p, r)(2) == 1
        assert compose(p, r) == Permutation((2, 1, 3))

    def test_inverse(self):
        p = Permutation((3, 1, 4, 2))
        assert compose(p, p.inverse()).is_identity()

    def test_rejects_non_bijection(self):
        with pytest.raises(BraidError):
            Permutation((1, 1, 3))

    def test_transposition_bounds(self):
        assert Permutation.transposition(4, 3) == Permutation((1, 2, 4, 3))
        with pytest.raises(BraidError):
            Permutation.transposition(4, 4)


class TestBraidWord:
    def test_letters_checked(self):
        with pytest.raises(BraidError):
            BraidWord(4, (1, 4))
        with pytest.raises(BraidError):
            BraidWord(4, (0,))

    def test_text_form(self):
        w = BraidWord(4, (1, -2, 3))
        assert w.to_text() == "b1 B2 b3"
        assert BraidWord.from_text(4, "b1 B2 b3") == w
        with pytest.raises(BraidError):
            BraidWord.from_text(4, "x1")

    def test_inverse_and_product(self):
        w = BraidWord(4, (1, -2, 3))
        assert w.inverse().letters == (-3, 2, -1)
        assert free_reduce(w * w.inverse()).letters == ()

    def test_free_reduce_nested(self):
        assert free_reduce(BraidWord(4, (1, 2, -2, -1, 3))).letters == (3,)


class TestPermutationOf:
    def test_single_letters(self):
        assert permutation_of(BraidWord(3, (1,))) == Permutation((2, 1, 3))
        assert permutation_of(BraidWord(3, (-1,))) == Permutation((2, 1, 3))

    def test_product_order(self):
        # sigma_1 o sigma_2 sends 1 -> 2, 2 -> 3, 3 -> 1
        assert permutation_of(BraidWord(3, (1, 2))) == Permutation((2, 3, 1))

    def test_is_a_homomorphism(self, rng):
        for _ in range(FUZZ_RUNS):
            u = random_word(6, 10, (1, 5), rng)
            v = random_word(6, 10, (1, 5), rng)
            assert permutation_of(u * v) == compose(permutation_of(u), permutation_of(v))


class TestGenerators:
    def test_random_word_respects_range(self, rng):
        w = random_word(8, 200, (2, 4), rng)
        assert all(2 <= abs(x) <= 4 for x in w.letters)
        assert free_reduce(w) == w

    def test_random_word_rejects_bad_range(self, rng):
        with pytest.raises(BraidError):
            random_word(4, 5, (1, 4), rng)
        with pytest.raises(BraidError):
            random_word(4, 5, (3, 2), rng)

    def test_sorting_letters_undo_permutation(self, rng):
        for _ in range(30):
            w = random_word(7, 15, (1, 6), rng)
            tail = BraidWord(7, sorting_letters(permutation_of(w)))
            assert permutation_of(w * tail).is_identity()

    @pytest.mark.parametrize("n, index_range", [(3, (1, 2)), (4, (1, 1)), (16, (1, 7))])
    def test_make_pure_word(self, n, index_range, rng):
        for _ in range(20):
            w = make_pure_word(n, 12, index_range, rng)
            assert permutation_of(w).is_identity()
            assert all(index_range[0] <= abs(x) <= index_range[1] for x in w.letters)

    def test_conjugate_keeps_cycle_type_and_reduces(self, rng):
        z = random_word(6, 8, (1, 5), rng)
        w = BraidWord(6, (1,))
        c = conjugate(z, w)
        assert free_reduce(c) == c
        assert sum(1 for j in range(1, 7) if permutation_of(c)(j) != j) == 2


class TestConjugateSet:
    def test_pure_indices(self):
        words = (BraidWord(4, (1, 1)), BraidWord(4, (1,)), BraidWord(4, (-1, -1)))
        s = ConjugateSet(words, (True, False, True))
        assert s.pure_indices() == [0, 2]
        assert s.n_strands == 4

    def test_rejects_mismatch(self):
        with pytest.raises(BraidError):
            ConjugateSet((BraidWord(4, (1,)),), (True, False))
        with pytest.raises(BraidError):
            ConjugateSet((BraidWord(4, (1,)), BraidWord(5, (1,))), (False, False))


class TestFreeReduction:
    def test_keeps_permutation_and_action(self, gf256, rng):
        n = 6
        for _ in range(FUZZ_RUNS):
            word = with_cancellations(random_word(n, 12, (1, n - 1), rng), 6, rng)
            reduced = free_reduce(word)
            assert len(reduced) <= len(word)
            assert free_reduce(reduced) == reduced
            assert permutation_of(reduced) == permutation_of(word)
            start = EMultState(random_matrix(n, gf256, rng),
                               Permutation(tuple(int(x) + 1 for x in rng.permutation(n))))
            tvals = random_tvalues(n, gf256, rng)
            assert emult(start, reduced, tvals, gf256) == emult(start, word, tvals, gf256)


class TestCommutation:
    def test_disjoint_supports_commute(self, gf256, rng):
        n = 16
        for _ in range(FUZZ_RUNS):
            u = random_word(n, 10, (1, n // 2 - 1), rng)
            v = random_word(n, 10, (n // 2 + 1, n - 1), rng)
            assert probably_equal_braids(u * v, v * u, 1, rng, gf256)

    def test_braid_relation_holds(self, gf256, rng):
        assert probably_equal_braids(BraidWord(4, (1, 2, 1)), BraidWord(4, (2, 1, 2)), 4, rng, gf256)
