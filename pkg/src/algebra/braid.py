#!/usr/bin/env python
# coding: utf-8

"""
Artin braid words and their permutations.

Strands are numbered 1..N. A word is a tuple of signed generator indices:
+i stands for b_i and -i for its inverse. Permutations compose as
(p o r)(x) = p(r(x)), and a word's permutation is the left-to-right product of
the simple transpositions of its letters.
"""

from __future__ import annotations

from dataclasses import dataclass

from src.core.errors import BraidError


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..N}; images[j-1] is the image of strand j."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise BraidError(f"{self.images} is not a permutation of 1..{n}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int) -> "Permutation":
        """The simple transposition sigma_i swapping i and i+1."""
        if not 1 <= i < n:
            raise BraidError(f"transposition index {i} outside [1, {n - 1}]")
        images = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return cls(tuple(images))

    def is_identity(self) -> bool:
        return all(image == j for j, image in enumerate(self.images, start=1))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, image in enumerate(self.images, start=1):
            inv[image - 1] = j
        return Permutation(tuple(inv))

    def __str__(self):
        return "[" + ",".join(str(x) for x in self.images) + "]"


def compose(p: Permutation, r: Permutation) -> Permutation:
    """Return p o r, i.e. x -> p(r(x))."""
    if p.n != r.n:
        raise BraidError(f"cannot compose permutations of sizes {p.n} and {r.n}")
    return Permutation(tuple(p.images[x - 1] for x in r.images))


@dataclass(frozen=True)
class BraidWord:
    """A word b_{i1}^{e1} ... b_{ik}^{ek} in the Artin generators of B_N."""

    n_strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n_strands < 2:
            raise BraidError(f"braid group needs at least 2 strands, got {self.n_strands}")
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for letter in self.letters:
            if letter == 0 or abs(letter) >= self.n_strands:
                raise BraidError(f"generator {letter} outside [1, {self.n_strands - 1}]")

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n_strands != other.n_strands:
            raise BraidError(f"cannot multiply braids on {self.n_strands} and {other.n_strands} strands")
        return BraidWord(self.n_strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n_strands, tuple(-x for x in reversed(self.letters)))

    def to_text(self) -> str:
        """Diagnostic form 'b1 B2 b3' (capital letter = inverse generator)."""
        return " ".join(f"b{x}" if x > 0 else f"B{-x}" for x in self.letters)

    @classmethod
    def from_text(cls, n_strands: int, text: str) -> "BraidWord":
        letters = []
        for token in text.split():
            if token[0] not in "bB" or not token[1:].isdigit():
                raise BraidError(f"bad braid letter '{token}'")
            index = int(token[1:])
            letters.append(index if token[0] == "b" else -index)
        return cls(n_strands, tuple(letters))

    def __str__(self):
        return self.to_text() or "<identity>"


@dataclass(frozen=True)
class ConjugateSet:
    """Words z w_k z^-1 with flags marking entries built from pure braids."""

    conjugates: tuple[BraidWord, ...]
    pure_flags: tuple[bool, ...]

    def __post_init__(self):
        if len(self.conjugates) != len(self.pure_flags):
            raise BraidError("conjugates and pure_flags differ in length")
        sizes = {w.n_strands for w in self.conjugates}
        if len(sizes) > 1:
            raise BraidError(f"conjugate set mixes strand counts {sorted(sizes)}")

    def __len__(self):
        return len(self.conjugates)

    @property
    def n_strands(self) -> int:
        return self.conjugates[0].n_strands

    def pure_indices(self) -> list[int]:
        return [k for k, flag in enumerate(self.pure_flags) if flag]


def permutation_of(word: BraidWord) -> Permutation:
    """sigma_beta = sigma_{i1} ... sigma_{ik}; the sign of a letter is irrelevant."""
    images = list(range(1, word.n_strands + 1))
    for letter in word.letters:
        i = abs(letter)
        # right-multiplying by sigma_i swaps the images of i and i+1
        images[i - 1], images[i] = images[i], images[i - 1]
    return Permutation(tuple(images))


def free_reduce(word: BraidWord) -> BraidWord:
    """Cancel adjacent b_i^e b_i^-e pairs until none remain."""
    stack: list[int] = []
    for letter in word.letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return BraidWord(word.n_strands, tuple(stack))


def _check_range(n_strands: int, index_range: tuple[int, int]) -> tuple[int, int]:
    lo, hi = index_range
    if lo > hi:
        raise BraidError(f"empty index range {index_range}")
    if lo < 1 or hi > n_strands - 1:
        raise BraidError(f"index range {index_range} not inside [1, {n_strands - 1}]")
    return lo, hi


def random_word(n_strands: int, length: int, index_range: tuple[int, int], rng) -> BraidWord:
    """
    Draw a word of i.i.d. uniform letters and freely reduce it.

    Args:
        n_strands: N
        length: Number of letters drawn (the reduced word can be shorter)
        index_range: Inclusive (lo, hi) generator indices to draw from
        rng: numpy Generator

    Returns:
        BraidWord: The freely reduced word.
    """
    lo, hi = _check_range(n_strands, index_range)
    if length < 0:
        raise BraidError(f"negative word length {length}")
    if length == 0:
        return BraidWord(n_strands, ())
    indices = rng.integers(lo, hi + 1, size=length)
    signs = rng.choice((-1, 1), size=length)
    return free_reduce(BraidWord(n_strands, tuple(int(x) for x in indices * signs)))


def conjugate(z: BraidWord, w: BraidWord) -> BraidWord:
    return free_reduce(z * w * z.inverse())


def sorting_letters(perm: Permutation) -> tuple[int, ...]:
    """
    Adjacent swaps j1..jm with perm o s_j1 o ... o s_jm = identity.

    Bubble sort on the image array; each swap at positions (j, j+1) is a
    right multiplication by s_j.
    """
    images = list(perm.images)
    letters = []
    n = len(images)
    changed = True
    while changed:
        changed = False
        for j in range(n - 1):
            if images[j] > images[j + 1]:
                images[j], images[j + 1] = images[j + 1], images[j]
                letters.append(j + 1)
                changed = True
    return tuple(letters)


def make_pure_word(n_strands: int, length: int, index_range: tuple[int, int], rng) -> BraidWord:
    """Random word followed by positive generators undoing its permutation."""
    w = random_word(n_strands, length, index_range, rng)
    tail = BraidWord(n_strands, sorting_letters(permutation_of(w)))
    return free_reduce(w * tail)
