#!/usr/bin/env python
# coding: utf-8

"""
E-Multiplication and linear algebra over F_q.

E-Multiplication acts on pairs (M, sigma) in GL(N, F_q) x S_N by braid words.
One Artin letter right-multiplies M by a colored Burau matrix evaluated at the
T-values after twisting by the running permutation. That matrix differs from
the identity only in row i, so the product only touches columns i-1, i and
i+1 of M; the kernel below performs exactly those column updates, which is
O(N) field operations per letter.

Matrices are dense numpy int64 arrays of shape (N, N), row-major.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.algebra.braid import BraidWord, Permutation, permutation_of
from src.algebra.field import Field
from src.core.errors import BraidError, DimensionError, FieldError, SingularMatrixError

MAX_STRANDS = 32


@dataclass(frozen=True, eq=False)
class TValues:
    """The T-values tau_1..tau_N; none may be 0 or 1."""

    taus: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "taus", tuple(int(t) for t in self.taus))
        if any(t in (0, 1) for t in self.taus):
            raise FieldError("T-values must avoid 0 and 1")

    def __len__(self):
        return len(self.taus)

    def __eq__(self, other):
        return isinstance(other, TValues) and self.taus == other.taus

    def __hash__(self):
        return hash(self.taus)


@dataclass(frozen=True, eq=False)
class EMultState:
    """An ordered pair (M, sigma)."""

    matrix: np.ndarray
    perm: Permutation

    def __post_init__(self):
        shape = np.shape(self.matrix)
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] != self.perm.n:
            raise DimensionError(f"matrix shape {shape} does not match permutation on {self.perm.n} strands")

    @property
    def n(self) -> int:
        return self.perm.n

    @classmethod
    def identity(cls, n: int) -> "EMultState":
        return cls(identity_matrix(n), Permutation.identity(n))

    def __eq__(self, other):
        return (isinstance(other, EMultState) and self.perm == other.perm
                and np.array_equal(self.matrix, other.matrix))


@dataclass
class OpCounter:
    """
    Field-operation counter filled in by the kernel.

    ``field_ops`` counts elementwise additions, subtractions, multiplications,
    negations and inversions; ``letters`` counts processed Artin letters.
    """

    field_ops: int = 0
    letters: int = 0
    calls: int = 0

    def reset(self):
        self.field_ops = 0
        self.letters = 0
        self.calls = 0


def letter_cost(n: int, letter: int) -> int:
    """Field operations spent by the kernel on one letter."""
    return 2 * n if abs(letter) == 1 else 3 * n


# ----------------------------------------------------------------------
# matrix utilities
# ----------------------------------------------------------------------
def identity_matrix(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _require_square(a, name="matrix"):
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} of shape {a.shape} is not square")


def matrix_mul(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return field.sum_array(field.mul_array(a[:, :, None], b[None, :, :]), axis=1)


def matrix_vec(a: np.ndarray, v: np.ndarray, field: Field) -> np.ndarray:
    if a.ndim != 2 or v.ndim != 1 or a.shape[1] != v.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by vector {v.shape}")
    return field.sum_array(field.mul_array(a, v[None, :]), axis=1)


def _eliminate(a: np.ndarray, field: Field, full: bool):
    """
    Row-reduce a copy of a.

    Returns (reduced, rank, pivot_product, swaps). With ``full`` the pivots are
    normalised and cleared above as well (Gauss-Jordan).
    """
    m = np.array(a, dtype=np.int64, copy=True)
    rows, cols = m.shape
    rank = 0
    det = 1
    swaps = 0
    for col in range(cols):
        if rank == rows:
            break
        candidates = np.nonzero(m[rank:, col])[0]
        if candidates.size == 0:
            det = 0
            continue
        pivot = rank + int(candidates[0])
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
            swaps += 1
        p = int(m[rank, col])
        det = field.mul(det, p)
        if full:
            m[rank] = field.scale_array(field.inv(p), m[rank])
            factors = m[:, col].copy()
            factors[rank] = 0
        else:
            factors = field.mul_array(m[:, col], field.inv(p))
            factors[:rank + 1] = 0
        m = field.sub_array(m, field.mul_array(factors[:, None], m[rank][None, :]))
        rank += 1
    return m, rank, det, swaps


def matrix_inverse(a: np.ndarray, field: Field) -> np.ndarray:
    """
    Gauss-Jordan inverse over F_q.

    Raises:
        SingularMatrixError: If a is not invertible.
    """
    _require_square(a)
    n = a.shape[0]
    augmented = np.concatenate([np.asarray(a, dtype=np.int64), identity_matrix(n)], axis=1)
    reduced, rank, _, _ = _eliminate(augmented[:, :n], field, full=False)
    if rank < n:
        raise SingularMatrixError("matrix is singular")
    reduced, _, _, _ = _eliminate(augmented, field, full=True)
    return reduced[:, n:]


def matrix_rank(a: np.ndarray, field: Field) -> int:
    return _eliminate(a, field, full=False)[1]


def determinant(a: np.ndarray, field: Field) -> int:
    _require_square(a)
    _, rank, det, swaps = _eliminate(a, field, full=False)
    if rank < a.shape[0]:
        return 0
    return field.neg(det) if swaps % 2 else det


def is_invertible(a: np.ndarray, field: Field) -> bool:
    return matrix_rank(a, field) == a.shape[0]


def random_matrix(n: int, field: Field, rng) -> np.ndarray:
    return field.random_elements(rng, (n, n)).astype(np.int64)


# ----------------------------------------------------------------------
# kernel
# ----------------------------------------------------------------------
class _Kernel:
    """Per-call precomputation: negated T-values and negated inverses."""

    def __init__(self, tvals: TValues, field: Field, n: int, counter: OpCounter | None):
        if len(tvals) != n:
            raise DimensionError(f"{len(tvals)} T-values for {n} strands")
        self.field = field
        self.n = n
        self.neg_tau = [field.neg(t) for t in tvals.taus]
        self.neg_inv_tau = [field.neg(field.inv(t)) for t in tvals.taus]
        self.counter = counter

    def run(self, cols: np.ndarray, images: list[int], letters) -> None:
        """Apply letters in place: cols[j] is column j+1 of M, images is sigma."""
        field, n = self.field, self.n
        scale, add, sub = field.scale_array, field.add_array, field.sub_array
        neg_tau, neg_inv_tau = self.neg_tau, self.neg_inv_tau
        ops = 0
        count = 0
        for letter in letters:
            i = letter if letter > 0 else -letter
            if not 0 < i < n:
                raise BraidError(f"generator {letter} outside [1, {n - 1}]")
            c = i - 1
            v = cols[c]
            if letter > 0:
                # row i of CB(b_i) is (t, -t, 1) at columns (i-1, i, i+1), t = tau_{sigma(i)}
                w = scale(neg_tau[images[c] - 1], v)
                if i > 1:
                    cols[c - 1] = sub(cols[c - 1], w)
                cols[c + 1] = add(cols[c + 1], v)
            else:
                # row i of CB(b_i^-1) is (1, -1/t, 1/t), t = tau_{sigma(i+1)}
                w = scale(neg_inv_tau[images[c + 1] - 1], v)
                if i > 1:
                    cols[c - 1] = add(cols[c - 1], v)
                cols[c + 1] = sub(cols[c + 1], w)
            cols[c] = w
            images[c], images[c + 1] = images[c + 1], images[c]
            ops += 3 * n if i > 1 else 2 * n
            count += 1
        if self.counter is not None:
            self.counter.field_ops += ops
            self.counter.letters += count
            self.counter.calls += 1


def emult(state: EMultState, word: BraidWord, tvals: TValues, field: Field,
          counter: OpCounter | None = None) -> EMultState:
    """
    (M, sigma) * word, associating left to right.

    Args:
        state: Starting pair
        word: Braid word on the same number of strands
        tvals: T-values used for evaluation
        field: Field context
        counter: Optional OpCounter receiving field-operation counts

    Returns:
        EMultState: The resulting pair; the input is left untouched.
    """
    n = state.n
    if word.n_strands != n:
        raise DimensionError(f"word on {word.n_strands} strands applied to a state on {n}")
    if n > MAX_STRANDS:
        raise DimensionError(f"N={n} exceeds the supported maximum {MAX_STRANDS}")
    kernel = _Kernel(tvals, field, n, counter)
    cols = np.array(state.matrix.T, dtype=np.int64, copy=True)
    images = list(state.perm.images)
    kernel.run(cols, images, word.letters)
    return EMultState(np.ascontiguousarray(cols.T), Permutation(tuple(images)))


def emult_step(state: EMultState, letter: int, tvals: TValues, field: Field) -> EMultState:
    """One letter of E-Multiplication (+i for b_i, -i for b_i^-1)."""
    return emult(state, BraidWord(state.n, (letter,)), tvals, field)


def random_tvalues(n: int, field: Field, rng) -> TValues:
    return TValues(tuple(int(t) for t in field.random_elements(rng, n, exclude=(0, 1))))


def probably_equal_braids(u: BraidWord, v: BraidWord, trials: int, rng, field: Field) -> bool:
    """
    Probabilistic braid equality through the E-Multiplication action.

    Equal braids always act identically, so a False answer is certain; a True
    answer can be wrong only if every random state failed to separate them.
    """
    if u.n_strands != v.n_strands:
        raise DimensionError("words on different strand counts")
    if u.letters == v.letters:
        return True
    if permutation_of(u) != permutation_of(v):
        return False
    n = u.n_strands
    for _ in range(trials):
        start = EMultState(random_matrix(n, field, rng),
                           Permutation(tuple(int(x) + 1 for x in rng.permutation(n))))
        tvals = random_tvalues(n, field, rng)
        if emult(start, u, tvals, field) != emult(start, v, tvals, field):
            return False
    return True
