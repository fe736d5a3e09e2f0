#!/usr/bin/env python
# coding: utf-8

"""
Exact colored Burau representation over Laurent polynomials.

This is the reference the E-Multiplication kernel is checked against. Entries
are Laurent polynomials in t_1..t_N with integer coefficients, so the
representation is exact; coefficient and term growth keep it practical only
for small N and short words.

A permutation acts on a polynomial by renaming variables, t_j -> t_sigma(j).
Pairs multiply as (A, s) * (B, r) = (A . ^s(B), s o r).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.algebra.braid import BraidWord, Permutation, compose
from src.algebra.emult import EMultState, TValues
from src.algebra.field import Field
from src.core.errors import BraidError, DimensionError


class LaurentPoly:
    """
    Sparse Laurent polynomial: {exponent vector: integer coefficient}.

    Exponent vectors have one (possibly negative) entry per variable. Zero
    coefficients are never stored, so the zero polynomial has no terms.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise DimensionError(f"exponent vector {exps} for {nvars} variables")
            if coeff:
                clean[exps] = clean.get(exps, 0) + int(coeff)
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, nvars: int, c: int) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, j: int, power: int = 1, coeff: int = 1) -> "LaurentPoly":
        """coeff * t_j^power (j is 1-based)."""
        exps = [0] * nvars
        exps[j - 1] = power
        return cls(nvars, {tuple(exps): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise DimensionError(f"polynomials in {self.nvars} and {other.nvars} variables")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(self.nvars, terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def substitute(self, perm: Permutation) -> "LaurentPoly":
        """^perm f: rename t_j to t_perm(j)."""
        if perm.n != self.nvars:
            raise DimensionError(f"permutation on {perm.n} points acting on {self.nvars} variables")
        terms = {}
        for exps, c in self.terms.items():
            moved = [0] * self.nvars
            for j, e in enumerate(exps, start=1):
                moved[perm(j) - 1] = e
            terms[tuple(moved)] = c
        return LaurentPoly(self.nvars, terms)

    def evaluate(self, tvals: TValues, field: Field) -> int:
        """
        Substitute tau_j for t_j and reduce into the field.

        Raises:
            FieldError: If a zero T-value meets a negative exponent.
        """
        if len(tvals) != self.nvars:
            raise DimensionError(f"{len(tvals)} T-values for {self.nvars} variables")
        total = 0
        for exps, c in self.terms.items():
            term = field.from_int(c)
            for tau, e in zip(tvals.taus, exps):
                if e:
                    term = field.mul(term, field.pow(tau, e))
            total = field.add(total, term)
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.terms.items(), reverse=True):
            monomial = "*".join(
                f"t{j}" if e == 1 else f"t{j}^{e}"
                for j, e in enumerate(exps, start=1) if e
            )
            if not monomial:
                parts.append(str(c))
            elif c == 1:
                parts.append(monomial)
            elif c == -1:
                parts.append(f"-{monomial}")
            else:
                parts.append(f"{c}*{monomial}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class LaurentMatrix:
    """N x N matrix of LaurentPoly, stored as a tuple of rows."""

    rows: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(row) != n for row in self.rows):
            raise DimensionError("Laurent matrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        one, zero = LaurentPoly.constant(n, 1), LaurentPoly(n)
        return cls(tuple(tuple(one if r == c else zero for c in range(n)) for r in range(n)))

    def __getitem__(self, index):
        r, c = index
        return self.rows[r][c]

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.n != other.n:
            raise DimensionError(f"cannot multiply {self.n}x{self.n} by {other.n}x{other.n}")
        n = self.n
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = LaurentPoly(n)
                for k in range(n):
                    a, b = self.rows[r][k], other.rows[k][c]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return LaurentMatrix(tuple(rows))

    def substitute(self, perm: Permutation) -> "LaurentMatrix":
        return LaurentMatrix(tuple(tuple(p.substitute(perm) for p in row) for row in self.rows))

    def evaluate(self, tvals: TValues, field: Field) -> np.ndarray:
        return np.array([[p.evaluate(tvals, field) for p in row] for row in self.rows], dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self.rows == other.rows


@dataclass(frozen=True, eq=False)
class CBPair:
    """Colored Burau pair (matrix, permutation)."""

    matrix: LaurentMatrix
    perm: Permutation

    def __post_init__(self):
        if self.matrix.n != self.perm.n:
            raise DimensionError(f"{self.matrix.n}x{self.matrix.n} matrix paired with a permutation on {self.perm.n}")

    @property
    def n(self) -> int:
        return self.perm.n

    @classmethod
    def identity(cls, n: int) -> "CBPair":
        return cls(LaurentMatrix.identity(n), Permutation.identity(n))

    def __eq__(self, other):
        return isinstance(other, CBPair) and self.perm == other.perm and self.matrix == other.matrix


def cb_generator(i: int, sign: int, n: int) -> CBPair:
    """
    (CB(b_i^sign), sigma_i).

    The matrix is the identity except row i. For b_i that row holds
    (t_i, -t_i, 1) at columns (i-1, i, i+1); for b_i^-1 it holds
    (1, -1/t_{i+1}, 1/t_{i+1}). Row 1 drops the column-0 entry in both cases,
    which gives (-t_1, 1) and (-1/t_2, 1/t_2).
    """
    if not 1 <= i <= n - 1:
        raise BraidError(f"generator index {i} outside [1, {n - 1}]")
    if sign not in (1, -1):
        raise BraidError(f"generator sign must be +1 or -1, got {sign}")
    base = LaurentMatrix.identity(n)
    rows = [list(row) for row in base.rows]
    zero = LaurentPoly(n)
    row = [zero] * n
    r = i - 1
    if sign > 0:
        left = LaurentPoly.variable(n, i)
        row[r] = LaurentPoly.variable(n, i, coeff=-1)
        row[r + 1] = LaurentPoly.constant(n, 1)
    else:
        left = LaurentPoly.constant(n, 1)
        row[r] = LaurentPoly.variable(n, i + 1, power=-1, coeff=-1)
        row[r + 1] = LaurentPoly.variable(n, i + 1, power=-1)
    if i > 1:
        row[r - 1] = left
    rows[r] = row
    return CBPair(LaurentMatrix(tuple(tuple(x) for x in rows)), Permutation.transposition(n, i))


def cb_multiply(a: CBPair, b: CBPair) -> CBPair:
    """(a.M . ^{a.perm}(b.M), a.perm o b.perm)."""
    if a.n != b.n:
        raise DimensionError(f"pairs on {a.n} and {b.n} strands")
    return CBPair(a.matrix @ b.matrix.substitute(a.perm), compose(a.perm, b.perm))


def cb_of_word(word: BraidWord) -> CBPair:
    """Pi_CB(word), folding generators left to right."""
    pair = CBPair.identity(word.n_strands)
    for letter in word.letters:
        pair = cb_multiply(pair, cb_generator(abs(letter), 1 if letter > 0 else -1, word.n_strands))
    return pair


def cb_evaluate(pair: CBPair, tvals: TValues, field: Field) -> EMultState:
    return EMultState(pair.matrix.evaluate(tvals, field), pair.perm)


def format_matrix(matrix: LaurentMatrix) -> str:
    """Aligned text rendering for debug dumps."""
    cells = [[str(p) for p in row] for row in matrix.rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)
