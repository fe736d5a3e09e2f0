#!/usr/bin/env python
# coding: utf-8

"""
Brute-force security level of the key agreement.

Levels are log2 of the number of elementary field operations needed:
    matrix secret C_i      q^N
    T-values               (q-2)^N
    braids of length L     (L/2)^(N-1)
    exchanged key          q^N
    overall                min((q-2)^N, (L/2)^(N-1))
minimal_length is the least integer meeting the length condition
L >= 2 (q-2)^(1-1/N). That condition alone does not lift the braid level to
the T-value level; balanced_length is the least L where it does, i.e.
L >= 2 (q-2)^(N/(N-1)).
"""

from __future__ import annotations

import math

from pydantic import BaseModel, Field

from src.core.errors import SecurityDomainError


class SecurityReport(BaseModel):
    q: int = Field(description="Field size")
    n: int = Field(description="Number of strands N")
    length: int | None = Field(default=None, description="Braid length L, if given")
    matrix_bits: float = Field(description="log2 q^N")
    tvalue_bits: float = Field(description="log2 (q-2)^N")
    braid_bits: float | None = Field(default=None, description="log2 (L/2)^(N-1)")
    key_bits: float = Field(description="log2 q^N for the exchanged key")
    overall_bits: float | None = Field(default=None, description="min of T-value and braid levels")
    minimal_length: int = Field(description="Least L with L >= 2 (q-2)^(1-1/N)")
    length_bound: float = Field(description="2 (q-2)^(1-1/N), unrounded")
    balanced_length: int = Field(description="Least L whose braid level reaches the T-value level")

    def lines(self) -> list[str]:
        out = [
            f"q = {self.q}, N = {self.n}" + (f", L = {self.length}" if self.length is not None else ""),
            f"matrix secret C_i:   {self.matrix_bits:.3f} bits",
            f"T-values:            {self.tvalue_bits:.3f} bits",
        ]
        if self.braid_bits is not None:
            out.append(f"braids:              {self.braid_bits:.3f} bits")
        out.append(f"exchanged key:       {self.key_bits:.3f} bits")
        if self.overall_bits is not None:
            out.append(f"overall:             {self.overall_bits:.3f} bits")
        out.append(f"minimal L = {self.minimal_length} (bound {self.length_bound:.3f})")
        out.append(f"braids match T-values from L = {self.balanced_length}")
        return out


def _round(x: float) -> float:
    return round(x, 3)


def minimal_length(q: int, n: int) -> tuple[int, float]:
    bound = 2 * (q - 2) ** (1 - 1 / n)
    return math.ceil(bound - 1e-9), bound


def balanced_length(q: int, n: int) -> int:
    """Least L with (L/2)^(N-1) >= (q-2)^N."""
    length = math.ceil(2 * (q - 2) ** (n / (n - 1)) - 1e-9)
    while (n - 1) * math.log2(length / 2) < n * math.log2(q - 2):
        length += 1
    return length


def security_level(q: int, n: int, length: int | None = None) -> SecurityReport:
    """
    Compute every level for (q, N) and, when given, braid length L.

    Raises:
        SecurityDomainError: If q < 4, N < 2 or L < 2.
    """
    if q < 4 or n < 2 or (length is not None and length < 2):
        raise SecurityDomainError(f"security level needs q >= 4, N >= 2, L >= 2 (got q={q}, N={n}, L={length})")
    matrix_bits = n * math.log2(q)
    tvalue_bits = n * math.log2(q - 2)
    min_len, bound = minimal_length(q, n)
    braid_bits = overall = None
    if length is not None:
        braid_bits = (n - 1) * math.log2(length / 2)
        overall = min(tvalue_bits, braid_bits)
    return SecurityReport(
        q=q, n=n, length=length,
        matrix_bits=_round(matrix_bits),
        tvalue_bits=_round(tvalue_bits),
        braid_bits=None if braid_bits is None else _round(braid_bits),
        key_bits=_round(matrix_bits),
        overall_bits=None if overall is None else _round(overall),
        minimal_length=min_len,
        length_bound=_round(bound),
        balanced_length=balanced_length(q, n),
    )
