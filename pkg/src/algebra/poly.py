#!/usr/bin/env python
# coding: utf-8

"""
Univariate polynomials over F_q.

Polynomials are numpy int64 coefficient vectors, lowest degree first. Only
what system-parameter generation needs lives here: reduction, products
modulo a monic polynomial, gcd, Rabin's irreducibility test and companion
matrices.
"""

from __future__ import annotations

import numpy as np

from src.algebra.field import Field, prime_factors
from src.core.errors import KeyMaterialError


def trim(a):
    """Drop trailing zero coefficients (the zero polynomial becomes length 0)."""
    nz = np.nonzero(a)[0]
    if nz.size == 0:
        return a[:0]
    return a[: nz[-1] + 1]


def degree(a) -> int:
    return len(trim(a)) - 1


def poly_mul(a, b, field: Field):
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    prod = field.mul_array(np.asarray(a)[:, None], np.asarray(b)[None, :])
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for i in range(len(a)):
        out[i:i + len(b)] = field.add_array(out[i:i + len(b)], prod[i])
    return out


def poly_mod(a, f, field: Field):
    """Remainder of a modulo f (f need not be monic)."""
    f = trim(np.asarray(f, dtype=np.int64))
    n = len(f) - 1
    if n < 0:
        raise ZeroDivisionError("polynomial division by zero")
    r = np.array(trim(np.asarray(a, dtype=np.int64)), copy=True)
    lead_inv = field.inv(int(f[-1]))
    for k in range(len(r) - 1, n - 1, -1):
        c = int(r[k])
        if c:
            c = field.mul(c, lead_inv)
            r[k - n:k + 1] = field.sub_array(r[k - n:k + 1], field.scale_array(c, f))
    return trim(r[:n]) if len(r) > n else trim(r)


def poly_mulmod(a, b, f, field: Field):
    return poly_mod(poly_mul(a, b, field), f, field)


def poly_powmod(a, e: int, f, field: Field):
    result = np.array([1], dtype=np.int64)
    base = poly_mod(a, f, field)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, field)
        base = poly_mulmod(base, base, f, field)
        e >>= 1
    return result


def poly_gcd(a, b, field: Field):
    a = trim(np.asarray(a, dtype=np.int64))
    b = trim(np.asarray(b, dtype=np.int64))
    while len(b):
        a, b = b, poly_mod(a, b, field)
    if len(a):
        a = field.scale_array(field.inv(int(a[-1])), a)
    return a


def _padded(a, n):
    out = np.zeros(n, dtype=np.int64)
    a = trim(a)
    out[:len(a)] = a
    return out


def frobenius_matrix(f, field: Field):
    """
    Matrix of h -> h^q on F_q[x]/(f).

    The q-th power map is F_q-linear there, so column i holds x^(i*q) mod f.
    """
    n = degree(f)
    x = np.array([0, 1], dtype=np.int64)
    xq = poly_powmod(x, field.q, f, field)
    q_matrix = np.zeros((n, n), dtype=np.int64)
    column = np.array([1], dtype=np.int64)
    for i in range(n):
        q_matrix[:, i] = _padded(column, n)
        column = poly_mulmod(column, xq, f, field)
    return q_matrix


def is_irreducible(f, field: Field) -> bool:
    """Rabin's test for a monic polynomial of degree n >= 1."""
    f = trim(np.asarray(f, dtype=np.int64))
    n = len(f) - 1
    if n < 1 or int(f[-1]) != 1:
        return False
    if n == 1:
        return True
    if int(f[0]) == 0:
        return False

    q_matrix = frobenius_matrix(f, field)
    x = _padded(np.array([0, 1], dtype=np.int64), n)
    checkpoints = {n // r for r in prime_factors(n)}
    h = x
    powers = {}
    for k in range(1, n + 1):
        h = field.sum_array(field.mul_array(q_matrix, h[None, :]), axis=1)
        if k in checkpoints:
            powers[k] = h
    if not np.array_equal(h, x):
        return False
    for k in checkpoints:
        g = poly_gcd(field.sub_array(powers[k], x), f, field)
        if degree(g) != 0:
            return False
    return True


def random_irreducible(n: int, field: Field, rng, max_attempts: int = 100000):
    """Uniformly drawn monic irreducible polynomial of degree n."""
    for _ in range(max_attempts):
        f = np.zeros(n + 1, dtype=np.int64)
        f[:n] = field.random_elements(rng, n)
        f[n] = 1
        if is_irreducible(f, field):
            return f
    raise KeyMaterialError(f"no irreducible polynomial of degree {n} found")


def companion_matrix(f, field: Field):
    """Companion matrix of a monic polynomial; its minimal polynomial is f."""
    f = trim(np.asarray(f, dtype=np.int64))
    n = len(f) - 1
    c = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        c[i + 1, i] = 1
    c[:, n - 1] = field.neg_array(f[:n])
    return c
