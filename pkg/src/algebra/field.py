#!/usr/bin/env python
# coding: utf-8

"""
Finite field arithmetic for the Ironwood toolkit.

Two field shapes are supported: binary fields GF(2^m) with 2 <= m <= 16 and
prime fields F_p with 3 <= p < 2^16. Elements are plain Python ints in
[0, q); vectors and matrices of elements are numpy int64 arrays. The field
context is always passed explicitly.

Binary multiplication is carry-less shift-and-reduce. For speed the field
context builds log/antilog tables (and a full product table when q <= 256);
the tables are checked against shift-and-reduce when the context is built.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from src.core.errors import FieldError

BINARY = "binary"
PRIME = "prime"

# x^8 + x^4 + x^3 + x + 1
GF256_MODULUS = 0x11B

_PRODUCT_TABLE_LIMIT = 256


def _degree(poly: int) -> int:
    return poly.bit_length() - 1


def _gf2_mod(a: int, b: int) -> int:
    """Remainder of a by b in GF(2)[x]."""
    db = _degree(b)
    while a and _degree(a) >= db:
        a ^= b << (_degree(a) - db)
    return a


def is_irreducible_gf2(poly: int) -> bool:
    """Irreducibility over GF(2) by exhaustive trial division (degree <= 16)."""
    m = _degree(poly)
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        for divisor in range(1 << d, 1 << (d + 1)):
            if _gf2_mod(poly, divisor) == 0:
                return False
    return True


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    factors = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        factors.append(n)
    return factors


def find_binary_modulus(m: int) -> int:
    """Lowest irreducible polynomial of degree m, except GF(2^8) which uses 0x11B."""
    if m == 8:
        return GF256_MODULUS
    for candidate in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible_gf2(candidate):
            return candidate
    raise FieldError(f"no irreducible polynomial of degree {m}")


def shift_and_reduce(a: int, b: int, m: int, modulus: int) -> int:
    """Reference carry-less multiply of a and b modulo the degree-m modulus."""
    result = 0
    top = 1 << m
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return result


@dataclass(frozen=True)
class FieldSpec:
    """
    Defining data of a supported finite field.

    Attributes:
        kind: 'binary' or 'prime'
        q: Field cardinality
        modulus: Reduction polynomial bitmask (binary) or the prime p (prime)
    """

    kind: str
    q: int
    modulus: int

    def __post_init__(self):
        if self.kind == BINARY:
            if self.q < 2 or self.q & (self.q - 1):
                raise FieldError(f"binary field size {self.q} is not a power of two")
            m = _degree(self.q)
            if not 2 <= m <= 16:
                raise FieldError(f"binary field degree {m} outside [2, 16]")
            if _degree(self.modulus) != m:
                raise FieldError(f"modulus {self.modulus:#x} does not have degree {m}")
            if not is_irreducible_gf2(self.modulus):
                raise FieldError(f"modulus {self.modulus:#x} is reducible")
        elif self.kind == PRIME:
            if self.q != self.modulus:
                raise FieldError("prime field requires q == p")
            if not 3 <= self.q < 1 << 16:
                raise FieldError(f"prime {self.q} outside [3, 2^16)")
            if not is_prime(self.q):
                raise FieldError(f"{self.q} is not prime")
        else:
            raise FieldError(f"unknown field kind '{self.kind}'")

    @property
    def m(self) -> int:
        """Extension degree for binary fields, 0 for prime fields."""
        return _degree(self.q) if self.kind == BINARY else 0

    @property
    def characteristic(self) -> int:
        return 2 if self.kind == BINARY else self.q

    @property
    def element_bytes(self) -> int:
        return ((self.q - 1).bit_length() + 7) // 8

    @property
    def name(self) -> str:
        if self.kind == PRIME:
            return f"p{self.q}"
        if self.modulus == find_binary_modulus(self.m):
            return f"gf{self.q}"
        return f"gf{self.q}:{self.modulus:#x}"

    @classmethod
    def binary(cls, m: int, modulus: int | None = None) -> "FieldSpec":
        if not 2 <= m <= 16:
            raise FieldError(f"binary field degree {m} outside [2, 16]")
        return cls(BINARY, 1 << m, modulus if modulus is not None else find_binary_modulus(m))

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(PRIME, p, p)


def parse_field(name: str) -> FieldSpec:
    """
    Parse a CLI field name.

    Accepted forms: ``gf256``, ``gf2^8``, ``gf256:0x11b`` (explicit modulus),
    ``p5`` / ``f5`` (prime fields).
    """
    text = name.strip().lower()
    try:
        if text.startswith("gf"):
            body, _, modulus = text[2:].partition(":")
            if body.startswith("2^"):
                m = int(body[2:])
            else:
                q = int(body)
                if q < 2 or q & (q - 1):
                    raise FieldError(f"'{name}' is not a power of two")
                m = _degree(q)
            return FieldSpec.binary(m, int(modulus, 0) if modulus else None)
        if text[:1] in ("p", "f"):
            return FieldSpec.prime(int(text[1:]))
    except ValueError as exc:
        if isinstance(exc, FieldError):
            raise
        raise FieldError(f"cannot parse field '{name}'") from exc
    raise FieldError(f"cannot parse field '{name}'")


class Field:
    """
    Arithmetic context for one finite field.

    Scalar methods take and return ints; ``*_array`` methods work elementwise on
    numpy int64 arrays (with broadcasting), which is what the matrix code uses.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.q = spec.q
        self.is_binary = spec.kind == BINARY
        self._product = None
        if self.is_binary:
            self._build_tables()

    def __repr__(self):
        return f"Field({self.spec.name})"

    # ------------------------------------------------------------------
    # table construction
    # ------------------------------------------------------------------
    def _primitive_element(self) -> int:
        m, modulus, order = self.spec.m, self.spec.modulus, self.q - 1
        factors = prime_factors(order)

        def power(a, e):
            result = 1
            while e:
                if e & 1:
                    result = shift_and_reduce(result, a, m, modulus)
                a = shift_and_reduce(a, a, m, modulus)
                e >>= 1
            return result

        for g in range(2, self.q):
            if all(power(g, order // f) != 1 for f in factors):
                return g
        # m >= 2, so q - 1 >= 3 and a generator exists
        raise FieldError(f"no primitive element in {self.spec.name}")

    def _build_tables(self):
        m, modulus, order = self.spec.m, self.spec.modulus, self.q - 1
        g = self._primitive_element()
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        for k in range(order):
            exp[k] = x
            log[x] = k
            x = shift_and_reduce(x, g, m, modulus)
        exp[order:] = exp[:order]
        self._exp = exp
        self._log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        if self.q <= _PRODUCT_TABLE_LIMIT:
            a = np.arange(self.q, dtype=np.int64)
            la = log[a]
            prod = exp[la[:, None] + la[None, :]]
            prod[0, :] = 0
            prod[:, 0] = 0
            self._product = prod
        self._validate_tables()

    def _validate_tables(self):
        m, modulus = self.spec.m, self.spec.modulus
        if self.q <= _PRODUCT_TABLE_LIMIT:
            a = np.repeat(np.arange(self.q, dtype=np.int64), self.q)
            b = np.tile(np.arange(self.q, dtype=np.int64), self.q)
        else:
            rng = np.random.default_rng(0)
            a = rng.integers(0, self.q, size=4096)
            b = rng.integers(0, self.q, size=4096)
        reference = np.zeros_like(a)
        aa, bb = a.copy(), b.copy()
        top = 1 << m
        for _ in range(m):
            reference ^= np.where(bb & 1, aa, 0)
            bb >>= 1
            aa <<= 1
            aa = np.where(aa & top, aa ^ modulus, aa)
        if not np.array_equal(self.mul_array(a, b), reference):
            raise FieldError(f"log/antilog tables disagree with shift-and-reduce for {self.spec.name}")

    # ------------------------------------------------------------------
    # scalar arithmetic
    # ------------------------------------------------------------------
    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of {self.spec.name}")
        return a

    def from_int(self, c: int) -> int:
        """Image of an integer under Z -> F_q."""
        if self.is_binary:
            return c & 1
        return c % self.q

    def add(self, a: int, b: int) -> int:
        if self.is_binary:
            return a ^ b
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        if self.is_binary:
            return a ^ b
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        if self.is_binary:
            return a
        return (-a) % self.q

    def mul(self, a: int, b: int) -> int:
        if self.is_binary:
            if a == 0 or b == 0:
                return 0
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        return (a * b) % self.q

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("inversion of zero")
        if self.is_binary:
            return self._exp_list[(self.q - 1) - self._log_list[a]]
        return pow(a, self.q - 2, self.q)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # ------------------------------------------------------------------
    # array arithmetic
    # ------------------------------------------------------------------
    def add_array(self, a, b):
        if self.is_binary:
            return np.bitwise_xor(a, b)
        return (a + b) % self.q

    def sub_array(self, a, b):
        if self.is_binary:
            return np.bitwise_xor(a, b)
        return (a - b) % self.q

    def neg_array(self, a):
        if self.is_binary:
            return np.array(a, dtype=np.int64, copy=True)
        return (-a) % self.q

    def mul_array(self, a, b):
        if not self.is_binary:
            return (np.asarray(a, dtype=np.int64) * b) % self.q
        if self._product is not None:
            return self._product[a, b]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def scale_array(self, s: int, v):
        """Multiply every entry of v by the scalar s."""
        if not self.is_binary:
            return (s * v) % self.q
        if self._product is not None:
            return self._product[s][v]
        if s == 0:
            return np.zeros_like(v)
        out = self._exp[self._log_list[s] + self._log[v]]
        return np.where(v == 0, 0, out)

    def sum_array(self, a, axis=None):
        if self.is_binary:
            return np.bitwise_xor.reduce(a, axis=axis)
        return np.sum(a, axis=axis) % self.q

    def random_elements(self, rng, size, exclude=()):
        """Uniform elements, optionally excluding a small set of values."""
        allowed = np.setdiff1d(np.arange(self.q, dtype=np.int64), np.array(exclude, dtype=np.int64))
        if allowed.size == 0:
            raise FieldError(f"nothing left to sample in {self.spec.name}")
        return rng.choice(allowed, size=size)

    def same_field(self, other: "Field") -> bool:
        return self.spec == other.spec


@functools.lru_cache(maxsize=None)
def field_make(spec: FieldSpec) -> Field:
    """Build (and cache) the arithmetic context for a validated field spec."""
    if not isinstance(spec, FieldSpec):
        raise FieldError("field_make expects a FieldSpec")
    return Field(spec)


def field_arith(field: Field, a: int, b: int, op: str) -> int:
    """
    Apply one elementary operation.

    Args:
        field: Field context
        a: First operand
        b: Second operand (ignored by 'inv' and 'neg')
        op: One of 'add', 'sub', 'mul', 'inv', 'neg'

    Returns:
        int: The result in [0, q)

    Raises:
        FieldError: On unknown op, out-of-field operands or inversion of zero.
    """
    field.check(a)
    if op in ("add", "sub", "mul"):
        field.check(b)
    if op == "add":
        return field.add(a, b)
    if op == "sub":
        return field.sub(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "inv":
        return field.inv(a)
    if op == "neg":
        return field.neg(a)
    raise FieldError(f"unknown field operation '{op}'")


def default_field() -> Field:
    return field_make(FieldSpec(BINARY, 256, GF256_MODULUS))
