import numpy as np
import pytest

from src.algebra.field import (
    GF256_MODULUS, FieldSpec, default_field, field_arith, field_make, is_irreducible_gf2, parse_field,
    shift_and_reduce,
)
from src.core.errors import FieldError


class TestFieldSpec:
    def test_default_field_is_aes_field(self):
        field = default_field()
        assert field.spec == FieldSpec.binary(8)
        assert field.spec.modulus == GF256_MODULUS == 0x11B
        assert field.spec.name == "gf256"

    @pytest.mark.parametrize("text, kind, q", [
        ("gf256", "binary", 256),
        ("GF2^8", "binary", 256),
        ("gf16", "binary", 16),
        ("gf65536", "binary", 65536),
        ("p5", "prime", 5),
        ("f7", "prime", 7),
        ("p65521", "prime", 65521),
    ])
    def test_parse_field(self, text, kind, q):
        spec = parse_field(text)
        assert spec.kind == kind
        assert spec.q == q

    def test_parse_field_with_modulus(self):
        assert parse_field("gf256:0x11d").modulus == 0x11D

    @pytest.mark.parametrize("text", ["gf255", "p6", "p2", "x7", "gf", "gf2^17", "p65537"])
    def test_parse_field_rejects(self, text):
        with pytest.raises(FieldError):
            parse_field(text)

    def test_reducible_modulus_rejected(self):
        # x^8 + x^4 + x^3 + x is divisible by x
        with pytest.raises(FieldError):
            FieldSpec.binary(8, 0x11A)

    def test_wrong_degree_modulus_rejected(self):
        with pytest.raises(FieldError):
            FieldSpec.binary(8, 0x13)

    def test_element_bytes(self):
        assert FieldSpec.binary(8).element_bytes == 1
        assert FieldSpec.prime(5).element_bytes == 1
        assert FieldSpec.binary(16).element_bytes == 2
        assert FieldSpec.prime(257).element_bytes == 2

    def test_is_irreducible_gf2(self):
        assert is_irreducible_gf2(0x11B)
        assert is_irreducible_gf2(0b111)
        assert not is_irreducible_gf2(0b101)


class TestScalarArithmetic:
    def test_gf256_known_products(self, gf256):
        assert gf256.mul(0x57, 0x83) == 0xC1
        assert gf256.mul(0x53, 0xCA) == 0x01
        assert gf256.inv(0x53) == 0xCA

    def test_gf256_add_is_xor(self, gf256):
        assert gf256.add(0x57, 0x83) == 0xD4
        assert gf256.sub(0x57, 0x83) == 0xD4
        assert gf256.neg(0x57) == 0x57

    def test_prime_field(self, f5):
        assert f5.mul(2, 3) == 1
        assert f5.inv(2) == 3
        assert f5.sub(1, 3) == 3
        assert f5.neg(1) == 4
        assert f5.pow(2, -1) == 3

    @pytest.mark.parametrize("name", ["gf4", "gf256", "p5", "p257"])
    def test_every_inverse(self, name):
        field = field_make(parse_field(name))
        for a in range(1, field.q):
            assert field.mul(a, field.inv(a)) == 1

    def test_gf65536_inverses(self):
        field = field_make(FieldSpec.binary(16))
        rng = np.random.default_rng(3)
        for a in rng.integers(1, field.q, size=200):
            assert field.mul(int(a), field.inv(int(a))) == 1

    def test_tables_match_shift_and_reduce(self, gf256):
        rng = np.random.default_rng(5)
        for a, b in rng.integers(0, 256, size=(500, 2)):
            assert gf256.mul(int(a), int(b)) == shift_and_reduce(int(a), int(b), 8, 0x11B)

    def test_inverse_of_zero(self, gf256, f5):
        with pytest.raises(FieldError):
            gf256.inv(0)
        with pytest.raises(FieldError):
            f5.inv(0)


class TestFieldLaws:
    TRIPLES = 10_000

    @pytest.mark.parametrize("name", ["gf256", "p257", "p5"])
    def test_associative_and_distributive(self, name):
        field = field_make(parse_field(name))
        rng = np.random.default_rng(9)
        a, b, c = (field.random_elements(rng, self.TRIPLES).astype(np.int64) for _ in range(3))
        mul, add = field.mul_array, field.add_array
        assert np.array_equal(mul(mul(a, b), c), mul(a, mul(b, c)))
        assert np.array_equal(add(add(a, b), c), add(a, add(b, c)))
        assert np.array_equal(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))

    @pytest.mark.parametrize("name", ["gf256", "p257", "gf65536"])
    def test_inverse(self, name):
        field = field_make(parse_field(name))
        rng = np.random.default_rng(10)
        for a in field.random_elements(rng, self.TRIPLES, exclude=(0,)):
            assert field.mul(int(a), field.inv(int(a))) == 1

    def test_frobenius(self, gf256):
        rng = np.random.default_rng(12)
        a, b = (gf256.random_elements(rng, self.TRIPLES).astype(np.int64) for _ in range(2))
        lhs = gf256.mul_array(gf256.add_array(a, b), gf256.add_array(a, b))
        assert np.array_equal(lhs, gf256.add_array(gf256.mul_array(a, a), gf256.mul_array(b, b)))

    def test_scalar_path_agrees_on_triples(self, gf256):
        rng = np.random.default_rng(13)
        for a, b, c in rng.integers(0, 256, size=(2000, 3)):
            a, b, c = int(a), int(b), int(c)
            assert gf256.mul(gf256.mul(a, b), c) == gf256.mul(a, gf256.mul(b, c))
            assert gf256.mul(a, gf256.add(b, c)) == gf256.add(gf256.mul(a, b), gf256.mul(a, c))


class TestFieldArith:
    def test_ops(self, f5):
        assert field_arith(f5, 3, 4, "add") == 2
        assert field_arith(f5, 3, 4, "sub") == 4
        assert field_arith(f5, 3, 4, "mul") == 2
        assert field_arith(f5, 3, 0, "inv") == 2
        assert field_arith(f5, 3, 0, "neg") == 2

    def test_unknown_op(self, f5):
        with pytest.raises(FieldError):
            field_arith(f5, 1, 1, "pow")

    def test_out_of_field_operand(self, f5):
        with pytest.raises(FieldError):
            field_arith(f5, 5, 1, "add")


class TestArrayArithmetic:
    @pytest.mark.parametrize("name", ["gf256", "p5", "gf65536"])
    def test_arrays_match_scalars(self, name):
        field = field_make(parse_field(name))
        rng = np.random.default_rng(11)
        a = field.random_elements(rng, 64).astype(np.int64)
        b = field.random_elements(rng, 64).astype(np.int64)
        s = int(field.random_elements(rng, 1)[0])
        assert list(field.mul_array(a, b)) == [field.mul(int(x), int(y)) for x, y in zip(a, b)]
        assert list(field.add_array(a, b)) == [field.add(int(x), int(y)) for x, y in zip(a, b)]
        assert list(field.sub_array(a, b)) == [field.sub(int(x), int(y)) for x, y in zip(a, b)]
        assert list(field.scale_array(s, a)) == [field.mul(s, int(x)) for x in a]

    def test_random_elements_exclude(self, f5, rng):
        values = f5.random_elements(rng, 500, exclude=(0, 1))
        assert set(int(v) for v in values) <= {2, 3, 4}

    def test_field_make_is_cached(self):
        assert field_make(FieldSpec.prime(5)) is field_make(FieldSpec.prime(5))
