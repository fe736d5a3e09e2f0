#!/usr/bin/env python
# coding: utf-8

"""
Certificate signature providers.

A provider signs bytes and reports its algorithm byte, signature size and
signer id; a verifier checks signatures with the matching verification key.

ALGORITHM_HMAC is a keyed hash whose verification key IS the signing key.
It exists for tests and fixtures and is NOT FOR PRODUCTION: anyone able to
verify can also forge. ALGORITHM_ED25519 uses the cryptography package.
"""

import hashlib
import hmac

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey, Ed25519PublicKey
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

from src.core.errors import KeyMaterialError

ALGORITHM_HMAC = 0x01
ALGORITHM_ED25519 = 0x02

SIGNER_NAMES = {"hmac": ALGORITHM_HMAC, "ed25519": ALGORITHM_ED25519}

KEY_SIZE = 32
SIGNER_ID_SIZE = 8


def signer_id_of(verification_key: bytes) -> bytes:
    """First 8 bytes of SHA-256 over the verification key."""
    return hashlib.sha256(verification_key).digest()[:SIGNER_ID_SIZE]


class HmacSigner:
    """HMAC-SHA256 test signer (NOT FOR PRODUCTION)."""

    algorithm = ALGORITHM_HMAC
    signature_size = 32

    def __init__(self, key: bytes):
        if len(key) != KEY_SIZE:
            raise KeyMaterialError(f"HMAC signing key must be {KEY_SIZE} bytes, got {len(key)}")
        self._key = bytes(key)

    @property
    def private_bytes(self) -> bytes:
        return self._key

    @property
    def verification_key(self) -> bytes:
        return self._key

    @property
    def signer_id(self) -> bytes:
        return signer_id_of(self._key)

    def sign(self, data: bytes) -> bytes:
        return hmac.new(self._key, data, hashlib.sha256).digest()

    def verify(self, data: bytes, signature: bytes) -> bool:
        return hmac.compare_digest(self.sign(data), signature)

    def verifier(self) -> "HmacSigner":
        return self


class Ed25519Verifier:
    algorithm = ALGORITHM_ED25519
    signature_size = 64

    def __init__(self, public_bytes: bytes):
        if len(public_bytes) != KEY_SIZE:
            raise KeyMaterialError(f"Ed25519 public key must be {KEY_SIZE} bytes, got {len(public_bytes)}")
        self._public_bytes = bytes(public_bytes)
        self._public = Ed25519PublicKey.from_public_bytes(self._public_bytes)

    @property
    def verification_key(self) -> bytes:
        return self._public_bytes

    @property
    def signer_id(self) -> bytes:
        return signer_id_of(self._public_bytes)

    def verify(self, data: bytes, signature: bytes) -> bool:
        try:
            self._public.verify(signature, data)
        except InvalidSignature:
            return False
        return True


class Ed25519Signer:
    algorithm = ALGORITHM_ED25519
    signature_size = 64

    def __init__(self, seed: bytes):
        if len(seed) != KEY_SIZE:
            raise KeyMaterialError(f"Ed25519 private key must be {KEY_SIZE} bytes, got {len(seed)}")
        self._seed = bytes(seed)
        self._private = Ed25519PrivateKey.from_private_bytes(self._seed)
        public_bytes = self._private.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
        self._verifier = Ed25519Verifier(public_bytes)

    @property
    def private_bytes(self) -> bytes:
        return self._seed

    @property
    def verification_key(self) -> bytes:
        return self._verifier.verification_key

    @property
    def signer_id(self) -> bytes:
        return self._verifier.signer_id

    def sign(self, data: bytes) -> bytes:
        return self._private.sign(data)

    def verify(self, data: bytes, signature: bytes) -> bool:
        return self._verifier.verify(data, signature)

    def verifier(self) -> Ed25519Verifier:
        return self._verifier


def make_signer(algorithm: int, private_bytes: bytes):
    """
    Rebuild a signer from its algorithm byte and raw private key.

    Raises:
        KeyMaterialError: On an unknown algorithm or a badly sized key.
    """
    if algorithm == ALGORITHM_HMAC:
        return HmacSigner(private_bytes)
    if algorithm == ALGORITHM_ED25519:
        return Ed25519Signer(private_bytes)
    raise KeyMaterialError(f"unknown signature algorithm 0x{algorithm:02x}")


def make_verifier(algorithm: int, verification_key: bytes):
    if algorithm == ALGORITHM_HMAC:
        return HmacSigner(verification_key)
    if algorithm == ALGORITHM_ED25519:
        return Ed25519Verifier(verification_key)
    raise KeyMaterialError(f"unknown signature algorithm 0x{algorithm:02x}")


def generate_signer(name: str, rng):
    """Fresh signer drawn from a numpy Generator, so seeded runs repeat."""
    if name not in SIGNER_NAMES:
        raise KeyMaterialError(f"unknown signer '{name}'; choose from {sorted(SIGNER_NAMES)}")
    return make_signer(SIGNER_NAMES[name], rng.bytes(KEY_SIZE))
