#!/usr/bin/env python
# coding: utf-8

"""
Canonical byte encodings for protocol messages.

All integers are big-endian. Field elements take ``element_bytes`` bytes each
(one byte for q <= 256). Permutations are written 0-based, each entry packed
into ceil(log2 N) bits MSB-first, and the last byte is zero-padded; non-zero
padding is rejected. Every decoder is strict: it checks the exact length and
every value range, so decode(encode(x)) == x and encode(decode(b)) == b.

Frames: "IRWD" || version(1) || msg_type(1) || length(4) || payload.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from src.algebra.braid import Permutation
from src.algebra.field import BINARY, PRIME, FieldSpec
from src.core.config import MAX_FRAME_PAYLOAD, NONCE_SIZE, TAG_SIZE
from src.core.errors import FieldError, MalformedEncodingError
from src.core.models import Certificate, ConfirmationTag, HDResponse, PublicKey

FRAME_MAGIC = b"IRWD"
FRAME_VERSION = 0x01
FRAME_HEADER = struct.Struct(">4sBBI")

MSG_CERT = 0x01
MSG_RESPONSE = 0x02
MSG_CONFIRM = 0x03
MSG_PARAMS = 0x04
MSG_NAMES = {MSG_CERT: "CERT", MSG_RESPONSE: "RESPONSE", MSG_CONFIRM: "CONFIRM", MSG_PARAMS: "PARAMS"}

FIELD_KIND_BINARY = 0x01
FIELD_KIND_PRIME = 0x02
FIELD_SPEC_SIZE = 4

CERT_DOMAIN = b"ironwood-v1-cert"
FINGERPRINT_SIZE = 32


# ----------------------------------------------------------------------
# field specs, elements, matrices
# ----------------------------------------------------------------------
def encode_field_spec(spec: FieldSpec) -> bytes:
    """kind(1) || m-or-0(1) || modulus low 16 bits (2); x^16 is implied for m = 16."""
    kind = FIELD_KIND_BINARY if spec.kind == BINARY else FIELD_KIND_PRIME
    return struct.pack(">BBH", kind, spec.m, spec.modulus & 0xFFFF)


def decode_field_spec(data: bytes) -> FieldSpec:
    if len(data) != FIELD_SPEC_SIZE:
        raise MalformedEncodingError(f"field spec must be {FIELD_SPEC_SIZE} bytes, got {len(data)}")
    kind, m, stored = struct.unpack(">BBH", data)
    try:
        if kind == FIELD_KIND_BINARY:
            if m < 16 and stored >> m != 1:
                raise MalformedEncodingError(f"binary modulus 0x{stored:04x} does not have degree {m}")
            return FieldSpec(BINARY, 1 << m, (1 << m) | stored)
        if kind == FIELD_KIND_PRIME:
            if m != 0:
                raise MalformedEncodingError("prime field spec with non-zero degree byte")
            return FieldSpec(PRIME, stored, stored)
    except FieldError as exc:
        raise MalformedEncodingError(f"invalid field spec: {exc}") from exc
    raise MalformedEncodingError(f"unknown field kind byte 0x{kind:02x}")


def _element_dtype(spec: FieldSpec):
    return np.dtype(">u1") if spec.element_bytes == 1 else np.dtype(">u2")


def encode_elements(values, spec: FieldSpec) -> bytes:
    arr = np.asarray(values, dtype=np.int64).ravel()
    if arr.size and (arr.min() < 0 or arr.max() >= spec.q):
        raise MalformedEncodingError(f"value outside {spec.name}")
    return arr.astype(_element_dtype(spec)).tobytes()


def decode_elements(data: bytes, count: int, spec: FieldSpec) -> np.ndarray:
    expected = count * spec.element_bytes
    if len(data) != expected:
        raise MalformedEncodingError(f"expected {expected} bytes for {count} elements, got {len(data)}")
    arr = np.frombuffer(data, dtype=_element_dtype(spec)).astype(np.int64)
    if arr.size and arr.max() >= spec.q:
        raise MalformedEncodingError(f"element {int(arr.max())} outside {spec.name}")
    return arr


def matrix_size(n: int, spec: FieldSpec) -> int:
    return n * n * spec.element_bytes


def vector_size(n: int, spec: FieldSpec) -> int:
    return n * spec.element_bytes


def encode_matrix(matrix, spec: FieldSpec) -> bytes:
    return encode_elements(matrix, spec)


def decode_matrix(data: bytes, n: int, spec: FieldSpec) -> np.ndarray:
    return decode_elements(data, n * n, spec).reshape(n, n)


# ----------------------------------------------------------------------
# permutations
# ----------------------------------------------------------------------
def permutation_bits(n: int) -> int:
    return max(1, (n - 1).bit_length())


def permutation_size(n: int) -> int:
    return (n * permutation_bits(n) + 7) // 8


def encode_permutation(perm: Permutation) -> bytes:
    bits = permutation_bits(perm.n)
    acc = 0
    for image in perm.images:
        acc = (acc << bits) | (image - 1)
    total = permutation_size(perm.n) * 8
    acc <<= total - perm.n * bits
    return acc.to_bytes(total // 8, "big")


def decode_permutation(data: bytes, n: int) -> Permutation:
    if len(data) != permutation_size(n):
        raise MalformedEncodingError(f"permutation on {n} points needs {permutation_size(n)} bytes, got {len(data)}")
    bits = permutation_bits(n)
    acc = int.from_bytes(data, "big")
    padding = len(data) * 8 - n * bits
    if acc & ((1 << padding) - 1):
        raise MalformedEncodingError("non-zero permutation padding")
    acc >>= padding
    mask = (1 << bits) - 1
    images = [((acc >> (bits * (n - 1 - k))) & mask) + 1 for k in range(n)]
    if sorted(images) != list(range(1, n + 1)):
        raise MalformedEncodingError(f"{images} is not a permutation of 1..{n}")
    return Permutation(tuple(images))


# ----------------------------------------------------------------------
# public keys and responses
# ----------------------------------------------------------------------
def public_key_size(n: int, spec: FieldSpec) -> int:
    return matrix_size(n, spec) + permutation_size(n)


def response_size(n: int, spec: FieldSpec) -> int:
    return matrix_size(n, spec) + vector_size(n, spec)


def encode_public_key(pub: PublicKey, spec: FieldSpec) -> bytes:
    return encode_matrix(pub.matrix, spec) + encode_permutation(pub.perm)


def decode_public_key(data: bytes, spec: FieldSpec, n: int) -> PublicKey:
    """
    Decode a public key matrix followed by its packed permutation.

    Raises:
        MalformedEncodingError: On a wrong length, out-of-range element or bad permutation.
    """
    if len(data) != public_key_size(n, spec):
        raise MalformedEncodingError(f"public key must be {public_key_size(n, spec)} bytes, got {len(data)}")
    cut = matrix_size(n, spec)
    return PublicKey(decode_matrix(data[:cut], n, spec), decode_permutation(data[cut:], n))


def encode_response(resp: HDResponse, spec: FieldSpec) -> bytes:
    return encode_matrix(resp.mix, spec) + encode_elements(resp.s, spec)


def decode_response(data: bytes, spec: FieldSpec, n: int) -> HDResponse:
    if len(data) != response_size(n, spec):
        raise MalformedEncodingError(f"response must be {response_size(n, spec)} bytes, got {len(data)}")
    cut = matrix_size(n, spec)
    return HDResponse(decode_matrix(data[:cut], n, spec), decode_elements(data[cut:], n, spec))


def encode_vector(v, spec: FieldSpec) -> bytes:
    return encode_elements(v, spec)


# ----------------------------------------------------------------------
# certificates and confirmations
# ----------------------------------------------------------------------
def _len16(data: bytes) -> bytes:
    if len(data) > 0xFFFF:
        raise MalformedEncodingError(f"field of {len(data)} bytes exceeds the 16-bit length prefix")
    return struct.pack(">H", len(data)) + data


class ByteReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, count: int) -> bytes:
        if self.pos + count > len(self.data):
            raise MalformedEncodingError("truncated input")
        chunk = self.data[self.pos:self.pos + count]
        self.pos += count
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def prefixed(self) -> bytes:
        return self.take(self.u16())

    def done(self):
        if self.pos != len(self.data):
            raise MalformedEncodingError(f"{len(self.data) - self.pos} trailing bytes")


def cert_signing_bytes(device_id: bytes, pub: PublicKey, spec: FieldSpec) -> bytes:
    """The bytes a TTP signs: domain tag, length-prefixed device id, canonical public key."""
    return CERT_DOMAIN + _len16(device_id) + encode_public_key(pub, spec)


def encode_cert(cert: Certificate, spec: FieldSpec) -> bytes:
    """algorithm(1) || signer_id(8) || len16 device_id || public key || len16 signature."""
    if len(cert.signer_id) != 8:
        raise MalformedEncodingError(f"signer id must be 8 bytes, got {len(cert.signer_id)}")
    return (bytes([cert.algorithm]) + cert.signer_id + _len16(cert.device_id)
            + encode_public_key(cert.pub, spec) + _len16(cert.signature))


def decode_cert(data: bytes, spec: FieldSpec, n: int) -> Certificate:
    reader = ByteReader(data)
    algorithm = reader.u8()
    signer_id = reader.take(8)
    device_id = reader.prefixed()
    pub = decode_public_key(reader.take(public_key_size(n, spec)), spec, n)
    signature = reader.prefixed()
    reader.done()
    return Certificate(pub=pub, device_id=device_id, signature=signature,
                       signer_id=signer_id, algorithm=algorithm)


def encode_confirm(tag: ConfirmationTag) -> bytes:
    if len(tag.nonce) != NONCE_SIZE or len(tag.tag) != TAG_SIZE:
        raise MalformedEncodingError("confirmation needs a 16-byte nonce and a 32-byte tag")
    return tag.nonce + tag.tag


def decode_confirm(data: bytes) -> ConfirmationTag:
    if len(data) != NONCE_SIZE + TAG_SIZE:
        raise MalformedEncodingError(f"confirmation must be {NONCE_SIZE + TAG_SIZE} bytes, got {len(data)}")
    return ConfirmationTag(nonce=data[:NONCE_SIZE], tag=data[NONCE_SIZE:])


def encode_response_message(resp: HDResponse, nonce: bytes, spec: FieldSpec) -> bytes:
    """RESPONSE payload: the response followed by the HD's 16-byte challenge nonce."""
    if len(nonce) != NONCE_SIZE:
        raise MalformedEncodingError(f"nonce must be {NONCE_SIZE} bytes")
    return encode_response(resp, spec) + nonce


def decode_response_message(data: bytes, spec: FieldSpec, n: int) -> tuple[HDResponse, bytes]:
    if len(data) != response_size(n, spec) + NONCE_SIZE:
        raise MalformedEncodingError(f"RESPONSE payload must be {response_size(n, spec) + NONCE_SIZE} bytes")
    return decode_response(data[:-NONCE_SIZE], spec, n), data[-NONCE_SIZE:]


# ----------------------------------------------------------------------
# frames
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Frame:
    msg_type: int
    payload: bytes

    @property
    def name(self) -> str:
        return MSG_NAMES.get(self.msg_type, f"0x{self.msg_type:02x}")


def encode_frame(msg_type: int, payload: bytes) -> bytes:
    if msg_type not in MSG_NAMES:
        raise MalformedEncodingError(f"unknown message type 0x{msg_type:02x}")
    if len(payload) > MAX_FRAME_PAYLOAD:
        raise MalformedEncodingError(f"payload of {len(payload)} bytes exceeds {MAX_FRAME_PAYLOAD}")
    return FRAME_HEADER.pack(FRAME_MAGIC, FRAME_VERSION, msg_type, len(payload)) + payload


def parse_frame_header(header: bytes) -> tuple[int, int]:
    """Validate a 10-byte header and return (msg_type, payload length)."""
    if len(header) != FRAME_HEADER.size:
        raise MalformedEncodingError(f"frame header must be {FRAME_HEADER.size} bytes")
    magic, version, msg_type, length = FRAME_HEADER.unpack(header)
    if magic != FRAME_MAGIC:
        raise MalformedEncodingError(f"bad frame magic {magic!r}")
    if version != FRAME_VERSION:
        raise MalformedEncodingError(f"unsupported frame version {version}")
    if msg_type not in MSG_NAMES:
        raise MalformedEncodingError(f"unknown message type 0x{msg_type:02x}")
    if length > MAX_FRAME_PAYLOAD:
        raise MalformedEncodingError(f"frame payload of {length} bytes exceeds {MAX_FRAME_PAYLOAD}")
    return msg_type, length


def decode_frame(data: bytes) -> Frame:
    """Decode exactly one frame occupying all of data."""
    msg_type, length = parse_frame_header(data[:FRAME_HEADER.size])
    payload = data[FRAME_HEADER.size:]
    if len(payload) != length:
        raise MalformedEncodingError(f"frame announces {length} payload bytes, carries {len(payload)}")
    return Frame(msg_type, payload)


class FrameDecoder:
    """Incremental decoder: feed bytes as they arrive, collect whole frames."""

    def __init__(self):
        self._buffer = bytearray()

    def feed(self, data: bytes) -> list[Frame]:
        self._buffer.extend(data)
        frames = []
        while len(self._buffer) >= FRAME_HEADER.size:
            msg_type, length = parse_frame_header(bytes(self._buffer[:FRAME_HEADER.size]))
            end = FRAME_HEADER.size + length
            if len(self._buffer) < end:
                break
            frames.append(Frame(msg_type, bytes(self._buffer[FRAME_HEADER.size:end])))
            del self._buffer[:end]
        return frames

    @property
    def pending(self) -> int:
        return len(self._buffer)
