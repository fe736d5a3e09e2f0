#!/usr/bin/env python
# coding: utf-8

"""
Key record container ("IRWK") and key-file IO.

A record is "IRWK" || version(1) || record-type(1) || payload. The params
payload is field spec(4) || N(1) || m0; every other payload starts with the
32-byte SHA-256 fingerprint of the params payload it was issued under, so key
material from different TTP runs cannot be mixed.
"""

from __future__ import annotations

import hashlib
import os
import struct

import numpy as np

from src.algebra.braid import BraidWord, ConjugateSet
from src.algebra.emult import TValues, identity_matrix, matrix_mul
from src.core.errors import (
    BraidError, DimensionError, FieldError, FingerprintMismatchError, KeyMaterialError, MalformedEncodingError,
)
from src.core.models import Certificate, DeviceKeyMaterial, HomeDeviceSecret, SystemParams, TtpState
from src.ttp.keygen import m0_polynomial, make_system_params
from src.wire.codec import (
    FIELD_SPEC_SIZE, FINGERPRINT_SIZE, ByteReader, decode_cert, decode_elements, decode_field_spec, decode_matrix,
    encode_cert, encode_elements, encode_field_spec, encode_matrix, matrix_size, vector_size,
)

RECORD_MAGIC = b"IRWK"
RECORD_VERSION = 0x01

RECORD_PARAMS = 0x01
RECORD_HD_SECRET = 0x02
RECORD_DEVICE_KEY = 0x03
RECORD_CERTIFICATE = 0x04
RECORD_TTP_STATE = 0x05

RECORD_NAMES = {
    RECORD_PARAMS: "system-params",
    RECORD_HD_SECRET: "hd-secret",
    RECORD_DEVICE_KEY: "device-key",
    RECORD_CERTIFICATE: "certificate",
    RECORD_TTP_STATE: "ttp-state",
}


# ----------------------------------------------------------------------
# params
# ----------------------------------------------------------------------
def encode_params(params: SystemParams) -> bytes:
    return encode_field_spec(params.field_spec) + bytes([params.n]) + encode_matrix(params.m0, params.field_spec)


def decode_params(data: bytes) -> SystemParams:
    if len(data) < FIELD_SPEC_SIZE + 1:
        raise MalformedEncodingError("truncated params")
    spec = decode_field_spec(data[:FIELD_SPEC_SIZE])
    n = data[FIELD_SPEC_SIZE]
    m0 = decode_matrix(data[FIELD_SPEC_SIZE + 1:], n, spec)
    try:
        return make_system_params(n, spec, m0)
    except KeyMaterialError as exc:
        raise MalformedEncodingError(f"invalid system params: {exc}") from exc


def params_fingerprint(params: SystemParams) -> bytes:
    return hashlib.sha256(encode_params(params)).digest()


# ----------------------------------------------------------------------
# conjugate sets
# ----------------------------------------------------------------------
def encode_conjugate_set(conjugates: ConjugateSet) -> bytes:
    """r(2), then per entry: pure flag(1) || letter count(4) || signed int8 letters."""
    out = [struct.pack(">H", len(conjugates))]
    for word, pure in zip(conjugates.conjugates, conjugates.pure_flags):
        out.append(struct.pack(">BI", 1 if pure else 0, len(word)))
        out.append(np.asarray(word.letters, dtype=np.int8).tobytes())
    return b"".join(out)


def _read_conjugate_set(reader: ByteReader, n: int) -> ConjugateSet:
    r = reader.u16()
    if r == 0:
        raise MalformedEncodingError("empty conjugate set")
    words, flags = [], []
    for _ in range(r):
        flag = reader.u8()
        if flag not in (0, 1):
            raise MalformedEncodingError(f"bad pure flag {flag}")
        count = reader.u32()
        letters = np.frombuffer(reader.take(count), dtype=np.int8)
        try:
            words.append(BraidWord(n, tuple(int(x) for x in letters)))
        except BraidError as exc:
            raise MalformedEncodingError(str(exc)) from exc
        flags.append(bool(flag))
    return ConjugateSet(tuple(words), tuple(flags))


def _read_tvalues(reader: ByteReader, params: SystemParams) -> TValues:
    raw = decode_elements(reader.take(vector_size(params.n, params.field_spec)), params.n, params.field_spec)
    try:
        return TValues(tuple(int(t) for t in raw))
    except FieldError as exc:
        raise MalformedEncodingError(str(exc)) from exc


# ----------------------------------------------------------------------
# record payloads
# ----------------------------------------------------------------------
def encode_hd_secret(secret: HomeDeviceSecret, params: SystemParams) -> bytes:
    """fp || T-values || alpha set || verifier algorithm(1) || len16 verification key."""
    return (params_fingerprint(params) + encode_elements(secret.tvals.taus, params.field_spec)
            + encode_conjugate_set(secret.alpha_set) + bytes([secret.verifier_algorithm])
            + struct.pack(">H", len(secret.verification_key)) + secret.verification_key)


def encode_device_key(key: DeviceKeyMaterial, params: SystemParams) -> bytes:
    spec = params.field_spec
    return (params_fingerprint(params) + encode_elements(key.c_coeffs, spec) + encode_matrix(key.c_matrix, spec)
            + encode_matrix(key.c_inverse, spec) + encode_cert(key.cert, spec))


def encode_certificate(cert: Certificate, params: SystemParams) -> bytes:
    return params_fingerprint(params) + encode_cert(cert, params.field_spec)


def encode_ttp_state(state: TtpState) -> bytes:
    params = state.params
    return (params_fingerprint(params) + bytes([state.signer_algorithm])
            + struct.pack(">H", len(state.signing_key)) + state.signing_key
            + encode_elements(state.tvals.taus, params.field_spec)
            + encode_conjugate_set(state.alpha_set) + encode_conjugate_set(state.gamma_set))


def _check_fingerprint(reader: ByteReader, params: SystemParams):
    stored = reader.take(FINGERPRINT_SIZE)
    if stored != params_fingerprint(params):
        raise FingerprintMismatchError(
            f"key material was issued under params {stored.hex()[:16]}, not {params_fingerprint(params).hex()[:16]}"
        )


def decode_hd_secret(data: bytes, params: SystemParams) -> HomeDeviceSecret:
    reader = ByteReader(data)
    _check_fingerprint(reader, params)
    tvals = _read_tvalues(reader, params)
    alpha_set = _read_conjugate_set(reader, params.n)
    algorithm = reader.u8()
    verification_key = reader.prefixed()
    reader.done()
    return HomeDeviceSecret(alpha_set=alpha_set, tvals=tvals, verifier_algorithm=algorithm,
                            verification_key=verification_key)


def decode_device_key(data: bytes, params: SystemParams) -> DeviceKeyMaterial:
    """
    Decode a device key and check C_i against its coefficients and inverse.

    Raises:
        FingerprintMismatchError: If issued under other params.
        MalformedEncodingError: On bad bytes or inconsistent matrices.
    """
    spec, n, field = params.field_spec, params.n, params.field
    reader = ByteReader(data)
    _check_fingerprint(reader, params)
    coeffs = decode_elements(reader.take(vector_size(n, spec)), n, spec)
    c_matrix = decode_matrix(reader.take(matrix_size(n, spec)), n, spec)
    c_inverse = decode_matrix(reader.take(matrix_size(n, spec)), n, spec)
    cert = decode_cert(reader.take(len(data) - reader.pos), spec, n)
    if not np.array_equal(m0_polynomial(params, coeffs), c_matrix):
        raise MalformedEncodingError("C_i does not match its m0 coefficients")
    if not np.array_equal(matrix_mul(c_matrix, c_inverse, field), identity_matrix(n)):
        raise MalformedEncodingError("stored C_i^-1 is not the inverse of C_i")
    return DeviceKeyMaterial(c_coeffs=coeffs, c_matrix=c_matrix, c_inverse=c_inverse, cert=cert)


def decode_certificate(data: bytes, params: SystemParams) -> Certificate:
    reader = ByteReader(data)
    _check_fingerprint(reader, params)
    return decode_cert(reader.take(len(data) - reader.pos), params.field_spec, params.n)


def decode_ttp_state(data: bytes, params: SystemParams) -> TtpState:
    reader = ByteReader(data)
    _check_fingerprint(reader, params)
    algorithm = reader.u8()
    signing_key = reader.prefixed()
    tvals = _read_tvalues(reader, params)
    alpha_set = _read_conjugate_set(reader, params.n)
    gamma_set = _read_conjugate_set(reader, params.n)
    reader.done()
    return TtpState(params=params, alpha_set=alpha_set, gamma_set=gamma_set, tvals=tvals,
                    signer_algorithm=algorithm, signing_key=signing_key)


# ----------------------------------------------------------------------
# container
# ----------------------------------------------------------------------
def wrap_record(record_type: int, payload: bytes) -> bytes:
    if record_type not in RECORD_NAMES:
        raise MalformedEncodingError(f"unknown record type 0x{record_type:02x}")
    return RECORD_MAGIC + bytes([RECORD_VERSION, record_type]) + payload


def unwrap_record(data: bytes) -> tuple[int, bytes]:
    """Check the container header and return (record type, payload)."""
    if len(data) < 6 or data[:4] != RECORD_MAGIC:
        raise MalformedEncodingError("not an IRWK key record")
    version, record_type = data[4], data[5]
    if version != RECORD_VERSION:
        raise MalformedEncodingError(f"unsupported key record version {version}")
    if record_type not in RECORD_NAMES:
        raise MalformedEncodingError(f"unknown record type 0x{record_type:02x}")
    return record_type, data[6:]


_ENCODERS = {
    HomeDeviceSecret: (RECORD_HD_SECRET, encode_hd_secret),
    DeviceKeyMaterial: (RECORD_DEVICE_KEY, encode_device_key),
    Certificate: (RECORD_CERTIFICATE, encode_certificate),
}

_DECODERS = {
    RECORD_HD_SECRET: decode_hd_secret,
    RECORD_DEVICE_KEY: decode_device_key,
    RECORD_CERTIFICATE: decode_certificate,
    RECORD_TTP_STATE: decode_ttp_state,
}


def encode_key_record(obj, params: SystemParams | None = None) -> bytes:
    """
    Encode any persisted object as a full IRWK record.

    Args:
        obj: SystemParams, TtpState, HomeDeviceSecret, DeviceKeyMaterial or Certificate
        params: The params the object belongs to (not needed for SystemParams/TtpState)
    """
    if isinstance(obj, SystemParams):
        return wrap_record(RECORD_PARAMS, encode_params(obj))
    if isinstance(obj, TtpState):
        return wrap_record(RECORD_TTP_STATE, encode_ttp_state(obj))
    for cls, (record_type, encoder) in _ENCODERS.items():
        if isinstance(obj, cls):
            if params is None:
                raise DimensionError(f"{RECORD_NAMES[record_type]} records need the system params")
            return wrap_record(record_type, encoder(obj, params))
    raise MalformedEncodingError(f"no key record for {type(obj).__name__}")


def decode_key_record(data: bytes, params: SystemParams | None = None, expect: int | None = None):
    """
    Decode a full IRWK record.

    Returns:
        tuple: (record type, decoded object)
    """
    record_type, payload = unwrap_record(data)
    if expect is not None and record_type != expect:
        raise MalformedEncodingError(f"expected a {RECORD_NAMES[expect]} record, found {RECORD_NAMES[record_type]}")
    if record_type == RECORD_PARAMS:
        return record_type, decode_params(payload)
    if params is None:
        raise DimensionError(f"{RECORD_NAMES[record_type]} records need the system params")
    return record_type, _DECODERS[record_type](payload, params)


def record_fingerprint(data: bytes) -> bytes | None:
    """Params fingerprint a record was issued under (its own for params records)."""
    record_type, payload = unwrap_record(data)
    if record_type == RECORD_PARAMS:
        return hashlib.sha256(payload).digest()
    if len(payload) < FINGERPRINT_SIZE:
        raise MalformedEncodingError("truncated key record")
    return payload[:FINGERPRINT_SIZE]


# ----------------------------------------------------------------------
# files
# ----------------------------------------------------------------------
def write_record(path, data: bytes):
    directory = os.path.dirname(os.fspath(path))
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(data)


def read_record(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def save(path, obj, params: SystemParams | None = None):
    write_record(path, encode_key_record(obj, params))


def load(path, params: SystemParams | None = None, expect: int | None = None):
    return decode_key_record(read_record(path), params, expect)[1]


# ----------------------------------------------------------------------
# debug export (not canonical)
# ----------------------------------------------------------------------
def _hex_rows(matrix, spec) -> list[str]:
    return [encode_elements(row, spec).hex() for row in np.asarray(matrix)]


def _describe_set(conjugates: ConjugateSet) -> list[dict]:
    return [{"pure": pure, "length": len(word), "word": word.to_text()}
            for word, pure in zip(conjugates.conjugates, conjugates.pure_flags)]


def _describe_cert(cert: Certificate, spec) -> dict:
    return {
        "device_id": cert.device_id.decode("utf-8", "replace"),
        "algorithm": cert.algorithm,
        "signer_id": cert.signer_id.hex(),
        "pub_matrix": _hex_rows(cert.pub.matrix, spec),
        "pub_perm": list(cert.pub.perm.images),
        "signature": cert.signature.hex(),
    }


def describe_record(record_type: int, obj, params: SystemParams | None = None) -> dict:
    """Hex/JSON-friendly view of a decoded record for `inspect --json`."""
    params = obj if record_type == RECORD_PARAMS else params
    spec = params.field_spec
    out = {"record": RECORD_NAMES[record_type], "n": params.n, "field": spec.name,
           "params_fingerprint": params_fingerprint(params).hex()}
    if record_type == RECORD_PARAMS:
        out["m0"] = _hex_rows(obj.m0, spec)
    elif record_type == RECORD_HD_SECRET:
        out.update(tvals=encode_elements(obj.tvals.taus, spec).hex(), alpha_set=_describe_set(obj.alpha_set),
                   verifier_algorithm=obj.verifier_algorithm, verification_key=obj.verification_key.hex())
    elif record_type == RECORD_DEVICE_KEY:
        out.update(c_coeffs=encode_elements(obj.c_coeffs, spec).hex(), c_matrix=_hex_rows(obj.c_matrix, spec),
                   c_inverse=_hex_rows(obj.c_inverse, spec), certificate=_describe_cert(obj.cert, spec))
    elif record_type == RECORD_CERTIFICATE:
        out["certificate"] = _describe_cert(obj, spec)
    elif record_type == RECORD_TTP_STATE:
        out.update(signer_algorithm=obj.signer_algorithm, signing_key=obj.signing_key.hex(),
                   tvals=encode_elements(obj.tvals.taus, spec).hex(),
                   alpha_set=_describe_set(obj.alpha_set), gamma_set=_describe_set(obj.gamma_set))
    return out
