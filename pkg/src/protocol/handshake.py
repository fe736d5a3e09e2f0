#!/usr/bin/env python
# coding: utf-8

"""
The Ironwood handshake computations.

Home Device (HD):
    hd_new_session       C, C', beta, beta' and the cached products CM, C'M'
    check_public_key     certificate and invalid-key checks on Pub_i
    hd_compute_response  Y, Y', s, s' and the mix matrix (C'M')(CM)^-1
Device D_i:
    device_compute_secret  s' = C_i . mix . C_i^-1 . s, three matrix-vector products
Both:
    derive_session_key, confirm_exchange, check_confirmation

Column N/2 is counted from 1, so it is index N/2 - 1 of the matrix.
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from src.algebra.braid import BraidWord, Permutation, permutation_of
from src.algebra.emult import EMultState, OpCounter, emult, matrix_inverse, matrix_mul, matrix_rank, matrix_vec
from src.core.config import NONCE_SIZE
from src.core.errors import DimensionError, KeyMaterialError, ProtocolError, SessionReusedError, ValidationError
from src.core.models import (
    Certificate, ConfirmationTag, DeviceKeyMaterial, HDResponse, HomeDeviceSecret, PublicKey, SessionConfig,
    SharedSecret, SystemParams, ValidationPolicy,
)
from src.ttp.keygen import random_product, sample_m0_polynomial, verify_cert, word_of_factors
from src.utils.logger import debug
from src.wire.codec import encode_vector

KDF_DOMAIN = b"ironwood-v1-kdf"
ROLE_DEVICE = "device"
ROLE_HD = "hd"
ROLE_LABELS = {ROLE_DEVICE: b"dev-confirm", ROLE_HD: b"hd-confirm"}

_MAX_RESAMPLES = 1000


@dataclass(eq=False)
class HDSession:
    """
    One HD ephemeral session; single use.

    Attributes:
        c, c_prime: Ephemeral m0-polynomials C and C'
        beta, beta_prime: Ephemeral braids with the same permutation sigma
        sigma: Their shared permutation
        cm, cpmp: Matrix slots of (C, Id)*beta and (C', Id)*beta'
        consumed: Set once a response has been computed
    """

    c: np.ndarray
    c_prime: np.ndarray
    beta: BraidWord
    beta_prime: BraidWord
    sigma: Permutation
    cm: np.ndarray
    cpmp: np.ndarray
    consumed: bool = False
    counter: OpCounter = dataclass_field(default_factory=OpCounter)


def secret_column(n: int) -> int:
    """0-based index of column N/2."""
    return n // 2 - 1


def _insert_pure(factors, pure_indices, insertions: int, rng):
    """Interleave `insertions` random pure factors into the sequence."""
    out = list(factors)
    for _ in range(insertions):
        k = int(rng.choice(pure_indices))
        sign = int(rng.choice((-1, 1)))
        out.insert(int(rng.integers(0, len(out) + 1)), (k, sign))
    return out


def hd_new_session(hd_secret: HomeDeviceSecret, params: SystemParams, config: SessionConfig, rng,
                   counter: OpCounter | None = None) -> HDSession:
    """
    Draw the ephemerals of one session and run the two E-Multiplications.

    beta' keeps beta's factor sequence and interleaves extra pure alpha
    conjugates, so both braids share one permutation. A beta' that still
    reduces to beta is drawn again.

    Raises:
        KeyMaterialError: If the alpha set has no pure entry.
    """
    alpha = hd_secret.alpha_set
    pure = alpha.pure_indices()
    if not pure:
        raise KeyMaterialError("alpha conjugate set has no pure entries to build beta'")
    field = params.field
    counter = counter if counter is not None else OpCounter()

    for _ in range(_MAX_RESAMPLES):
        factors = random_product(alpha, config.beta_factors, rng)
        beta = word_of_factors(alpha, factors)
        if not len(beta):
            continue
        beta_prime = word_of_factors(alpha, _insert_pure(factors, pure, config.pure_insertions, rng))
        if beta_prime.letters != beta.letters:
            break
    else:
        raise KeyMaterialError("could not draw distinct ephemeral braids beta and beta'")

    sigma = permutation_of(beta)
    _, c = sample_m0_polynomial(params, rng)
    _, c_prime = sample_m0_polynomial(params, rng)
    identity = Permutation.identity(params.n)
    cm = emult(EMultState(c, identity), beta, hd_secret.tvals, field, counter)
    cpmp = emult(EMultState(c_prime, identity), beta_prime, hd_secret.tvals, field, counter)
    debug(f"HD session: |beta|={len(beta)} |beta'|={len(beta_prime)}")
    return HDSession(c=c, c_prime=c_prime, beta=beta, beta_prime=beta_prime, sigma=sigma,
                     cm=cm.matrix, cpmp=cpmp.matrix, counter=counter)


def check_public_key(pub: PublicKey, cert: Certificate, verifier, params: SystemParams,
                     policy: ValidationPolicy | None = None) -> str | None:
    """
    Run the invalid-public-key checks.

    Returns:
        str or None: Name of the first failing check ('certificate',
        'permutation', 'zero-entries', 'zero-line', 'invertible'), or None.
    """
    policy = policy or ValidationPolicy()
    n = params.n
    if cert.pub != pub or not verify_cert(cert, verifier, params.field_spec):
        return "certificate"
    matrix = np.asarray(pub.matrix)
    if matrix.shape != (n, n) or pub.perm.n != n:
        return "permutation"
    if sorted(pub.perm.images) != list(range(1, n + 1)):
        return "permutation"
    zeros = matrix == 0
    if zeros.mean() > policy.max_zero_fraction:
        return "zero-entries"
    if policy.forbid_zero_lines and (zeros.all(axis=0).any() or zeros.all(axis=1).any()):
        return "zero-line"
    if matrix_rank(matrix, params.field) != n:
        return "invertible"
    return None


def validate_public_key(pub: PublicKey, cert: Certificate, verifier, params: SystemParams,
                        policy: ValidationPolicy | None = None) -> bool:
    return check_public_key(pub, cert, verifier, params, policy) is None


def require_valid_public_key(pub: PublicKey, cert: Certificate, verifier, params: SystemParams,
                             policy: ValidationPolicy | None = None):
    """Raise ValidationError naming the check that fired."""
    failed = check_public_key(pub, cert, verifier, params, policy)
    if failed is not None:
        raise ValidationError(failed)


def hd_compute_response(session: HDSession, pub: PublicKey, hd_secret: HomeDeviceSecret,
                        params: SystemParams) -> tuple[HDResponse, SharedSecret]:
    """
    Compute Y and Y', extract s and s', and build the mix matrix.

    Raises:
        SessionReusedError: If the session already produced a response.
        SingularMatrixError: If CM is singular (corrupted state).
    """
    if session.consumed:
        raise SessionReusedError("HD session already used")
    session.consumed = True
    field, tvals = params.field, hd_secret.tvals
    if pub.n != params.n:
        raise DimensionError(f"public key on {pub.n} strands, params use {params.n}")

    y = emult(EMultState(matrix_mul(session.c, pub.matrix, field), pub.perm),
              session.beta, tvals, field, session.counter)
    y_prime = emult(EMultState(matrix_mul(session.c_prime, pub.matrix, field), pub.perm),
                    session.beta_prime, tvals, field, session.counter)
    col = secret_column(params.n)
    s = y.matrix[:, col].copy()
    s_prime = y_prime.matrix[:, col].copy()
    mix = matrix_mul(session.cpmp, matrix_inverse(session.cm, field), field)
    return HDResponse(mix=mix, s=s), SharedSecret(s_prime=s_prime)


def device_compute_secret(key: DeviceKeyMaterial, response: HDResponse, params: SystemParams) -> SharedSecret:
    """Device side: s' = C_i (mix (C_i^-1 s)), right to left."""
    field = params.field
    if np.shape(response.mix) != (params.n, params.n) or np.shape(response.s) != (params.n,):
        raise DimensionError("response does not match the system parameters")
    v = matrix_vec(key.c_inverse, np.asarray(response.s, dtype=np.int64), field)
    v = matrix_vec(response.mix, v, field)
    return SharedSecret(s_prime=matrix_vec(key.c_matrix, v, field))


def transcript_hash(cert_frame: bytes, response_frame: bytes) -> bytes:
    return hashlib.sha256(cert_frame + response_frame).digest()


def derive_session_key(secret: SharedSecret, transcript: bytes, params: SystemParams) -> bytes:
    """SHA-256(domain tag || transcript hash || encoded s')."""
    if len(transcript) != 32:
        raise DimensionError(f"transcript hash must be 32 bytes, got {len(transcript)}")
    return hashlib.sha256(KDF_DOMAIN + transcript + encode_vector(secret.s_prime, params.field_spec)).digest()


def confirm_exchange(role: str, key: bytes, nonce: bytes) -> ConfirmationTag:
    """HMAC-SHA256(key, nonce || role label)."""
    if role not in ROLE_LABELS:
        raise ProtocolError(f"unknown role '{role}'")
    if len(nonce) != NONCE_SIZE:
        raise DimensionError(f"nonce must be {NONCE_SIZE} bytes")
    tag = hmac.new(key, nonce + ROLE_LABELS[role], hashlib.sha256).digest()
    return ConfirmationTag(nonce=nonce, tag=tag)


def check_confirmation(role: str, key: bytes, expected_nonce: bytes, received: ConfirmationTag) -> bool:
    """True iff `received` answers our nonce under our key for `role`."""
    if not hmac.compare_digest(received.nonce, expected_nonce):
        return False
    return hmac.compare_digest(confirm_exchange(role, key, expected_nonce).tag, received.tag)
