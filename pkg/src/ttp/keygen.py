#!/usr/bin/env python
# coding: utf-8

"""
Trusted Third Party key generation and provisioning.

The TTP fixes the public information (B_N, F_q, m0), draws two commuting
conjugate sets and the T-values, hands the first set and the T-values to the
Home Device, and issues every device D_i a private matrix C_i together with
a certificate on Pub_i = (C_i, Id) * beta_i. Issuance is stateless apart
from the TTP's signing key, and deterministic for a given rng.
"""

from __future__ import annotations

import hashlib

import numpy as np

from src.algebra.braid import BraidWord, ConjugateSet, Permutation, conjugate, free_reduce, make_pure_word, random_word
from src.algebra.emult import (
    EMultState, MAX_STRANDS, TValues, emult, identity_matrix, is_invertible, matrix_inverse, matrix_mul,
    matrix_rank, random_tvalues,
)
from src.algebra.field import FieldSpec, field_make, parse_field
from src.algebra.poly import companion_matrix, random_irreducible
from src.core.errors import KeyMaterialError, MalformedEncodingError
from src.core.models import (
    Certificate, DeviceKeyMaterial, HomeDeviceSecret, KeygenConfig, PublicKey, SystemParams, TtpState,
)
from src.ttp.signing import generate_signer, make_signer, make_verifier
from src.utils.logger import fingerprint, log_provisioning
from src.wire.codec import cert_signing_bytes, encode_matrix, encode_public_key

_MAX_RESAMPLES = 1000


def make_system_params(n: int, spec: FieldSpec, m0) -> SystemParams:
    """
    Wrap m0 into SystemParams, caching m0^0..m0^(N-1).

    Raises:
        KeyMaterialError: If N is odd or out of range, m0 is singular, or its
            powers are linearly dependent.
    """
    if n % 2 or not 4 <= n <= MAX_STRANDS:
        raise KeyMaterialError(f"N must be even and in [4, {MAX_STRANDS}], got {n}")
    field = field_make(spec)
    m0 = np.asarray(m0, dtype=np.int64)
    if not is_invertible(m0, field):
        raise KeyMaterialError("m0 is singular")
    powers = [identity_matrix(n)]
    for _ in range(n - 1):
        powers.append(matrix_mul(powers[-1], m0, field))
    stacked = np.stack([p.ravel() for p in powers])
    if matrix_rank(stacked, field) != n:
        raise KeyMaterialError("powers of m0 are linearly dependent; its minimal polynomial has degree < N")
    return SystemParams(n=n, field_spec=spec, m0=m0, m0_powers=tuple(powers))


def gen_system_params(n: int, field_spec: FieldSpec, rng) -> SystemParams:
    """m0 is the companion matrix of a random monic irreducible polynomial of degree N."""
    if n % 2 or not 4 <= n <= MAX_STRANDS:
        raise KeyMaterialError(f"N must be even and in [4, {MAX_STRANDS}], got {n}")
    field = field_make(field_spec)
    f = random_irreducible(n, field, rng)
    params = make_system_params(n, field_spec, companion_matrix(f, field))
    log_provisioning("system-params", {"n": n, "field": field_spec.name,
                                       "m0": fingerprint(encode_matrix(params.m0, field_spec))})
    return params


def _index_ranges(n: int):
    half = n // 2
    return (1, half - 1), (half + 1, n - 1)


def _nonempty(draw, what: str) -> BraidWord:
    for _ in range(_MAX_RESAMPLES):
        word = draw()
        if len(word):
            return word
    raise KeyMaterialError(f"could not draw a non-empty {what}; increase its length")


def gen_conjugate_sets(params: SystemParams, r: int, z_length: int, word_length: int, pure_fraction: float,
                       rng, gamma_length: int | None = None) -> tuple[ConjugateSet, ConjugateSet]:
    """
    Draw the commuting conjugate sets C_alpha and C_gamma.

    Alpha words use generators 1..N/2-1 and gamma words N/2+1..N-1, so every
    alpha commutes with every gamma; conjugating all of them by one word z
    keeps that. A ``pure_fraction`` share of the alpha words are pure braids.

    Args:
        params: System parameters
        r: Entries per set
        z_length: Letters drawn for z
        word_length: Letters drawn for each alpha word
        pure_fraction: Share of pure alpha words (at least one when positive)
        rng: numpy Generator
        gamma_length: Letters for each gamma word (defaults to word_length)

    Returns:
        tuple: (C_alpha, C_gamma)
    """
    n = params.n
    if r < 2:
        raise KeyMaterialError(f"conjugate sets need r >= 2, got {r}")
    if z_length < 0 or word_length < 1 or (gamma_length is not None and gamma_length < 1):
        raise KeyMaterialError("degenerate word lengths for conjugate sets")
    if not 0.0 <= pure_fraction <= 1.0:
        raise KeyMaterialError(f"pure_fraction {pure_fraction} outside [0, 1]")
    gamma_length = word_length if gamma_length is None else gamma_length
    lower, upper = _index_ranges(n)

    z = random_word(n, z_length, (1, n - 1), rng)
    n_pure = int(round(pure_fraction * r))
    if pure_fraction > 0:
        n_pure = max(1, n_pure)
    pure_slots = set(int(k) for k in rng.choice(r, size=n_pure, replace=False))

    alphas, flags = [], []
    for k in range(r):
        pure = k in pure_slots
        maker = make_pure_word if pure else random_word
        w = _nonempty(lambda: maker(n, word_length, lower, rng), "alpha word")
        alphas.append(conjugate(z, w))
        flags.append(pure)
    gammas = [conjugate(z, _nonempty(lambda: random_word(n, gamma_length, upper, rng), "gamma word"))
              for _ in range(r)]

    return ConjugateSet(tuple(alphas), tuple(flags)), ConjugateSet(tuple(gammas), (False,) * r)


def gen_tvalues(params: SystemParams, rng) -> TValues:
    if params.field_spec.q < 4:
        raise KeyMaterialError(f"T-values need q >= 4, got q={params.field_spec.q}")
    return random_tvalues(params.n, params.field, rng)


def m0_polynomial(params: SystemParams, coeffs) -> np.ndarray:
    """Sum of c_k * m0^k."""
    field = params.field
    coeffs = np.asarray(coeffs, dtype=np.int64)
    if coeffs.shape != (params.n,):
        raise KeyMaterialError(f"expected {params.n} coefficients, got shape {coeffs.shape}")
    stack = np.stack(params.m0_powers)
    return field.sum_array(field.mul_array(coeffs[:, None, None], stack), axis=0)


def sample_m0_polynomial(params: SystemParams, rng) -> tuple[np.ndarray, np.ndarray]:
    """Uniform non-zero coefficients and the matrix they define (always invertible)."""
    for _ in range(_MAX_RESAMPLES):
        coeffs = params.field.random_elements(rng, params.n).astype(np.int64)
        if coeffs.any():
            return coeffs, m0_polynomial(params, coeffs)
    raise KeyMaterialError("could not draw a non-zero coefficient vector")


def random_product(conjugates: ConjugateSet, factors: int, rng, choices=None) -> list[tuple[int, int]]:
    """
    Factor sequence [(index, sign), ...] drawn with replacement.

    Args:
        conjugates: Set to draw from
        factors: Number of factors
        rng: numpy Generator
        choices: Optional subset of indices to draw from
    """
    pool = np.arange(len(conjugates)) if choices is None else np.asarray(choices)
    if pool.size == 0:
        raise KeyMaterialError("no conjugates to draw from")
    picks = rng.choice(pool, size=factors)
    signs = rng.choice((-1, 1), size=factors)
    return [(int(k), int(e)) for k, e in zip(picks, signs)]


def word_of_factors(conjugates: ConjugateSet, factors) -> BraidWord:
    """Freely reduced product of the given conjugates (sign -1 means inverse)."""
    letters: list[int] = []
    for k, sign in factors:
        w = conjugates.conjugates[k]
        letters.extend(w.letters if sign > 0 else w.inverse().letters)
    return free_reduce(BraidWord(conjugates.n_strands, tuple(letters)))


def sign_certificate(pub: PublicKey, device_id: bytes, signer, spec: FieldSpec) -> Certificate:
    signature = signer.sign(cert_signing_bytes(device_id, pub, spec))
    return Certificate(pub=pub, device_id=device_id, signature=signature,
                       signer_id=signer.signer_id, algorithm=signer.algorithm)


def verify_cert(cert: Certificate, verifier, spec: FieldSpec) -> bool:
    """
    Check a certificate signature over its canonical bytes.

    Returns:
        bool: False for a wrong algorithm, signer or signature.

    Raises:
        MalformedEncodingError: If the signature has the wrong length for the algorithm.
    """
    if cert.algorithm != verifier.algorithm or cert.signer_id != verifier.signer_id:
        return False
    if len(cert.signature) != verifier.signature_size:
        raise MalformedEncodingError(
            f"signature of {len(cert.signature)} bytes, algorithm 0x{cert.algorithm:02x} uses {verifier.signature_size}"
        )
    return verifier.verify(cert_signing_bytes(cert.device_id, cert.pub, spec), cert.signature)


def issue_device(params: SystemParams, gamma_set: ConjugateSet, tvals: TValues, device_id: bytes,
                 beta_factors: int, signer, rng) -> tuple[DeviceKeyMaterial, BraidWord]:
    """
    Issue key material for one device and also return its braid beta_i.

    The braid never leaves this function in production use (see
    gen_device_key); it is returned for analysis and tests.
    """
    if beta_factors < 1:
        raise KeyMaterialError(f"beta_i needs at least one conjugate factor, got {beta_factors}")
    field = params.field
    beta_i = _nonempty(lambda: word_of_factors(gamma_set, random_product(gamma_set, beta_factors, rng)), "beta_i")
    coeffs, c_matrix = sample_m0_polynomial(params, rng)
    result = emult(EMultState(c_matrix, Permutation.identity(params.n)), beta_i, tvals, field)
    pub = PublicKey(result.matrix, result.perm)
    cert = sign_certificate(pub, device_id, signer, params.field_spec)
    material = DeviceKeyMaterial(c_coeffs=coeffs, c_matrix=c_matrix,
                                 c_inverse=matrix_inverse(c_matrix, field), cert=cert)
    log_provisioning("device-key", {"device_id": device_id.decode("utf-8", "replace"),
                                    "beta_length": len(beta_i),
                                    "pub": fingerprint(encode_public_key(pub, params.field_spec))})
    return material, beta_i


def gen_device_key(params: SystemParams, gamma_set: ConjugateSet, tvals: TValues, device_id: bytes,
                   beta_factors: int, signer, rng) -> DeviceKeyMaterial:
    """(C_i, C_i^-1, Cert_i) for device_id; the TTP keeps nothing about it."""
    material, _ = issue_device(params, gamma_set, tvals, device_id, beta_factors, signer, rng)
    return material


def provision_ttp(config: KeygenConfig, rng) -> TtpState:
    """Run `ttp init`: parameters, both conjugate sets, T-values and a signing key."""
    spec = parse_field(config.field)
    params = gen_system_params(config.n, spec, rng)
    alpha_set, gamma_set = gen_conjugate_sets(params, config.conjugates, config.z_length, config.alpha_length,
                                              config.pure_fraction, rng, gamma_length=config.gamma_length)
    tvals = gen_tvalues(params, rng)
    signer = generate_signer(config.signer, rng)
    log_provisioning("ttp-state", {"conjugates": config.conjugates,
                                   "pure": len(alpha_set.pure_indices()),
                                   "signer": config.signer,
                                   "signer_id": signer.signer_id.hex()})
    return TtpState(params=params, alpha_set=alpha_set, gamma_set=gamma_set, tvals=tvals,
                    signer_algorithm=signer.algorithm, signing_key=signer.private_bytes)


def hd_secret_of(state: TtpState) -> HomeDeviceSecret:
    """What `export-hd` writes into the Home Device."""
    if not state.alpha_set.pure_indices():
        raise KeyMaterialError("alpha set has no pure entries")
    log_provisioning("hd-secret", {"conjugates": len(state.alpha_set)})
    verifier = signer_of(state).verifier()
    return HomeDeviceSecret(alpha_set=state.alpha_set, tvals=state.tvals,
                            verifier_algorithm=verifier.algorithm, verification_key=verifier.verification_key)


def signer_of(state: TtpState):
    return make_signer(state.signer_algorithm, state.signing_key)


def verifier_of(hd_secret: HomeDeviceSecret):
    """Certificate verifier the TTP handed to the Home Device."""
    if not hd_secret.verification_key:
        raise KeyMaterialError("Home Device secret carries no verification key")
    return make_verifier(hd_secret.verifier_algorithm, hd_secret.verification_key)


def device_rng(seed: int | None, device_id: bytes):
    """Per-device Generator: same seed and id give the same stream."""
    if seed is None:
        return np.random.default_rng()
    tag = int.from_bytes(hashlib.sha256(device_id).digest()[:8], "big")
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag]))
