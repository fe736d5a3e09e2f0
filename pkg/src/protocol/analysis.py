#!/usr/bin/env python
# coding: utf-8

"""
All-secrets harness and eavesdropper formulas.

Nothing here runs in a real handshake: the harness sees the secrets of every
party at once (beta_i, C, C', beta, beta', T-values) and checks the algebra
behind the agreement, and the eavesdropper functions use only values seen on
the wire to try to recover s'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.algebra.braid import ConjugateSet, Permutation, permutation_of
from src.algebra.emult import EMultState, emult, identity_matrix, matrix_inverse, matrix_mul, matrix_vec
from src.core.errors import KeyMaterialError
from src.core.models import HDResponse, HomeDeviceSecret, PublicKey, SessionConfig, SharedSecret, SystemParams
from src.protocol.handshake import (
    HDSession, device_compute_secret, hd_compute_response, hd_new_session, secret_column,
)
from src.ttp.keygen import issue_device, sample_m0_polynomial

_MAX_RESAMPLES = 1000


def eavesdrop_commuting_mix(response: HDResponse, params: SystemParams) -> SharedSecret:
    """Guess s' = (C'M')(CM)^-1 s; right whenever C_i commutes with the mix matrix."""
    return SharedSecret(matrix_vec(response.mix, np.asarray(response.s), params.field))


def eavesdrop_conjugated_mix(pub: PublicKey, response: HDResponse, params: SystemParams) -> SharedSecret:
    """Guess s' = Pub . mix . Pub^-1 . s; right whenever M_i commutes with the mix matrix."""
    field = params.field
    v = matrix_vec(matrix_inverse(pub.matrix, field), np.asarray(response.s), field)
    v = matrix_vec(response.mix, v, field)
    return SharedSecret(matrix_vec(pub.matrix, v, field))


def degenerate_session(hd_secret: HomeDeviceSecret, params: SystemParams, config: SessionConfig, rng) -> HDSession:
    """A session with beta' = beta and C' != C, so M' = M and the mix is C'C^-1."""
    honest = hd_new_session(hd_secret, params, config, rng)
    field = params.field
    for _ in range(_MAX_RESAMPLES):
        _, c_prime = sample_m0_polynomial(params, rng)
        if not np.array_equal(c_prime, honest.c):
            break
    else:
        raise KeyMaterialError("could not draw C' different from C")
    cpmp = emult(EMultState(c_prime, Permutation.identity(params.n)), honest.beta, hd_secret.tvals, field)
    return HDSession(c=honest.c, c_prime=c_prime, beta=honest.beta, beta_prime=honest.beta,
                     sigma=honest.sigma, cm=honest.cm, cpmp=cpmp.matrix)


@dataclass
class AllSecretsReport:
    """Outcome of one fully observed run; every flag is True for honest parameters."""

    agreed: bool
    y_identity: bool
    y_prime_identity: bool
    commuting_pair: bool
    mix_identity: bool
    shared_permutation: bool
    mi_commutes_with_mix: bool


def run_all_secrets(params: SystemParams, hd_secret: HomeDeviceSecret, gamma_set: ConjugateSet, signer,
                    config: SessionConfig, rng, beta_factors: int) -> AllSecretsReport:
    """
    Issue a device, run one handshake and recheck the agreement algebra.

    With X the matrix slot of (Id, sigma) * beta_i this verifies
    Y = C_i C M X, Y' = C_i C' M' X, mix = C'M'M^-1C^-1 and
    (C C_iM_i, sigma_i) * beta == (C_i CM, sigma) * beta_i.
    ``mi_commutes_with_mix`` reports whether the second weak-key condition holds.
    """
    field, tvals, n = params.field, hd_secret.tvals, params.n
    key, beta_i = issue_device(params, gamma_set, tvals, b"all-secrets", beta_factors, signer, rng)
    pub = key.cert.pub
    session = hd_new_session(hd_secret, params, config, rng)
    response, hd_secret_vec = hd_compute_response(session, pub, hd_secret, params)
    device_vec = device_compute_secret(key, response, params)

    identity = Permutation.identity(n)
    m = emult(EMultState(identity_matrix(n), identity), session.beta, tvals, field).matrix
    m_prime = emult(EMultState(identity_matrix(n), identity), session.beta_prime, tvals, field).matrix
    m_i = emult(EMultState(identity_matrix(n), identity), beta_i, tvals, field).matrix
    x = emult(EMultState(identity_matrix(n), session.sigma), beta_i, tvals, field).matrix

    y = emult(EMultState(matrix_mul(session.c, pub.matrix, field), pub.perm), session.beta, tvals, field)
    y_prime = emult(EMultState(matrix_mul(session.c_prime, pub.matrix, field), pub.perm),
                    session.beta_prime, tvals, field)

    def chain(*mats):
        out = mats[0]
        for mat in mats[1:]:
            out = matrix_mul(out, mat, field)
        return out

    ci = key.c_matrix
    y_identity = np.array_equal(y.matrix, chain(ci, session.c, m, x))
    y_prime_identity = np.array_equal(y_prime.matrix, chain(ci, session.c_prime, m_prime, x))
    col = secret_column(n)
    y_identity = y_identity and np.array_equal(y.matrix[:, col], response.s)

    rhs = emult(EMultState(matrix_mul(ci, session.cm, field), session.sigma), beta_i, tvals, field)
    commuting_pair = y == rhs

    expected_mix = chain(session.c_prime, m_prime, matrix_inverse(m, field), matrix_inverse(session.c, field))
    mix_identity = np.array_equal(response.mix, expected_mix)

    shared_perm = permutation_of(session.beta) == permutation_of(session.beta_prime) == session.sigma

    mi_commutes = np.array_equal(matrix_mul(m_i, response.mix, field), matrix_mul(response.mix, m_i, field))
    return AllSecretsReport(
        agreed=hd_secret_vec == device_vec,
        y_identity=bool(y_identity),
        y_prime_identity=bool(y_prime_identity),
        commuting_pair=bool(commuting_pair),
        mix_identity=bool(mix_identity),
        shared_permutation=bool(shared_perm),
        mi_commutes_with_mix=bool(mi_commutes),
    )
