import numpy as np

from src.algebra.braid import Permutation
from src.algebra.emult import matrix_inverse
from src.core.models import DeviceKeyMaterial, PublicKey
from src.protocol.analysis import (
    degenerate_session, eavesdrop_commuting_mix, eavesdrop_conjugated_mix, run_all_secrets,
)
from src.protocol.handshake import device_compute_secret, hd_compute_response, hd_new_session
from src.ttp.keygen import sample_m0_polynomial, sign_certificate


def trivial_braid_device(fixture, rng):
    """A device whose braid beta_i is trivial, so Pub_i = (C_i, Id)."""
    params = fixture.params
    coeffs, c_matrix = sample_m0_polynomial(params, rng)
    pub = PublicKey(c_matrix, Permutation.identity(params.n))
    cert = sign_certificate(pub, b"trivial", fixture.signer, params.field_spec)
    return DeviceKeyMaterial(c_coeffs=coeffs, c_matrix=c_matrix,
                             c_inverse=matrix_inverse(c_matrix, params.field), cert=cert)


class TestAllSecrets:
    def test_agreement_algebra_holds(self, toy, session_config, rng):
        for _ in range(100):
            report = run_all_secrets(toy.params, toy.hd_secret, toy.state.gamma_set, toy.signer,
                                     session_config, rng, beta_factors=4)
            assert report.agreed
            assert report.y_identity
            assert report.y_prime_identity
            assert report.commuting_pair
            assert report.mix_identity
            assert report.shared_permutation

    def test_gf256(self, big, session_config, rng):
        for _ in range(10):
            report = run_all_secrets(big.params, big.hd_secret, big.state.gamma_set, big.signer,
                                     session_config, rng, beta_factors=4)
            assert report.agreed and report.commuting_pair and report.mix_identity
            assert not report.mi_commutes_with_mix


class TestWeakKeys:
    def test_equal_ephemeral_braids_leak_the_secret(self, toy, session_config, rng):
        broken = 0
        for _ in range(100):
            session = degenerate_session(toy.hd_secret, toy.params, session_config, rng)
            assert session.beta.letters == session.beta_prime.letters
            response, hd_vec = hd_compute_response(session, toy.device.cert.pub, toy.hd_secret, toy.params)
            device_vec = device_compute_secret(toy.device, response, toy.params)
            assert device_vec == hd_vec
            broken += eavesdrop_commuting_mix(response, toy.params) == device_vec
        assert broken == 100

    def test_honest_sessions_resist(self, big, session_config, rng):
        broken = 0
        for _ in range(100):
            session = hd_new_session(big.hd_secret, big.params, session_config, rng)
            response, _ = hd_compute_response(session, big.device.cert.pub, big.hd_secret, big.params)
            device_vec = device_compute_secret(big.device, response, big.params)
            broken += eavesdrop_commuting_mix(response, big.params) == device_vec
        assert broken == 0


class TestConjugatedMix:
    def test_recovers_secret_of_trivial_braid_device(self, big, session_config, rng):
        key = trivial_braid_device(big, rng)
        for _ in range(20):
            session = hd_new_session(big.hd_secret, big.params, session_config, rng)
            response, hd_vec = hd_compute_response(session, key.cert.pub, big.hd_secret, big.params)
            device_vec = device_compute_secret(key, response, big.params)
            assert device_vec == hd_vec
            assert eavesdrop_conjugated_mix(key.cert.pub, response, big.params) == device_vec

    def test_fails_on_honest_devices(self, big, session_config, rng):
        for _ in range(20):
            session = hd_new_session(big.hd_secret, big.params, session_config, rng)
            pub = big.device.cert.pub
            response, _ = hd_compute_response(session, pub, big.hd_secret, big.params)
            device_vec = device_compute_secret(big.device, response, big.params)
            assert eavesdrop_conjugated_mix(pub, response, big.params) != device_vec
            assert not np.array_equal(response.mix, np.eye(16, dtype=np.int64))
