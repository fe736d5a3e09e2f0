import dataclasses

import numpy as np
import pytest

from src.algebra.braid import Permutation, permutation_of
from src.algebra.emult import OpCounter, TValues
from src.core.errors import DimensionError, KeyMaterialError, ProtocolError, SessionReusedError, ValidationError
from src.core.models import HomeDeviceSecret, PublicKey, SessionConfig, SharedSecret, ValidationPolicy
from src.protocol.handshake import (
    ROLE_DEVICE, ROLE_HD, check_confirmation, check_public_key, confirm_exchange, derive_session_key,
    device_compute_secret, hd_compute_response, hd_new_session, require_valid_public_key, secret_column,
    transcript_hash, validate_public_key,
)
from src.protocol.session import DeviceHandshake, HomeDeviceHandshake
from src.ttp.keygen import gen_device_key, sign_certificate
from src.wire.codec import encode_elements

# Distinctive T-values, none 0 or 1, so their encoding stands out in frame bytes.
PLANTED_TAUS = tuple(bytes.fromhex("deadbeefcafebabe5e171e1badc0ffee"))


def agree(fixture, config, rng, key=None):
    key = key or fixture.device
    session = hd_new_session(fixture.hd_secret, fixture.params, config, rng)
    response, hd_vec = hd_compute_response(session, key.cert.pub, fixture.hd_secret, fixture.params)
    return session, response, hd_vec, device_compute_secret(key, response, fixture.params)


def signed(fixture, matrix, perm=None):
    pub = PublicKey(np.asarray(matrix, dtype=np.int64), perm or Permutation.identity(fixture.params.n))
    return pub, sign_certificate(pub, b"probe", fixture.signer, fixture.params.field_spec)


class TestAgreement:
    def test_toy_agreement(self, toy, session_config, rng):
        for _ in range(1000):
            _, _, hd_vec, device_vec = agree(toy, session_config, rng)
            assert hd_vec == device_vec

    def test_gf256_agreement(self, big, session_config, rng):
        for _ in range(1000):
            _, _, hd_vec, device_vec = agree(big, session_config, rng)
            assert hd_vec == device_vec

    def test_many_devices(self, big, session_config, rng):
        for k in range(5):
            key = big.issue(f"device-{k}".encode(), 100 + k)
            _, _, hd_vec, device_vec = agree(big, session_config, rng, key)
            assert hd_vec == device_vec

    def test_default_session_lengths(self, big, rng):
        _, _, hd_vec, device_vec = agree(big, SessionConfig(), rng)
        assert hd_vec == device_vec

    def test_secret_column(self):
        assert secret_column(16) == 7
        assert secret_column(4) == 1


class TestSession:
    def test_ephemerals(self, big, session_config, rng):
        session = hd_new_session(big.hd_secret, big.params, session_config, rng)
        assert session.beta.letters != session.beta_prime.letters
        assert permutation_of(session.beta) == permutation_of(session.beta_prime) == session.sigma
        assert not session.consumed

    def test_single_use(self, toy, session_config, rng):
        session = hd_new_session(toy.hd_secret, toy.params, session_config, rng)
        hd_compute_response(session, toy.device.cert.pub, toy.hd_secret, toy.params)
        assert session.consumed
        with pytest.raises(SessionReusedError):
            hd_compute_response(session, toy.device.cert.pub, toy.hd_secret, toy.params)

    def test_needs_pure_conjugates(self, toy, session_config, rng):
        alpha = toy.hd_secret.alpha_set
        no_pure = dataclasses.replace(alpha, pure_flags=(False,) * len(alpha))
        secret = HomeDeviceSecret(alpha_set=no_pure, tvals=toy.hd_secret.tvals)
        with pytest.raises(KeyMaterialError):
            hd_new_session(secret, toy.params, session_config, rng)

    def test_op_counter_covers_all_four_products(self, big, session_config, rng):
        counter = OpCounter()
        session = hd_new_session(big.hd_secret, big.params, session_config, rng, counter)
        assert counter.calls == 2
        assert counter.letters == len(session.beta) + len(session.beta_prime)
        hd_compute_response(session, big.device.cert.pub, big.hd_secret, big.params)
        assert counter.calls == 4
        assert counter.letters == 2 * (len(session.beta) + len(session.beta_prime))

    def test_strand_mismatch(self, toy, big, session_config, rng):
        session = hd_new_session(big.hd_secret, big.params, session_config, rng)
        with pytest.raises(DimensionError):
            hd_compute_response(session, toy.device.cert.pub, big.hd_secret, big.params)


class TestValidation:
    def test_honest_key_passes(self, toy, big, toy_ed25519):
        for fixture in (toy, big, toy_ed25519):
            cert = fixture.device.cert
            assert check_public_key(cert.pub, cert, fixture.verifier, fixture.params) is None

    def test_zero_matrix(self, big):
        pub, cert = signed(big, np.zeros((16, 16)))
        assert check_public_key(pub, cert, big.verifier, big.params) == "zero-entries"

    def test_zero_row(self, big, rng):
        matrix = rng.integers(1, 256, size=(16, 16))
        matrix[3] = 0
        pub, cert = signed(big, matrix)
        assert check_public_key(pub, cert, big.verifier, big.params) == "zero-line"
        relaxed = ValidationPolicy(forbid_zero_lines=False)
        assert check_public_key(pub, cert, big.verifier, big.params, relaxed) == "invertible"

    def test_singular_matrix(self, big, rng):
        matrix = rng.integers(1, 256, size=(16, 16))
        matrix[5] = matrix[2]
        pub, cert = signed(big, matrix)
        assert check_public_key(pub, cert, big.verifier, big.params) == "invertible"

    def test_broken_signature(self, big, toy_ed25519):
        for fixture in (big, toy_ed25519):
            cert = fixture.device.cert
            flipped = bytes([cert.signature[-1] ^ 0x80])
            forged = dataclasses.replace(cert, signature=cert.signature[:-1] + flipped)
            assert check_public_key(cert.pub, forged, fixture.verifier, fixture.params) == "certificate"
            assert not validate_public_key(cert.pub, forged, fixture.verifier, fixture.params)

    def test_key_swapped_under_certificate(self, big, rng):
        cert = big.device.cert
        other = big.issue(b"device-2", 55).cert.pub
        assert check_public_key(other, cert, big.verifier, big.params) == "certificate"

    def test_require_names_the_check(self, big):
        pub, cert = signed(big, np.zeros((16, 16)))
        with pytest.raises(ValidationError) as info:
            require_valid_public_key(pub, cert, big.verifier, big.params)
        assert info.value.check == "zero-entries"


class TestKeyDerivation:
    def test_transcript_binds_key(self, big, session_config, rng):
        _, _, hd_vec, device_vec = agree(big, session_config, rng)
        t1 = transcript_hash(b"cert", b"response")
        t2 = transcript_hash(b"cert", b"responsE")
        assert derive_session_key(hd_vec, t1, big.params) == derive_session_key(device_vec, t1, big.params)
        assert derive_session_key(hd_vec, t1, big.params) != derive_session_key(hd_vec, t2, big.params)
        assert len(derive_session_key(hd_vec, t1, big.params)) == 32

    def test_secret_changes_key(self, big):
        t = transcript_hash(b"a", b"b")
        a = SharedSecret(np.arange(16, dtype=np.int64))
        b = SharedSecret(np.arange(1, 17, dtype=np.int64))
        assert derive_session_key(a, t, big.params) != derive_session_key(b, t, big.params)
        with pytest.raises(DimensionError):
            derive_session_key(a, b"short", big.params)

    def test_confirmation_tags(self):
        key = bytes(range(32))
        nonce = bytes(16)
        device_tag = confirm_exchange(ROLE_DEVICE, key, nonce)
        hd_tag = confirm_exchange(ROLE_HD, key, nonce)
        assert device_tag.tag != hd_tag.tag
        assert check_confirmation(ROLE_DEVICE, key, nonce, device_tag)
        assert not check_confirmation(ROLE_HD, key, nonce, device_tag)
        assert not check_confirmation(ROLE_DEVICE, bytes(32), nonce, device_tag)

    def test_replayed_tag_fails_under_fresh_nonce(self, rng):
        key = bytes(range(32))
        old = confirm_exchange(ROLE_DEVICE, key, rng.bytes(16))
        fresh = rng.bytes(16)
        assert not check_confirmation(ROLE_DEVICE, key, fresh, old)
        replayed = dataclasses.replace(old, nonce=fresh)
        assert not check_confirmation(ROLE_DEVICE, key, fresh, replayed)

    def test_bad_inputs(self):
        with pytest.raises(ProtocolError):
            confirm_exchange("attacker", bytes(32), bytes(16))
        with pytest.raises(DimensionError):
            confirm_exchange(ROLE_HD, bytes(32), bytes(8))


class TestSecrecy:
    def test_tvalues_never_reach_the_wire(self, big, session_config):
        tvals = TValues(PLANTED_TAUS)
        hd_secret = dataclasses.replace(big.hd_secret, tvals=tvals)
        key = gen_device_key(big.params, big.state.gamma_set, tvals, b"device-planted",
                             big.config.device_beta_factors, big.signer, np.random.default_rng(404))
        encoded = encode_elements(tvals.taus, big.params.field_spec)
        sentinels = [encoded, encoded[:8], encoded[8:], bytes(reversed(encoded))]
        for seed in range(100):
            hd = HomeDeviceHandshake(big.params, hd_secret, big.verifier, np.random.default_rng(seed),
                                     session_config)
            device = DeviceHandshake(big.params, key)
            device.on_params(hd.params_frame())
            cert_frame = device.cert_frame()
            response_frame = hd.on_cert(cert_frame)
            device.on_confirm(hd.on_confirm(device.on_response(response_frame)))
            assert device.shared_secret == hd.shared_secret
            for frame in (cert_frame, response_frame):
                for sentinel in sentinels:
                    assert sentinel not in frame

    def test_device_key_has_no_tvalue_slot(self, big):
        field_names = {f.name for f in dataclasses.fields(big.device)}
        assert field_names == {"c_coeffs", "c_matrix", "c_inverse", "cert"}

    def test_device_secret_uses_only_its_key(self, big, session_config, rng):
        _, response, hd_vec, _ = agree(big, session_config, rng)
        other = big.issue(b"device-9", 77)
        assert device_compute_secret(other, response, big.params) != hd_vec
