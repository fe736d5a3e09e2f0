#!/usr/bin/env python
# coding: utf-8

"""
Frame-level state machines for both sides of the handshake.

Message flow:
    HD -> device   PARAMS   params fingerprint (TCP only)
    device -> HD   CERT     Cert_i
    HD -> device   RESPONSE (mix, s) and a 16-byte nonce
    device -> HD   CONFIRM  device tag over the nonce
    HD -> device   CONFIRM  HD tag over the same nonce (mutual confirmation)

Each machine takes raw frame bytes and returns the bytes to send next, so the
same code runs in-process and over sockets.
"""

from __future__ import annotations

from dataclasses import dataclass

from src.core.config import NONCE_SIZE
from src.core.errors import ConfirmationError, FingerprintMismatchError, MalformedEncodingError, ValidationError
from src.core.models import (
    DeviceKeyMaterial, HomeDeviceSecret, SessionConfig, SharedSecret, SystemParams, ValidationPolicy,
)
from src.protocol.handshake import (
    ROLE_DEVICE, ROLE_HD, HDSession, check_confirmation, confirm_exchange, derive_session_key,
    device_compute_secret, hd_compute_response, hd_new_session, require_valid_public_key, transcript_hash,
)
from src.utils.logger import fingerprint, log_handshake
from src.wire.codec import (
    MSG_CERT, MSG_CONFIRM, MSG_PARAMS, MSG_RESPONSE, Frame, decode_cert, decode_confirm, decode_frame,
    decode_response_message, encode_cert, encode_confirm, encode_frame, encode_response_message,
)
from src.wire.records import params_fingerprint


def _expect(data: bytes, msg_type: int) -> Frame:
    frame = decode_frame(data)
    if frame.msg_type != msg_type:
        raise MalformedEncodingError(f"expected {Frame(msg_type, b'').name} frame, got {frame.name}")
    return frame


class HomeDeviceHandshake:
    """HD side of one handshake."""

    def __init__(self, params: SystemParams, hd_secret: HomeDeviceSecret, verifier, rng,
                 config: SessionConfig | None = None, policy: ValidationPolicy | None = None):
        self.params = params
        self.hd_secret = hd_secret
        self.verifier = verifier
        self.rng = rng
        self.config = config or SessionConfig()
        self.policy = policy or ValidationPolicy()
        self.state = "await-cert"
        self.device_id = None
        self.session: HDSession | None = None
        self.shared_secret: SharedSecret | None = None
        self.session_key: bytes | None = None
        self._nonce = None

    def params_frame(self) -> bytes:
        return encode_frame(MSG_PARAMS, params_fingerprint(self.params))

    def on_cert(self, data: bytes) -> bytes:
        """
        Validate Cert_i and answer with the RESPONSE frame.

        Raises:
            ValidationError: If the public key or certificate is rejected.
        """
        if self.state != "await-cert":
            raise MalformedEncodingError(f"CERT received in state {self.state}")
        cert = decode_cert(_expect(data, MSG_CERT).payload, self.params.field_spec, self.params.n)
        self.device_id = cert.device_id.decode("utf-8", "replace")
        try:
            require_valid_public_key(cert.pub, cert, self.verifier, self.params, self.policy)
        except (ValidationError, MalformedEncodingError) as exc:
            self.state = "failed"
            log_handshake(self.device_id, f"rejected: {exc}")
            raise
        self.session = hd_new_session(self.hd_secret, self.params, self.config, self.rng)
        response, self.shared_secret = hd_compute_response(self.session, cert.pub, self.hd_secret, self.params)
        self._nonce = self.rng.bytes(NONCE_SIZE)
        out = encode_frame(MSG_RESPONSE, encode_response_message(response, self._nonce, self.params.field_spec))
        self.session_key = derive_session_key(self.shared_secret, transcript_hash(data, out), self.params)
        self.state = "await-confirm"
        return out

    def on_confirm(self, data: bytes) -> bytes | None:
        """
        Check the device tag; return the HD's own CONFIRM frame when mutual.

        Raises:
            ConfirmationError: If the device tag does not match.
        """
        if self.state != "await-confirm":
            raise MalformedEncodingError(f"CONFIRM received in state {self.state}")
        tag = decode_confirm(_expect(data, MSG_CONFIRM).payload)
        if not check_confirmation(ROLE_DEVICE, self.session_key, self._nonce, tag):
            self.state = "failed"
            log_handshake(self.device_id, "rejected: device confirmation failed")
            raise ConfirmationError("device confirmation tag does not match")
        self.state = "done"
        log_handshake(self.device_id, "confirmed", fingerprint(self.session_key))
        if not self.config.mutual_confirmation:
            return None
        return encode_frame(MSG_CONFIRM, encode_confirm(confirm_exchange(ROLE_HD, self.session_key, self._nonce)))


class DeviceHandshake:
    """Device side of one handshake. The device never runs E-Multiplication."""

    def __init__(self, params: SystemParams, key: DeviceKeyMaterial, mutual_confirmation: bool = True):
        self.params = params
        self.key = key
        self.mutual_confirmation = mutual_confirmation
        self.state = "start"
        self.shared_secret: SharedSecret | None = None
        self.session_key: bytes | None = None
        self._cert_frame = None
        self._nonce = None

    def on_params(self, data: bytes):
        """Abort unless the HD runs under our params."""
        frame = _expect(data, MSG_PARAMS)
        if frame.payload != params_fingerprint(self.params):
            self.state = "failed"
            raise FingerprintMismatchError("Home Device uses different system parameters")

    def cert_frame(self) -> bytes:
        self._cert_frame = encode_frame(MSG_CERT, encode_cert(self.key.cert, self.params.field_spec))
        self.state = "await-response"
        return self._cert_frame

    def on_response(self, data: bytes) -> bytes:
        if self.state != "await-response":
            raise MalformedEncodingError(f"RESPONSE received in state {self.state}")
        payload = _expect(data, MSG_RESPONSE).payload
        response, self._nonce = decode_response_message(payload, self.params.field_spec, self.params.n)
        self.shared_secret = device_compute_secret(self.key, response, self.params)
        self.session_key = derive_session_key(self.shared_secret, transcript_hash(self._cert_frame, data), self.params)
        self.state = "await-confirm" if self.mutual_confirmation else "done"
        return encode_frame(MSG_CONFIRM, encode_confirm(confirm_exchange(ROLE_DEVICE, self.session_key, self._nonce)))

    def on_confirm(self, data: bytes):
        if self.state != "await-confirm":
            raise MalformedEncodingError(f"CONFIRM received in state {self.state}")
        tag = decode_confirm(_expect(data, MSG_CONFIRM).payload)
        if not check_confirmation(ROLE_HD, self.session_key, self._nonce, tag):
            self.state = "failed"
            raise ConfirmationError("Home Device confirmation tag does not match")
        self.state = "done"


@dataclass
class ExchangeOutcome:
    agreed: bool
    confirmed: bool
    hd_key: bytes | None
    device_key: bytes | None
    beta_length: int
    beta_prime_length: int
    failure: str | None = None


def run_exchange(hd: HomeDeviceHandshake, device: DeviceHandshake, tamper=None) -> ExchangeOutcome:
    """
    Drive both machines in-process.

    Args:
        hd: Fresh HD machine
        device: Fresh device machine
        tamper: Optional callable applied to the RESPONSE frame in transit
    """
    device.on_params(hd.params_frame())
    response = hd.on_cert(device.cert_frame())
    if tamper is not None:
        response = tamper(response)
    failure = None
    confirmed = False
    try:
        confirm = device.on_response(response)
        hd_confirm = hd.on_confirm(confirm)
        if hd_confirm is not None:
            device.on_confirm(hd_confirm)
        confirmed = True
    except (ConfirmationError, MalformedEncodingError) as exc:
        failure = str(exc)
    agreed = device.shared_secret is not None and device.shared_secret == hd.shared_secret
    return ExchangeOutcome(
        agreed=agreed, confirmed=confirmed, hd_key=hd.session_key, device_key=device.session_key,
        beta_length=len(hd.session.beta), beta_prime_length=len(hd.session.beta_prime), failure=failure,
    )
