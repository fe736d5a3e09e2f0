#!/usr/bin/env python
# coding: utf-8

"""
TCP transport for the handshake demo.

`serve` runs a Home Device that handles every connection in its own thread
with its own session; `connect` runs the device side. One frame per message,
and each session must finish within the session timeout.
"""

from __future__ import annotations

import socket
import socketserver
import threading
import time
from dataclasses import dataclass

import numpy as np

from src.core.errors import IronwoodError, TransportError
from src.core.models import DeviceKeyMaterial, HomeDeviceSecret, SessionConfig, SystemParams, ValidationPolicy
from src.protocol.session import DeviceHandshake, HomeDeviceHandshake
from src.utils.logger import error, fingerprint, info
from src.wire.codec import FRAME_HEADER, parse_frame_header


class FramedConnection:
    """
    Whole-frame send/receive over a connected socket.

    With a timeout, the whole session shares one deadline counted from
    construction; each socket call only gets the time that is left.
    """

    def __init__(self, sock: socket.socket, timeout: float | None = None):
        self.sock = sock
        self.deadline = None if timeout is None else time.monotonic() + timeout

    def _arm(self):
        if self.deadline is None:
            return
        remaining = self.deadline - time.monotonic()
        if remaining <= 0:
            raise TransportError("session deadline exceeded")
        self.sock.settimeout(remaining)

    def send(self, frame: bytes):
        self._arm()
        try:
            self.sock.sendall(frame)
        except socket.timeout as exc:
            raise TransportError("session deadline exceeded while sending") from exc
        except OSError as exc:
            raise TransportError(f"send failed: {exc}") from exc

    def _read_exact(self, count: int) -> bytes:
        chunks = []
        remaining = count
        while remaining:
            self._arm()
            try:
                chunk = self.sock.recv(remaining)
            except socket.timeout as exc:
                raise TransportError("session deadline exceeded waiting for the peer") from exc
            except OSError as exc:
                raise TransportError(f"receive failed: {exc}") from exc
            if not chunk:
                raise TransportError("connection closed by peer")
            chunks.append(chunk)
            remaining -= len(chunk)
        return b"".join(chunks)

    def recv_frame(self) -> bytes:
        header = self._read_exact(FRAME_HEADER.size)
        _, length = parse_frame_header(header)
        return header + self._read_exact(length)


def parse_address(text: str, default_host: str = "127.0.0.1") -> tuple[str, int]:
    """'host:port' or ':port' or 'port' -> (host, port)."""
    host, sep, port = text.rpartition(":")
    if not sep:
        host, port = "", text
    try:
        return host or default_host, int(port)
    except ValueError as exc:
        raise TransportError(f"bad address '{text}'") from exc


@dataclass
class SessionResult:
    device_id: str | None
    confirmed: bool
    key_fingerprint: str | None = None
    failure: str | None = None


class _HandshakeHandler(socketserver.BaseRequestHandler):

    def handle(self):
        server: HandshakeServer = self.server
        conn = FramedConnection(self.request, server.config.timeout)
        hd = HomeDeviceHandshake(server.params, server.hd_secret, server.verifier, server.session_rng(),
                                 server.config, server.policy)
        try:
            conn.send(hd.params_frame())
            conn.send(hd.on_cert(conn.recv_frame()))
            reply = hd.on_confirm(conn.recv_frame())
            if reply is not None:
                conn.send(reply)
            result = SessionResult(hd.device_id, True, fingerprint(hd.session_key))
        except IronwoodError as exc:
            error(f"Session from {self.client_address[0]}:{self.client_address[1]} failed: {exc}")
            result = SessionResult(hd.device_id, False, failure=str(exc))
        server.record(result)


class HandshakeServer(socketserver.ThreadingTCPServer):
    """
    Home Device server; params and the HD secret are shared read-only.

    Args:
        address: (host, port) to bind; port 0 picks a free port
        params: System parameters
        hd_secret: Home Device secret
        verifier: Certificate verifier
        config: Session settings
        policy: Public-key validation policy
        seed: Optional seed making the per-session randomness reproducible
        max_sessions: Stop after this many sessions (None: run until shutdown)
    """

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, params: SystemParams, hd_secret: HomeDeviceSecret, verifier,
                 config: SessionConfig | None = None, policy: ValidationPolicy | None = None,
                 seed: int | None = None, max_sessions: int | None = None):
        super().__init__(address, _HandshakeHandler)
        self.params = params
        self.hd_secret = hd_secret
        self.verifier = verifier
        self.config = config or SessionConfig()
        self.policy = policy or ValidationPolicy()
        self.max_sessions = max_sessions
        self.results: list[SessionResult] = []
        self._lock = threading.Lock()
        self._seeds = np.random.SeedSequence(seed)

    def session_rng(self):
        with self._lock:
            child = self._seeds.spawn(1)[0]
        return np.random.default_rng(child)

    def record(self, result: SessionResult):
        with self._lock:
            self.results.append(result)
            done = self.max_sessions is not None and len(self.results) >= self.max_sessions
        if done:
            threading.Thread(target=self.shutdown, daemon=True).start()


def serve(address, params, hd_secret, verifier, config=None, policy=None, seed=None, max_sessions=None):
    """Run the HD server until shut down (or until max_sessions complete)."""
    with HandshakeServer(address, params, hd_secret, verifier, config, policy, seed, max_sessions) as server:
        host, port = server.server_address[:2]
        info(f"Home Device listening on {host}:{port}")
        server.serve_forever()
        return list(server.results)


def connect(address, params: SystemParams, key: DeviceKeyMaterial, config: SessionConfig | None = None) -> bytes:
    """
    Run the device side against an HD at address.

    Returns:
        bytes: The confirmed session key.

    Raises:
        TransportError: On connection problems.
        FingerprintMismatchError: If the HD runs other params.
        ConfirmationError: If the HD's tag does not match.
    """
    config = config or SessionConfig()
    try:
        sock = socket.create_connection(address, timeout=config.timeout)
    except OSError as exc:
        raise TransportError(f"cannot connect to {address[0]}:{address[1]}: {exc}") from exc
    with sock:
        conn = FramedConnection(sock, config.timeout)
        device = DeviceHandshake(params, key, config.mutual_confirmation)
        device.on_params(conn.recv_frame())
        conn.send(device.cert_frame())
        conn.send(device.on_response(conn.recv_frame()))
        if config.mutual_confirmation:
            device.on_confirm(conn.recv_frame())
    return device.session_key
