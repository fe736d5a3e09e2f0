#!/usr/bin/env python
# coding: utf-8

"""
Data models for the Ironwood toolkit.

Validated parameter bundles (key generation, sessions, public-key policy) are
pydantic models. Key material and protocol messages are frozen dataclasses
holding numpy matrices; their equality compares array contents.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field, field_validator
from typing import Literal

from src.algebra.braid import ConjugateSet, Permutation
from src.algebra.emult import MAX_STRANDS, TValues
from src.algebra.field import Field as FiniteField
from src.algebra.field import FieldSpec, field_make
from src.core import config
from src.core.errors import DimensionError, KeyMaterialError


class KeygenConfig(BaseModel):
    """
    Parameters the TTP uses when creating system parameters and secrets.
    """

    n: int = Field(default=config.DEFAULT_N, ge=4, le=MAX_STRANDS,
                   description="Number of braid strands N; must be even.")
    field: str = Field(default=config.DEFAULT_FIELD,
                       description="Field name understood by parse_field, e.g. 'gf256' or 'p5'.")
    conjugates: int = Field(default=config.DEFAULT_CONJUGATES, ge=2,
                            description="Size r of each commuting conjugate set.")
    z_length: int = Field(default=config.DEFAULT_Z_LENGTH, ge=0,
                          description="Letters drawn for the conjugating word z.")
    alpha_length: int = Field(default=config.DEFAULT_ALPHA_LENGTH, ge=1,
                              description="Letters drawn for each alpha word (lower strands).")
    gamma_length: int = Field(default=config.DEFAULT_GAMMA_LENGTH, ge=1,
                              description="Letters drawn for each gamma word (upper strands).")
    pure_fraction: float = Field(default=config.DEFAULT_PURE_FRACTION, ge=0.0, le=1.0,
                                 description="Share of the alpha conjugates built from pure braids.")
    device_beta_factors: int = Field(default=config.DEFAULT_DEVICE_BETA_FACTORS, ge=1,
                                     description="Gamma conjugates multiplied into each device braid.")
    signer: Literal["hmac", "ed25519"] = Field(default="hmac",
                                               description="Certificate signature provider.")

    @field_validator("n")
    @classmethod
    def n_must_be_even(cls, v):
        if v % 2:
            raise ValueError(f"N must be even, got {v}")
        return v


class SessionConfig(BaseModel):
    """
    Home Device per-session settings.
    """

    beta_factors: int = Field(default=config.DEFAULT_BETA_FACTORS, ge=1,
                              description="Alpha conjugates multiplied into the ephemeral braid beta.")
    pure_insertions: int = Field(default=config.DEFAULT_PURE_INSERTIONS, ge=1,
                                 description="Pure alpha conjugates interleaved into beta to form beta'.")
    mutual_confirmation: bool = Field(default=True,
                                      description="Whether the HD answers the device tag with its own.")
    timeout: float = Field(default=float(config.IRONWOOD_SESSION_TIMEOUT), gt=0,
                           description="Deadline in seconds for a whole session.")


class ValidationPolicy(BaseModel):
    """
    Rules for rejecting invalid public keys before answering a device.
    """

    max_zero_fraction: float = Field(default=config.DEFAULT_MAX_ZERO_FRACTION, ge=0.0, le=1.0,
                                     description="Largest tolerated share of zero entries in the key matrix.")
    forbid_zero_lines: bool = Field(default=True,
                                    description="Reject matrices with an all-zero row or column.")


def _arrays_equal(a, b) -> bool:
    return np.array_equal(np.asarray(a), np.asarray(b))


@dataclass(frozen=True, eq=False)
class SystemParams:
    """Public information: B_N, F_q and the matrix m0 with its cached powers."""

    n: int
    field_spec: FieldSpec
    m0: np.ndarray
    m0_powers: tuple

    def __post_init__(self):
        if self.n % 2 or not 4 <= self.n <= MAX_STRANDS:
            raise KeyMaterialError(f"N must be even and in [4, {MAX_STRANDS}], got {self.n}")
        if np.shape(self.m0) != (self.n, self.n):
            raise DimensionError(f"m0 of shape {np.shape(self.m0)} for N={self.n}")
        if len(self.m0_powers) != self.n:
            raise DimensionError(f"{len(self.m0_powers)} cached powers of m0 for N={self.n}")

    @property
    def field(self) -> FiniteField:
        return field_make(self.field_spec)

    def __eq__(self, other):
        return (isinstance(other, SystemParams) and self.n == other.n
                and self.field_spec == other.field_spec and _arrays_equal(self.m0, other.m0))


@dataclass(frozen=True, eq=False)
class PublicKey:
    """Pub_i = (C_i M_i, sigma_i)."""

    matrix: np.ndarray
    perm: Permutation

    def __post_init__(self):
        if np.shape(self.matrix) != (self.perm.n, self.perm.n):
            raise DimensionError(f"public key matrix {np.shape(self.matrix)} with a permutation on {self.perm.n}")

    @property
    def n(self) -> int:
        return self.perm.n

    def __eq__(self, other):
        return isinstance(other, PublicKey) and self.perm == other.perm and _arrays_equal(self.matrix, other.matrix)


@dataclass(frozen=True)
class Certificate:
    """A TTP signature binding a device id to its public key."""

    pub: PublicKey
    device_id: bytes
    signature: bytes
    signer_id: bytes
    algorithm: int


@dataclass(frozen=True, eq=False)
class DeviceKeyMaterial:
    """Everything written into device D_i: C_i, its inverse and Cert_i."""

    c_coeffs: np.ndarray
    c_matrix: np.ndarray
    c_inverse: np.ndarray
    cert: Certificate

    @property
    def device_id(self) -> bytes:
        return self.cert.device_id

    @property
    def n(self) -> int:
        return self.cert.pub.n

    def __eq__(self, other):
        return (isinstance(other, DeviceKeyMaterial) and self.cert == other.cert
                and _arrays_equal(self.c_coeffs, other.c_coeffs)
                and _arrays_equal(self.c_matrix, other.c_matrix)
                and _arrays_equal(self.c_inverse, other.c_inverse))


@dataclass(frozen=True)
class HomeDeviceSecret:
    """
    The first conjugate set and the T-values, held only by the Home Device.

    The TTP also hands over its certificate verification key so the HD can
    check device certificates on its own.
    """

    alpha_set: ConjugateSet
    tvals: TValues
    verifier_algorithm: int = 0
    verification_key: bytes = b""

    def __post_init__(self):
        if len(self.tvals) != self.alpha_set.n_strands:
            raise DimensionError(f"{len(self.tvals)} T-values for {self.alpha_set.n_strands} strands")


@dataclass(frozen=True, eq=False)
class HDResponse:
    """The Home Device reply (C'M'M^-1C^-1, s)."""

    mix: np.ndarray
    s: np.ndarray

    @property
    def n(self) -> int:
        return len(self.s)

    def __eq__(self, other):
        return isinstance(other, HDResponse) and _arrays_equal(self.mix, other.mix) and _arrays_equal(self.s, other.s)


@dataclass(frozen=True, eq=False)
class SharedSecret:
    s_prime: np.ndarray

    def __eq__(self, other):
        return isinstance(other, SharedSecret) and _arrays_equal(self.s_prime, other.s_prime)


@dataclass(frozen=True)
class ConfirmationTag:
    nonce: bytes
    tag: bytes


@dataclass(frozen=True)
class TtpState:
    """
    The TTP's own secrets, persisted between `ttp` invocations.

    Attributes:
        params: System parameters
        alpha_set: Conjugate set handed to the Home Device
        gamma_set: Conjugate set device braids are built from
        tvals: T-values
        signer_algorithm: Algorithm byte of the signature provider
        signing_key: Raw private signing key
    """

    params: SystemParams
    alpha_set: ConjugateSet
    gamma_set: ConjugateSet
    tvals: TValues
    signer_algorithm: int
    signing_key: bytes
