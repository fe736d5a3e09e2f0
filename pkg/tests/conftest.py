import numpy as np
import pytest

from src.algebra.field import FieldSpec, field_make
from src.core.models import KeygenConfig, SessionConfig
from src.ttp.keygen import gen_device_key, hd_secret_of, provision_ttp, signer_of, verifier_of

# Short conjugate words keep the many-run tests fast.
TOY_KEYGEN = dict(n=4, field="p5", conjugates=8, z_length=6, alpha_length=4, gamma_length=4,
                  device_beta_factors=4)
GF256_KEYGEN = dict(n=16, field="gf256", conjugates=8, z_length=12, alpha_length=6, gamma_length=6,
                    device_beta_factors=4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def gf256():
    return field_make(FieldSpec.binary(8))


@pytest.fixture(scope="session")
def f5():
    return field_make(FieldSpec.prime(5))


@pytest.fixture(scope="session")
def session_config():
    return SessionConfig(beta_factors=4, pure_insertions=2)


class Provisioned:
    """A TTP run plus one issued device, as the tests need them."""

    def __init__(self, keygen: dict, seed: int, signer: str = "hmac"):
        self.config = KeygenConfig(signer=signer, **keygen)
        self.state = provision_ttp(self.config, np.random.default_rng(seed))
        self.params = self.state.params
        self.hd_secret = hd_secret_of(self.state)
        self.signer = signer_of(self.state)
        self.verifier = verifier_of(self.hd_secret)
        self.device = self.issue(b"device-1", seed + 1)

    def issue(self, device_id: bytes, seed: int):
        return gen_device_key(self.params, self.state.gamma_set, self.state.tvals, device_id,
                              self.config.device_beta_factors, self.signer, np.random.default_rng(seed))


@pytest.fixture(scope="session")
def toy():
    return Provisioned(TOY_KEYGEN, seed=7)


@pytest.fixture(scope="session")
def big():
    return Provisioned(GF256_KEYGEN, seed=11)


@pytest.fixture(scope="session")
def toy_ed25519():
    return Provisioned(TOY_KEYGEN, seed=13, signer="ed25519")
