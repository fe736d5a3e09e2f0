import logging

import pytest

from src.core import config
from src.utils import logger


class TestEnvironment:
    def test_defaults_are_valid(self):
        config.validate_env_vars()

    def test_bad_values_are_named(self, monkeypatch):
        monkeypatch.setattr(config, "IRONWOOD_LOG_LEVEL", "LOUD")
        monkeypatch.setattr(config, "IRONWOOD_SESSION_TIMEOUT", "soon")
        monkeypatch.setattr(config, "IRONWOOD_SEED", "x1")
        with pytest.raises(ValueError) as info:
            config.validate_env_vars()
        message = str(info.value)
        for name in ("IRONWOOD_LOG_LEVEL", "IRONWOOD_SESSION_TIMEOUT", "IRONWOOD_SEED"):
            assert name in message

    def test_seed_resolution(self, monkeypatch):
        monkeypatch.setattr(config, "IRONWOOD_SEED", "77")
        assert config.resolve_seed(5) == 5
        assert config.resolve_seed() == 77
        monkeypatch.setattr(config, "IRONWOOD_SEED", None)
        assert config.resolve_seed() is None


class TestLogger:
    def test_fingerprint(self):
        tag = logger.fingerprint(b"secret")
        assert len(tag) == 16
        assert b"secret".hex() not in tag

    def test_file_logging(self, tmp_path):
        log = logger.IronwoodLogger(log_level=logging.DEBUG, log_to_console=False, log_to_file=True,
                                    log_dir=str(tmp_path / "logs"), log_filename="run.log")
        log.log_handshake("dev1", "confirmed", "abcd")
        for handler in log.logger.handlers:
            handler.flush()
        text = (tmp_path / "logs" / "run.log").read_text()
        assert "Handshake with 'dev1' - confirmed (key abcd)" in text
        logger.configure()
