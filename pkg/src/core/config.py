#!/usr/bin/env python
# coding: utf-8

"""
Configuration settings for the Ironwood toolkit.

This module centralizes the environment variables and protocol defaults used
across the library and the command-line tool.
"""

import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Runtime settings
IRONWOOD_SEED = os.getenv("IRONWOOD_SEED")
IRONWOOD_LOG_LEVEL = os.getenv("IRONWOOD_LOG_LEVEL", "INFO")
IRONWOOD_LOG_TO_FILE = os.getenv("IRONWOOD_LOG_TO_FILE", "0")
IRONWOOD_LOG_DIR = os.getenv("IRONWOOD_LOG_DIR", "logs")
IRONWOOD_PORT = os.getenv("IRONWOOD_PORT", "7466")
IRONWOOD_SESSION_TIMEOUT = os.getenv("IRONWOOD_SESSION_TIMEOUT", "10")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def validate_env_vars():
    """
    Validate the optional environment variables that must parse.

    Raises:
        ValueError: If any variable is set to a value that cannot be used.
    """
    invalid = []

    if IRONWOOD_SEED is not None:
        try:
            int(IRONWOOD_SEED)
        except ValueError:
            invalid.append("IRONWOOD_SEED")

    if IRONWOOD_LOG_LEVEL.upper() not in LOG_LEVELS:
        invalid.append("IRONWOOD_LOG_LEVEL")

    for name, value in (("IRONWOOD_PORT", IRONWOOD_PORT),
                        ("IRONWOOD_SESSION_TIMEOUT", IRONWOOD_SESSION_TIMEOUT)):
        try:
            if float(value) <= 0:
                invalid.append(name)
        except ValueError:
            invalid.append(name)

    if invalid:
        raise ValueError(
            f"Invalid environment variables: {', '.join(invalid)}. "
            "Please fix these in your .env file or environment."
        )


def resolve_seed(cli_seed=None):
    """
    Pick the seed for a deterministic run.

    Args:
        cli_seed: Seed given on the command line, if any.

    Returns:
        int or None: The CLI seed, else IRONWOOD_SEED, else None.
    """
    if cli_seed is not None:
        return int(cli_seed)
    if IRONWOOD_SEED is not None:
        return int(IRONWOOD_SEED)
    return None


def log_to_file_enabled():
    return IRONWOOD_LOG_TO_FILE.strip().lower() in ("1", "true", "yes", "on")


# Public parameter defaults (B_16 over F_256)
DEFAULT_N = 16
DEFAULT_FIELD = "gf256"

# TTP defaults
DEFAULT_CONJUGATES = 32
DEFAULT_Z_LENGTH = 64
DEFAULT_ALPHA_LENGTH = 32
DEFAULT_GAMMA_LENGTH = 32
DEFAULT_PURE_FRACTION = 0.5
DEFAULT_DEVICE_BETA_FACTORS = 80

# Home Device session defaults
DEFAULT_BETA_FACTORS = 80
DEFAULT_PURE_INSERTIONS = 36

# Validation policy defaults
DEFAULT_MAX_ZERO_FRACTION = 0.25

# Wire settings
MAX_FRAME_PAYLOAD = 1 << 20
NONCE_SIZE = 16
TAG_SIZE = 32

# Server settings
DEFAULT_PORT = int(IRONWOOD_PORT) if IRONWOOD_PORT.isdigit() else 7466
DEFAULT_HOST = "127.0.0.1"

# Key file names written by `ttp init`
PARAMS_FILENAME = "params.irwk"
TTP_STATE_FILENAME = "ttp.irwk"
