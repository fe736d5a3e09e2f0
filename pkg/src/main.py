#!/usr/bin/env python
# coding: utf-8

"""
Main entry point for the Ironwood command-line tool.

Parses the command line, configures logging from the environment, runs one
subcommand and turns library errors into the documented exit codes:
0 success, 2 usage, 3 validation or confirmation failure, 4 I/O, 5 network.
"""

import argparse
import sys

from pydantic import ValidationError as ConfigValidationError

from src.app import commands
from src.core.config import (
    DEFAULT_CONJUGATES, DEFAULT_FIELD, DEFAULT_HOST, DEFAULT_N, DEFAULT_PORT, validate_env_vars,
)
from src.core.errors import EXIT_IO, EXIT_USAGE, IronwoodError
from src.utils import logger


def _add_seed(parser):
    parser.add_argument("--seed", type=int, default=None, help="Seed for reproducible output (falls back to IRONWOOD_SEED)")


def _add_session_flags(parser):
    parser.add_argument("--beta-factors", type=int, default=None, help="Alpha conjugates per ephemeral braid")
    parser.add_argument("--pure-insertions", type=int, default=None, help="Pure conjugates added to form beta'")
    parser.add_argument("--timeout", type=float, default=None, help="Per-session deadline in seconds")
    parser.add_argument("--no-mutual", action="store_true", help="Skip the Home Device confirmation tag")


def build_parser():
    """
    Build the argparse tree for every subcommand.

    Returns:
        argparse.ArgumentParser: The top-level parser.
    """
    parser = argparse.ArgumentParser(prog="ironwood", description="Ironwood key agreement toolkit")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    # ttp
    ttp = sub.add_parser("ttp", help="Trusted third party provisioning").add_subparsers(dest="action", required=True)
    init = ttp.add_parser("init", help="Create system parameters, conjugate sets, T-values and a signing key")
    init.add_argument("--out", default=".", help="Directory for params.irwk and ttp.irwk")
    init.add_argument("--n", type=int, default=DEFAULT_N, help="Number of braid strands (even)")
    init.add_argument("--field", default=DEFAULT_FIELD, help="Field, e.g. gf256 or p5")
    init.add_argument("--conjugates", type=int, default=DEFAULT_CONJUGATES, help="Size of each conjugate set")
    init.add_argument("--signer", choices=("hmac", "ed25519"), default="hmac", help="Certificate signature scheme")
    _add_seed(init)
    init.set_defaults(handler=commands.cmd_ttp_init)

    device = ttp.add_parser("provision-device", help="Issue C_i, C_i^-1 and Cert_i for one device")
    device.add_argument("--params", required=True, help="Directory written by `ttp init`")
    device.add_argument("--id", required=True, help="Device identifier")
    device.add_argument("--out", default=None, help="Output directory (default: the --params directory)")
    device.add_argument("--beta-factors", type=int, default=None, help="Gamma conjugates in the device braid")
    _add_seed(device)
    device.set_defaults(handler=commands.cmd_ttp_provision_device)

    export = ttp.add_parser("export-hd", help="Write the Home Device secret")
    export.add_argument("--params", required=True, help="Directory written by `ttp init`")
    export.add_argument("--out", default=None, help="Output file (default: <params>/hd.irwk)")
    export.set_defaults(handler=commands.cmd_ttp_export_hd)

    # exchange
    exchange = sub.add_parser("exchange", help="Run handshakes").add_subparsers(dest="action", required=True)
    run = exchange.add_parser("run", help="In-process handshakes")
    run.add_argument("--params", required=True, help="params.irwk or the directory holding it")
    run.add_argument("--hd-key", required=True, help="Home Device secret file")
    run.add_argument("--device-key", required=True, help="Device key file")
    run.add_argument("--runs", type=int, default=1, help="Number of handshakes")
    _add_seed(run)
    _add_session_flags(run)
    run.set_defaults(handler=commands.cmd_exchange_run)

    srv = exchange.add_parser("serve", help="Home Device over TCP, one session per connection")
    srv.add_argument("--params", required=True, help="params.irwk or the directory holding it")
    srv.add_argument("--hd-key", required=True, help="Home Device secret file")
    srv.add_argument("--listen", default=f"{DEFAULT_HOST}:{DEFAULT_PORT}", help="host:port to listen on")
    srv.add_argument("--max-sessions", type=int, default=None, help="Exit after this many sessions")
    _add_seed(srv)
    _add_session_flags(srv)
    srv.set_defaults(handler=commands.cmd_exchange_serve)

    cli = exchange.add_parser("connect", help="Device side over TCP")
    cli.add_argument("--params", required=True, help="params.irwk or the directory holding it")
    cli.add_argument("--device-key", required=True, help="Device key file")
    cli.add_argument("--connect", default=f"{DEFAULT_HOST}:{DEFAULT_PORT}", help="host:port of the Home Device")
    _add_session_flags(cli)
    cli.set_defaults(handler=commands.cmd_exchange_connect)

    # bench
    bench = sub.add_parser("bench", help="Field-op linearity sweep")
    bench.add_argument("--runs", type=int, default=12, help="Sessions in the sweep")
    bench.add_argument("--min-len", type=int, default=500, help="Smallest total Artin length")
    bench.add_argument("--max-len", type=int, default=8000, help="Largest total Artin length")
    bench.add_argument("--csv", default=None, help="CSV output file ('-' for stdout)")
    bench.add_argument("--params", default=None, help="Use this `ttp init` directory instead of a fresh TTP")
    bench.add_argument("--n", type=int, default=DEFAULT_N, help="Strands for a fresh TTP")
    bench.add_argument("--field", default=DEFAULT_FIELD, help="Field for a fresh TTP")
    _add_seed(bench)
    bench.set_defaults(handler=commands.cmd_bench)

    # security-level
    sec = sub.add_parser("security-level", help="Brute-force security levels")
    sec.add_argument("--q", type=int, required=True, help="Field size")
    sec.add_argument("--n", type=int, required=True, help="Number of strands")
    sec.add_argument("--l", type=int, default=None, help="Braid length")
    sec.set_defaults(handler=commands.cmd_security_level)

    # inspect
    inspect = sub.add_parser("inspect", help="Print an IRWK key record")
    inspect.add_argument("file", help="Record file")
    inspect.add_argument("--params", default=None, help="params.irwk or its directory, to decode key payloads")
    inspect.add_argument("--json", action="store_true", help="Hex/JSON debug export (not canonical)")
    inspect.set_defaults(handler=commands.cmd_inspect)

    return parser


def main(argv=None):
    """
    Main function: parse arguments, run the chosen subcommand, return its exit code.
    """
    args = build_parser().parse_args(argv)
    logger.configure(verbose=args.verbose)

    try:
        validate_env_vars()
    except ValueError as exc:
        logger.error(str(exc))
        return EXIT_USAGE

    try:
        return args.handler(args)
    except IronwoodError as exc:
        logger.error(str(exc))
        return exc.exit_code
    except ConfigValidationError as exc:
        logger.error(f"Invalid settings: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        logger.error(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
