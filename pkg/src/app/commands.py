#!/usr/bin/env python
# coding: utf-8

"""
Handlers behind the `ironwood` subcommands.

Each handler takes the parsed argparse namespace, prints its result on stdout
and returns a process exit code. Library errors propagate to src.main, which
maps them to exit codes.
"""

from __future__ import annotations

import json
import os
import sys

import numpy as np

from src.app.bench import run_sweep, write_csv
from src.app.transport import connect, parse_address, serve
from src.core.config import DEFAULT_DEVICE_BETA_FACTORS, PARAMS_FILENAME, TTP_STATE_FILENAME, resolve_seed
from src.core.errors import EXIT_OK, EXIT_VALIDATION
from src.core.models import KeygenConfig, SessionConfig
from src.protocol.security import security_level
from src.protocol.session import DeviceHandshake, HomeDeviceHandshake, run_exchange
from src.ttp.keygen import device_rng, gen_device_key, hd_secret_of, provision_ttp, signer_of, verifier_of
from src.utils.logger import error, fingerprint, info, warning
from src.wire.records import (
    RECORD_DEVICE_KEY, RECORD_HD_SECRET, RECORD_NAMES, RECORD_PARAMS, RECORD_TTP_STATE, decode_key_record,
    describe_record, load, read_record, record_fingerprint, save, unwrap_record,
)


def _params_path(path: str) -> str:
    return os.path.join(path, PARAMS_FILENAME) if os.path.isdir(path) else path


def load_params(path: str):
    """System params from a params.irwk file or a directory holding one."""
    return load(_params_path(path), expect=RECORD_PARAMS)


def load_ttp_state(directory: str):
    params = load_params(directory)
    return load(os.path.join(directory, TTP_STATE_FILENAME), params, expect=RECORD_TTP_STATE)


def _session_config(args) -> SessionConfig:
    update = {}
    for name in ("beta_factors", "pure_insertions", "timeout"):
        value = getattr(args, name, None)
        if value is not None:
            update[name] = value
    if getattr(args, "no_mutual", False):
        update["mutual_confirmation"] = False
    return SessionConfig(**update)


# ----------------------------------------------------------------------
# ttp
# ----------------------------------------------------------------------
def cmd_ttp_init(args) -> int:
    seed = resolve_seed(args.seed)
    config = KeygenConfig(n=args.n, field=args.field, conjugates=args.conjugates, signer=args.signer)
    state = provision_ttp(config, np.random.default_rng(seed))
    params_file = os.path.join(args.out, PARAMS_FILENAME)
    save(params_file, state.params)
    save(os.path.join(args.out, TTP_STATE_FILENAME), state)
    print(f"Wrote {params_file} and {TTP_STATE_FILENAME} (N={config.n}, field {state.params.field_spec.name}, "
          f"r={config.conjugates}, signer {config.signer})")
    return EXIT_OK


def cmd_ttp_provision_device(args) -> int:
    state = load_ttp_state(args.params)
    device_id = args.id.encode("utf-8")
    rng = device_rng(resolve_seed(args.seed), device_id)
    factors = args.beta_factors or DEFAULT_DEVICE_BETA_FACTORS
    key = gen_device_key(state.params, state.gamma_set, state.tvals, device_id, factors, signer_of(state), rng)
    out = args.out or args.params
    key_file = os.path.join(out, f"{args.id}.key.irwk")
    cert_file = os.path.join(out, f"{args.id}.cert.irwk")
    save(key_file, key, state.params)
    save(cert_file, key.cert, state.params)
    print(f"Wrote {key_file} and {cert_file}")
    return EXIT_OK


def cmd_ttp_export_hd(args) -> int:
    state = load_ttp_state(args.params)
    out = args.out or os.path.join(args.params, "hd.irwk")
    save(out, hd_secret_of(state), state.params)
    print(f"Wrote {out}")
    return EXIT_OK


# ----------------------------------------------------------------------
# exchange
# ----------------------------------------------------------------------
def cmd_exchange_run(args) -> int:
    params = load_params(args.params)
    hd_secret = load(args.hd_key, params, expect=RECORD_HD_SECRET)
    key = load(args.device_key, params, expect=RECORD_DEVICE_KEY)
    verifier = verifier_of(hd_secret)
    config = _session_config(args)
    rng = np.random.default_rng(resolve_seed(args.seed))

    agreed = confirmed = 0
    for run in range(args.runs):
        hd = HomeDeviceHandshake(params, hd_secret, verifier, rng, config)
        outcome = run_exchange(hd, DeviceHandshake(params, key, config.mutual_confirmation))
        agreed += outcome.agreed
        confirmed += outcome.confirmed
        if not outcome.confirmed:
            warning(f"Run {run + 1}: {outcome.failure}")

    if agreed == confirmed == args.runs:
        print(f"{args.runs}/{args.runs} agreed, confirmed")
        return EXIT_OK
    print(f"{agreed}/{args.runs} agreed, {confirmed}/{args.runs} confirmed")
    return EXIT_VALIDATION


def cmd_exchange_serve(args) -> int:
    params = load_params(args.params)
    hd_secret = load(args.hd_key, params, expect=RECORD_HD_SECRET)
    results = serve(parse_address(args.listen), params, hd_secret, verifier_of(hd_secret), _session_config(args),
                    seed=resolve_seed(args.seed), max_sessions=args.max_sessions)
    failed = [r for r in results if not r.confirmed]
    for result in results:
        status = f"confirmed (key {result.key_fingerprint})" if result.confirmed else f"failed: {result.failure}"
        print(f"{result.device_id}: {status}")
    return EXIT_OK if not failed else EXIT_VALIDATION


def cmd_exchange_connect(args) -> int:
    params = load_params(args.params)
    key = load(args.device_key, params, expect=RECORD_DEVICE_KEY)
    session_key = connect(parse_address(args.connect), params, key, _session_config(args))
    info(f"Device '{key.device_id.decode('utf-8', 'replace')}' confirmed")
    print(f"confirmed (key {fingerprint(session_key)})")
    return EXIT_OK


# ----------------------------------------------------------------------
# bench / security-level / inspect
# ----------------------------------------------------------------------
def cmd_bench(args) -> int:
    rng = np.random.default_rng(resolve_seed(args.seed))
    if args.params:
        state = load_ttp_state(args.params)
    else:
        state = provision_ttp(KeygenConfig(n=args.n, field=args.field), rng)
    report = run_sweep(state.params, hd_secret_of(state), args.min_len, args.max_len, args.runs, rng)

    if args.csv == "-":
        write_csv(report, sys.stdout)
    elif args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_csv(report, fh)
    for line in report.lines():
        print(line, file=sys.stderr if args.csv == "-" else sys.stdout)

    if not report.linear:
        error(f"Field-op counts are not linear in Artin length (residual {report.max_relative_residual:.2%})")
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_security_level(args) -> int:
    report = security_level(args.q, args.n, args.l)
    for line in report.lines():
        print(line)
    return EXIT_OK


def cmd_inspect(args) -> int:
    data = read_record(args.file)
    record_type, _ = unwrap_record(data)
    params = load_params(args.params) if args.params else None
    if record_type != RECORD_PARAMS and params is None:
        print(f"{RECORD_NAMES[record_type]} record, params {record_fingerprint(data).hex()}")
        print("pass --params to decode the payload")
        return EXIT_OK

    _, obj = decode_key_record(data, params)
    view = describe_record(record_type, obj, params)
    if args.json:
        print(json.dumps(view, indent=2))
        return EXIT_OK
    for name, value in view.items():
        if isinstance(value, (list, dict)):
            value = f"<{len(value)} entries>"
        print(f"{name}: {value}")
    return EXIT_OK
