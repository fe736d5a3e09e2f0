#!/usr/bin/env python
# coding: utf-8

"""
Linear-scaling benchmark.

Builds HD sessions across a sweep of total Artin lengths |beta| + |beta'|,
records the instrumented field-operation count and wall time of each, and fits
op count against length by least squares. Op counts are deterministic, so the
fit is checked; wall time is only reported.
"""

from __future__ import annotations

import csv
import time

import numpy as np
from pydantic import BaseModel, Field

from src.algebra.emult import OpCounter
from src.core.errors import IronwoodError
from src.core.models import HomeDeviceSecret, SessionConfig, SystemParams
from src.protocol.handshake import hd_new_session
from src.utils.logger import debug, log_bench

MAX_RELATIVE_RESIDUAL = 0.05
CSV_COLUMNS = ("artin_length_beta", "artin_length_beta_prime", "total_artin_length", "field_op_count", "wall_time")

_CALIBRATION_FACTORS = (4, 16)


class SweepError(IronwoodError, ValueError):
    """A sweep range or run count that cannot produce a regression."""


class BenchRun(BaseModel):
    artin_length_beta: int = Field(description="|beta| after free reduction")
    artin_length_beta_prime: int = Field(description="|beta'| after free reduction")
    field_op_count: int = Field(description="Field operations counted by the E-Multiplication kernel")
    wall_time: float = Field(description="Seconds spent building the session")

    @property
    def total_artin_length(self) -> int:
        return self.artin_length_beta + self.artin_length_beta_prime


class BenchReport(BaseModel):
    n: int = Field(description="Number of strands")
    field: str = Field(description="Field name")
    runs: list[BenchRun] = Field(default_factory=list, description="One record per generated session")
    slope: float = Field(default=0.0, description="Fitted field ops per Artin letter")
    intercept: float = Field(default=0.0, description="Fitted constant term")
    max_relative_residual: float = Field(default=0.0, description="max |ops - fit| / ops over the runs")
    wall_time_slope: float = Field(default=0.0, description="Fitted seconds per Artin letter (informational)")
    mean_beta_length: float = Field(default=0.0, description="Mean |beta|")
    mean_beta_prime_length: float = Field(default=0.0, description="Mean |beta'|")

    @property
    def linear(self) -> bool:
        return self.max_relative_residual < MAX_RELATIVE_RESIDUAL

    def fit(self) -> "BenchReport":
        """Fill in the regression summary from the run records."""
        if len(self.runs) < 2:
            raise SweepError("a regression needs at least two runs")
        lengths = np.array([r.total_artin_length for r in self.runs], dtype=float)
        if np.ptp(lengths) == 0:
            raise SweepError("every run has the same Artin length")
        ops = np.array([r.field_op_count for r in self.runs], dtype=float)
        walls = np.array([r.wall_time for r in self.runs], dtype=float)
        self.slope, self.intercept = (float(x) for x in np.polyfit(lengths, ops, 1))
        fitted = self.slope * lengths + self.intercept
        self.max_relative_residual = float(np.max(np.abs(ops - fitted) / ops))
        self.wall_time_slope = float(np.polyfit(lengths, walls, 1)[0])
        self.mean_beta_length = float(np.mean([r.artin_length_beta for r in self.runs]))
        self.mean_beta_prime_length = float(np.mean([r.artin_length_beta_prime for r in self.runs]))
        return self

    def lines(self) -> list[str]:
        return [
            f"N = {self.n}, field = {self.field}, {len(self.runs)} sessions",
            f"mean |beta| = {self.mean_beta_length:.1f}, mean |beta'| = {self.mean_beta_prime_length:.1f}",
            f"field ops = {self.slope:.3f} * length + {self.intercept:.1f} "
            f"(per-letter bound {3 * self.n}, max relative residual {self.max_relative_residual:.4%})",
            f"wall time slope: {self.wall_time_slope * 1e6:.3f} us per letter (not asserted)",
        ]


def write_csv(report: BenchReport, stream):
    writer = csv.writer(stream)
    writer.writerow(CSV_COLUMNS)
    for run in report.runs:
        writer.writerow((run.artin_length_beta, run.artin_length_beta_prime, run.total_artin_length,
                         run.field_op_count, f"{run.wall_time:.6f}"))


def length_targets(min_len: int, max_len: int, runs: int) -> np.ndarray:
    if runs < 2:
        raise SweepError(f"a sweep needs at least 2 runs, got {runs}")
    if min_len < 1 or max_len <= min_len:
        raise SweepError(f"bad length range [{min_len}, {max_len}]")
    return np.linspace(min_len, max_len, runs).round().astype(int)


def _session_config(factors: int, base: SessionConfig) -> SessionConfig:
    return base.model_copy(update={"beta_factors": factors, "pure_insertions": max(1, factors // 2)})


def _units(factors: int) -> int:
    """Conjugate factors in beta and beta' together."""
    return 2 * factors + max(1, factors // 2)


def measure_session(params: SystemParams, hd_secret: HomeDeviceSecret, config: SessionConfig, rng) -> BenchRun:
    counter = OpCounter()
    start = time.perf_counter()
    session = hd_new_session(hd_secret, params, config, rng, counter)
    elapsed = time.perf_counter() - start
    return BenchRun(artin_length_beta=len(session.beta), artin_length_beta_prime=len(session.beta_prime),
                    field_op_count=counter.field_ops, wall_time=elapsed)


def factors_for_lengths(params, hd_secret, targets, rng, base: SessionConfig) -> list[int]:
    """
    Factor counts expected to give each target total length.

    Total length is close to affine in the number of conjugate factors since
    the inner z^-1 z pairs cancel; two calibration sessions fix the line.
    """
    units, totals = [], []
    for factors in _CALIBRATION_FACTORS:
        run = measure_session(params, hd_secret, _session_config(factors, base), rng)
        units.append(_units(factors))
        totals.append(run.total_artin_length)
    per_unit, offset = np.polyfit(units, totals, 1)
    per_unit = max(float(per_unit), 1.0)
    debug(f"Calibration: {per_unit:.1f} letters per factor, offset {offset:.1f}")
    out = []
    for target in targets:
        wanted_units = (target - offset) / per_unit
        out.append(max(1, int(round(wanted_units / 2.5))))
    return out


def run_sweep(params: SystemParams, hd_secret: HomeDeviceSecret, min_len: int, max_len: int, runs: int, rng,
              base: SessionConfig | None = None) -> BenchReport:
    """
    Generate `runs` sessions whose total Artin lengths span [min_len, max_len].

    Raises:
        SweepError: If the range or run count is degenerate.
    """
    base = base or SessionConfig()
    targets = length_targets(min_len, max_len, runs)
    report = BenchReport(n=params.n, field=params.field_spec.name)
    for factors in factors_for_lengths(params, hd_secret, targets, rng, base):
        report.runs.append(measure_session(params, hd_secret, _session_config(factors, base), rng))
    report.fit()
    log_bench({"runs": len(report.runs), "slope": round(report.slope, 3),
               "max_relative_residual": round(report.max_relative_residual, 6)})
    return report
