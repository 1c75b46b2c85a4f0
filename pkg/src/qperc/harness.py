"""Monte Carlo sweeps over random perceptrons.

Weights are drawn uniformly from [-1, 1) and inputs uniformly from {-1, +1}.
Draws come in fixed-size chunks, each seeded from ``(seed, n, chunk)``, so
results do not depend on the thread count and every tau for the same ``n``
sees the same perceptrons.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .perceptron import batch_phases
from .qpe import first_bit_success_batch
from .qperceptron import QPerceptronConfig, distribution_for, readout

CHUNK = 1024
CHUNK_ELEMENTS = 1 << 20


def chunk_rows(n: int) -> int:
    """Draws per chunk; shrinks for wide perceptrons to bound memory."""
    return max(1, min(CHUNK, CHUNK_ELEMENTS // n))


def thread_count() -> int:
    raw = os.environ.get("QPERC_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map(func, items):
    workers = thread_count()
    if workers == 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def draw_chunk(seed: int, n: int, chunk: int, size: int | None = None):
    """First ``size`` draws of chunk ``chunk``; a short chunk is a prefix of the full one."""
    rows = chunk_rows(n)
    size = rows if size is None else size
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(n, chunk)))
    W = rng.uniform(-1.0, 1.0, size=(rows, n))[:size]
    X = np.where(rng.random((rows, n)) < 0.5, -1, 1).astype(np.int8)[:size]
    return W, X


def _chunks(trials: int, n: int):
    rows = chunk_rows(n)
    return [(c, min(rows, trials - c * rows)) for c in range(math.ceil(trials / rows))]


def draw_phases(seed: int, n: int, trials: int) -> np.ndarray:
    parts = _map(lambda cs: batch_phases(*draw_chunk(seed, n, *cs)), _chunks(trials, n))
    return np.concatenate(parts)


@dataclass(frozen=True)
class SweepSpec:
    n_values: tuple
    tau_values: tuple
    trials: int = 10000
    seed: int = 0
    backend: str = "analytic"

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidArgumentError("trials must be >= 1")
        if not self.n_values or not self.tau_values:
            raise InvalidArgumentError("need at least one n and one tau")
        if min(self.n_values) < 1 or min(self.tau_values) < 1:
            raise InvalidArgumentError("n and tau must be >= 1")
        if self.backend not in ("analytic", "gate-level"):
            raise InvalidArgumentError(f"unknown backend {self.backend!r}")


@dataclass(frozen=True)
class SweepCell:
    n: int
    tau: int
    trials: int
    success_mean: float
    success_stderr: float


@dataclass(frozen=True)
class HBarStats:
    n: int
    mean: float
    sigma: float


@dataclass
class SweepReport:
    cells: list = field(default_factory=list)
    h_bar_stats: list = field(default_factory=list)

    def cell(self, n: int, tau: int) -> SweepCell:
        for c in self.cells:
            if c.n == n and c.tau == tau:
                return c
        raise KeyError((n, tau))

    def as_dict(self) -> dict:
        return {
            "cells": [asdict(c) for c in self.cells],
            "h_bar_stats": [asdict(s) for s in self.h_bar_stats],
        }


def _summarize(values: np.ndarray):
    mean = float(values.mean())
    if values.size < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(values.size))


def _gate_level_hits(seed: int, n: int, tau: int, trials: int) -> np.ndarray:
    """One measured leading digit per perceptron, scored against the classical sign."""
    config = QPerceptronConfig(n=n, tau=tau, backend="gate-level")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(n, tau, 1)))
    hits = []
    for c, size in _chunks(trials, n):
        W, X = draw_chunk(seed, n, c, size)
        for w, x in zip(W, X):
            dist, phi = distribution_for(config, w, x)
            output, _ = readout(dist, 1, rng)
            hits.append(output == (1 if phi >= 0.5 else -1))
    return np.array(hits, dtype=np.float64)


def sweep(spec: SweepSpec) -> SweepReport:
    report = SweepReport()
    for n in spec.n_values:
        phis = draw_phases(spec.seed, n, spec.trials)
        report.h_bar_stats.append(HBarStats(n, float(phis.mean()), float(phis.std(ddof=1)) if phis.size > 1 else 0.0))
        for tau in spec.tau_values:
            if spec.backend == "analytic":
                success = first_bit_success_batch(phis, tau)
            else:
                success = _gate_level_hits(spec.seed, n, tau, spec.trials)
            mean, stderr = _summarize(success)
            report.cells.append(SweepCell(n, tau, spec.trials, mean, stderr))
    return report


@dataclass(frozen=True)
class HistogramSpec:
    n: int
    samples: int = 10000
    bins: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError("n must be >= 1")
        if self.samples < 1:
            raise InvalidArgumentError("samples must be >= 1")
        if self.bins < 2:
            raise InvalidArgumentError("bins must be >= 2")


@dataclass(frozen=True)
class HistogramReport:
    n: int
    samples: int
    mean: float
    sigma: float
    bin_edges: list
    counts: list

    def as_dict(self) -> dict:
        return asdict(self)


def histogram(spec: HistogramSpec) -> HistogramReport:
    """Histogram of the normalised net input over [0, 1)."""
    phis = draw_phases(spec.seed, spec.n, spec.samples)
    counts, edges = np.histogram(phis, bins=spec.bins, range=(0.0, 1.0))
    sigma = float(phis.std(ddof=1)) if phis.size > 1 else 0.0
    return HistogramReport(
        n=spec.n,
        samples=spec.samples,
        mean=float(phis.mean()),
        sigma=sigma,
        bin_edges=[float(e) for e in edges],
        counts=[int(c) for c in counts],
    )


def tau_rule(n: int) -> int:
    """Smallest tau with 2^tau >= 10 sqrt(n).

    Equivalent to asking that a tenth of sigma ~ 1/sqrt(n) be resolved; solved
    in exact integers as 4^tau >= 100 n.
    """
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    tau = 0
    while 4 ** tau < 100 * n:
        tau += 1
    return tau


@dataclass(frozen=True)
class TauRuleRow:
    n: int
    tau_rule: int
    trials: int
    success_mean: float
    success_stderr: float


def tau_rule_check(n_values, trials: int = 10000, seed: int = 0) -> list:
    if not n_values:
        raise InvalidArgumentError("need at least one n")
    rows = []
    for n in n_values:
        tau = tau_rule(n)
        cell = sweep(SweepSpec((n,), (tau,), trials, seed)).cells[0]
        rows.append(TauRuleRow(n, tau, trials, cell.success_mean, cell.success_stderr))
    return rows
