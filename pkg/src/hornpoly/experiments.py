"""Seeded Monte Carlo runs over random hermitian structures and rotations.

Three samplers are provided:

``imf``
    frequencies of ``C = S - J0 S J0`` with ``S = R S0 R^{-1}``, i.e. the
    frequency map at the structure ``R^{-1} J0 R``;
``projection``
    pair averages of the spectrum of ``S0 + R^{-1} S0 R``;
``adapted``
    spectra of ``sigma_- + rho^{-1} sigma_+ rho`` for ``rho`` in SO(p).

Every sample is tested for membership in ``P1``. Samples are processed in
fixed-size chunks, each sample drawing from its own generator keyed on
``(seed, index)``, so output does not depend on the number of workers.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .eigen import eigh_jacobi_batch
from .mechanics import PAIRING_TOL, pair_spectrum
from .polytope import (
    PartitionPair,
    build_P1,
    default_tolerances,
    inequality_slacks,
    is_hermitian_spectrum,
    project_to_delta,
)
from .sampling import SAMPLERS, random_rotation, sample_rng, standard_structure
from .validation import check_spectrum, check_symmetric

logger = logging.getLogger(__name__)

__all__ = [
    "ExperimentConfig",
    "SampleRecord",
    "RunReport",
    "KINDS",
    "iter_samples",
    "summarize",
    "run_experiment",
    "run_imF",
    "run_projection",
    "run_adapted",
    "RecordWriter",
]

KINDS = ("imf", "projection", "adapted")
CHUNK = 1024
TIGHT_TOL = 1e-6


@dataclass
class ExperimentConfig:
    """Parameters of one Monte Carlo run.

    ``sigma`` is the spectrum of ``S0``; when ``S0`` is omitted it is taken
    to be ``diag(sigma)``. ``epsilon`` defaults to ``1e-3 * ||sigma||_1``
    and the membership tolerances to ``rel_tol`` times the trace and l1
    scales of the problem.
    """

    sigma: np.ndarray
    samples: int = 25000
    seed: int = 0
    epsilon: float | None = None
    sampler: str = "paper"
    rel_tol: float = 1e-9
    S0: np.ndarray | None = None

    def __post_init__(self):
        if self.S0 is not None:
            S0 = check_symmetric(self.S0, name="S0")
            values, _ = eigh_jacobi_batch(S0[None], vectors=False)
            self.S0 = S0
            self.sigma = values[0]
        self.sigma = check_spectrum(self.sigma, name="sigma")
        if self.sigma.shape[0] % 2 or self.sigma.shape[0] == 0:
            raise ValueError("sigma must have positive even length 2p")
        if self.S0 is None:
            self.S0 = np.diag(self.sigma)
        if int(self.samples) < 1:
            raise ValueError(f"samples must be at least 1, got {self.samples}")
        self.samples = int(self.samples)
        self.seed = int(self.seed)
        if self.epsilon is None:
            self.epsilon = 1e-3 * float(np.abs(self.sigma).sum())
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"unknown sampler {self.sampler!r}; expected one of {SAMPLERS}")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")

    @property
    def p(self):
        return self.sigma.shape[0] // 2

    def echo(self):
        return {
            "p": self.p,
            "sigma": self.sigma.tolist(),
            "samples": self.samples,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "sampler": self.sampler,
            "rel_tol": self.rel_tol,
        }


@dataclass
class SampleRecord:
    """One sample: its computed spectrum and the p-vector tested against P1.

    ``spectrum`` has length 2p for the ``imf`` and ``projection`` runs and
    length p for ``adapted``. ``active`` lists the inequalities with slack
    below ``TIGHT_TOL``.
    """

    index: int
    spectrum: np.ndarray
    nu: np.ndarray
    trace_residual: float
    min_slack: float
    inside: bool
    hermitian_close: bool
    active: tuple = ()


@dataclass
class RunReport:
    config: dict
    samples: int
    count_inside: int
    worst_trace_residual: float
    worst_min_slack: float
    wall_time: float = 0.0
    tight_counts: list = field(default_factory=list)
    kind: str = ""

    @property
    def all_inside(self):
        return self.count_inside == self.samples

    def to_json(self):
        d = asdict(self)
        if not np.isfinite(d["worst_min_slack"]):
            d["worst_min_slack"] = None
        return d


def _spectra_chunk(kind, cfg, start, stop):
    p, S0 = cfg.p, cfg.S0
    n = stop - start
    if kind == "adapted":
        if p == 1:
            nu = np.full((n, 1), cfg.sigma.sum())
            return nu, nu.copy()
        a = np.diag(cfg.sigma[0::2])
        b = np.diag(cfg.sigma[1::2])
        mats = np.empty((n, p, p))
        for k in range(n):
            rho = random_rotation(p, sample_rng(cfg.seed, start + k), cfg.sampler)
            mats[k] = a + rho.T @ b @ rho
        mats = 0.5 * (mats + mats.transpose(0, 2, 1))
        nu, _ = eigh_jacobi_batch(mats, vectors=False)
        return nu, nu

    J0 = standard_structure(p)
    mats = np.empty((n, 2 * p, 2 * p))
    for k in range(n):
        R = random_rotation(2 * p, sample_rng(cfg.seed, start + k), cfg.sampler)
        if kind == "imf":
            S = R @ S0 @ R.T
            mats[k] = S - J0 @ S @ J0
        else:
            mats[k] = S0 + R.T @ S0 @ R
    mats = 0.5 * (mats + mats.transpose(0, 2, 1))
    gamma, _ = eigh_jacobi_batch(mats, vectors=False)
    if kind == "imf":
        nu = pair_spectrum(gamma, float(np.linalg.norm(S0)), PAIRING_TOL)
    else:
        nu = project_to_delta(gamma)
    return gamma, nu


def _chunk_records(kind, cfg, spec, tols, start, stop):
    gamma, nu = _spectra_chunk(kind, cfg, start, stop)
    tol_t, tol_i = tols
    residual = nu.sum(axis=1) - spec.trace_sum
    if spec.n_inequalities:
        slacks = inequality_slacks(spec, nu)
        min_slack = slacks.min(axis=1)
    else:
        slacks = np.empty((nu.shape[0], 0))
        min_slack = np.full(nu.shape[0], np.inf)
    inside = (np.abs(residual) <= tol_t) & (min_slack >= -tol_i)
    if kind == "adapted":
        close = np.ones(nu.shape[0], dtype=bool)
    else:
        close = is_hermitian_spectrum(gamma, cfg.epsilon)
    return [
        SampleRecord(
            index=start + k,
            spectrum=gamma[k],
            nu=nu[k],
            trace_residual=float(residual[k]),
            min_slack=float(min_slack[k]),
            inside=bool(inside[k]),
            hermitian_close=bool(close[k]),
            active=tuple(np.flatnonzero(slacks[k] < TIGHT_TOL).tolist()),
        )
        for k in range(nu.shape[0])
    ]


def iter_samples(kind, cfg, threads=1, chunk=CHUNK):
    """Yield :class:`SampleRecord` objects in index order.

    Work is split into chunks of ``chunk`` consecutive indices; with
    ``threads > 1`` a bounded window of chunks is computed concurrently.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown experiment {kind!r}; expected one of {KINDS}")
    spec = build_P1(cfg.sigma, PartitionPair.interlaced(cfg.sigma))
    tols = default_tolerances(spec, cfg.rel_tol)
    bounds = [(s, min(s + chunk, cfg.samples)) for s in range(0, cfg.samples, chunk)]
    if threads <= 1:
        for start, stop in bounds:
            yield from _chunk_records(kind, cfg, spec, tols, start, stop)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = deque()
        todo = iter(bounds)
        for start, stop in todo:
            pending.append(pool.submit(_chunk_records, kind, cfg, spec, tols, start, stop))
            if len(pending) >= 2 * threads:
                yield from pending.popleft().result()
        while pending:
            yield from pending.popleft().result()


def summarize(records, n_inequalities=None, config=None, kind=""):
    """Aggregate a stream of records into a :class:`RunReport`.

    Raises ``ValueError`` on an empty stream.
    """
    count = inside = 0
    worst_res, worst_slack = 0.0, np.inf
    tight = [0] * (n_inequalities or 0)
    for rec in records:
        count += 1
        inside += rec.inside
        worst_res = max(worst_res, abs(rec.trace_residual))
        worst_slack = min(worst_slack, rec.min_slack)
        for q in rec.active:
            if q >= len(tight):
                tight.extend([0] * (q + 1 - len(tight)))
            tight[q] += 1
    if count == 0:
        raise ValueError("cannot summarize an empty stream of records")
    return RunReport(config=config or {}, samples=count, count_inside=inside,
                     worst_trace_residual=worst_res, worst_min_slack=float(worst_slack),
                     tight_counts=tight, kind=kind)


def _fmt(x):
    return format(float(x), ".17g")


class RecordWriter:
    """CSV sink: header row, then one line per record with 17-digit floats."""

    def __init__(self, fh, p, spectrum_len):
        self._w = csv.writer(fh, lineterminator="\n")
        self._w.writerow(
            ["index"]
            + [f"gamma_{i}" for i in range(1, spectrum_len + 1)]
            + [f"nu_{i}" for i in range(1, p + 1)]
            + ["trace_residual", "min_slack", "inside", "hermitian_close"])

    def write(self, rec):
        self._w.writerow(
            [rec.index]
            + [_fmt(x) for x in rec.spectrum]
            + [_fmt(x) for x in rec.nu]
            + [_fmt(rec.trace_residual), _fmt(rec.min_slack),
               int(rec.inside), int(rec.hermitian_close)])


def _tee(records, writer):
    for rec in records:
        if writer is not None:
            writer.write(rec)
        yield rec


def run_experiment(kind, cfg, csv_file=None, threads=1):
    """Run one experiment, streaming records to ``csv_file`` if given."""
    t0 = time.perf_counter()
    n_ineq = len(build_P1(cfg.sigma).triples)
    writer = None
    if csv_file is not None:
        width = cfg.p if kind == "adapted" else 2 * cfg.p
        writer = RecordWriter(csv_file, cfg.p, width)
    report = summarize(_tee(iter_samples(kind, cfg, threads), writer),
                       n_inequalities=n_ineq, config=cfg.echo(), kind=kind)
    report.wall_time = time.perf_counter() - t0
    logger.info("%s: %d/%d inside P1, worst slack %.3e", kind,
                report.count_inside, report.samples, report.worst_min_slack)
    return report


def run_imF(cfg, csv_file=None, threads=1):
    return run_experiment("imf", cfg, csv_file, threads)


def run_projection(cfg, csv_file=None, threads=1):
    return run_experiment("projection", cfg, csv_file, threads)


def run_adapted(cfg, csv_file=None, threads=1):
    return run_experiment("adapted", cfg, csv_file, threads)


def write_report(report, fh):
    json.dump(report.to_json(), fh, indent=2)
    fh.write("\n")
