"""Seeded Monte Carlo simulation of both protocols.

Randomness is split into fixed-size chunks of shots; chunk ``c`` draws from
its own stream ``SeedSequence(seed, spawn_key=(c,))``.  The worker count only
decides which thread handles which chunk, so results are bit-identical for
any number of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as L

from .direction import DirectionSignal, outcome_density
from .exceptions import EmptySample, EnvelopeViolation
from .frame import FiducialVector, FrameSignal, MeritKind, Weighted, overlap_samples
from .numerics import gauss_legendre
from .spinmath import classical_rotation_batch, rotation_angle

__all__ = [
    "SimConfig",
    "EstimateReport",
    "CHUNK_SIZE",
    "envelope_constant",
    "sample_direction_outcomes",
    "estimate_direction_fidelity",
    "sample_frame_outcomes",
    "estimate_frame_merit",
    "frame_merit_values",
]

CHUNK_SIZE = 8192


@dataclass(frozen=True)
class SimConfig:
    shots: int
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if int(self.shots) != self.shots or self.shots < 1:
            raise ValueError(f"shots must be a positive integer, got {self.shots!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class EstimateReport:
    mean: float
    stderr: float
    shots: int
    analytic: float
    sigma_distance: float

    def as_row(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "analytic": self.analytic,
            "sigma_distance": self.sigma_distance,
            "shots": self.shots,
        }


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(chunk,)))


def _run_chunks(config: SimConfig, job) -> list:
    """Call ``job(rng, size, chunk_index)`` for every chunk, in chunk order."""
    n_chunks = -(-config.shots // CHUNK_SIZE)
    sizes = [CHUNK_SIZE] * (n_chunks - 1) + [config.shots - CHUNK_SIZE * (n_chunks - 1)]

    def work(c):
        return job(_chunk_rng(config.seed, c), sizes[c], c)

    workers = config.workers
    cap = os.environ.get("SPINFRAME_THREADS")
    if cap:
        workers = max(1, min(workers, int(cap)))
    if workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(work, range(n_chunks)))
    return [work(c) for c in range(n_chunks)]


def _outcome_cdf(signal: DirectionSignal) -> L.Legendre:
    """Exact CDF of the outcome density (a polynomial of degree N in x)."""
    deg = signal.N
    rule = gauss_legendre(deg + 1)
    p = outcome_density(signal, rule.nodes)
    V = L.legvander(rule.nodes, deg)
    coef = (2 * np.arange(deg + 1) + 1) / 2 * ((rule.weights * p) @ V)
    return L.Legendre(coef).integ(lbnd=-1)


def sample_direction_outcomes(signal: DirectionSignal, config: SimConfig) -> np.ndarray:
    """Draw ``x = cos(chi)`` outcomes by inverting the exact outcome CDF.

    The CDF is the integrated Legendre series of the density; inversion is
    vectorised bisection to full double precision.  The azimuth of Bob's
    outcome is uniform and independent, so it is not sampled.
    """
    cdf = _outcome_cdf(signal)
    total = cdf(1.0)

    def job(rng, size, _):
        u = rng.random(size) * total
        lo = np.full(size, -1.0)
        hi = np.full(size, 1.0)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            below = cdf(mid) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    return np.concatenate(_run_chunks(config, job))


def _report(values: np.ndarray, analytic: float) -> EstimateReport:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptySample("no samples to estimate from")
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    if stderr > 0:
        sigma = abs(mean - analytic) / stderr
    else:
        sigma = 0.0 if mean == analytic else math.inf
    return EstimateReport(mean, stderr, int(values.size), float(analytic), float(sigma))


def estimate_direction_fidelity(samples, analytic: float) -> EstimateReport:
    """Empirical fidelity ``mean((1 + x) / 2)`` with its standard error."""
    x = np.asarray(samples, dtype=float)
    return _report((1 + x) / 2, analytic)


def envelope_constant(alice: FrameSignal) -> float:
    """Upper bound ``(sum_j sqrt(2j+1) ||a_j||)^2`` on ``|<A|U|B>|^2``."""
    return float(sum(math.sqrt(2 * j + 1) * np.linalg.norm(alice.block(j)) for j in range(alice.n)) ** 2)


@dataclass(frozen=True)
class FrameSampleStats:
    proposals: int
    accepted: int
    max_density_ratio: float

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposals


def sample_frame_outcomes(alice: FrameSignal, bob: FiducialVector, config: SimConfig, return_stats: bool = False):
    """Draw error angles from ``|<A|U(alpha,beta,gamma)|B>|^2`` under the Haar measure.

    Rejection sampling from Haar-uniform proposals with the per-block
    Cauchy-Schwarz envelope.  Returns an array of shape ``(shots, 3)`` with
    columns ``alpha, beta, gamma``; with ``return_stats`` also the proposal
    statistics.
    """
    C = envelope_constant(alice)

    def job(rng, size, _):
        got, proposals, worst = [], 0, 0.0
        need = size
        while need > 0:
            batch = max(256, int(1.2 * need * C) + 1)
            u = rng.random((batch, 4))
            alpha = 2 * np.pi * u[:, 0]
            beta = np.arccos(2 * u[:, 1] - 1)
            gamma = 2 * np.pi * u[:, 2]
            dens = np.abs(overlap_samples(alice, bob, alpha, beta, gamma)) ** 2
            ratio = float(dens.max()) / C
            worst = max(worst, ratio)
            if ratio > 1 + 1e-10:
                raise EnvelopeViolation(f"density exceeded envelope by factor {ratio:.6f}")
            keep = u[:, 3] * C < dens
            accepted = np.flatnonzero(keep)[:need]
            proposals += int(accepted[-1]) + 1 if accepted.size == need else batch
            got.append(np.column_stack([alpha[accepted], beta[accepted], gamma[accepted]]))
            need -= accepted.size
        return np.concatenate(got), proposals, worst

    parts = _run_chunks(config, job)
    samples = np.concatenate([p[0] for p in parts])
    if return_stats:
        stats = FrameSampleStats(
            proposals=sum(p[1] for p in parts),
            accepted=samples.shape[0],
            max_density_ratio=max(p[2] for p in parts),
        )
        return samples, stats
    return samples


def frame_merit_values(samples, kind) -> np.ndarray:
    """Per-sample merit for error angles of shape ``(k, 3)``."""
    s = np.atleast_2d(np.asarray(samples, dtype=float))
    alpha, beta, gamma = s[:, 0], s[:, 1], s[:, 2]
    kind = MeritKind.parse(kind)
    if kind is MeritKind.Z:
        return np.cos(beta)
    xy = (1 + np.cos(beta)) * np.cos(alpha + gamma)
    if kind is MeritKind.XY:
        return xy
    if kind is MeritKind.XYZ:
        omega = rotation_angle(classical_rotation_batch(alpha, beta, gamma))
        return 1 + 2 * np.cos(omega)
    assert isinstance(kind, Weighted)
    return kind.w_z * np.cos(beta) + kind.w_xy * xy


def estimate_frame_merit(samples, kind, analytic: float) -> EstimateReport:
    """Empirical mean of the chosen axis-cosine merit over sampled error angles."""
    return _report(frame_merit_values(samples, kind), analytic)
