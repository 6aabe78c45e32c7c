"""Transmitting a direction with N spin-1/2 particles.

Alice sends ``sum_j c_j |j, m(n)>`` over ``j = m .. N/2``; Bob measures the
rank-one covariant POVM built from ``sum_j sqrt(2j+1) |j, m(theta, phi)>``.
The mean cosine of the error angle is the quadratic form ``c^T A c`` of a
real symmetric tridiagonal matrix, so the optimal signal is its top
eigenvector.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidIndex
from .numerics import SymTridiag, gauss_legendre, symtridiag_top_eig
from .spinmath import HalfInt, jacobi_poly, wigner_small_d

__all__ = [
    "BESSEL_J0_ZERO",
    "DirectionSignal",
    "DirectionSolution",
    "default_m",
    "j_values",
    "build_A",
    "solve_optimal",
    "mp_baseline",
    "asymptote_gap",
    "outcome_density",
    "mean_cosine_quadrature",
    "povm_completeness_check",
    "sweep",
]

BESSEL_J0_ZERO = 2.404825557695773


def default_m(N: int) -> HalfInt:
    """Smallest admissible m: 0 for even N, 1/2 for odd N."""
    return HalfInt(N % 2)


def _check_Nm(N: int, m) -> HalfInt:
    if int(N) != N or N < 1:
        raise InvalidIndex(f"N must be a positive integer, got {N!r}")
    m = default_m(N) if m is None else HalfInt.of(m)
    if m.twice < 0:
        raise InvalidIndex(f"m must be non-negative, got {m}")
    if m.twice > N:
        raise InvalidIndex(f"m={m} exceeds N/2={N}/2")
    if (N - m.twice) % 2:
        raise InvalidIndex(f"m={m} has the wrong parity for N={N}")
    return m


def j_values(N: int, m=None) -> np.ndarray:
    """The ladder ``j = m, m+1, ..., N/2`` as floats."""
    m = _check_Nm(N, m)
    return np.arange(m.twice, N + 1, 2) / 2.0


@dataclass(frozen=True)
class DirectionSignal:
    """Alice's coefficients ``c_j`` for ``j = m .. N/2`` (ascending)."""

    N: int
    m: HalfInt
    coeffs: np.ndarray

    def __post_init__(self):
        m = _check_Nm(self.N, self.m)
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        expected = (self.N - m.twice) // 2 + 1
        if c.shape != (expected,):
            raise ValueError(f"expected {expected} coefficients, got shape {c.shape}")
        if abs(float(c @ c) - 1.0) > 1e-12:
            raise ValueError("coefficients must be normalised")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def normalized(cls, N: int, m, coeffs) -> "DirectionSignal":
        c = np.asarray(coeffs, dtype=float)
        return cls(N, HalfInt.of(m), c / np.linalg.norm(c))

    @classmethod
    def parallel(cls, N: int) -> "DirectionSignal":
        """All spins along n: the single block ``j = m = N/2``."""
        return cls(N, HalfInt(N), np.ones(1))

    @property
    def j_values(self) -> np.ndarray:
        return j_values(self.N, self.m)


@dataclass(frozen=True)
class DirectionSolution:
    signal: DirectionSignal
    x_mean: float
    fidelity: float

    @property
    def one_minus_F(self) -> float:
        return 1.0 - self.fidelity


def build_A(N: int, m=None) -> SymTridiag:
    """Tridiagonal matrix whose quadratic form in ``c`` is the mean cosine."""
    m = _check_Nm(N, m)
    mm = m.value
    js = j_values(N, m)
    with np.errstate(invalid="ignore", divide="ignore"):
        diag = np.where(js > 0, mm * mm / (js * (js + 1)), 0.0)
    upper = js[1:]
    off = (upper**2 - mm * mm) / (upper * np.sqrt(4 * upper**2 - 1))
    return SymTridiag(diag, off)


def solve_optimal(N: int, m=None, tol: float = 1e-13) -> DirectionSolution:
    """Optimal signal for ``N`` spins at fixed ``m`` (default 0 or 1/2)."""
    m = _check_Nm(N, m)
    lam, vec = symtridiag_top_eig(build_A(N, m), tol=tol)
    vec = vec / np.linalg.norm(vec)
    return DirectionSolution(DirectionSignal(N, m, vec), lam, (1.0 + lam) / 2.0)


def mp_baseline(N: int) -> float:
    """Fidelity of N parallel spins, ``(N+1)/(N+2)``."""
    if N < 1:
        raise InvalidIndex(f"N must be positive, got {N}")
    return (N + 1) / (N + 2)


def asymptote_gap(N: int):
    """``(1 - F, limit, ratio)`` with the large-N limit ``(j0 / (N+3))^2``."""
    if N % 2:
        raise InvalidIndex("the m=0 asymptote needs an even N")
    one_minus_F = solve_optimal(N, 0).one_minus_F
    limit = (BESSEL_J0_ZERO / (N + 3)) ** 2
    return one_minus_F, limit, one_minus_F / limit


def _amplitude(signal: DirectionSignal, x) -> np.ndarray:
    """``sum_j c_j sqrt(2j+1) ((1+x)/2)^m P_{j-m}^{(0,2m)}(x)``."""
    x = np.asarray(x, dtype=float)
    mm = signal.m.value
    total = np.zeros(x.shape)
    for c, j in zip(signal.coeffs, signal.j_values):
        total = total + c * math.sqrt(2 * j + 1) * jacobi_poly(int(round(j - mm)), 0, 2 * mm, x)
    return total * ((1 + x) / 2) ** mm


def outcome_density(signal: DirectionSignal, x):
    """Density of ``x = cos(chi)`` for Bob's outcome, normalised on [-1, 1]."""
    out = 0.5 * _amplitude(signal, x) ** 2
    return float(out) if np.ndim(out) == 0 else out


def mean_cosine_quadrature(signal: DirectionSignal, order: int | None = None) -> float:
    """``<x>`` by direct Gauss-Legendre integration of ``x p(x)``."""
    order = order or signal.N // 2 + 2
    rule = gauss_legendre(order)
    return rule.integrate(lambda x: x * outcome_density(signal, x))


def povm_completeness_check(N: int, m=None, quad_order: int = 40, phi_points: int = 64) -> float:
    """Max deviation of the integrated POVM from the identity.

    Works in the direct sum of one spin-j block per ``j = m .. N/2``; the
    integration grid is Gauss-Legendre in ``cos(theta)`` times uniform ``phi``.
    """
    m = _check_Nm(N, m)
    js = [HalfInt(t) for t in range(N, m.twice - 1, -2)][::-1]
    rule = gauss_legendre(quad_order)
    thetas = np.arccos(rule.nodes)
    phis = 2 * np.pi * np.arange(phi_points) / phi_points
    blocks = []
    for j in js:
        mv = (j.twice - 2 * np.arange(j.twice + 1)) / 2.0
        col = (j.twice - m.twice) // 2
        d_col = wigner_small_d(j, thetas)[:, :, col]  # (theta, m')
        amps = d_col[:, None, :] * np.exp(-1j * np.outer(phis, mv))[None, :, :]
        blocks.append(math.sqrt(j.twice + 1) * amps)
    vecs = np.concatenate(blocks, axis=-1).reshape(quad_order * phi_points, -1)
    w = np.repeat(rule.weights / 2.0, phi_points) / phi_points
    total = (vecs.T * w) @ vecs.conj()
    return float(np.abs(total - np.eye(total.shape[0])).max())


def sweep(N_values, include_odd: bool = True, workers: int = 1) -> list[DirectionSolution]:
    """Solve for each N at its default m; results keep the input order."""
    Ns = [int(N) for N in N_values if include_odd or N % 2 == 0]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(solve_optimal, Ns))
    return [solve_optimal(N) for N in Ns]
