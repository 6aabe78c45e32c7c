"""Small numerical kernels: extreme eigenpairs, quadrature, derivative-free search."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.linalg import solve_banded

from .exceptions import NonConvergence

__all__ = [
    "SymTridiag",
    "QuadratureRule",
    "symtridiag_top_eig",
    "hermitian_top_eig",
    "gauss_legendre",
    "derivative_free_maximize",
    "canonical_phase",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SymTridiag:
    """Real symmetric tridiagonal matrix given by its diagonal and off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.diag, dtype=float))
        e = np.atleast_1d(np.asarray(self.offdiag, dtype=float))
        if d.ndim != 1 or d.size < 1:
            raise ValueError("diag must be a non-empty 1-D sequence")
        if e.shape != (d.size - 1,):
            raise ValueError(f"offdiag must have length {d.size - 1}, got {e.size}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("entries must be finite")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def quadratic_form(self, c) -> float:
        c = np.asarray(c)
        return float(np.real(np.vdot(c, self.matvec(c))))


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so that its largest-magnitude entry is real and positive."""
    v = np.asarray(v)
    k = int(np.argmax(np.abs(v)))
    if v[k] == 0:
        return v
    return v * (np.abs(v[k]) / v[k])


def _sturm_count(d: np.ndarray, e2: np.ndarray, x: float, pivmin: float) -> int:
    """Number of eigenvalues strictly below ``x``."""
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def symtridiag_top_eig(t: SymTridiag, tol: float = 1e-12, max_iter: int = 50):
    """Largest eigenvalue and unit eigenvector of a symmetric tridiagonal matrix.

    Bisection on the Sturm count locates the eigenvalue; inverse iteration
    polishes the vector until ``||T v - lam v|| <= tol``.

    Returns
    -------
    (float, ndarray)
        Eigenvalue and eigenvector, sign fixed so its largest entry is positive.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    d, e = t.diag, t.offdiag
    n = d.size
    if n == 1:
        return float(d[0]), np.ones(1)
    e2 = e * e
    absrow = np.abs(d).copy()
    absrow[:-1] += np.abs(e)
    absrow[1:] += np.abs(e)
    scale = max(float(absrow.max()), _EPS)
    pivmin = _EPS * _EPS * max(1.0, scale * scale)
    lo = float(np.min(d - (absrow - np.abs(d))))
    hi = float(np.max(absrow))
    # invariant: count(lo) < n <= count(hi), so the top eigenvalue is in (lo, hi]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 2 * _EPS * max(abs(lo), abs(hi)) + pivmin or mid in (lo, hi):
            break
        if _sturm_count(d, e2, mid, pivmin) < n:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)

    # inverse iteration with a shift just above the eigenvalue
    shift = lam + 4 * _EPS * scale
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[1, :] = d - shift
    ab[2, :-1] = e
    v = np.ones(n) / np.sqrt(n)
    resid = np.inf
    for _ in range(max_iter):
        w = solve_banded((1, 1), ab, v, check_finite=False)
        v = w / np.linalg.norm(w)
        tv = t.matvec(v)
        lam_r = float(v @ tv)
        resid = float(np.linalg.norm(tv - lam_r * v))
        if resid <= tol:
            v = canonical_phase(v)
            return lam_r, v
    raise NonConvergence(f"inverse iteration residual {resid:.3e} > tol {tol:.1e}")


def hermitian_top_eig(M, tol: float = 1e-10):
    """Largest eigenvalue and unit eigenvector of a dense Hermitian matrix.

    The eigenvector's global phase is fixed so its largest-magnitude entry is
    real and positive.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    if np.abs(M - M.conj().T).max(initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not Hermitian")
    H = 0.5 * (M + M.conj().T)
    w, V = np.linalg.eigh(H)
    lam = float(w[-1])
    v = canonical_phase(V[:, -1])
    resid = float(np.linalg.norm(H @ v - lam * v))
    if resid > max(tol, 1e2 * _EPS * scale * np.sqrt(M.shape[0])):
        raise NonConvergence(f"eigen residual {resid:.3e} > tol {tol:.1e}")
    return lam, v


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f, a: float = -1.0, b: float = 1.0) -> float:
        """Integrate a vectorised ``f`` over ``[a, b]``."""
        half = 0.5 * (b - a)
        x = half * self.nodes + 0.5 * (a + b)
        return half * float(np.sum(self.weights * f(x)))


def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1], exact through degree ``2*order - 1``."""
    if order < 1:
        raise ValueError(f"order must be positive, got {order}")
    x, w = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(nodes=x, weights=w)


def derivative_free_maximize(objective, start, tol: float = 1e-10, max_iter: int = 20000):
    """Maximise ``objective`` with Powell's conjugate-direction method.

    Only meant for small cross-checks; returns ``(argmax, value)``.
    """
    start = np.asarray(start, dtype=float)
    res = optimize.minimize(
        lambda x: -objective(x),
        start,
        method="Powell",
        options={"xtol": tol, "ftol": tol, "maxiter": max_iter, "maxfev": 50 * max_iter},
    )
    if not res.success:
        raise NonConvergence(f"Powell search failed: {res.message}", result=(res.x, -res.fun))
    return res.x, float(-res.fun)
