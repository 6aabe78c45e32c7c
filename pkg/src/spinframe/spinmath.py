"""Angular-momentum special functions.

Conventions used throughout the package
---------------------------------------
* Basis ordering inside a spin-j block is descending: ``m = j, j-1, ..., -j``.
  Index ``i`` corresponds to ``m = j - i``.
* ``wigner_small_d(j, beta)[i, k]`` is ``d^j_{m r}(beta) = <j m| exp(-i beta J_y) |j r>``
  with ``m = j - i`` and ``r = j - k``.  For ``j = 1/2`` this is
  ``[[cos(beta/2), -sin(beta/2)], [sin(beta/2), cos(beta/2)]]``.
* Full rotation matrices carry positive phases,
  ``D^j_{m r}(alpha, beta, gamma) = exp(i(m alpha + r gamma)) d^j_{m r}(beta)``.
  This is the complex conjugate of the common ``exp(-i ...)`` form, and is still
  a representation of the z-y-z rotation ``Rz(alpha) Ry(beta) Rz(gamma)``.
* Half-integers are stored as doubled integers (:class:`HalfInt`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering

import numpy as np
from scipy.special import gammaln

from .exceptions import InvalidIndex

__all__ = [
    "HalfInt",
    "EulerAngles",
    "CoherentState",
    "half",
    "m_values",
    "jacobi_poly",
    "wigner_small_d",
    "wigner_D_element",
    "wigner_D_matrix",
    "coherent_state",
    "classical_rotation",
    "rotation_angle",
    "euler_from_rotation",
    "check_rotation",
    "spin_matrices",
    "hilbert_dim",
]

TWO_PI = 2.0 * math.pi


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """Exact half-integer, stored as ``twice = 2 * value``."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, (int, np.integer)) or isinstance(self.twice, bool):
            raise TypeError(f"twice must be an integer, got {self.twice!r}")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Build from an int, float, Fraction, HalfInt or a string like ``"3/2"``."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        doubled = Fraction(value) * 2
        if doubled.denominator != 1:
            raise InvalidIndex(f"{value!r} is not a multiple of 1/2")
        return cls(int(doubled))

    @property
    def value(self) -> float:
        return self.twice / 2

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __float__(self):
        return self.twice / 2

    def __neg__(self):
        return HalfInt(-self.twice)

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __eq__(self, other):
        try:
            return self.twice == HalfInt.of(other).twice
        except (InvalidIndex, TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.twice < HalfInt.of(other).twice

    def __hash__(self):
        return hash(self.twice)

    def __str__(self):
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def half(value) -> HalfInt:
    """Shorthand for :meth:`HalfInt.of`."""
    return HalfInt.of(value)


def _check_j(j) -> HalfInt:
    j = HalfInt.of(j)
    if j.twice < 0:
        raise InvalidIndex(f"j must be non-negative, got {j}")
    return j


def _check_jm(j, m) -> tuple[HalfInt, HalfInt]:
    j = _check_j(j)
    m = HalfInt.of(m)
    if abs(m.twice) > j.twice or (j.twice - m.twice) % 2:
        raise InvalidIndex(f"invalid pair (j={j}, m={m})")
    return j, m


def m_values(j) -> np.ndarray:
    """Magnetic numbers of a spin-j block in package order ``j, j-1, ..., -j``."""
    j = _check_j(j)
    return (j.twice - 2 * np.arange(j.twice + 1)) / 2.0


@dataclass(frozen=True)
class EulerAngles:
    """z-y-z Euler angles of an active rotation, in radians.

    ``alpha`` and ``gamma`` are wrapped into ``[0, 2pi)``; ``beta`` must lie in
    ``[0, pi]``.  Wrapping flips the sign of half-integer D matrices, which is
    the usual SU(2) double-cover ambiguity and never affects probabilities.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        beta = float(self.beta)
        if not -1e-12 <= beta <= math.pi + 1e-12:
            raise ValueError(f"beta must lie in [0, pi], got {beta}")
        object.__setattr__(self, "beta", min(max(beta, 0.0), math.pi))
        object.__setattr__(self, "alpha", float(self.alpha) % TWO_PI)
        object.__setattr__(self, "gamma", float(self.gamma) % TWO_PI)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class CoherentState:
    """Spin-j state pointing along ``(theta, phi)`` with projection ``m``."""

    j: HalfInt
    m: HalfInt
    theta: float
    phi: float
    amplitudes: np.ndarray = field(repr=False)

    def direction(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


def jacobi_poly(n: int, a, b, x):
    """Jacobi polynomial ``P_n^{(a,b)}(x)`` by the three-term recurrence.

    ``a``, ``b`` and ``x`` broadcast against each other, so a whole table of
    parameters can be evaluated at once.
    """
    if n < 0:
        raise InvalidIndex(f"degree must be non-negative, got {n}")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    p_prev = np.ones(np.broadcast(a, b, x).shape)
    if n == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = (a + 1) + (a + b + 2) * (x - 1) / 2 + 0 * p_prev
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p = p, (c2 * p - c3 * p_prev) / c1
    return p if p.ndim else float(p)


def _jacobi_gather(k: np.ndarray, a: np.ndarray, b: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate ``P_{k_i}^{(a_i, b_i)}(x)`` for per-entry degrees ``k_i``.

    Returns shape ``x.shape + k.shape``.
    """
    x = np.asarray(x, dtype=float)[..., None]
    out = np.ones(x.shape[:-1] + k.shape)
    kmax = int(k.max(initial=0))
    if kmax == 0:
        return out
    p_prev = np.ones_like(out)
    p = (a + 1) + (a + b + 2) * (x - 1) / 2
    out = np.where(k == 1, p, out)
    for deg in range(2, kmax + 1):
        s = 2 * deg + a + b
        c1 = 2 * deg * (deg + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (deg + a - 1) * (deg + b - 1) * s
        p_prev, p = p, (c2 * p - c3 * p_prev) / c1
        out = np.where(k == deg, p, out)
    return out


def _log_binom(n, k):
    return gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)


def wigner_small_d(j, beta) -> np.ndarray:
    """Wigner small-d matrix of spin ``j`` at angle ``beta``.

    Parameters
    ----------
    j : HalfInt, int, float or str
        Total angular momentum.
    beta : float or array_like
        Rotation angle about y.  An array of shape ``S`` gives a result of shape
        ``S + (2j+1, 2j+1)``.

    Returns
    -------
    ndarray
        Real orthogonal matrix, rows and columns ordered ``m = j, ..., -j``.
    """
    j = _check_j(j)
    tj = j.twice
    dim = tj + 1
    # doubled labels
    mp2 = (tj - 2 * np.arange(dim))[:, None] * np.ones((1, dim), dtype=int)
    m2 = mp2.T.copy()
    jp_m = (tj + m2) // 2  # j + m
    jm_m = (tj - m2) // 2  # j - m
    jp_mp = (tj + mp2) // 2
    jm_mp = (tj - mp2) // 2
    k = np.minimum(np.minimum(jp_m, jm_m), np.minimum(jp_mp, jm_mp))
    diff = (mp2 - m2) // 2  # m' - m
    # case split on which of j+m, j-m, j+m', j-m' is smallest; ties agree
    first = k == jp_m
    second = (~first) & (k == jm_m)
    third = (~first) & (~second) & (k == jp_mp)
    a = np.where(first, diff, np.where(second | third, -diff, diff))
    lam = np.where(first, diff, np.where(second | third, 0, diff))
    b = tj - 2 * k - a
    log_pref = 0.5 * (_log_binom(tj - k, k + a) - _log_binom(k + b, b))
    sign = np.where(lam % 2 == 0, 1.0, -1.0)

    beta = np.asarray(beta, dtype=float)
    bx = beta[..., None, None]
    half_s = np.sin(bx / 2)
    half_c = np.cos(bx / 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        trig = np.where(a == 0, 1.0, half_s ** a) * np.where(b == 0, 1.0, half_c ** b)
    jac = _jacobi_gather(k.ravel(), a.ravel().astype(float), b.ravel().astype(float), np.cos(beta))
    jac = jac.reshape(beta.shape + (dim, dim))
    return sign * np.exp(log_pref) * trig * jac


def wigner_D_matrix(j, angles) -> np.ndarray:
    """Full rotation matrix ``D^j(alpha, beta, gamma)`` in package ordering."""
    alpha, beta, gamma = _angles_tuple(angles)
    mv = m_values(j)
    d = wigner_small_d(j, beta)
    return np.exp(1j * mv * alpha)[:, None] * d * np.exp(1j * mv * gamma)[None, :]


def wigner_D_element(j, m, r, angles) -> complex:
    """``exp(i(m alpha + r gamma)) d^j_{m r}(beta)``."""
    j, m = _check_jm(j, m)
    _, r = _check_jm(j, r)
    alpha, beta, gamma = _angles_tuple(angles)
    d = wigner_small_d(j, beta)[(j.twice - m.twice) // 2, (j.twice - r.twice) // 2]
    return complex(np.exp(1j * (m.value * alpha + r.value * gamma)) * d)


def _angles_tuple(angles):
    if isinstance(angles, EulerAngles):
        return angles.as_tuple()
    alpha, beta, gamma = angles
    return float(alpha), float(beta), float(gamma)


def coherent_state(j, m, theta: float, phi: float) -> CoherentState:
    """Coherent state ``|j, m(theta, phi)>`` in the standard J_z basis.

    The state is ``exp(-i phi J_z) exp(-i theta J_y) |j, m>``, i.e. the basis
    state rotated to point along ``n = (theta, phi)``; it is an eigenvector of
    ``n . J`` with eigenvalue ``m``.  The free third Euler angle is fixed to 0.
    In the positive-phase D convention these amplitudes are
    ``conj(D^j_{m' m}(phi, theta, 0))``.
    """
    j, m = _check_jm(j, m)
    mv = m_values(j)
    col = (j.twice - m.twice) // 2
    amps = np.exp(-1j * mv * phi) * wigner_small_d(j, theta)[:, col]
    return CoherentState(j=j, m=m, theta=float(theta), phi=float(phi), amplitudes=amps)


def spin_matrices(j) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(J_x, J_y, J_z)`` for spin ``j`` in package ordering."""
    mv = m_values(j)
    jv = float(_check_j(j))
    # <m+1|J_+|m> on the super-diagonal in descending order
    jp = np.diag(np.sqrt(jv * (jv + 1) - mv[1:] * (mv[1:] + 1)), 1)
    jx = (jp + jp.T) / 2
    jy = (jp - jp.T) / 2j
    return jx, jy, np.diag(mv)


def _rz(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _ry(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def classical_rotation(angles) -> np.ndarray:
    """Active z-y-z rotation matrix ``Rz(alpha) Ry(beta) Rz(gamma)``."""
    alpha, beta, gamma = _angles_tuple(angles)
    return _rz(alpha) @ _ry(beta) @ _rz(gamma)


def classical_rotation_batch(alpha, beta, gamma) -> np.ndarray:
    """Vectorised :func:`classical_rotation`; returns shape ``(..., 3, 3)``."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg, sg = np.cos(gamma), np.sin(gamma)
    out = np.empty(np.broadcast(alpha, beta, gamma).shape + (3, 3))
    out[..., 0, 0] = ca * cb * cg - sa * sg
    out[..., 0, 1] = -ca * cb * sg - sa * cg
    out[..., 0, 2] = ca * sb
    out[..., 1, 0] = sa * cb * cg + ca * sg
    out[..., 1, 1] = -sa * cb * sg + ca * cg
    out[..., 1, 2] = sa * sb
    out[..., 2, 0] = -sb * cg
    out[..., 2, 1] = sb * sg
    out[..., 2, 2] = cb
    return out


def check_rotation(R, atol: float = 1e-12) -> np.ndarray:
    """Validate a proper orthogonal 3x3 matrix and return it as an array."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got shape {R.shape}")
    if not np.allclose(R @ R.T, np.eye(3), atol=atol, rtol=0):
        raise ValueError("matrix is not orthogonal")
    if abs(np.linalg.det(R) - 1.0) > atol:
        raise ValueError("matrix is not a proper rotation (det != +1)")
    return R


def rotation_angle(R) -> float:
    """Single-rotation angle ``Omega`` in ``[0, pi]`` carrying one frame to the other."""
    R = np.asarray(R, dtype=float)
    c = (np.trace(R, axis1=-2, axis2=-1) - 1.0) / 2.0
    out = np.arccos(np.clip(c, -1.0, 1.0))
    return float(out) if np.ndim(out) == 0 else out


def euler_from_rotation(R, eps: float = 1e-12) -> EulerAngles:
    """Inverse of :func:`classical_rotation` (gamma set to 0 at gimbal lock)."""
    R = np.asarray(R, dtype=float)
    beta = math.acos(min(1.0, max(-1.0, R[2, 2])))
    if math.sin(beta) > eps:
        alpha = math.atan2(R[1, 2], R[0, 2])
        gamma = math.atan2(R[2, 1], -R[2, 0])
    elif R[2, 2] > 0:
        alpha, gamma = math.atan2(R[1, 0], R[0, 0]), 0.0
    else:
        alpha, gamma = math.atan2(-R[0, 1], R[1, 1]), 0.0
    return EulerAngles(alpha, beta, gamma)


def hilbert_dim(N: int) -> int:
    """Dimension of the space spanned by one copy of each ``j`` from N spin-1/2s."""
    if N < 1:
        raise InvalidIndex(f"N must be positive, got {N}")
    if N % 2 == 0:
        return (N + 2) ** 2 // 4
    return (N + 1) * (N + 3) // 4
