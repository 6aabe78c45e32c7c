"""Transmitting a Cartesian frame with one hydrogen-like Rydberg level.

Alice's state lives in the direct sum of spin blocks ``j = 0 .. n-1``
(dimension ``d = n**2``).  Bob's covariant POVM is the SO(3) orbit of a
fiducial vector ``sum_j sqrt(2j+1) b_j``.  For each figure of merit (mean
``cos`` of the z-axis error, the x+y axes, or all three) the expectation is
a sparse quartic form ``sum f[j,k,m,n,r,s] a*_{jm} b_{jr} a_{kn} b*_{ks}``,
i.e. ``<A|M(b)|A>`` for a Hermitian matrix ``M(b)``.

Flat layout: index ``j**2 + (j - m)`` holds ``(j, m)``, with ``m`` descending
inside each block.
"""

from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .direction import solve_optimal
from .exceptions import DegenerateBlock, InvalidIndex, NonConvergence, UnsupportedWeights
from .numerics import canonical_phase, gauss_legendre, hermitian_top_eig
from .spinmath import wigner_small_d

__all__ = [
    "MeritKind",
    "Weighted",
    "FrameSignal",
    "FiducialVector",
    "MeritTensor",
    "FrameSolution",
    "g_element",
    "h_element",
    "build_merit_tensor",
    "build_M",
    "merit_expectation",
    "merit_function",
    "quadrature_merit_oracle",
    "bob_from_alice",
    "alternating_optimize",
    "weighted_merit_reduction",
    "weighted_kind",
    "split_strategy_compare",
    "SplitComparison",
]

log = logging.getLogger(__name__)

_DEGENERATE_NORM = 1e-14


class MeritKind(enum.Enum):
    """Which axis cosines are summed into the figure of merit."""

    Z = "z"
    XY = "xy"
    XYZ = "xyz"

    @classmethod
    def parse(cls, value) -> "MeritKind | Weighted":
        if isinstance(value, (cls, Weighted)):
            return value
        aliases = {"zaxis": "z", "xyaxes": "xy", "allaxes": "xyz", "all": "xyz"}
        key = str(value).strip().lower()
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class Weighted:
    """``w_z <cos w_z> + w_xy (<cos w_x> + <cos w_y>)`` in the principal frame."""

    w_z: float
    w_xy: float

    @property
    def value(self) -> str:
        return "weighted"


def _idx(j: int, m: int) -> int:
    return j * j + (j - m)


def _labels(n: int) -> tuple[np.ndarray, np.ndarray]:
    js = np.concatenate([np.full(2 * j + 1, j) for j in range(n)])
    ms = np.concatenate([np.arange(j, -j - 1, -1) for j in range(n)])
    return js, ms


class _BlockVector:
    """Complex amplitudes over the blocks ``j = 0 .. n-1``."""

    def __init__(self, n: int, vector):
        if int(n) != n or n < 1:
            raise InvalidIndex(f"n must be a positive integer, got {n!r}")
        vec = np.asarray(vector, dtype=complex).ravel()
        if vec.size != n * n:
            raise ValueError(f"expected {n * n} amplitudes for n={n}, got {vec.size}")
        self.n = int(n)
        self.vector = vec

    @classmethod
    def from_map(cls, n: int, amplitudes: dict):
        vec = np.zeros(n * n, dtype=complex)
        for (j, m), value in amplitudes.items():
            if not (0 <= j < n and abs(m) <= j):
                raise InvalidIndex(f"invalid label (j={j}, m={m}) for n={n}")
            vec[_idx(j, m)] = value
        return cls(n, vec)

    def __getitem__(self, jm) -> complex:
        j, m = jm
        if not (0 <= j < self.n and abs(m) <= j):
            raise InvalidIndex(f"invalid label (j={j}, m={m}) for n={self.n}")
        return complex(self.vector[_idx(j, m)])

    def block(self, j: int) -> np.ndarray:
        return self.vector[j * j : (j + 1) ** 2]

    def block_norms(self) -> np.ndarray:
        return np.array([np.linalg.norm(self.block(j)) for j in range(self.n)])

    def as_map(self) -> dict:
        js, ms = _labels(self.n)
        return {(int(j), int(m)): complex(v) for j, m, v in zip(js, ms, self.vector)}

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class FrameSignal(_BlockVector):
    """Alice's normalised state ``sum a_{jm} |j, m>``."""

    def __init__(self, n: int, vector):
        super().__init__(n, vector)
        if abs(np.vdot(self.vector, self.vector).real - 1.0) > 1e-12:
            raise ValueError("Alice's amplitudes must be normalised")

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "FrameSignal":
        v = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
        return cls(n, v / np.linalg.norm(v))


class FiducialVector(_BlockVector):
    """Bob's fiducial amplitudes ``b_{jm}``, normalised within every j-block.

    The ``sqrt(2j+1)`` block weight is applied by the operations, not stored.
    """

    def __init__(self, n: int, vector):
        super().__init__(n, vector)
        norms = self.block_norms()
        if np.abs(norms - 1.0).max() > 1e-12:
            raise ValueError("each j-block of Bob's amplitudes must be normalised")

    @classmethod
    def uniform(cls, n: int) -> "FiducialVector":
        js, _ = _labels(n)
        return cls(n, 1.0 / np.sqrt(2 * js + 1.0))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "FiducialVector":
        v = rng.normal(size=n * n) + 1j * rng.normal(size=n * n)
        js, _ = _labels(n)
        norms = np.array([np.linalg.norm(v[j * j : (j + 1) ** 2]) for j in range(n)])
        return cls(n, v / norms[js])


def g_element(j: int, k: int, n: int, s: int) -> float:
    """z-axis coefficient ``g_{jk}`` at Alice index ``n`` and Bob index ``s``."""
    if abs(j - k) > 1 or min(j, k) < 0 or max(abs(n), abs(s)) > min(j, k):
        raise InvalidIndex(f"g_element undefined at j={j}, k={k}, n={n}, s={s}")
    if j == k:
        return 0.0 if j == 0 else n * s / (j * (j + 1))
    J = max(j, k)
    return math.sqrt((J * J - n * n) * (J * J - s * s) / (4 * J * J - 1)) / J


def h_element(j: int, k: int, n: int, s: int) -> float:
    """Two-axis coefficient ``h_{jk}`` (not symmetric in ``j, k``).

    ``n`` and ``s`` are the k-block labels; the paired j-block labels are
    ``n - 1`` and ``s - 1``.
    """
    if abs(j - k) > 1 or min(j, k) < 0:
        raise InvalidIndex(f"h_element undefined at j={j}, k={k}")
    if abs(n) > k or abs(s) > k or abs(n - 1) > j or abs(s - 1) > j:
        raise InvalidIndex(f"h_element undefined at j={j}, k={k}, n={n}, s={s}")
    if j == k:
        if j == 0:
            return 0.0
        return math.sqrt((j - n + 1) * (j + n) * (j - s + 1) * (j + s)) / (2 * j * (j + 1))
    if k == j - 1:
        num = (j - n + 1) * (j - n) * (j - s + 1) * (j - s)
        return math.sqrt(num) / (2 * j * math.sqrt(4 * j * j - 1))
    J = k  # j = J - 1
    num = (J + n - 1) * (J + n) * (J + s - 1) * (J + s)
    return math.sqrt(num) / (2 * J * math.sqrt(4 * J * J - 1))


@dataclass(frozen=True)
class MeritTensor:
    """Sparse coefficients ``f[j,k,m,n,r,s]``.

    ``labels`` has one row ``(j, k, m, n, r, s)`` per stored entry and
    ``values`` the matching coefficient.
    """

    kind: object
    n: int
    labels: np.ndarray
    values: np.ndarray

    def __len__(self):
        return self.values.size

    def as_dict(self) -> dict:
        return {tuple(int(x) for x in row): float(v) for row, v in zip(self.labels, self.values)}

    def __add__(self, other: "MeritTensor") -> "MeritTensor":
        return MeritTensor(
            None,
            self.n,
            np.concatenate([self.labels, other.labels]),
            np.concatenate([self.values, other.values]),
        )

    def scaled(self, factor: float) -> "MeritTensor":
        return MeritTensor(self.kind, self.n, self.labels, factor * self.values)

    @property
    def rows(self) -> np.ndarray:
        j, m = self.labels[:, 0], self.labels[:, 2]
        return j * j + j - m

    @property
    def cols(self) -> np.ndarray:
        k, n = self.labels[:, 1], self.labels[:, 3]
        return k * k + k - n

    @property
    def bob_rows(self) -> np.ndarray:
        j, r = self.labels[:, 0], self.labels[:, 4]
        return j * j + j - r

    @property
    def bob_cols(self) -> np.ndarray:
        k, s = self.labels[:, 1], self.labels[:, 5]
        return k * k + k - s


def _z_entries(n: int):
    out = []
    for j in range(n):
        for k in range(max(0, j - 1), min(n, j + 2)):
            lo = min(j, k)
            for m in range(-lo, lo + 1):
                for r in range(-lo, lo + 1):
                    v = g_element(j, k, m, r)
                    if v != 0.0:
                        out.append(((j, k, m, m, r, r), v))
    return out


def _xy_entries(n: int):
    out = []
    for j in range(n):
        for k in range(max(0, j - 1), min(n, j + 2)):
            # m = n - 1, r = s - 1, coefficient h_jk(n, s)
            for nn in range(-k, k + 1):
                if abs(nn - 1) > j:
                    continue
                for s in range(-k, k + 1):
                    if abs(s - 1) > j:
                        continue
                    v = h_element(j, k, nn, s)
                    if v != 0.0:
                        out.append(((j, k, nn - 1, nn, s - 1, s), v))
            # n = m - 1, s = r - 1, coefficient h_kj(m, r)
            for m in range(-j, j + 1):
                if abs(m - 1) > k:
                    continue
                for r in range(-j, j + 1):
                    if abs(r - 1) > k:
                        continue
                    v = h_element(k, j, m, r)
                    if v != 0.0:
                        out.append(((j, k, m, m - 1, r, r - 1), v))
    return out


def _tensor(kind, n, entries) -> MeritTensor:
    if entries:
        labels = np.array([e[0] for e in entries], dtype=np.int64)
        values = np.array([e[1] for e in entries], dtype=float)
    else:
        labels = np.zeros((0, 6), dtype=np.int64)
        values = np.zeros(0)
    return MeritTensor(kind, n, labels, values)


def build_merit_tensor(kind, n: int) -> MeritTensor:
    """Assemble the sparse merit tensor for ``kind`` at level ``n``."""
    kind = MeritKind.parse(kind)
    if int(n) != n or n < 1:
        raise InvalidIndex(f"n must be a positive integer, got {n!r}")
    if kind is MeritKind.Z:
        return _tensor(kind, n, _z_entries(n))
    if kind is MeritKind.XY:
        return _tensor(kind, n, _xy_entries(n))
    if kind is MeritKind.XYZ:
        return _tensor(kind, n, _z_entries(n) + _xy_entries(n))
    z = [(lab, kind.w_z * v) for lab, v in _z_entries(n)]
    xy = [(lab, kind.w_xy * v) for lab, v in _xy_entries(n)]
    return _tensor(kind, n, [e for e in z + xy if e[1] != 0.0])


def build_M(tensor: MeritTensor, bob: FiducialVector) -> np.ndarray:
    """Hermitian matrix ``M[jm, kn] = sum_{r,s} f b_{jr} conj(b_{ks})``."""
    if bob.n != tensor.n:
        raise ValueError(f"tensor is for n={tensor.n}, fiducial vector for n={bob.n}")
    d = tensor.n**2
    M = np.zeros((d, d), dtype=complex)
    b = bob.vector
    contrib = tensor.values * b[tensor.bob_rows] * b[tensor.bob_cols].conj()
    np.add.at(M, (tensor.rows, tensor.cols), contrib)
    return M


def merit_expectation(tensor: MeritTensor, alice: FrameSignal, bob: FiducialVector) -> float:
    """Full contraction ``sum f a*_{jm} b_{jr} a_{kn} b*_{ks}``."""
    if alice.n != tensor.n or bob.n != tensor.n:
        raise ValueError("alice, bob and tensor must share the same n")
    a, b = alice.vector, bob.vector
    terms = (
        tensor.values
        * a[tensor.rows].conj()
        * b[tensor.bob_rows]
        * a[tensor.cols]
        * b[tensor.bob_cols].conj()
    )
    return float(np.sum(terms).real)


def merit_function(kind):
    """Pointwise merit ``f(alpha, beta, gamma)`` for a kind, a 3x3 C matrix or a callable."""
    if callable(kind) and not isinstance(kind, (MeritKind, Weighted)):
        return kind
    if isinstance(kind, np.ndarray):
        from .spinmath import classical_rotation_batch

        C = np.asarray(kind, dtype=float)
        return lambda a, b, g: np.einsum("...mn,mn->...", classical_rotation_batch(a, b, g), C)
    kind = MeritKind.parse(kind)

    def z(a, b, g):
        return np.cos(b) + 0 * a * g

    def xy(a, b, g):
        return (1 + np.cos(b)) * np.cos(a + g)

    if kind is MeritKind.Z:
        return z
    if kind is MeritKind.XY:
        return xy
    if kind is MeritKind.XYZ:
        return lambda a, b, g: z(a, b, g) + xy(a, b, g)
    return lambda a, b, g: kind.w_z * z(a, b, g) + kind.w_xy * xy(a, b, g)


def overlap_amplitude(alice: FrameSignal, bob: FiducialVector, alpha, beta, gamma) -> np.ndarray:
    """``<A| U(alpha, beta, gamma) |B>`` on a broadcast grid of Euler angles.

    ``alpha``, ``beta`` and ``gamma`` are 1-D arrays; the result has shape
    ``(len(beta), len(alpha), len(gamma))``.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
    out = np.zeros((beta.size, alpha.size, gamma.size), dtype=complex)
    for j in range(alice.n):
        ms = np.arange(j, -j - 1, -1)
        u = alice.block(j).conj()[None, :] * np.exp(1j * np.outer(alpha, ms))
        v = math.sqrt(2 * j + 1) * bob.block(j)[None, :] * np.exp(1j * np.outer(gamma, ms))
        d = wigner_small_d(j, beta)
        out += np.einsum("am,bmr,gr->bag", u, d, v, optimize=True)
    return out


def overlap_samples(alice: FrameSignal, bob: FiducialVector, alpha, beta, gamma) -> np.ndarray:
    """``<A| U |B>`` at paired samples ``(alpha_i, beta_i, gamma_i)``."""
    alpha, beta, gamma = (np.asarray(x, dtype=float) for x in (alpha, beta, gamma))
    out = np.zeros(beta.shape, dtype=complex)
    for j in range(alice.n):
        ms = np.arange(j, -j - 1, -1)
        u = alice.block(j).conj()[None, :] * np.exp(1j * np.outer(alpha, ms))
        v = math.sqrt(2 * j + 1) * bob.block(j)[None, :] * np.exp(1j * np.outer(gamma, ms))
        d = wigner_small_d(j, beta)
        out += np.einsum("im,imr,ir->i", u, d, v, optimize=True)
    return out


def quadrature_merit_oracle(
    alice: FrameSignal,
    bob: FiducialVector,
    kind=MeritKind.XYZ,
    beta_order: int = 40,
    angle_points: int = 64,
    return_norm: bool = False,
):
    """Haar-measure integral of ``f * |<A|U|B>|^2``.

    Gauss-Legendre in ``cos(beta)`` and uniform grids in ``alpha`` and
    ``gamma``.  With ``return_norm`` also returns the integral of the density
    alone, which must be 1.
    """
    if alice.n != bob.n:
        raise ValueError("alice and bob must share the same n")
    rule = gauss_legendre(beta_order)
    beta = np.arccos(rule.nodes)
    grid = 2 * np.pi * np.arange(angle_points) / angle_points
    dens = np.abs(overlap_amplitude(alice, bob, grid, beta, grid)) ** 2
    f = merit_function(kind)(grid[None, :, None], beta[:, None, None], grid[None, None, :])
    w = (rule.weights / 2.0)[:, None, None] / angle_points**2
    value = float(np.sum(w * dens * f))
    if return_norm:
        return value, float(np.sum(w * dens))
    return value


def bob_from_alice(alice: _BlockVector, degenerate: str = "raise") -> FiducialVector:
    """Per-block normalisation of Alice's amplitudes.

    ``degenerate="uniform"`` replaces empty blocks by the uniform vector
    instead of raising :class:`DegenerateBlock`.
    """
    vec = np.array(alice.vector, dtype=complex)
    for j in range(alice.n):
        blk = vec[j * j : (j + 1) ** 2]
        norm = np.linalg.norm(blk)
        if norm < _DEGENERATE_NORM:
            if degenerate != "uniform":
                raise DegenerateBlock(f"block j={j} has norm {norm:.2e}", j=j)
            blk[:] = 1.0 / math.sqrt(2 * j + 1)
        else:
            blk /= norm
    return FiducialVector(alice.n, vec)


@dataclass
class FrameSolution:
    alice: FrameSignal
    bob: FiducialVector
    kind: object
    merit: float
    per_axis: tuple
    mse_total: float
    iterations: int = 0
    converged: bool = True
    history: list = field(default_factory=list)
    monotone: bool = True
    restarts_used: int = 0
    fixed_point_residual: float = 0.0
    eigen_residual: float = 0.0

    @property
    def n(self) -> int:
        return self.alice.n


def _axis_cosines(alice, bob):
    n = alice.n
    cz = merit_expectation(build_merit_tensor(MeritKind.Z, n), alice, bob)
    cxy = merit_expectation(build_merit_tensor(MeritKind.XY, n), alice, bob)
    # only the x+y sum has an analytic tensor; it is split evenly for reporting
    return (cxy / 2, cxy / 2, cz)


def _solution(kind, tensor, alice, bob, **extra) -> FrameSolution:
    per_axis = _axis_cosines(alice, bob)
    mse_total = sum((1 - c) / 2 for c in per_axis)
    merit = merit_expectation(tensor, alice, bob)
    return FrameSolution(alice, bob, kind, merit, per_axis, mse_total, **extra)


def _iterate(tensor, bob, tol, max_iters):
    history = []
    resid = np.inf
    alice = None
    for it in range(1, max_iters + 1):
        M = build_M(tensor, bob)
        lam, vec = hermitian_top_eig(M)
        alice = FrameSignal(tensor.n, vec / np.linalg.norm(vec))
        history.append(lam)
        new_bob = bob_from_alice(alice, degenerate="uniform")
        resid = float(np.linalg.norm(new_bob.vector - bob.vector))
        if resid < tol:
            eig_res = float(np.linalg.norm(M @ alice.vector - lam * alice.vector))
            return alice, bob, history, it, True, resid, eig_res
        bob = new_bob
    M = build_M(tensor, bob)
    lam, vec = hermitian_top_eig(M)
    alice = FrameSignal(tensor.n, vec / np.linalg.norm(vec))
    eig_res = float(np.linalg.norm(M @ alice.vector - lam * alice.vector))
    return alice, bob, history, max_iters, False, resid, eig_res


def alternating_optimize(
    n: int,
    kind=MeritKind.XYZ,
    init: FiducialVector | None = None,
    tol: float = 1e-10,
    max_iters: int = 1000,
    restarts: int = 5,
    seed: int = 0,
    workers: int = 1,
    raise_on_failure: bool = False,
) -> FrameSolution:
    """Alternate "top eigenvector of M(b)" and "b from a" until b stops moving.

    Starts from ``init`` (default: uniform real blocks) plus ``restarts``
    random complex fiducial vectors, and keeps the best run; ties go to the
    lowest restart index.  The iteration is not proven monotone: the merit
    history is kept and ``monotone`` records whether it ever decreased.
    """
    kind = MeritKind.parse(kind)
    tensor = build_merit_tensor(kind, n)
    starts = [init if init is not None else FiducialVector.uniform(n)]
    for child in np.random.SeedSequence(seed).spawn(restarts):
        starts.append(FiducialVector.random(n, np.random.default_rng(child)))

    def run(bob):
        return _iterate(tensor, bob, tol, max_iters)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run, starts))
    else:
        runs = [run(b) for b in starts]

    vals = [merit_expectation(tensor, r[0], r[1]) for r in runs]
    best_i = 0
    for i in range(1, len(runs)):
        conv_i, conv_b = runs[i][4], runs[best_i][4]
        if (conv_i and not conv_b) or (conv_i == conv_b and vals[i] > vals[best_i] + 1e-12):
            best_i = i
    alice, bob, history, iters, converged, resid, eig_res = runs[best_i]
    alice = FrameSignal(n, canonical_phase(alice.vector))
    monotone = bool(np.all(np.diff(history) >= -1e-12))
    if not monotone:
        log.warning("merit decreased during iteration (n=%d, kind=%s)", n, kind.value)
    sol = _solution(
        kind,
        tensor,
        alice,
        bob,
        iterations=iters,
        converged=converged,
        history=history,
        monotone=monotone,
        restarts_used=len(starts) - 1,
        fixed_point_residual=resid,
        eigen_residual=eig_res,
    )
    if not converged and raise_on_failure:
        raise NonConvergence(f"no fixed point after {max_iters} iterations", result=sol)
    return sol


def weighted_merit_reduction(directions, weights):
    """Principal weights (descending) and axes of ``C = sum w e e^T``.

    Returns ``(principal_weights, axes)``; column ``i`` of ``axes`` is the
    direction carrying ``principal_weights[i]`` and ``det(axes) = +1``.
    """
    e = np.atleast_2d(np.asarray(directions, dtype=float))
    w = np.atleast_1d(np.asarray(weights, dtype=float))
    if e.shape[1] != 3 or e.shape[0] < 1:
        raise ValueError("directions must be a non-empty (k, 3) array")
    if w.shape != (e.shape[0],) or np.any(w <= 0):
        raise ValueError("one positive weight per direction is required")
    e = e / np.linalg.norm(e, axis=1, keepdims=True)
    C = np.einsum("k,km,kn->mn", w, e, e)
    vals, vecs = np.linalg.eigh(C)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    if np.linalg.det(vecs) < 0:
        vecs[:, -1] *= -1
    return vals, vecs


def weighted_kind(principal_weights, rtol: float = 1e-9) -> tuple[Weighted, int]:
    """Reduce principal weights to ``Weighted(w_z, w_xy)``.

    Returns the kind and the index of the principal axis playing the role of z.
    Raises :class:`UnsupportedWeights` when no two weights coincide.
    """
    p = np.asarray(principal_weights, dtype=float)
    scale = max(1.0, float(np.abs(p).max()))
    for z in (2, 0, 1):
        x, y = [i for i in range(3) if i != z]
        if abs(p[x] - p[y]) <= rtol * scale:
            return Weighted(float(p[z]), float(0.5 * (p[x] + p[y]))), z
    raise UnsupportedWeights(
        f"principal weights {p.tolist()} have no equal pair; only w_x = w_y is supported"
    )


@dataclass(frozen=True)
class SplitComparison:
    N: int
    split_per_axis_mse: float
    collective_per_axis_mse: float
    bbm_reference: float


def split_strategy_compare(N: int, **optimize_kwargs) -> SplitComparison:
    """Half the spins per axis versus one collective covariant measurement."""
    if N < 4 or N % 4:
        raise InvalidIndex(f"N must be >= 4 with N/2 even, got {N}")
    split = solve_optimal(N // 2, 0).one_minus_F
    sol = alternating_optimize(N // 2 + 1, MeritKind.XYZ, **optimize_kwargs)
    return SplitComparison(N, split, sol.mse_total / 3, 4 / (3 * N))


def _unpack_raw(n: int, x: np.ndarray):
    d = n * n
    a = x[:d] + 1j * x[d : 2 * d]
    b = x[2 * d : 3 * d] + 1j * x[3 * d :]
    a = a / np.linalg.norm(a)
    b = b.copy()
    for j in range(n):
        blk = b[j * j : (j + 1) ** 2]
        blk /= np.linalg.norm(blk)
    return FrameSignal(n, a), FiducialVector(n, b)


def direct_search(n: int, kind=MeritKind.XYZ, starts: int = 4, seed: int = 0, tol: float = 1e-12):
    """Maximise the merit over raw (a, b) with Powell's method.

    Only the normalisation constraints are imposed, by rescaling inside the
    objective.  Independent of the eigenvector iteration; meant for small n.
    Returns ``(merit, alice, bob)`` of the best start.
    """
    from .numerics import derivative_free_maximize

    tensor = build_merit_tensor(kind, n)
    rng = np.random.default_rng(seed)

    def objective(x):
        return merit_expectation(tensor, *_unpack_raw(n, x))

    best = None
    for _ in range(starts):
        x, value = derivative_free_maximize(objective, rng.normal(size=4 * n * n), tol=tol)
        if best is None or value > best[0]:
            best = (value, x)
    alice, bob = _unpack_raw(n, best[1])
    return best[0], alice, bob
