"""scikit-learn style wrappers around the two protocols.

``fit`` solves for the optimal signal (there is no training data; ``X`` is
accepted and ignored so the objects drop into sklearn tooling), ``sample``
simulates measurement outcomes, ``transform`` maps outcomes to per-shot
figures of merit and ``score`` averages them.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import direction, frame, simulate
from .spinmath import HalfInt


class DirectionProtocol(TransformerMixin, BaseEstimator):
    """Optimal N-spin direction transmission.

    Parameters
    ----------
    N : int, default=2
        Number of spin-1/2 particles.
    m : str, float or None, default=None
        Common magnetic number of the signal; ``None`` picks 0 or 1/2.
    tol : float, default=1e-13
        Eigen-residual tolerance.

    Attributes
    ----------
    signal_ : DirectionSignal
    coef_ : ndarray
        Optimal ``c_j`` for ``j = m .. N/2``.
    x_mean_ : float
    fidelity_ : float
    """

    def __init__(self, N=2, m=None, tol=1e-13):
        self.N = N
        self.m = m
        self.tol = tol

    def fit(self, X=None, y=None):
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        m = None if self.m is None else HalfInt.of(self.m)
        sol = direction.solve_optimal(int(self.N), m, tol=self.tol)
        self.signal_ = sol.signal
        self.coef_ = sol.signal.coeffs
        self.x_mean_ = sol.x_mean
        self.fidelity_ = sol.fidelity
        return self

    def sample(self, shots, seed=0, workers=1):
        check_is_fitted(self, "signal_")
        return simulate.sample_direction_outcomes(self.signal_, simulate.SimConfig(shots, seed, workers))

    def transform(self, X):
        """Per-shot fidelity ``(1 + x) / 2`` for outcome cosines ``x``."""
        check_is_fitted(self, "signal_")
        x = check_array(np.asarray(X, dtype=float).reshape(-1, 1))
        if np.any(np.abs(x) > 1):
            raise ValueError("outcome cosines must lie in [-1, 1]")
        return (1 + x) / 2

    def score(self, X, y=None):
        return float(np.mean(self.transform(X)))


class FrameProtocol(TransformerMixin, BaseEstimator):
    """Covariant Cartesian-frame transmission with one Rydberg level.

    Parameters
    ----------
    n : int, default=2
        Principal quantum number, ``j = 0 .. n-1``.
    merit : {"z", "xy", "xyz"}, default="xyz"
    tol, max_iters, restarts, seed
        Passed to :func:`spinframe.frame.alternating_optimize`.
    """

    def __init__(self, n=2, merit="xyz", tol=1e-10, max_iters=1000, restarts=5, seed=0):
        self.n = n
        self.merit = merit
        self.tol = tol
        self.max_iters = max_iters
        self.restarts = restarts
        self.seed = seed

    def fit(self, X=None, y=None):
        kind = frame.MeritKind.parse(self.merit)
        sol = frame.alternating_optimize(
            self.n, kind, tol=self.tol, max_iters=self.max_iters, restarts=self.restarts, seed=self.seed
        )
        self.kind_ = kind
        self.solution_ = sol
        self.alice_ = sol.alice
        self.bob_ = sol.bob
        self.merit_ = sol.merit
        self.per_axis_ = sol.per_axis
        self.mse_total_ = sol.mse_total
        return self

    def sample(self, shots, seed=0, workers=1):
        """Simulated error angles, shape ``(shots, 3)``."""
        check_is_fitted(self, "solution_")
        return simulate.sample_frame_outcomes(self.alice_, self.bob_, simulate.SimConfig(shots, seed, workers))

    def transform(self, X):
        """Per-sample merit for error angles ``(alpha, beta, gamma)``."""
        check_is_fitted(self, "solution_")
        X = check_array(X)
        if X.shape[1] != 3:
            raise ValueError(f"expected 3 columns (alpha, beta, gamma), got {X.shape[1]}")
        return simulate.frame_merit_values(X, self.kind_).reshape(-1, 1)

    def score(self, X, y=None):
        return float(np.mean(self.transform(X)))
