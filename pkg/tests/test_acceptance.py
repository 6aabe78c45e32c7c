"""Acceptance criteria, one test each, with their stated tolerances and time limits.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import functools
import math
import time

import numpy as np
import pytest

from spinframe.direction import (
    DirectionSignal,
    asymptote_gap,
    build_A,
    mean_cosine_quadrature,
    mp_baseline,
    povm_completeness_check,
    solve_optimal,
)
from spinframe.frame import (
    FiducialVector,
    FrameSignal,
    MeritKind,
    alternating_optimize,
    bob_from_alice,
    build_merit_tensor,
    direct_search,
    merit_expectation,
    quadrature_merit_oracle,
    split_strategy_compare,
)
from spinframe.simulate import (
    SimConfig,
    estimate_direction_fidelity,
    estimate_frame_merit,
    sample_direction_outcomes,
    sample_frame_outcomes,
)
from spinframe.spinmath import HalfInt, classical_rotation, rotation_angle

from .conftest import ACCEPTANCE_LINES

BESSEL_SQ = 5.78319
SINGLE_AXIS_CONST = 1.446


def criterion(number, title, limit_s):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
                elapsed = time.perf_counter() - start
                assert elapsed < limit_s, f"runtime {elapsed:.2f}s exceeds {limit_s}s"
            except AssertionError as exc:
                elapsed = time.perf_counter() - start
                msg = str(exc).splitlines()[0] if str(exc) else "assertion failed"
                ACCEPTANCE_LINES.append(f"[{number:2d}] FAIL  {title}  ({elapsed:.2f}s)  {msg}")
                raise
            ACCEPTANCE_LINES.append(f"[{number:2d}] PASS  {title}  ({elapsed:.2f}s)  {detail or ''}".rstrip())

        return run

    return wrap


@criterion(1, "parallel-spin baseline, N=1..12", 1.0)
def test_01_parallel_baseline():
    worst = max(abs(solve_optimal(N, HalfInt(N)).one_minus_F - 1 / (N + 2)) for N in range(1, 13))
    assert worst < 1e-12, f"max deviation {worst:.3e}"
    return f"max deviation {worst:.1e}"


@criterion(2, "opposite spins beat parallel at N=2", 1.0)
def test_02_opposite_spins():
    F = solve_optimal(2, 0).fidelity
    assert abs(F - (1 + 1 / math.sqrt(3)) / 2) < 1e-12, f"F = {F!r}"
    assert F > 0.75
    return f"F = {F:.15f}"


@criterion(3, "Bessel-zero asymptote at N=60, 120", 5.0)
def test_03_bessel_asymptote():
    v60 = solve_optimal(60, 0).one_minus_F * 63**2
    v120 = solve_optimal(120, 0).one_minus_F * 123**2
    assert abs(v60 / BESSEL_SQ - 1) < 0.05, f"N=60 gives {v60:.5f}"
    assert abs(v120 / BESSEL_SQ - 1) < 0.02, f"N=120 gives {v120:.5f}"
    assert abs(v120 - BESSEL_SQ) < abs(v60 - BESSEL_SQ)
    # the helper reports the same ratio
    assert abs(asymptote_gap(120)[0] * 123**2 - v120) < 1e-12
    return f"(1-F)(N+3)^2 = {v60:.5f}, {v120:.5f}"


@criterion(4, "POVM completeness at N=6, m=0", 10.0)
def test_04_povm_completeness():
    dev = povm_completeness_check(6, 0, quad_order=40, phi_points=64)
    assert dev < 1e-10, f"deviation {dev:.3e}"
    return f"deviation {dev:.1e}"


@criterion(5, "analytic integration equals quadrature at N=10", 5.0)
def test_05_analytic_integration():
    rng = np.random.default_rng(5)
    A = build_A(10, 0)
    worst = 0.0
    for _ in range(10):
        sig = DirectionSignal.normalized(10, 0, rng.normal(size=6))
        worst = max(worst, abs(mean_cosine_quadrature(sig, order=40) - A.quadratic_form(sig.coeffs)))
    assert worst < 1e-10, f"max deviation {worst:.3e}"
    return f"max deviation {worst:.1e}"


@criterion(6, "frame tensors equal SO(3) quadrature at n=3", 60.0)
def test_06_tensor_oracle():
    rng = np.random.default_rng(6)
    worst = 0.0
    for kind in (MeritKind.Z, MeritKind.XY, MeritKind.XYZ):
        tensor = build_merit_tensor(kind, 3)
        for _ in range(20):
            a, b = FrameSignal.random(3, rng), FiducialVector.random(3, rng)
            oracle = quadrature_merit_oracle(a, b, kind, beta_order=40, angle_points=64)
            worst = max(worst, abs(merit_expectation(tensor, a, b) - oracle))
    assert worst < 1e-8, f"max deviation {worst:.3e}"
    return f"max deviation {worst:.1e}"


@criterion(7, "z-axis frame optimum equals direction optimum, n=2..8", 10.0)
def test_07_direction_frame_equivalence():
    worst = 0.0
    for n in range(2, 9):
        frame_val = alternating_optimize(n, MeritKind.Z).merit
        worst = max(worst, abs(frame_val - solve_optimal(2 * (n - 1), 0).x_mean))
    assert worst < 1e-10, f"max deviation {worst:.3e}"
    return f"max deviation {worst:.1e}"


@criterion(8, "alternating iteration reaches a fixed point; Powell agrees", 30.0)
def test_08_fixed_point():
    worst_fp = worst_eig = 0.0
    for kind in (MeritKind.Z, MeritKind.XY, MeritKind.XYZ):
        for n in (2, 3, 4):
            sol = alternating_optimize(n, kind)
            if not sol.converged:
                continue
            worst_fp = max(worst_fp, float(np.linalg.norm(bob_from_alice(sol.alice).vector - sol.bob.vector)))
            worst_eig = max(worst_eig, sol.eigen_residual)
    assert worst_fp < 1e-8, f"fixed-point residual {worst_fp:.3e}"
    assert worst_eig < 1e-8, f"eigen residual {worst_eig:.3e}"
    alt = alternating_optimize(2, MeritKind.XYZ).merit
    powell, _, _ = direct_search(2, MeritKind.XYZ, starts=3)
    assert abs(alt - powell) < 1e-6, f"alternating {alt!r} vs Powell {powell!r}"
    return f"residuals {worst_fp:.1e}/{worst_eig:.1e}, Powell gap {abs(alt - powell):.1e}"


@criterion(9, "single-axis constant (1-F_z) n^2 in [1.37, 1.52] at n=10", 60.0)
def test_09_single_axis_asymptote():
    def scaled(n):
        merit = alternating_optimize(n, MeritKind.Z).merit
        return (1 - (1 + merit) / 2) * n * n

    v8, v10, v12 = scaled(8), scaled(10), scaled(12)
    assert abs(v12 - SINGLE_AXIS_CONST) < abs(v8 - SINGLE_AXIS_CONST), f"n=8 {v8:.4f}, n=12 {v12:.4f}"
    assert 1.37 <= v10 <= 1.52, f"n=10 gives {v10:.4f} (n=8 {v8:.4f}, n=12 {v12:.4f})"
    return f"n=8,10,12: {v8:.4f}, {v10:.4f}, {v12:.4f}"


@criterion(10, "all-axes error decreases; mse*n stable within 30%", 300.0)
def test_10_all_axes_trend():
    mse = {n: alternating_optimize(n, MeritKind.XYZ).mse_total for n in range(2, 9)}
    vals = [mse[n] for n in range(2, 9)]
    assert all(a > b for a, b in zip(vals, vals[1:])), f"not strictly decreasing: {vals}"
    s6, s8 = mse[6] * 6, mse[8] * 8
    spread = abs(s6 - s8) / max(s6, s8)
    assert spread < 0.30, f"mse*n varies by {spread:.1%}"
    return f"mse*n at n=6,8: {s6:.4f}, {s8:.4f} ({spread:.1%})"


@criterion(11, "split strategy beats collective measurement at N=20", 300.0)
def test_11_split_vs_collective():
    res = split_strategy_compare(20)
    assert res.split_per_axis_mse == solve_optimal(10, 0).one_minus_F
    assert res.split_per_axis_mse < res.collective_per_axis_mse, (
        f"split {res.split_per_axis_mse:.6f} vs collective {res.collective_per_axis_mse:.6f}"
    )
    return (
        f"split {res.split_per_axis_mse:.6f} < collective {res.collective_per_axis_mse:.6f}"
        f" (reference {res.bbm_reference:.6f})"
    )


@criterion(12, "Monte Carlo agrees with analytic values; reruns identical", 120.0)
def test_12_monte_carlo():
    d = solve_optimal(4, 0)
    cfg = SimConfig(200_000, seed=7)
    x1 = sample_direction_outcomes(d.signal, cfg)
    x2 = sample_direction_outcomes(d.signal, cfg)
    rd = estimate_direction_fidelity(x1, d.fidelity)
    assert np.array_equal(x1, x2)
    assert rd.sigma_distance < 4, f"direction sigma {rd.sigma_distance:.2f}"

    f = alternating_optimize(2, MeritKind.Z)
    fcfg = SimConfig(50_000, seed=1)
    s1 = sample_frame_outcomes(f.alice, f.bob, fcfg)
    s2 = sample_frame_outcomes(f.alice, f.bob, fcfg)
    rf = estimate_frame_merit(s1, MeritKind.Z, f.merit)
    assert np.array_equal(s1, s2)
    assert rf.sigma_distance < 4, f"frame sigma {rf.sigma_distance:.2f}"
    return f"sigma {rd.sigma_distance:.2f} (direction), {rf.sigma_distance:.2f} (frame)"


@criterion(13, "Euler-theorem identities on 1000 rotations", 1.0)
def test_13_euler_identities():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(1000):
        a, g = rng.uniform(0, 2 * np.pi, 2)
        b = math.acos(rng.uniform(-1, 1))
        R = classical_rotation((a, b, g))
        omega = rotation_angle(R)
        worst = max(
            worst,
            abs(np.trace(R) - (1 + 2 * math.cos(omega))),
            abs(R[2, 2] - math.cos(b)),
            abs(R[0, 0] + R[1, 1] - (1 + math.cos(b)) * math.cos(a + g)),
        )
    assert worst < 1e-12, f"max deviation {worst:.3e}"
    return f"max deviation {worst:.1e}"
