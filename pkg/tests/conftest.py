"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest
from scipy.linalg import expm


def jy_matrix(j):
    """J_y for spin j, built directly from the ladder-operator matrix elements.

    Ordering m = j, ..., -j.  Kept separate from the package on purpose.
    """
    dim = int(round(2 * j)) + 1
    m = j - np.arange(dim)
    jp = np.zeros((dim, dim))
    for i in range(1, dim):
        # <m+1| J+ |m>, row i-1 holds m+1
        jp[i - 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    return (jp - jp.T) / 2j


def jz_matrix(j):
    dim = int(round(2 * j)) + 1
    return np.diag(j - np.arange(dim))


def jx_matrix(j):
    jy = jy_matrix(j)
    dim = jy.shape[0]
    m = j - np.arange(dim)
    jp = np.zeros((dim, dim))
    for i in range(1, dim):
        jp[i - 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    return (jp + jp.T) / 2


def small_d_expm(j, beta):
    """Oracle: d^j(beta) = exp(-i beta J_y), real part."""
    return expm(-1j * beta * jy_matrix(j)).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
