"""Optimal quantum transmission of a direction and of a Cartesian frame."""

from .direction import DirectionSignal, DirectionSolution, build_A, solve_optimal
from .estimators import DirectionProtocol, FrameProtocol
from .exceptions import (
    DegenerateBlock,
    EmptySample,
    EnvelopeViolation,
    InvalidIndex,
    NonConvergence,
    UnsupportedWeights,
)
from .frame import FiducialVector, FrameSignal, FrameSolution, MeritKind, alternating_optimize
from .spinmath import EulerAngles, HalfInt

__all__ = [
    "DegenerateBlock",
    "DirectionProtocol",
    "DirectionSignal",
    "DirectionSolution",
    "EmptySample",
    "EnvelopeViolation",
    "EulerAngles",
    "FiducialVector",
    "FrameProtocol",
    "FrameSignal",
    "FrameSolution",
    "HalfInt",
    "InvalidIndex",
    "MeritKind",
    "NonConvergence",
    "UnsupportedWeights",
    "alternating_optimize",
    "build_A",
    "solve_optimal",
]
