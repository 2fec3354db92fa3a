"""Equilibria, welfare ratios, dynamics and sample complexity for hiring
markets where every firm ranks applicants with the same algorithm."""

from ._core import *  # noqa: F401,F403
from ._core import (
    ArgumentError,
    ConvergenceError,
    DecisionScheme,
    Instance,
    NumericalError,
    ScoreDistribution,
)

__all__ = [
    "ArgumentError",
    "ConvergenceError",
    "DecisionScheme",
    "Instance",
    "NumericalError",
    "ScoreDistribution",
]
