"""
Reference spirals: logarithmic, golden, hyperbolic-logarithmic (HLS) and
the spiral of Theodorus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GOLDEN_RATIO",
    "LogSpiralParams",
    "HlsParams",
    "log_spiral_radius",
    "golden_spiral_params",
    "golden_growth",
    "hls_radius",
    "theodorus_points",
    "theodorus_angles",
]

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class LogSpiralParams:
    """``r = scale * exp(growth * (theta - phase))``."""

    scale: float
    growth: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class HlsParams:
    """``ln(r - r0) = A_l + B_l * theta``; ``r0 = 0`` is a plain log spiral."""

    r0: float
    a_l: float
    b_l: float


def log_spiral_radius(params: LogSpiralParams, theta):
    theta = np.asarray(theta, dtype=float)
    out = params.scale * np.exp(params.growth * (theta - params.phase))
    return out if out.ndim else float(out)


def golden_growth() -> float:
    """Growth per radian of a spiral that widens by the golden ratio every quarter turn."""
    return math.log(GOLDEN_RATIO) / (math.pi / 2)


def golden_spiral_params(scale=1.0, phase=0.0) -> LogSpiralParams:
    return LogSpiralParams(float(scale), golden_growth(), float(phase))


def hls_radius(params: HlsParams, theta):
    theta = np.asarray(theta, dtype=float)
    out = params.r0 + np.exp(params.a_l + params.b_l * theta)
    return out if out.ndim else float(out)


def theodorus_angles(count: int) -> np.ndarray:
    """Cumulative polar angle of the first ``count`` Theodorus vertices.

    Vertex ``n`` sits at radius ``sqrt(n + 1)``; stepping to the next vertex
    adds ``arctan(1 / sqrt(n + 1))``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    steps = np.arctan(1.0 / np.sqrt(np.arange(1, count)))
    return np.concatenate([[0.0], np.cumsum(steps)])


def theodorus_points(count: int) -> list[tuple[float, float]]:
    """Cartesian vertices of the spiral of Theodorus, starting at (1, 0).

    Each triangle has legs ``sqrt(n + 1)`` and 1 and hypotenuse
    ``sqrt(n + 2)``; unlike the triangular spirals the triangles are not
    similar.
    """
    ang = theodorus_angles(count)
    r = np.sqrt(np.arange(1, count + 1))
    return [(float(x), float(y)) for x, y in zip(r * np.cos(ang), r * np.sin(ang))]
