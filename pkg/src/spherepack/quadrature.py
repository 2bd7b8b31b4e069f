"""Gauss-Legendre panel quadrature on complex line segments."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class QuadratureConfig:
    """Node counts and ray handling for the contour integrals."""

    gauss_order: int = 32
    panels_per_segment: int = 8
    ray_truncation: float = 12.0
    tail_tol: float = 1e-12

    def __post_init__(self):
        if self.gauss_order < 2:
            raise ValueError("gauss_order must be at least 2")
        if self.panels_per_segment < 1:
            raise ValueError("panels_per_segment must be at least 1")
        if self.ray_truncation < 2.0:
            raise ValueError("ray_truncation must be at least 2")
        if not 0 < self.tail_tol < 1:
            raise ValueError("tail_tol must be in (0, 1)")


@lru_cache(maxsize=32)
def gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1] (cached; numpy's Golub-Welsch)."""
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(a: complex, b: complex, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and complex weights for integrating along the straight segment a->b."""
    x, w = gauss_nodes(order)
    nodes = []
    weights = []
    for p in range(panels):
        lo = a + (b - a) * (p / panels)
        hi = a + (b - a) * ((p + 1) / panels)
        mid = (lo + hi) / 2.0
        half = (hi - lo) / 2.0
        nodes.append(mid + half * x)
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)
