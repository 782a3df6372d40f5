"""Seeded synthetic inputs used by the experiment scripts and the tests."""
from __future__ import annotations

import numpy as np

from .metric import DistanceMatrix, PointCloud, distances_from_points

LINE3 = [[0.0, 1.0, 3.0], [1.0, 0.0, 2.0], [3.0, 2.0, 0.0]]
EQUILATERAL = [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]
FOUR_POINT_LINE = [0.0, 0.05, 0.1, 0.3]


def line(xs) -> DistanceMatrix:
    return distances_from_points(PointCloud(np.asarray(xs, dtype=float).reshape(-1, 1)))


def uniform_cloud(seed: int, n: int, dim: int = 2) -> DistanceMatrix:
    rng = np.random.default_rng(seed)
    return distances_from_points(PointCloud(rng.uniform(size=(n, dim))))


def diamond_motif(origin=(0.0, 0.0), satellites: int = 2, spread: float = 0.05) -> np.ndarray:
    """Unit square whose two opposite corners carry tight satellite clusters.

    With a density gap weight above 1 the dense corners sit below the sparse
    ones, and between side length 1 and the diagonal the four classes form
    the poset ``a, b < c, d``: a circle.
    """
    o = np.asarray(origin, dtype=float)
    pts = [o, o + (1.0, 1.0), o + (1.0, 0.0), o + (0.0, 1.0)]
    # satellites point away from the square so they stay far from the sparse corners
    angles = np.linspace(np.pi / 6, np.pi / 3, satellites)
    out = np.column_stack([np.cos(angles), np.sin(angles)]) * spread
    pts += [pts[0] - v for v in out] + [pts[1] + v for v in out]
    return np.array(pts)


def planted_cloud(seed: int, n: int, motifs: int = 2) -> DistanceMatrix:
    """Diamond motifs spaced far apart plus uniform filler points, jittered."""
    rng = np.random.default_rng(seed)
    parts = [diamond_motif((5.0 * i, 0.0)) for i in range(motifs)]
    pts = np.vstack(parts)[:n]
    rest = n - len(pts)
    if rest > 0:
        filler = rng.uniform((0.0, 3.0), (5.0 * motifs, 6.0), size=(rest, 2))
        pts = np.vstack([pts, filler])
    pts = pts + rng.normal(scale=0.01, size=pts.shape)
    return distances_from_points(PointCloud(pts))


def random_metric(seed: int, n: int) -> DistanceMatrix:
    """Alternates between uniform clouds and planted-motif clouds by seed parity."""
    return planted_cloud(seed, n) if seed % 2 else uniform_cloud(seed, n)
