"""Deterministic dataset generators.

``gen_peaks`` samples the classic three-peak benchmark surface on a square
grid; ``gen_gaussian_pair`` builds a two-cluster fixture whose connectivity is
controlled by the fraction of points placed on a bridge between the centers.

Random draws use NumPy's ``default_rng`` (PCG64 bit generator) seeded with the
caller's integer seed, so a given ``(parameters, seed)`` tuple always yields the
same array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParameter

PEAKS_EXTENT = 3.0
BRIDGE_BAND = 0.1


@dataclass(frozen=True, eq=False)
class Dataset:
    """L input vectors of dimension t, stored as a read-only ``(L, t)`` array."""

    points: np.ndarray
    dim_names: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidParameter(f"dataset must be a non-empty 2D array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InvalidParameter("dataset contains NaN or infinite entries")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.dim_names is not None:
            names = tuple(str(n) for n in self.dim_names)
            if len(names) != pts.shape[1]:
                raise InvalidParameter(f"{len(names)} dimension names for {pts.shape[1]} columns")
            object.__setattr__(self, "dim_names", names)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n_points

    def column_names(self) -> list[str]:
        if self.dim_names is not None:
            return list(self.dim_names)
        return [f"x{s}" for s in range(self.dim)]


def peaks_z(x, y):
    """Height of the peaks surface at ``(x, y)``; works elementwise on arrays."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return (
        3.0 * (1.0 - x) ** 2 * np.exp(-(x**2) - (y + 1.0) ** 2)
        - 10.0 * (x / 5.0 - x**3 - y**5) * np.exp(-(x**2) - y**2)
        - np.exp(-((x + 1.0) ** 2) - y**2) / 3.0
    )


def gen_peaks(grid_n: int) -> Dataset:
    """Sample the peaks surface on a ``grid_n`` x ``grid_n`` grid over [-3, 3]^2.

    Rows are ordered with x varying fastest (``meshgrid`` order), so row
    ``i * grid_n + j`` holds ``(g[j], g[i], z)``.
    """
    if int(grid_n) != grid_n or grid_n < 2:
        raise InvalidParameter(f"grid_n must be an integer >= 2, got {grid_n!r}")
    g = np.linspace(-PEAKS_EXTENT, PEAKS_EXTENT, int(grid_n))
    xx, yy = np.meshgrid(g, g)
    zz = peaks_z(xx, yy)
    pts = np.column_stack([xx.ravel(), yy.ravel(), zz.ravel()])
    return Dataset(pts, dim_names=("x", "y", "z"))


def gen_gaussian_pair(
    n_per_cluster: int,
    separation: float,
    bridge_fraction: float,
    seed: int,
) -> Dataset:
    """Two unit-variance 3D Gaussian clusters joined by an optional bridge.

    The clusters sit at the origin and at ``(separation, 0, 0)``. A fraction
    ``bridge_fraction`` of the ``2 * n_per_cluster`` points is taken away from
    the clusters (evenly, the first cluster keeps the odd one) and placed
    uniformly along the segment between the centers, with y and z drawn
    uniformly from ``[-0.1, 0.1]``.

    Rows are ordered: first cluster, second cluster, bridge.
    """
    if int(n_per_cluster) != n_per_cluster or n_per_cluster < 1:
        raise InvalidParameter(f"n_per_cluster must be a positive integer, got {n_per_cluster!r}")
    if not separation > 0 or not np.isfinite(separation):
        raise InvalidParameter(f"separation must be positive, got {separation!r}")
    if not 0.0 <= bridge_fraction <= 1.0:
        raise InvalidParameter(f"bridge_fraction must lie in [0, 1], got {bridge_fraction!r}")

    total = 2 * int(n_per_cluster)
    n_bridge = int(round(bridge_fraction * total))
    n_left = total - n_bridge
    n_a = (n_left + 1) // 2
    n_b = n_left - n_a

    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n_a, 3))
    b = rng.standard_normal((n_b, 3))
    b[:, 0] += separation
    bridge = np.column_stack([
        rng.uniform(0.0, separation, n_bridge),
        rng.uniform(-BRIDGE_BAND, BRIDGE_BAND, n_bridge),
        rng.uniform(-BRIDGE_BAND, BRIDGE_BAND, n_bridge),
    ])
    return Dataset(np.vstack([a, b, bridge]), dim_names=("x", "y", "z"))


def count_interior_extrema(z: np.ndarray) -> tuple[int, int]:
    """Count strict local maxima and minima of a 2D grid over interior nodes (8-neighborhood)."""
    z = np.asarray(z, dtype=np.float64)
    rows, cols = z.shape
    if rows < 3 or cols < 3:
        return 0, 0
    center = z[1:-1, 1:-1]
    shifts: Sequence[np.ndarray] = [
        z[1 + di : rows - 1 + di, 1 + dj : cols - 1 + dj]
        for di in (-1, 0, 1)
        for dj in (-1, 0, 1)
        if (di, dj) != (0, 0)
    ]
    neigh = np.stack(shifts)
    n_max = int(np.sum(center > neigh.max(axis=0)))
    n_min = int(np.sum(center < neigh.min(axis=0)))
    return n_max, n_min
