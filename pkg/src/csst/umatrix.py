"""Unified-distance matrix of a rectangular codebook."""

from __future__ import annotations

import numpy as np

from .errors import GridTooSmall
from .som import Codebook


def compute_umatrix(codebook: Codebook) -> np.ndarray:
    """Return the ``(2*rows-1, 2*cols-1)`` U-matrix.

    Cell layout, for neuron ``(a, b)``:

    - ``(2a, 2b+1)``: distance to the right-hand neighbor
    - ``(2a+1, 2b)``: distance to the neighbor below
    - ``(2a+1, 2b+1)``: raw mean of the two diagonal distances of the 2x2 block
    - ``(2a, 2b)``: median of the adjacent between-neuron cells
    """
    rows, cols = codebook.topology.rows, codebook.topology.cols
    if rows < 2 or cols < 2:
        raise GridTooSmall(f"U-matrix needs at least a 2x2 grid, got {rows}x{cols}")
    c = codebook.grid()
    u = np.zeros((2 * rows - 1, 2 * cols - 1))

    u[0::2, 1::2] = np.linalg.norm(c[:, :-1] - c[:, 1:], axis=-1)
    u[1::2, 0::2] = np.linalg.norm(c[:-1, :] - c[1:, :], axis=-1)
    d1 = np.linalg.norm(c[:-1, :-1] - c[1:, 1:], axis=-1)
    d2 = np.linalg.norm(c[:-1, 1:] - c[1:, :-1], axis=-1)
    u[1::2, 1::2] = (d1 + d2) / 2.0

    for a in range(rows):
        for b in range(cols):
            i, j = 2 * a, 2 * b
            around = [
                u[i + di, j + dj]
                for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1))
                if 0 <= i + di < u.shape[0] and 0 <= j + dj < u.shape[1]
            ]
            u[i, j] = np.median(around)
    return u
