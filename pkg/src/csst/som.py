"""Batch-trained Kohonen map on a rectangular sheet.

Neurons are indexed ``0 .. rows*cols - 1`` in row-major order. Training uses
the batch rule: every epoch each prototype becomes the neighborhood-weighted
mean of the inputs, with Gaussian weights on the grid distance between the
neuron and each input's best-matching unit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .datagen import Dataset
from .errors import DegenerateData, DimensionMismatch, InvalidParameter


@dataclass(frozen=True)
class GridTopology:
    rows: int
    cols: int

    def __post_init__(self):
        if int(self.rows) != self.rows or int(self.cols) != self.cols or self.rows < 1 or self.cols < 1:
            raise InvalidParameter(f"grid must be at least 1x1, got {self.rows}x{self.cols}")

    @property
    def n_neurons(self) -> int:
        return self.rows * self.cols

    @property
    def neuron_coords(self) -> np.ndarray:
        """``(n, 2)`` array of (row, col) positions in row-major order."""
        r, c = np.divmod(np.arange(self.n_neurons), self.cols)
        return np.column_stack([r, c]).astype(np.float64)

    def grid_dist2(self) -> np.ndarray:
        """Squared Euclidean grid distances between all neuron pairs."""
        return cdist(self.neuron_coords, self.neuron_coords, "sqeuclidean")


@dataclass(frozen=True, eq=False)
class Codebook:
    topology: GridTopology
    prototypes: np.ndarray

    def __post_init__(self):
        protos = np.array(self.prototypes, dtype=np.float64)
        if protos.ndim != 2 or protos.shape[0] != self.topology.n_neurons or protos.shape[1] < 1:
            raise InvalidParameter(
                f"prototypes of shape {protos.shape} do not fit a "
                f"{self.topology.rows}x{self.topology.cols} grid"
            )
        if not np.all(np.isfinite(protos)):
            raise InvalidParameter("codebook contains NaN or infinite entries")
        protos.setflags(write=False)
        object.__setattr__(self, "prototypes", protos)

    @property
    def n_neurons(self) -> int:
        return self.topology.n_neurons

    @property
    def dim(self) -> int:
        return self.prototypes.shape[1]

    def grid(self) -> np.ndarray:
        """Prototypes reshaped to ``(rows, cols, t)``."""
        return self.prototypes.reshape(self.topology.rows, self.topology.cols, self.dim)


@dataclass(frozen=True)
class TrainSchedule:
    """Neighborhood-width schedule for :func:`train_batch`.

    Without ``sigma_mid`` the width decays linearly from ``sigma_start`` to
    ``sigma_end`` over all ``rough_epochs + fine_epochs`` epochs. With it,
    the rough phase runs ``sigma_start -> sigma_mid`` and the fine phase
    ``sigma_mid -> sigma_end``, each linearly.
    """

    rough_epochs: int
    fine_epochs: int
    sigma_start: float
    sigma_end: float
    sigma_mid: float | None = None

    def __post_init__(self):
        if self.rough_epochs < 1 or self.fine_epochs < 1:
            raise InvalidParameter("rough_epochs and fine_epochs must be positive")
        mid = self.sigma_end if self.sigma_mid is None else self.sigma_mid
        if not (self.sigma_start >= mid >= self.sigma_end > 0):
            raise InvalidParameter(
                f"need sigma_start >= sigma_mid >= sigma_end > 0, got "
                f"{self.sigma_start}, {self.sigma_mid}, {self.sigma_end}"
            )

    @property
    def n_epochs(self) -> int:
        return self.rough_epochs + self.fine_epochs

    def sigmas(self) -> np.ndarray:
        if self.sigma_mid is None:
            return _ramp(self.sigma_start, self.sigma_end, self.n_epochs)
        return np.concatenate([
            _ramp(self.sigma_start, self.sigma_mid, self.rough_epochs),
            _ramp(self.sigma_mid, self.sigma_end, self.fine_epochs),
        ])


def _ramp(start: float, end: float, n: int) -> np.ndarray:
    if n == 1:
        return np.array([float(start)])
    return np.linspace(float(start), float(end), n)


def default_schedule(rows: int, cols: int) -> TrainSchedule:
    """Two-phase default: 20 rough epochs from max(rows, cols)/4 to 1.5, 30 fine epochs to 0.5."""
    return TrainSchedule(
        rough_epochs=20,
        fine_epochs=30,
        sigma_start=max(max(rows, cols) / 4.0, 1.5),
        sigma_mid=1.5,
        sigma_end=0.5,
    )


@dataclass(frozen=True, eq=False)
class Assignment:
    bmu_of: np.ndarray
    hits_of: np.ndarray

    @property
    def n_points(self) -> int:
        return len(self.bmu_of)

    def members(self, j: int) -> np.ndarray:
        """Input indices whose BMU is neuron ``j``."""
        return np.flatnonzero(self.bmu_of == j)


def _check_dim(codebook: Codebook, dim: int):
    if codebook.dim != dim:
        raise DimensionMismatch(f"codebook has dimension {codebook.dim}, data has {dim}")


def init_codebook_linear(dataset: Dataset, rows: int, cols: int) -> Codebook:
    """Lay prototypes out on the plane of the two leading principal components.

    The grid spans the data mean +/- two standard deviations along each
    component. The longer grid side follows the first component (rows on a
    tie). Eigenvector signs are fixed so the largest-magnitude entry is
    positive, which makes the layout deterministic.
    """
    topo = GridTopology(rows, cols)
    if dataset.n_points < 2 or topo.n_neurons < 4:
        raise InvalidParameter("linear initialization needs L >= 2 and rows*cols >= 4")
    x = dataset.points
    mean = x.mean(axis=0)
    cov = np.atleast_2d(np.cov(x, rowvar=False))
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals, kind="stable")[::-1]
    evals = np.clip(evals[order], 0.0, None)
    evecs = evecs[:, order]
    if evals[0] <= np.finfo(float).eps * max(1.0, float(np.abs(x).max()) ** 2):
        raise DegenerateData("data covariance has rank 0")

    for k in range(evecs.shape[1]):
        if evecs[np.argmax(np.abs(evecs[:, k])), k] < 0:
            evecs[:, k] = -evecs[:, k]
    axis1 = 2.0 * np.sqrt(evals[0]) * evecs[:, 0]
    axis2 = 2.0 * np.sqrt(evals[1]) * evecs[:, 1] if len(evals) > 1 else np.zeros_like(axis1)

    def span(n: int) -> np.ndarray:
        return np.linspace(-1.0, 1.0, n) if n > 1 else np.zeros(1)

    if rows >= cols:
        row_axis, col_axis = axis1, axis2
    else:
        row_axis, col_axis = axis2, axis1
    a, b = np.meshgrid(span(rows), span(cols), indexing="ij")
    protos = mean + a.reshape(-1, 1) * row_axis + b.reshape(-1, 1) * col_axis
    return Codebook(topo, protos)


def _bmu_indices(prototypes: np.ndarray, x: np.ndarray, chunk: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """BMU index and squared distance for each row of ``x``; ties go to the lowest index."""
    idx = np.empty(len(x), dtype=np.int64)
    d2 = np.empty(len(x), dtype=np.float64)
    for start in range(0, len(x), chunk):
        block = cdist(x[start : start + chunk], prototypes, "sqeuclidean")
        best = np.argmin(block, axis=1)
        idx[start : start + chunk] = best
        d2[start : start + chunk] = block[np.arange(len(best)), best]
    return idx, d2


def bmu(codebook: Codebook, x) -> int:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch(f"expected a single vector, got shape {x.shape}")
    _check_dim(codebook, x.shape[0])
    return int(_bmu_indices(codebook.prototypes, x[None, :])[0][0])


def assign_all(codebook: Codebook, dataset: Dataset) -> Assignment:
    _check_dim(codebook, dataset.dim)
    idx, _ = _bmu_indices(codebook.prototypes, dataset.points)
    hits = np.bincount(idx, minlength=codebook.n_neurons)
    return Assignment(bmu_of=idx, hits_of=hits)


def quantization_error(codebook: Codebook, dataset: Dataset) -> float:
    """Mean Euclidean distance from each input to its BMU prototype."""
    _check_dim(codebook, dataset.dim)
    _, d2 = _bmu_indices(codebook.prototypes, dataset.points)
    return float(np.mean(np.sqrt(d2)))


def train_batch(codebook: Codebook, dataset: Dataset, schedule: TrainSchedule) -> Codebook:
    _check_dim(codebook, dataset.dim)
    x = dataset.points
    n = codebook.n_neurons
    grid_d2 = codebook.topology.grid_dist2()
    protos = codebook.prototypes.copy()

    for sigma in schedule.sigmas():
        idx, _ = _bmu_indices(protos, x)
        # per-BMU sums first; h(j, b) only depends on the BMU b
        sums = np.zeros_like(protos)
        np.add.at(sums, idx, x)
        counts = np.bincount(idx, minlength=n).astype(np.float64)
        h = np.exp(-grid_d2 / (2.0 * sigma * sigma))
        num = h @ sums
        den = h @ counts
        live = den > 0
        protos[live] = num[live] / den[live, None]

    return Codebook(codebook.topology, protos)
