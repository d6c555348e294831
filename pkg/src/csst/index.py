"""Clustering SST index: connection strength between two Voronoi regions.

For a pair of prototypes the inputs of both regions are projected onto the
axis joining them. Only inputs pointing from their own prototype towards the
other one (positive cosine similarity) are kept. The axis is cut into ``k``
equal slices and the slice counts are compared with a flat distribution; the
deviations are weighted by Gini coefficients, SST style. A value near 0 means
the gap between the prototypes is evenly populated (connected regions); large
values mean an empty or lopsided gap.

Projection coordinates run from 0 at the first prototype to 1 at the second.
Points of the second region are binned from the far end with an integer
mirror of the bin index, so swapping the pair reverses the histogram exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .datagen import Dataset
from .errors import DegeneratePair, EmptySupport, InvalidParameter, LowSupport
from .som import Assignment, Codebook

DEFAULT_K = 10
DEFAULT_MIN_SUPPORT = 10


@dataclass(frozen=True, eq=False)
class RegionPair:
    j1: int
    j2: int
    w1: np.ndarray
    w2: np.ndarray
    axis_len: float

    @property
    def axis_len2(self) -> float:
        return float(self.w1 @ self.w1)


@dataclass(frozen=True, eq=False)
class GapHistogram:
    k: int
    counts: np.ndarray
    n_d: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if self.k < 2 or counts.shape != (self.k,):
            raise InvalidParameter(f"histogram needs k >= 2 counts, got k={self.k}, shape {counts.shape}")
        if np.any(counts < 0) or int(counts.sum()) != self.n_d:
            raise InvalidParameter("counts must be non-negative and sum to n_d")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "GapHistogram":
        counts = np.asarray(counts, dtype=np.int64)
        return cls(k=len(counts), counts=counts, n_d=int(counts.sum()))


@dataclass(frozen=True, eq=False)
class CsstResult:
    value: float
    r: np.ndarray
    z: np.ndarray
    gini_plus: float
    gini_minus: float
    histogram: GapHistogram


def reference_vectors(c1, c2, j1: int = 0, j2: int = 1) -> RegionPair:
    c1 = np.asarray(c1, dtype=np.float64)
    c2 = np.asarray(c2, dtype=np.float64)
    if c1.shape != c2.shape:
        raise DegeneratePair(f"prototype shapes differ: {c1.shape} vs {c2.shape}")
    if j1 == j2:
        raise DegeneratePair(f"a region cannot be paired with itself (j={j1})")
    w1 = c2 - c1
    w2 = c1 - c2
    axis_len = float(np.sqrt(w1 @ w1))
    if axis_len == 0.0:
        raise DegeneratePair(f"prototypes {j1} and {j2} coincide")
    return RegionPair(j1=j1, j2=j2, w1=w1, w2=w2, axis_len=axis_len)


def cosine_similarity(v, w) -> float:
    """Cosine of the angle between ``v`` and ``w``; 0 when ``v`` is the zero vector."""
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    nw = np.sqrt(w @ w)
    if nw == 0.0:
        raise DegeneratePair("reference vector has zero length")
    nv = np.sqrt(v @ v)
    if nv == 0.0:
        return 0.0
    return float(np.clip((v @ w) / (nv * nw), -1.0, 1.0))


def _cosines(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    nv = np.sqrt(np.einsum("ij,ij->i", v, v))
    nw = np.sqrt(w @ w)
    dots = v @ w
    out = np.zeros(len(v))
    nz = nv > 0
    out[nz] = dots[nz] / (nv[nz] * nw)
    return out


def project_t(x, pair: RegionPair, c1, c2, q: int) -> float:
    """Unclamped position of ``x`` on the axis, 0 at ``c1`` and 1 at ``c2``."""
    x = np.asarray(x, dtype=np.float64)
    if q == 1:
        return float((x - np.asarray(c1, dtype=np.float64)) @ pair.w1) / pair.axis_len2
    if q == 2:
        return 1.0 - float((x - np.asarray(c2, dtype=np.float64)) @ pair.w2) / pair.axis_len2
    raise InvalidParameter(f"q must be 1 or 2, got {q!r}")


def _bins_from_own_end(v: np.ndarray, w: np.ndarray, axis_len2: float, k: int) -> np.ndarray:
    """Bin index counted from the point's own prototype, clamped into [0, k-1]."""
    s = (v @ w) / axis_len2
    return np.minimum(np.floor(np.maximum(s, 0.0) * k), k - 1).astype(np.int64)


def _histogram(x1: np.ndarray, x2: np.ndarray, c1: np.ndarray, c2: np.ndarray, k: int) -> GapHistogram:
    pair = reference_vectors(c1, c2)
    counts = np.zeros(k, dtype=np.int64)
    for x, c, w, mirrored in ((x1, c1, pair.w1, False), (x2, c2, pair.w2, True)):
        if len(x) == 0:
            continue
        v = x - c
        keep = _cosines(v, w) > 0
        bins = _bins_from_own_end(v[keep], w, pair.axis_len2, k)
        if mirrored:
            bins = k - 1 - bins
        counts += np.bincount(bins, minlength=k)
    return GapHistogram(k=k, counts=counts, n_d=int(counts.sum()))


def build_histogram(points: Iterable[tuple[Sequence[float], int]], c1, c2, k: int) -> GapHistogram:
    """Gap histogram from ``(vector, q)`` pairs, ``q`` naming the region (1 or 2) of each vector."""
    if int(k) != k or k < 2:
        raise InvalidParameter(f"k must be an integer >= 2, got {k!r}")
    c1 = np.asarray(c1, dtype=np.float64)
    c2 = np.asarray(c2, dtype=np.float64)
    side1, side2 = [], []
    for x, q in points:
        if q == 1:
            side1.append(x)
        elif q == 2:
            side2.append(x)
        else:
            raise InvalidParameter(f"q must be 1 or 2, got {q!r}")
    dim = c1.shape[0]
    x1 = np.asarray(side1, dtype=np.float64).reshape(-1, dim)
    x2 = np.asarray(side2, dtype=np.float64).reshape(-1, dim)
    return _histogram(x1, x2, c1, c2, int(k))


def gini(a) -> float:
    """Gini coefficient as mean absolute pairwise difference over twice the mean.

    Zero-valued entries take part; an all-zero vector has Gini 0. Sums use
    ``math.fsum`` so the result does not depend on the order of ``a``.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    if np.any(a < 0):
        raise InvalidParameter("Gini coefficient needs non-negative entries")
    k = a.size
    total = math.fsum(a)
    if total == 0.0:
        return 0.0
    mean = total / k
    return math.fsum(np.abs(a[:, None] - a[None, :]).ravel()) / (2.0 * k * k * mean)


def csst_from_histogram(h: GapHistogram) -> CsstResult:
    if h.n_d == 0:
        raise EmptySupport("no projected vectors in the gap histogram")
    counts = h.counts.astype(np.float64)
    flat = h.n_d / h.k
    r = np.abs(counts - flat)
    z = counts >= flat
    above = np.where(z, r, 0.0)
    below = np.where(z, 0.0, r)
    g_plus = gini(above)
    g_minus = gini(below)
    value = (math.fsum(above) * (1.0 + g_plus) + math.fsum(below) * (1.0 + g_minus)) / h.n_d
    return CsstResult(value=float(value), r=r, z=z, gini_plus=g_plus, gini_minus=g_minus, histogram=h)


def pair_histogram(
    dataset: Dataset, assignment: Assignment, codebook: Codebook, j1: int, j2: int, k: int = DEFAULT_K
) -> GapHistogram:
    n = codebook.n_neurons
    for j in (j1, j2):
        if not 0 <= j < n:
            raise InvalidParameter(f"neuron index {j} outside [0, {n})")
    if j1 == j2:
        raise DegeneratePair(f"a region cannot be paired with itself (j={j1})")
    if int(k) != k or k < 2:
        raise InvalidParameter(f"k must be an integer >= 2, got {k!r}")
    c1 = codebook.prototypes[j1]
    c2 = codebook.prototypes[j2]
    x = dataset.points
    return _histogram(x[assignment.bmu_of == j1], x[assignment.bmu_of == j2], c1, c2, int(k))


def analyze_pair(
    dataset: Dataset,
    assignment: Assignment,
    codebook: Codebook,
    j1: int,
    j2: int,
    k: int = DEFAULT_K,
    min_support: int = DEFAULT_MIN_SUPPORT,
) -> CsstResult:
    h = pair_histogram(dataset, assignment, codebook, j1, j2, k)
    if h.n_d == 0:
        raise EmptySupport(f"no projected vectors between regions {j1} and {j2}")
    if h.n_d < min_support:
        raise LowSupport(h.n_d, min_support)
    return csst_from_histogram(h)


def select_regions(assignment: Assignment, m: int) -> list[int]:
    """The ``m`` most-hit neurons (lowest index wins ties), in ascending index order."""
    hits = np.asarray(assignment.hits_of)
    nonzero = int(np.count_nonzero(hits))
    if int(m) != m or m < 1 or m > nonzero:
        raise InvalidParameter(f"cannot select {m} regions, only {nonzero} neurons have hits")
    order = np.lexsort((np.arange(len(hits)), -hits))
    return sorted(int(j) for j in order[:m])


def _check_regions(regions: Sequence[int]):
    if len(set(regions)) != len(regions):
        raise InvalidParameter(f"duplicate region indices in {list(regions)}")


def csst_matrix(
    dataset: Dataset,
    assignment: Assignment,
    codebook: Codebook,
    regions: Sequence[int],
    k: int = DEFAULT_K,
    min_support: int = DEFAULT_MIN_SUPPORT,
) -> np.ndarray:
    """Symmetric CSST matrix over ``regions``; NaN marks pairs with too little support."""
    regions = [int(j) for j in regions]
    _check_regions(regions)
    m = len(regions)
    out = np.zeros((m, m))
    for a in range(m):
        for b in range(a + 1, m):
            try:
                val = analyze_pair(dataset, assignment, codebook, regions[a], regions[b], k, min_support)
                out[a, b] = out[b, a] = val.value
            except (LowSupport, EmptySupport):
                out[a, b] = out[b, a] = np.nan
    return out


def euclidean_matrix(codebook: Codebook, regions: Sequence[int]) -> np.ndarray:
    regions = [int(j) for j in regions]
    _check_regions(regions)
    n = codebook.n_neurons
    for j in regions:
        if not 0 <= j < n:
            raise InvalidParameter(f"neuron index {j} outside [0, {n})")
    c = codebook.prototypes[regions]
    diff = c[:, None, :] - c[None, :, :]
    return np.sqrt(np.einsum("abt,abt->ab", diff, diff))
