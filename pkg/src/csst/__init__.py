"""Clustering SST index for SOM sub-cluster connectivity, with the SOM, U-matrix
and data-generation pieces needed to run it end to end."""

__version__ = "0.1.0"

from .datagen import Dataset, gen_gaussian_pair, gen_peaks
from .errors import (
    CsstError,
    DegenerateData,
    DegeneratePair,
    DimensionMismatch,
    EmptySupport,
    GridTooSmall,
    InvalidParameter,
    LowSupport,
    ParseError,
    SchemaError,
)
from .index import (
    CsstResult,
    GapHistogram,
    RegionPair,
    analyze_pair,
    build_histogram,
    cosine_similarity,
    csst_from_histogram,
    csst_matrix,
    euclidean_matrix,
    gini,
    project_t,
    reference_vectors,
    select_regions,
)
from .som import (
    Assignment,
    Codebook,
    GridTopology,
    TrainSchedule,
    assign_all,
    bmu,
    default_schedule,
    init_codebook_linear,
    quantization_error,
    train_batch,
)
from .umatrix import compute_umatrix
