"""Sparse sampling and wavelet analysis of signals on circulant graphs."""

from .circulant import CirculantGraph, GraphSignal, PathGraph, RepresenterPolynomial, adjacency_matrix, laplacian
from .coarsening import coarsen, kron_coarsen, kron_reduce, spectral_reduce
from .errors import (
    BezoutError,
    GFRIError,
    InvalidGraphError,
    InvertibilityError,
    ModelMismatchError,
    PreconditionError,
)
from .filterbanks import DownsamplePattern, FilterBank, build_filterbank, check_invertibility
from .multires import analyze, plan_mrt, predicted_sparsity, synthesize
from .products import graph_product, multidim_sample_reconstruct, nearest_kronecker_circulant
from .sampling import (
    SparseSignal,
    SpectralSamples,
    factorize_gft,
    max_levels,
    prony_dct_reconstruct,
    prony_reconstruct,
    sample_dct,
    sample_gft,
    sample_via_pipeline,
)
from .spectral import gft_permutation

__version__ = "0.1.0"
