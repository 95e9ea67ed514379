"""Frame-sequence dimensionality reduction: stochastic PCA and diffusion maps."""

from . import backend, dataset, diffusion, ingestion, linalg, pca, subspace, svgplot
from .linalg import (ConvergenceError, EigResult, SvdResult, gaussian_matrix,
                     matmul, qr_thin, svd_exact, sym_eig)
from .rsvd import RsvdConfig, rsvd, rsvd_range

__all__ = [
    "backend", "dataset", "diffusion", "ingestion", "linalg", "pca",
    "subspace", "svgplot",
    "ConvergenceError", "EigResult", "SvdResult", "gaussian_matrix",
    "matmul", "qr_thin", "svd_exact", "sym_eig",
    "RsvdConfig", "rsvd", "rsvd_range",
]

__version__ = "0.1.0"
