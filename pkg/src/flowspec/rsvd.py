"""Randomized (stochastic) SVD: range sampling, QR, projection, small SVD.

The classic sketch-and-solve scheme: multiply by a Gaussian test matrix to
capture the range, orthonormalize, project, then factor the small projected
matrix exactly and rotate back.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import SvdResult, as_matrix, fix_signs, gaussian_matrix, qr_thin, svd_exact

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class RsvdConfig:
    target_rank: int
    oversampling: int = 10
    power_iterations: int = 0
    seed: int | None = None

    def __post_init__(self):
        if self.target_rank < 1:
            raise ValueError(f"target_rank must be >= 1, got {self.target_rank}")
        if self.oversampling < 0:
            raise ValueError(f"oversampling must be >= 0, got {self.oversampling}")
        if self.power_iterations < 0:
            raise ValueError(
                f"power_iterations must be >= 0, got {self.power_iterations}")

    @property
    def sketch_size(self):
        return self.target_rank + self.oversampling


def rsvd_range(a, cfg):
    """Orthonormal basis (m x l) for the randomly sampled range of a.

    Power iterations re-orthonormalize after every multiplication to keep
    the basis from collapsing in floating point.  Raises if the sketch is
    wider than min(m, n) or if the sampled range has rank below the target.
    """
    a = as_matrix(a)
    m, n = a.shape
    l = cfg.sketch_size
    if l > min(m, n):
        raise ValueError(
            f"sketch size l={l} exceeds min(m, n)={min(m, n)} for shape {a.shape}")
    omega = gaussian_matrix(n, l, cfg.seed)
    y = a @ omega
    with warnings.catch_warnings():
        # an oversampled sketch of a low-rank matrix is expected to have
        # degenerate trailing columns; rank is checked below instead
        warnings.simplefilter("ignore", RuntimeWarning)
        for _ in range(cfg.power_iterations):
            q, _ = qr_thin(y)
            z = a.T @ q
            q, _ = qr_thin(z)
            y = a @ q
        q, r = qr_thin(y)
    diag = np.abs(np.diag(r))
    scale = diag.max()
    achieved = int((diag > scale * m * _EPS).sum()) if scale > 0.0 else 0
    if achieved < cfg.target_rank:
        raise ValueError(
            f"sampled range is degenerate: achieved rank {achieved} "
            f"< target rank {cfg.target_rank}")
    return q


def rsvd(a, cfg):
    """Approximate truncated SVD, keeping the leading target_rank triplets."""
    a = as_matrix(a)
    q = rsvd_range(a, cfg)
    b = q.T @ a
    small = svd_exact(b)
    k = cfg.target_rank
    u = q @ small.u[:, :k]
    v = small.v[:, :k].copy()
    fix_signs(u, v)
    return SvdResult(u, small.sigma[:k].copy(), v)
