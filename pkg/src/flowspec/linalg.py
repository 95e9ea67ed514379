"""Dense factorizations used both as building blocks and as test oracles.

Everything is float64 and deterministic: factorization columns carry a fixed
sign convention (first nonzero entry nonnegative) so repeated runs and
different code paths are directly comparable.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import backend

_EPS = np.finfo(np.float64).eps
_SWEEP_BUDGET = 50
_JACOBI_TOL = 1e-14


class ConvergenceError(RuntimeError):
    """Jacobi iteration exhausted its sweep budget."""


def as_matrix(a, name="matrix"):
    """Validate and convert to a 2-D float64 array with finite entries."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be at least 1x1, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD factors: u (m x k), sigma nonincreasing >= 0, v (n x k)."""
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def truncate(self, k):
        return SvdResult(self.u[:, :k].copy(), self.sigma[:k].copy(),
                         self.v[:, :k].copy())


@dataclass(frozen=True)
class EigResult:
    """Eigenvalues sorted nonincreasing with orthonormal eigenvectors."""
    values: np.ndarray
    vectors: np.ndarray


def fix_signs(u, v=None):
    """Make the first nonzero entry of each column of u nonnegative, in place.

    Entries below 1e-12 of the column's max magnitude count as zero.  When v
    is given its columns are flipped jointly with u's, preserving u @ v.T
    products.
    """
    for j in range(u.shape[1]):
        col = u[:, j]
        top = np.abs(col).max()
        if top == 0.0:
            continue
        idx = np.flatnonzero(np.abs(col) > 1e-12 * top)[0]
        if col[idx] < 0.0:
            u[:, j] = -col
            if v is not None:
                v[:, j] = -v[:, j]
    return u


def matmul(a, b):
    """Matrix product with an explicit shape check."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(
            f"matmul dimension mismatch: {a.shape} x {b.shape}")
    return a @ b


def qr_thin(a):
    """Thin Householder QR: a = q @ r with q m x n orthonormal, r n x n upper.

    Rank-deficient input is allowed; near-zero diagonal entries of r flag
    degenerate columns (reported via a warning).
    """
    a = as_matrix(a)
    m, n = a.shape
    if m < n:
        raise ValueError(f"qr_thin needs rows >= cols, got shape {a.shape}")
    q, r = backend.kernels().householder_qr(np.asfortranarray(a))
    diag = np.abs(np.diag(r))
    scale = diag.max() if diag.size else 0.0
    degenerate = np.flatnonzero(diag <= scale * m * _EPS)
    if degenerate.size:
        warnings.warn(
            f"qr_thin: degenerate column(s) {degenerate.tolist()} "
            "(near-zero diagonal in R)",
            RuntimeWarning, stacklevel=2)
    return q, r


def _complete_basis(u, fill_cols):
    """Fill the listed (zero) columns of u with an orthonormal complement.

    Deterministic: canonical basis vectors are orthogonalized (twice, for
    accuracy) against the current columns and accepted when enough survives.
    """
    m = u.shape[0]
    cand = 0
    for j in fill_cols:
        while cand < m:
            w = np.zeros(m)
            w[cand] = 1.0
            cand += 1
            for _ in range(2):
                w -= u @ (u.T @ w)
            nw = np.sqrt(w @ w)
            if nw > 0.5:
                u[:, j] = w / nw
                break
        else:
            raise RuntimeError("orthonormal completion failed")
    return u


def svd_exact(a):
    """Deterministic thin SVD via one-sided Jacobi rotations.

    Singular values are sorted nonincreasing; values below roundoff of the
    largest are flushed to zero and their u-columns replaced by an
    orthonormal completion.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m < n:
        res = svd_exact(a.T)
        u = res.v.copy()
        v = res.u.copy()
        fix_signs(u, v)
        return SvdResult(u, res.sigma, v)
    g = np.asfortranarray(a.copy())
    v = np.asfortranarray(np.eye(n))
    sweeps, off = backend.kernels().jacobi_svd(g, v, _SWEEP_BUDGET, _JACOBI_TOL)
    if sweeps < 0:
        raise ConvergenceError(
            f"one-sided Jacobi SVD did not converge in {_SWEEP_BUDGET} sweeps; "
            f"residual off-diagonal ratio {off:.3e}")
    sigma = np.sqrt((g * g).sum(axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    g = g[:, order]
    v = v[:, order]
    cut = sigma[0] * max(m, n) * _EPS if sigma.size else 0.0
    u = np.zeros((m, n))
    zero_cols = []
    for j in range(n):
        if sigma[j] > cut:
            u[:, j] = g[:, j] / sigma[j]
        else:
            sigma[j] = 0.0
            zero_cols.append(j)
    if zero_cols:
        _complete_basis(u, zero_cols)
    fix_signs(u, v)
    return SvdResult(u, sigma, np.ascontiguousarray(v))


def sym_eig(a):
    """Full spectrum of a symmetric matrix via cyclic Jacobi rotations."""
    a = as_matrix(a)
    n, n2 = a.shape
    if n != n2:
        raise ValueError(f"sym_eig needs a square matrix, got shape {a.shape}")
    asym = np.abs(a - a.T).max()
    scale = np.abs(a).max()
    if asym > 1e-10 * max(1.0, scale):
        raise ValueError(
            f"sym_eig input not symmetric: max |a_ij - a_ji| = {asym:.3e}")
    work = np.asfortranarray((a + a.T) / 2.0)
    v = np.asfortranarray(np.eye(n))
    sweeps, off = backend.kernels().jacobi_eig(work, v, _SWEEP_BUDGET, _JACOBI_TOL)
    if sweeps < 0:
        raise ConvergenceError(
            f"cyclic Jacobi did not converge in {_SWEEP_BUDGET} sweeps; "
            f"residual off-diagonal norm {off:.3e}")
    values = np.diag(work).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = np.ascontiguousarray(v[:, order])
    fix_signs(vectors)
    return EigResult(values, vectors)


def gaussian_matrix(rows, cols, seed=None):
    """i.i.d. standard-normal matrix from a seeded PCG64 generator.

    The same seed reproduces the matrix bit for bit; with seed None the
    generator is seeded from OS entropy.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"gaussian_matrix needs rows, cols >= 1, got {rows}x{cols}")
    rng = np.random.default_rng(seed)
    return rng.standard_normal((rows, cols))
