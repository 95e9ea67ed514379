"""Diffusion maps: heat-kernel similarities, row-stochastic diffusion matrix,
spectrum, and the scaled spectral embedding.

The nonsymmetric diffusion matrix P = D^-1 W is never diagonalized directly;
its spectrum comes from the symmetric conjugate S = D^-1/2 W D^-1/2, which
guarantees real eigenvalues and orthogonal intermediate vectors.  Negative
eigenvalues, if any, are reported as-is.
"""

import json
import struct
import warnings
from dataclasses import dataclass

import numpy as np

from . import backend
from .linalg import as_matrix, sym_eig

MODEL_MAGIC = b"FLSPDMP1"
MODEL_VERSION = 1


@dataclass(frozen=True)
class DiffusionModel:
    epsilon: float
    eigenvalues: np.ndarray
    psi: np.ndarray
    t: int
    n: int
    w: np.ndarray
    d_diag: np.ndarray

    def decay(self, count):
        """Normalized eigenvalue decay, excluding the trivial lambda_0 = 1."""
        return eigen_decay(self.eigenvalues[1:], count)


@dataclass(frozen=True)
class Embedding:
    coords: np.ndarray
    q: int
    t: int


def default_epsilon(y):
    """Largest squared Euclidean distance between any two observations."""
    y = as_matrix(y, "data")
    if y.shape[1] < 2:
        raise ValueError("bandwidth selection needs at least 2 observations")
    d2 = backend.kernels().pairwise_sqdist(np.asfortranarray(y))
    eps = float(d2.max())
    if eps == 0.0:
        raise ValueError("all observations identical; bandwidth would be zero")
    return eps


def kernel_matrix(y, epsilon):
    """Heat-kernel similarities W_ij = exp(-||y_i - y_j||^2 / epsilon).

    Each unordered pair is computed once and mirrored, so W is exactly
    symmetric with a unit diagonal.
    """
    y = as_matrix(y, "data")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    d2 = backend.kernels().pairwise_sqdist(np.asfortranarray(y))
    w = np.exp(-d2 / epsilon)
    np.fill_diagonal(w, 1.0)
    return w


def diffusion_matrix(w):
    """Row-normalize a similarity matrix: returns (P, d_diag) with P = D^-1 W."""
    w = as_matrix(w, "kernel")
    if w.shape[0] != w.shape[1]:
        raise ValueError(f"kernel matrix must be square, got shape {w.shape}")
    if (w < 0.0).any():
        raise ValueError("kernel matrix has negative entries")
    asym = np.abs(w - w.T).max()
    if asym > 1e-12:
        raise ValueError(f"kernel matrix not symmetric: max asymmetry {asym:.3e}")
    d_diag = w.sum(axis=1)
    zero = np.flatnonzero(d_diag <= 0.0)
    if zero.size:
        raise ValueError(f"zero row sum at row {zero[0]}")
    return w / d_diag[:, None], d_diag


def spectral(w, d_diag):
    """Spectrum of P = D^-1 W via the symmetric conjugate D^-1/2 W D^-1/2.

    Returns (eigenvalues, psi): eigenvalues sorted nonincreasing with
    lambda_0 = 1, and psi's columns the right eigenvectors of P
    (psi_0 constant up to scale).
    """
    w = as_matrix(w, "kernel")
    d_diag = np.asarray(d_diag, dtype=np.float64)
    inv_sqrt = 1.0 / np.sqrt(d_diag)
    s = w * np.outer(inv_sqrt, inv_sqrt)
    res = sym_eig(s)
    psi = inv_sqrt[:, None] * res.vectors
    return res.values.copy(), psi


def fit(y, epsilon=None, t=2):
    """Full diffusion-map pipeline over the columns of y."""
    y = as_matrix(y, "data")
    if t < 1:
        raise ValueError(f"diffusion scale t must be >= 1, got {t}")
    if epsilon is None:
        epsilon = default_epsilon(y)
    w = kernel_matrix(y, epsilon)
    _, d_diag = diffusion_matrix(w)
    values, psi = spectral(w, d_diag)
    return DiffusionModel(epsilon=float(epsilon), eigenvalues=values, psi=psi,
                          t=int(t), n=y.shape[1], w=w, d_diag=d_diag)


def embed(model, q, t=None):
    """Spectral embedding row j = (lambda_1^t psi_j1, ..., lambda_q^t psi_jq).

    The trivial lambda_0 = 1 pair is skipped; coordinates start at the first
    nontrivial eigenvector.
    """
    if t is None:
        t = model.t
    if t < 1:
        raise ValueError(f"diffusion scale t must be >= 1, got {t}")
    if not 1 <= q <= model.n - 1:
        raise ValueError(f"q={q} out of range [1, {model.n - 1}]")
    lam = model.eigenvalues[1:q + 1]
    coords = model.psi[:, 1:q + 1] * lam[None, :] ** t
    return Embedding(coords=coords, q=q, t=int(t))


def eigen_decay(values, count):
    """First `count` spectrum values normalized by the largest retained one.

    Input must be sorted nonincreasing with a positive leading value.  If
    fewer than `count` values exist, all are returned and a warning flags it.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("expected a nonempty 1-D spectrum")
    if np.any(np.diff(values) > 1e-12 * max(1.0, abs(values[0]))):
        raise ValueError("spectrum must be sorted nonincreasing")
    if values[0] <= 0.0:
        raise ValueError("leading spectrum value must be positive")
    if values.size < count:
        warnings.warn(
            f"requested {count} values but spectrum has only {values.size}",
            RuntimeWarning, stacklevel=2)
        count = values.size
    return values[:count] / values[0]


def save_model(model, path):
    """Write the binary model file plus a JSON sidecar at <path>.json.

    Stores epsilon, t, eigenvalues, psi (column-major), and the degree
    diagonal.  The dense kernel matrix is not persisted (it can be as large
    as n^2 and the downstream commands never need it); a loaded model has
    w set to None.
    """
    path = str(path)
    n = model.n
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<II", MODEL_VERSION, 0))
        fh.write(struct.pack("<QQ", n, model.t))
        fh.write(struct.pack("<d", model.epsilon))
        fh.write(model.eigenvalues.astype("<f8").tobytes())
        fh.write(np.asfortranarray(model.psi).astype("<f8").tobytes("F"))
        fh.write(model.d_diag.astype("<f8").tobytes())
    sidecar = {"n": n, "t": model.t, "epsilon": model.epsilon,
               "kernel_stored": False}
    with open(path + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path):
    path = str(path)
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MODEL_MAGIC:
            raise ValueError(f"{path}: bad model magic {magic!r}")
        version, _ = struct.unpack("<II", fh.read(8))
        if version != MODEL_VERSION:
            raise ValueError(f"{path}: unsupported model version {version}")
        n, t = struct.unpack("<QQ", fh.read(16))
        (epsilon,) = struct.unpack("<d", fh.read(8))
        payload = fh.read()
    need = (n + n * n + n) * 8
    if len(payload) != need:
        raise ValueError(f"{path}: expected {need} payload bytes, got {len(payload)}")
    values = np.frombuffer(payload[:n * 8], dtype="<f8").copy()
    psi = np.frombuffer(payload[n * 8:(n + n * n) * 8],
                        dtype="<f8").reshape((n, n), order="F").copy()
    d_diag = np.frombuffer(payload[(n + n * n) * 8:], dtype="<f8").copy()
    return DiffusionModel(epsilon=epsilon, eigenvalues=values, psi=psi,
                          t=int(t), n=int(n), w=None, d_diag=d_diag)
