"""Principal component analysis over frame columns.

Observations are the columns of a p x n matrix.  Fitting centers the data
and factors it directly (exact Jacobi SVD or the randomized path); the
covariance matrix is never formed, it only appears in tests as an oracle.
"""

import json
import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, gaussian_matrix, qr_thin, svd_exact
from .rsvd import RsvdConfig, rsvd

MODEL_MAGIC = b"FLSPPCA1"
MODEL_VERSION = 1


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray
    sigma: np.ndarray
    n_samples: int
    method: str = "exact"
    seed: int | None = None

    @property
    def p(self):
        return self.components.shape[0]

    @property
    def q(self):
        return self.components.shape[1]


def mean_center(y):
    """Subtract the column mean; returns (centered, mean)."""
    y = as_matrix(y, "data")
    n = y.shape[1]
    if n < 2:
        raise ValueError(f"mean centering needs at least 2 observations, got {n}")
    mean = y.mean(axis=1)
    return y - mean[:, None], mean


def fit(y, q=3, method="exact", cfg=None):
    """Fit a PCA model keeping the first q components.

    method 'exact' uses the deterministic Jacobi SVD; 'stochastic' uses the
    randomized SVD and requires cfg (oversampling / power iterations / seed;
    cfg.target_rank is overridden by q).
    """
    y = as_matrix(y, "data")
    p, n = y.shape
    limit = min(p, n - 1)
    if not 1 <= q <= limit:
        raise ValueError(f"q={q} out of range [1, {limit}] for shape {y.shape}")
    x, mean = mean_center(y)
    if method == "exact":
        res = svd_exact(x)
        seed = None
    elif method == "stochastic":
        if cfg is None:
            raise ValueError("stochastic fit requires an RsvdConfig")
        run_cfg = RsvdConfig(target_rank=q, oversampling=cfg.oversampling,
                             power_iterations=cfg.power_iterations, seed=cfg.seed)
        res = rsvd(x, run_cfg)
        seed = cfg.seed
    else:
        raise ValueError(f"unknown method {method!r}; expected 'exact' or 'stochastic'")
    return PcaModel(mean=mean, components=res.u[:, :q].copy(),
                    sigma=res.sigma[:q].copy(), n_samples=n,
                    method=method, seed=seed)


def singular_spectrum(y, count, method="exact", cfg=None):
    """Leading `count` singular values of the centered data matrix.

    Unlike fit, low-rank data is fine here: the stochastic path sketches at
    `count` plus oversampling columns without a rank check, so trailing
    values may be zero.  Used for eigenvalue-decay studies.
    """
    y = as_matrix(y, "data")
    p, n = y.shape
    count = min(count, p, n - 1)
    x, _ = mean_center(y)
    if method == "exact":
        return svd_exact(x).sigma[:count].copy()
    if method != "stochastic":
        raise ValueError(f"unknown method {method!r}; expected 'exact' or 'stochastic'")
    if cfg is None:
        raise ValueError("stochastic spectrum requires an RsvdConfig")
    l = min(count + cfg.oversampling, p, n)
    omega = gaussian_matrix(n, l, cfg.seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        q, _ = qr_thin(x @ omega)
    return svd_exact(q.T @ x).sigma[:count].copy()


def project(model, y):
    """Coordinates of a p-vector in the component subspace."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (model.p,):
        raise ValueError(f"expected a vector of length {model.p}, got shape {y.shape}")
    return model.components.T @ (y - model.mean)


def transform(model, y):
    """Project every column of a p x m matrix; returns q x m coordinates."""
    y = as_matrix(y, "data")
    if y.shape[0] != model.p:
        raise ValueError(f"expected {model.p} rows, got {y.shape[0]}")
    return model.components.T @ (y - model.mean[:, None])


def reconstruct(model, alpha):
    """Linear inverse of project: mean + components @ alpha."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (model.q,):
        raise ValueError(
            f"expected coordinates of length {model.q}, got shape {alpha.shape}")
    return model.mean + model.components @ alpha


def explained_variance(model):
    """Covariance eigenvalues sigma_i^2 / (n - 1)."""
    return model.sigma ** 2 / (model.n_samples - 1)


def save_model(model, path):
    """Write the binary model file plus a JSON sidecar at <path>.json.

    Layout: 16-byte header (magic, version, reserved), then little-endian
    float64 runs of mean (p), sigma (q), components (p x q column-major).
    """
    path = str(path)
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<II", MODEL_VERSION, 0))
        fh.write(model.mean.astype("<f8").tobytes())
        fh.write(model.sigma.astype("<f8").tobytes())
        fh.write(np.asfortranarray(model.components).astype("<f8").tobytes("F"))
    sidecar = {
        "p": model.p,
        "q": model.q,
        "n_samples": model.n_samples,
        "method": model.method,
        "seed": model.seed,
    }
    with open(path + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path):
    path = str(path)
    with open(path + ".json") as fh:
        meta = json.load(fh)
    p, q = meta["p"], meta["q"]
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MODEL_MAGIC:
            raise ValueError(f"{path}: bad model magic {magic!r}")
        version, _ = struct.unpack("<II", fh.read(8))
        if version != MODEL_VERSION:
            raise ValueError(f"{path}: unsupported model version {version}")
        payload = fh.read()
    need = (p + q + p * q) * 8
    if len(payload) != need:
        raise ValueError(f"{path}: expected {need} payload bytes, got {len(payload)}")
    mean = np.frombuffer(payload[:p * 8], dtype="<f8").copy()
    sigma = np.frombuffer(payload[p * 8:(p + q) * 8], dtype="<f8").copy()
    comps = np.frombuffer(payload[(p + q) * 8:], dtype="<f8").reshape((p, q), order="F").copy()
    return PcaModel(mean=mean, components=comps, sigma=sigma,
                    n_samples=meta["n_samples"], method=meta["method"],
                    seed=meta["seed"])
