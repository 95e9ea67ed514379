"""Principal angles, subspace distance, and the stochastic-PCA stability study."""

import json
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, svd_exact
from .pca import fit
from .rsvd import RsvdConfig


def check_basis(b, name="basis", tol=1e-8):
    """Validate an orthonormal-columns basis matrix and return it as float64."""
    b = as_matrix(b, name)
    gram = b.T @ b
    dev = np.abs(gram - np.eye(b.shape[1])).max()
    if dev > tol:
        raise ValueError(
            f"{name} columns are not orthonormal: max |B'B - I| = {dev:.3e}")
    return b


def principal_angles(f, g):
    """Canonical angles between span(f) and span(g), nondecreasing, in radians.

    Cosines are the singular values of f.T @ g, clamped to [0, 1] so roundoff
    cannot push arccos out of domain.
    """
    f = check_basis(f, "f")
    g = check_basis(g, "g")
    if f.shape[0] != g.shape[0]:
        raise ValueError(
            f"ambient dimension mismatch: {f.shape[0]} vs {g.shape[0]}")
    if f.shape[1] < g.shape[1]:
        raise ValueError(
            f"dim(f)={f.shape[1]} must be >= dim(g)={g.shape[1]}")
    cosines = np.clip(svd_exact(f.T @ g).sigma, 0.0, 1.0)
    return np.arccos(cosines)


def distance(f, g):
    """sin of the largest principal angle between two equal-dimension subspaces.

    Computed as the top singular value of the projected residual
    g - f (f' g), which equals sqrt(1 - sigma_min(f' g)^2) exactly but avoids
    the half-precision loss of that formula for nearly equal subspaces.  The
    arguments are put in a canonical order first so the distance is exactly
    symmetric.
    """
    f = check_basis(f, "f")
    g = check_basis(g, "g")
    if f.shape[0] != g.shape[0]:
        raise ValueError(
            f"ambient dimension mismatch: {f.shape[0]} vs {g.shape[0]}")
    if f.shape[1] != g.shape[1]:
        raise ValueError(
            f"subspace distance needs equal dimensions, got {f.shape[1]} and {g.shape[1]}")
    fb, gb = f.tobytes(), g.tobytes()
    if fb == gb:
        return 0.0
    if fb > gb:
        f, g = g, f
    resid = g - f @ (f.T @ g)
    sine = svd_exact(resid).sigma[0] if resid.any() else 0.0
    return float(min(1.0, sine))


@dataclass(frozen=True)
class StabilityReport:
    runs: int
    q: int
    seeds: list
    pairwise_distances: list
    mean: float
    std_dev: float

    def to_json(self):
        doc = {
            "runs": self.runs,
            "q": self.q,
            "seeds": list(self.seeds),
            "pairwise_distances": list(self.pairwise_distances),
            "mean": self.mean,
            "std_dev": self.std_dev,
            "pairing": "all pairs",
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def csv_row(self, label):
        return f"{label},{self.mean!r},{self.std_dev!r}"


def stability_study(y, q, runs, cfg):
    """Repeated stochastic PCA fits and all-pairs subspace distances.

    Run r uses seed cfg.seed + r; if cfg.seed is None a base seed is drawn
    from OS entropy and recorded in the report.  The mean and the sample
    (n-1) standard deviation summarize the C(runs, 2) distances.
    """
    y = as_matrix(y, "data")
    if runs < 2:
        raise ValueError(f"stability study needs runs >= 2, got {runs}")
    base = cfg.seed
    if base is None:
        base = int(np.random.default_rng().integers(0, 2 ** 31))
    seeds = [base + r for r in range(runs)]
    bases = []
    for seed in seeds:
        run_cfg = RsvdConfig(target_rank=q, oversampling=cfg.oversampling,
                             power_iterations=cfg.power_iterations, seed=seed)
        model = fit(y, q=q, method="stochastic", cfg=run_cfg)
        bases.append(model.components)
    dists = []
    for i in range(runs - 1):
        for j in range(i + 1, runs):
            dists.append(distance(bases[i], bases[j]))
    dists_arr = np.array(dists)
    std = float(dists_arr.std(ddof=1)) if dists_arr.size > 1 else 0.0
    return StabilityReport(
        runs=runs, q=q, seeds=seeds, pairwise_distances=dists,
        mean=float(dists_arr.mean()), std_dev=std,
    )
