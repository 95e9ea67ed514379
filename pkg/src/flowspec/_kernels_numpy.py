"""Pure-numpy reference implementations of the hot kernels.

Selected when FLOWSPEC_BACKEND=numpy or when numba is unavailable.  Same
call signatures and semantics as the numba versions; inner loops use
vectorized column operations instead of jitted scalar loops.
"""

import numpy as np


def householder_qr(a):
    """Thin QR of an m x n matrix (m >= n) via Householder reflections.

    Returns (q, r) with q m x n orthonormal columns and r n x n upper
    triangular.  Zero columns leave an identity reflector, so q stays
    orthonormal even for rank-deficient input.
    """
    m, n = a.shape
    r = a.copy()
    vs = np.zeros((m, n))
    betas = np.zeros(n)
    for k in range(n):
        x = r[k:, k]
        normx = np.sqrt(x @ x)
        if normx == 0.0:
            continue
        alpha = -normx if x[0] >= 0.0 else normx
        v = x.copy()
        v[0] -= alpha
        beta = 2.0 / (v @ v)
        r[k:, k:] -= np.outer(v, beta * (v @ r[k:, k:]))
        r[k, k] = alpha
        r[k + 1:, k] = 0.0
        vs[k:, k] = v
        betas[k] = beta
    q = np.zeros((m, n))
    q[:n, :n] = np.eye(n)
    for k in range(n - 1, -1, -1):
        if betas[k] == 0.0:
            continue
        v = vs[k:, k]
        q[k:, :] -= np.outer(v, betas[k] * (v @ q[k:, :]))
    return q, np.ascontiguousarray(r[:n, :n])


def jacobi_svd(g, v, max_sweeps, tol):
    """One-sided (Hestenes) Jacobi sweeps orthogonalizing the columns of g.

    g (m x n) and v (n x n, starts as identity) are updated in place so that
    g = a @ v throughout.  Returns (sweeps_used, worst_ratio); sweeps_used is
    -1 if the off-diagonal ratio still exceeds tol after max_sweeps.
    """
    n = g.shape[1]
    off = 0.0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                gi = g[:, i]
                gj = g[:, j]
                alpha = gi @ gi
                beta = gj @ gj
                c = gi @ gj
                if alpha == 0.0 or beta == 0.0:
                    continue
                ratio = abs(c) / np.sqrt(alpha * beta)
                if ratio > off:
                    off = ratio
                if ratio <= tol:
                    continue
                zeta = (beta - alpha) / (2.0 * c)
                t = (1.0 if zeta >= 0.0 else -1.0) / (
                    abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = cs * t
                tmp = gi.copy()
                g[:, i] = cs * tmp - sn * gj
                g[:, j] = sn * tmp + cs * gj
                tmp = v[:, i].copy()
                v[:, i] = cs * tmp - sn * v[:, j]
                v[:, j] = sn * tmp + cs * v[:, j]
        if off <= tol:
            return sweep + 1, off
    return -1, off


def jacobi_eig(a, v, max_sweeps, tol):
    """Cyclic two-sided Jacobi on a symmetric matrix, in place.

    a is driven to diagonal form, v (starts as identity) accumulates the
    rotations so a_original = v @ diag @ v.T.  Returns (sweeps_used, off)
    where off is the Frobenius norm of the off-diagonal part; sweeps_used is
    -1 on non-convergence.
    """
    n = a.shape[0]
    fro = np.sqrt((a * a).sum())
    if fro == 0.0:
        return 0, 0.0
    thresh = tol * fro
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = np.sqrt(2.0 * (np.triu(a, 1) ** 2).sum())
        if off <= thresh:
            return sweep, off
        if sweep == max_sweeps:
            return -1, off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                if abs(apq) <= 1e-20 * fro:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                tau = (aqq - app) / (2.0 * apq)
                t = (1.0 if tau >= 0.0 else -1.0) / (
                    abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                newp = c * colp - s * colq
                newq = s * colp + c * colq
                newp[p] = a[p, p]
                newp[q] = 0.0
                newq[q] = a[q, q]
                newq[p] = 0.0
                a[:, p] = newp
                a[p, :] = newp
                a[:, q] = newq
                a[q, :] = newq
                colp = v[:, p].copy()
                v[:, p] = c * colp - s * v[:, q]
                v[:, q] = s * colp + c * v[:, q]
    return -1, off


def pairwise_sqdist(y):
    """Squared Euclidean distances between the columns of y (p x n).

    Computed once per unordered pair and mirrored, so the result is exactly
    symmetric with a zero diagonal.
    """
    n = y.shape[1]
    d2 = np.zeros((n, n))
    for i in range(n - 1):
        diff = y[:, i + 1:] - y[:, i:i + 1]
        row = (diff * diff).sum(axis=0)
        d2[i, i + 1:] = row
        d2[i + 1:, i] = row
    return d2
