"""Numba-jitted hot kernels.

Loop-level twins of the implementations in ``_kernels_numpy``; same
signatures, same semantics.  Compiled lazily on first call, cached on disk.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def householder_qr(a):
    m, n = a.shape
    r = a.copy()
    vs = np.zeros((m, n))
    betas = np.zeros(n)
    for k in range(n):
        norm2 = 0.0
        for i in range(k, m):
            norm2 += r[i, k] * r[i, k]
        normx = np.sqrt(norm2)
        if normx == 0.0:
            continue
        alpha = -normx if r[k, k] >= 0.0 else normx
        vs[k, k] = r[k, k] - alpha
        for i in range(k + 1, m):
            vs[i, k] = r[i, k]
        vtv = 0.0
        for i in range(k, m):
            vtv += vs[i, k] * vs[i, k]
        beta = 2.0 / vtv
        betas[k] = beta
        for j in range(k, n):
            dot = 0.0
            for i in range(k, m):
                dot += vs[i, k] * r[i, j]
            dot *= beta
            for i in range(k, m):
                r[i, j] -= dot * vs[i, k]
        r[k, k] = alpha
        for i in range(k + 1, m):
            r[i, k] = 0.0
    q = np.zeros((m, n))
    for j in range(n):
        q[j, j] = 1.0
    for k in range(n - 1, -1, -1):
        if betas[k] == 0.0:
            continue
        for j in range(n):
            dot = 0.0
            for i in range(k, m):
                dot += vs[i, k] * q[i, j]
            dot *= betas[k]
            for i in range(k, m):
                q[i, j] -= dot * vs[i, k]
    return q, r[:n, :n].copy()


@njit(cache=True)
def jacobi_svd(g, v, max_sweeps, tol):
    m, n = g.shape
    nv = v.shape[0]
    off = 0.0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = 0.0
                beta = 0.0
                c = 0.0
                for row in range(m):
                    gi = g[row, i]
                    gj = g[row, j]
                    alpha += gi * gi
                    beta += gj * gj
                    c += gi * gj
                if alpha == 0.0 or beta == 0.0:
                    continue
                ratio = abs(c) / np.sqrt(alpha * beta)
                if ratio > off:
                    off = ratio
                if ratio <= tol:
                    continue
                zeta = (beta - alpha) / (2.0 * c)
                sign = 1.0 if zeta >= 0.0 else -1.0
                t = sign / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = cs * t
                for row in range(m):
                    tmp = g[row, i]
                    g[row, i] = cs * tmp - sn * g[row, j]
                    g[row, j] = sn * tmp + cs * g[row, j]
                for row in range(nv):
                    tmp = v[row, i]
                    v[row, i] = cs * tmp - sn * v[row, j]
                    v[row, j] = sn * tmp + cs * v[row, j]
        if off <= tol:
            return sweep + 1, off
    return -1, off


@njit(cache=True)
def jacobi_eig(a, v, max_sweeps, tol):
    n = a.shape[0]
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j] * a[i, j]
    fro = np.sqrt(fro)
    if fro == 0.0:
        return 0, 0.0
    thresh = tol * fro
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        off = np.sqrt(off)
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
                sign = 1.0 if tau >= 0.0 else -1.0
                t = sign / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[p, k] = a[k, p]
                    a[k, q] = s * akp + c * akq
                    a[q, k] = a[k, q]
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return -1, off


@njit(cache=True)
def pairwise_sqdist(y):
    p, n = y.shape
    d2 = np.zeros((n, n))
    for i in range(n - 1):
        for j in range(i + 1, n):
            s = 0.0
            for row in range(p):
                d = y[row, i] - y[row, j]
                s += d * d
            d2[i, j] = s
            d2[j, i] = s
    return d2
