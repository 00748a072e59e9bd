"""Compiled per-point kernels for the Chern-Weil pipeline."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def connection_from_jet(p, dp, rank):
    """Frame and connection data of a projection field from its jet.

    ``p`` is ``(M, r, r)``, ``dp`` is ``(D, M, r, r)``.  Returns ``e``
    ``(M, r, k)`` from pivoted Cholesky, ``z = e^H dp`` ``(D, M, k, r)``,
    ``grams[(a, b)] = z_a z_b^H`` for ``a < b`` stacked lexicographically
    ``(D(D-1)/2, M, k, k)`` and ``omegas = z e`` ``(D, M, k, k)``.
    """
    m_pts, r = p.shape[0], p.shape[1]
    dim = dp.shape[0]
    k = rank
    npairs = dim * (dim - 1) // 2
    e = np.zeros((m_pts, r, k), np.complex128)
    z = np.zeros((dim, m_pts, k, r), np.complex128)
    grams = np.zeros((npairs, m_pts, k, k), np.complex128)
    omegas = np.zeros((dim, m_pts, k, k), np.complex128)
    work = np.empty((r, r), np.complex128)
    for q in range(m_pts):
        for i in range(r):
            for j in range(r):
                work[i, j] = p[q, i, j]
        for c in range(k):
            piv, best = 0, -1.0
            for i in range(r):
                d = work[i, i].real
                if d > best:
                    best, piv = d, i
            s = np.sqrt(max(best, 1e-300))
            for i in range(r):
                e[q, i, c] = work[i, piv] / s
            for i in range(r):
                for j in range(r):
                    work[i, j] -= e[q, i, c] * np.conj(e[q, j, c])
        for a in range(dim):
            for c in range(k):
                for j in range(r):
                    acc = 0j
                    for i in range(r):
                        acc += np.conj(e[q, i, c]) * dp[a, q, i, j]
                    z[a, q, c, j] = acc
            for c in range(k):
                for d in range(k):
                    acc = 0j
                    for j in range(r):
                        acc += z[a, q, c, j] * e[q, j, d]
                    omegas[a, q, c, d] = acc
        pair = 0
        for a in range(dim):
            for b in range(a + 1, dim):
                for c in range(k):
                    for d in range(k):
                        acc = 0j
                        for j in range(r):
                            acc += z[a, q, c, j] * np.conj(z[b, q, d, j])
                        grams[pair, q, c, d] = acc
                pair += 1
    return e, z, grams, omegas
