# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled quadrature kernels.

Same six reductions as _numpy, specialized for small matrices: node-wise
resolvents go through LAPACK zgesv on row-major buffers (which computes
B @ inv(A) directly), with closed-form scalar paths for n == 1.
"""

import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_lapack cimport zgesv

cnp.import_array()

ctypedef double complex zc


def polyval_matrix(coeffs, mus):
    """Horner evaluation: coeffs (K, r, c) at mus (M,) -> (M, r, c)."""
    cdef cnp.ndarray[zc, ndim=3] cf = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] xs = np.ascontiguousarray(
        np.asarray(mus, dtype=np.complex128).ravel())
    cdef Py_ssize_t K = cf.shape[0], r = cf.shape[1], c = cf.shape[2]
    cdef Py_ssize_t M = xs.shape[0]
    cdef cnp.ndarray[zc, ndim=3] out = np.empty((M, r, c), dtype=np.complex128)
    cdef Py_ssize_t m, k, i, j
    cdef zc x, acc
    for m in range(M):
        x = xs[m]
        for i in range(r):
            for j in range(c):
                acc = cf[K - 1, i, j]
                for k in range(K - 2, -1, -1):
                    acc = acc * x + cf[k, i, j]
                out[m, i, j] = acc
    return out


def cauchy_sum(kvals, nodes, weights, z):
    cdef cnp.ndarray[zc, ndim=3] kv = np.ascontiguousarray(kvals, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] mu = np.ascontiguousarray(nodes, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef zc zz = z
    cdef Py_ssize_t M = kv.shape[0], r = kv.shape[1], c = kv.shape[2]
    cdef cnp.ndarray[zc, ndim=2] out = np.zeros((r, c), dtype=np.complex128)
    cdef Py_ssize_t m, i, j
    cdef zc f
    for m in range(M):
        f = w[m] / (mu[m] - zz)
        for i in range(r):
            for j in range(c):
                out[i, j] = out[i, j] + f * kv[m, i, j]
    return out


def cauchy_sum_many(kvals, nodes, weights, zs):
    cdef cnp.ndarray[zc, ndim=3] kv = np.ascontiguousarray(kvals, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] mu = np.ascontiguousarray(nodes, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] zz = np.ascontiguousarray(
        np.asarray(zs, dtype=np.complex128).ravel())
    cdef Py_ssize_t M = kv.shape[0], r = kv.shape[1], c = kv.shape[2]
    cdef Py_ssize_t P = zz.shape[0]
    cdef cnp.ndarray[zc, ndim=3] out = np.zeros((P, r, c), dtype=np.complex128)
    cdef Py_ssize_t p, m, i, j
    cdef zc f
    for p in range(P):
        for m in range(M):
            f = w[m] / (mu[m] - zz[p])
            for i in range(r):
                for j in range(c):
                    out[p, i, j] = out[p, i, j] + f * kv[m, i, j]
    return out


cdef int _right_solve(zc *a, zc *b, int *ipiv, int n) nogil:
    # b (n x n row-major) <- b @ inv(a); a is clobbered
    cdef int info = 0
    cdef int nn = n
    zgesv(&nn, &nn, a, &nn, ipiv, b, &nn, &info)
    return info


def resolvent_sum(kvals, nodes, weights, zmat):
    """sum_k w_k K_k @ inv(Z - mu_k)."""
    cdef cnp.ndarray[zc, ndim=3] kv = np.ascontiguousarray(kvals, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] mu = np.ascontiguousarray(nodes, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] z = np.ascontiguousarray(zmat, dtype=np.complex128)
    cdef Py_ssize_t M = kv.shape[0]
    cdef int n = <int> z.shape[0]
    cdef cnp.ndarray[zc, ndim=2] out = np.zeros((n, n), dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] a = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] b = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[int, ndim=1] ipiv = np.empty(n, dtype=np.intc)
    cdef Py_ssize_t m, i, j
    cdef zc wm, denom
    cdef int info
    if kv.shape[1] != n or kv.shape[2] != n:
        raise ValueError("resolvent_sum needs square kvals matching zmat")
    if n == 1:
        for m in range(M):
            out[0, 0] = out[0, 0] + w[m] * kv[m, 0, 0] / (z[0, 0] - mu[m])
        return out
    for m in range(M):
        for i in range(n):
            for j in range(n):
                a[i, j] = z[i, j] - (mu[m] if i == j else 0)
                b[i, j] = kv[m, i, j]
        info = _right_solve(&a[0, 0], &b[0, 0], <int *> &ipiv[0], n)
        if info != 0:
            raise np.linalg.LinAlgError(f"zgesv failed at node {m} (info={info})")
        wm = w[m]
        for i in range(n):
            for j in range(n):
                out[i, j] = out[i, j] + wm * b[i, j]
    return out


def resolvent_cauchy_sum(kvals, nodes, weights, zmat, zpt):
    """sum_k w_k K_k @ inv(Z - mu_k) / (mu_k - z)."""
    cdef cnp.ndarray[zc, ndim=3] kv = np.ascontiguousarray(kvals, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] mu = np.ascontiguousarray(nodes, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] z = np.ascontiguousarray(zmat, dtype=np.complex128)
    cdef zc zz = zpt
    cdef Py_ssize_t M = kv.shape[0]
    cdef int n = <int> z.shape[0]
    cdef cnp.ndarray[zc, ndim=2] out = np.zeros((n, n), dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] a = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] b = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[int, ndim=1] ipiv = np.empty(n, dtype=np.intc)
    cdef Py_ssize_t m, i, j
    cdef zc f
    cdef int info
    if kv.shape[1] != n or kv.shape[2] != n:
        raise ValueError("resolvent_cauchy_sum needs square kvals matching zmat")
    if n == 1:
        for m in range(M):
            out[0, 0] = out[0, 0] + (w[m] / (mu[m] - zz)) * kv[m, 0, 0] / (z[0, 0] - mu[m])
        return out
    for m in range(M):
        for i in range(n):
            for j in range(n):
                a[i, j] = z[i, j] - (mu[m] if i == j else 0)
                b[i, j] = kv[m, i, j]
        info = _right_solve(&a[0, 0], &b[0, 0], <int *> &ipiv[0], n)
        if info != 0:
            raise np.linalg.LinAlgError(f"zgesv failed at node {m} (info={info})")
        f = w[m] / (mu[m] - zz)
        for i in range(n):
            for j in range(n):
                out[i, j] = out[i, j] + f * b[i, j]
    return out


def sandwich_sum(kvals, nodes, weights, zleft, zright):
    """sum_k w_k inv(zleft - mu_k) @ K_k @ inv(zright - mu_k)."""
    cdef cnp.ndarray[zc, ndim=3] kv = np.ascontiguousarray(kvals, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] mu = np.ascontiguousarray(nodes, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] zl = np.ascontiguousarray(zleft, dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] zr = np.ascontiguousarray(zright, dtype=np.complex128)
    cdef Py_ssize_t M = kv.shape[0]
    cdef int n = <int> zr.shape[0]
    cdef cnp.ndarray[zc, ndim=2] out = np.zeros((n, n), dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] a = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] b = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] lt = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[zc, ndim=2] st = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[int, ndim=1] ipiv = np.empty(n, dtype=np.intc)
    cdef Py_ssize_t m, i, j
    cdef zc wm
    cdef int info
    if zl.shape[0] != n or kv.shape[1] != n or kv.shape[2] != n:
        raise ValueError("sandwich_sum needs square kvals matching the operators")
    if n == 1:
        for m in range(M):
            out[0, 0] = out[0, 0] + w[m] * kv[m, 0, 0] / (
                (zl[0, 0] - mu[m]) * (zr[0, 0] - mu[m]))
        return out
    for m in range(M):
        # step 1: b <- K_k @ inv(zright - mu)
        for i in range(n):
            for j in range(n):
                a[i, j] = zr[i, j] - (mu[m] if i == j else 0)
                b[i, j] = kv[m, i, j]
        info = _right_solve(&a[0, 0], &b[0, 0], <int *> &ipiv[0], n)
        if info != 0:
            raise np.linalg.LinAlgError(f"zgesv failed at node {m} (info={info})")
        # step 2: inv(zleft - mu) @ b == (b^T @ inv((zleft - mu)^T))^T
        for i in range(n):
            for j in range(n):
                lt[i, j] = zl[j, i] - (mu[m] if i == j else 0)
                st[i, j] = b[j, i]
        info = _right_solve(&lt[0, 0], &st[0, 0], <int *> &ipiv[0], n)
        if info != 0:
            raise np.linalg.LinAlgError(f"zgesv failed at node {m} (info={info})")
        wm = w[m]
        for i in range(n):
            for j in range(n):
                out[i, j] = out[i, j] + wm * st[j, i]
    return out
