"""Pure-NumPy quadrature kernels.

Every function receives precomputed density values `kvals` of shape
(M, r, c) together with the M quadrature nodes and weights, and reduces
them to a single matrix. These six reductions are the hot path of the
whole package; the compiled backend in _speedups.pyx implements the same
signatures.

Conventions: nodes and weights may be complex (contour quadrature),
`zmat` arguments are square complex matrices, resolvents are taken of
(Z - mu) with mu running over the nodes.
"""

import numpy as np


def polyval_matrix(coeffs, mus):
    """Evaluate a matrix polynomial sum_k coeffs[k] mu^k at each mu.

    coeffs: (K, r, c), mus: (M,) -> (M, r, c). Horner form.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    mus = np.asarray(mus, dtype=np.complex128)
    k, r, c = coeffs.shape
    out = np.empty((mus.shape[0], r, c), dtype=np.complex128)
    out[:] = coeffs[k - 1]
    for idx in range(k - 2, -1, -1):
        out *= mus[:, None, None]
        out += coeffs[idx]
    return out


def cauchy_sum(kvals, nodes, weights, z):
    """sum_k w_k K_k / (mu_k - z) -> (r, c)."""
    factors = weights / (nodes - z)
    return np.einsum("m,mij->ij", factors, kvals)


def cauchy_sum_many(kvals, nodes, weights, zs):
    """Vectorized cauchy_sum over a batch of points zs: (P,) -> (P, r, c)."""
    factors = weights[None, :] / (nodes[None, :] - zs[:, None])
    return np.einsum("pm,mij->pij", factors, kvals)


def _right_resolvent_products(kvals, nodes, zmat):
    # T_k = K_k @ inv(zmat - mu_k), done as one batched solve on transposes
    n = zmat.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    a = zmat[None, :, :] - nodes[:, None, None] * eye[None, :, :]
    t = np.linalg.solve(np.swapaxes(a, 1, 2), np.swapaxes(kvals, 1, 2))
    return np.swapaxes(t, 1, 2)


def resolvent_sum(kvals, nodes, weights, zmat):
    """sum_k w_k K_k @ inv(zmat - mu_k) -> (r, n)."""
    t = _right_resolvent_products(kvals, nodes, zmat)
    return np.einsum("m,mij->ij", weights, t)


def resolvent_cauchy_sum(kvals, nodes, weights, zmat, z):
    """sum_k w_k K_k @ inv(zmat - mu_k) / (mu_k - z) -> (r, n)."""
    t = _right_resolvent_products(kvals, nodes, zmat)
    return np.einsum("m,mij->ij", weights / (nodes - z), t)


def sandwich_sum(kvals, nodes, weights, zleft, zright):
    """sum_k w_k inv(zleft - mu_k) @ K_k @ inv(zright - mu_k)."""
    nl = zleft.shape[0]
    eye_l = np.eye(nl, dtype=np.complex128)
    al = zleft[None, :, :] - nodes[:, None, None] * eye_l[None, :, :]
    left = np.linalg.solve(al, kvals)
    t = _right_resolvent_products(left, nodes, zright)
    return np.einsum("m,mij->ij", weights, t)
