"""Adaptive panel quadrature on a real interval.

Used for the integrals that live on the spectral interval itself (Gram
matrices, Riccati right-hand sides, graph pairings). Contour integrals use
fixed Gauss-Legendre nodes owned by the Contour type instead.

The scheme is deterministic: panels are refined worst-first out of a heap,
error per panel is estimated by comparing a 16-node and a 32-node
Gauss-Legendre rule, and ties are broken by insertion order.
"""

import heapq

import numpy as np

from .errors import NumericsError

_RULES: dict = {}


def _rule(n):
    if n not in _RULES:
        _RULES[n] = np.polynomial.legendre.leggauss(n)
    return _RULES[n]


def _panel_value(f, lo, hi, n):
    x, w = _rule(n)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return f(mid + half * x, half * w)


def _split_points(a, b, breaks):
    pts = [a, b]
    for br in breaks or ():
        if a < br < b:
            pts.append(float(br))
    return sorted(set(pts))


def adaptive_quad(f, a, b, rtol=1e-11, breaks=(), max_panels=4000):
    """Integrate a vectorized array-valued function over [a, b].

    f(nodes, weights) must return the weighted panel sum, an ndarray of a
    fixed shape (scalars are fine as 0-d arrays). `breaks` lists interior
    points where the integrand loses smoothness; panels never straddle them.

    Returns (value, info) where info carries the panel count and the final
    error estimate. Raises NumericsError when max_panels is exhausted
    before the estimate drops below rtol * max(1, ||value||).
    """
    if not b > a:
        raise ValueError("empty integration interval")

    counter = 0
    heap = []
    total = None
    err_by_id = {}

    def push(lo, hi):
        nonlocal counter, total
        coarse = _panel_value(f, lo, hi, 16)
        fine = _panel_value(f, lo, hi, 32)
        err = float(np.linalg.norm(np.ravel(fine - coarse)))
        total = fine if total is None else total + fine
        heapq.heappush(heap, (-err, counter, lo, hi, fine))
        err_by_id[counter] = err
        counter += 1

    pts = _split_points(a, b, breaks)
    for lo, hi in zip(pts[:-1], pts[1:]):
        push(lo, hi)

    while True:
        est = sum(err_by_id.values())
        scale = max(1.0, float(np.linalg.norm(np.ravel(total))))
        if est <= rtol * scale:
            return total, {"panels": counter, "error": est}
        if counter >= max_panels:
            raise NumericsError(
                f"adaptive quadrature exhausted {max_panels} panels "
                f"(error estimate {est:.3e}, needed {rtol * scale:.3e})"
            )
        neg_err, cid, lo, hi, fine = heapq.heappop(heap)
        del err_by_id[cid]
        total = total - fine
        mid = 0.5 * (lo + hi)
        push(lo, mid)
        push(mid, hi)
