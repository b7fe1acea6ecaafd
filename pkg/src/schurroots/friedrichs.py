"""Closed-form scalar oracle: rank-one constant coupling on a symmetric
interval.

For interval [-alpha, alpha], diagonal entry a1 = 0 and constant coupling
b > 0, everything is explicit: the continued Schur complement is
a1 - z + b^2 Log((alpha - z)/(-alpha - z)), its unique root in each
half-plane is -il*y with y the positive solution of y = 2 b^2 arctan(alpha/y),
the angular function is -b/(mu + il*y), and its norm is exactly 1. This
module is ground truth for the generic machinery and deliberately shares
no code with it.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError, NumericsError


@dataclass(frozen=True)
class FriedrichsParams:
    alpha: float
    a1: float
    b: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ModelError(f"alpha must be positive, got {self.alpha}")
        if not abs(self.a1) < self.alpha:
            raise ModelError(f"a1={self.a1} must lie strictly inside (-alpha, alpha)")
        if self.b < 0:
            raise ModelError(f"b must be nonnegative, got {self.b}")


def solve_y(alpha: float, b: float) -> float:
    """Positive fixed point of y = 2 b^2 arctan(alpha / y).

    Safeguarded Newton on f(y) = y - 2 b^2 arctan(alpha/y) inside the
    bracket (0, b^2 pi]; f is increasing, f(0+) < 0, f(b^2 pi) >= 0, so
    the root is unique and bracketing never fails.
    """
    if b <= 0:
        raise ModelError(f"b must be positive, got {b}")
    alpha = float(alpha)
    b2 = float(b) * float(b)
    hi = b2 * math.pi
    lo = min(1e-300, hi)

    def f(y):
        return y - 2.0 * b2 * math.atan2(alpha, y)

    def fp(y):
        return 1.0 + 2.0 * b2 * alpha / (y * y + alpha * alpha)

    y = 0.5 * hi
    for _ in range(200):
        fy = f(y)
        if fy > 0:
            hi = y
        else:
            lo = y
        step = fy / fp(y)
        yn = y - step
        if not (lo < yn < hi):
            yn = 0.5 * (lo + hi)
        if abs(yn - y) <= 1e-16 * max(1.0, abs(yn)):
            y = yn
            break
        y = yn
    if abs(f(y)) > 1e-14 * max(1.0, y):
        raise NumericsError(f"fixed-point residual {f(y):.3e} did not converge")
    return y


def closed_m1(params: FriedrichsParams, z: complex) -> complex:
    """a1 - z + b^2 Log((alpha - z)/(-alpha - z)), cut on [-alpha, alpha]."""
    z = complex(z)
    if z.imag == 0.0 and abs(z.real) <= params.alpha:
        raise ValueError(f"z={z} on the cut")
    ratio = (params.alpha - z) / (-params.alpha - z)
    return params.a1 - z + params.b ** 2 * complex(np.log(ratio))


def winding_count(params: FriedrichsParams, side: int, nodes: int = 10000) -> int:
    """Zeros of closed_m1 inside a large side-l rectangle, by the argument
    principle on a positively oriented polyline."""
    al = params.alpha
    y_scale = solve_y(params.alpha, params.b) if params.b > 0 else 0.1
    eps = 0.5 * y_scale
    top = max(3.0 * al, 2.0 * params.b ** 2 * math.pi)
    corners = [complex(-3 * al, eps), complex(3 * al, eps),
               complex(3 * al, top), complex(-3 * al, top),
               complex(-3 * al, eps)]
    if side == -1:
        corners = [z.conjugate() for z in corners]
        corners.reverse()
    pts = []
    per_edge = max(nodes // 4, 64)
    for p, q in zip(corners[:-1], corners[1:]):
        s = np.linspace(0.0, 1.0, per_edge, endpoint=False)
        pts.append(p + (q - p) * s)
    path = np.concatenate(pts)
    vals = np.array([closed_m1(params, z) for z in path])
    ratios = np.roll(vals, -1) / vals
    total = float(np.sum(np.angle(ratios))) / (2.0 * math.pi)
    w = round(total)
    if abs(total - w) > 0.1:
        raise NumericsError(f"winding estimate {total} too far from an integer")
    return int(w)


def oracle_solution(params: FriedrichsParams):
    """(z_plus, z_minus, y_norm, y_function) for the a1 = 0 case.

    z_plus is the side +1 root -i y, z_minus its mirror +i y; y_norm is
    exactly 1; y_function(mu, side) = -b/(mu + i*side*y). Uniqueness of
    each root in its half-plane is confirmed by a winding count before
    returning.
    """
    if params.a1 != 0.0:
        raise ModelError("closed forms require a1 = 0; use the generic solver")
    if params.b <= 0:
        raise ModelError("oracle needs b > 0")
    y = solve_y(params.alpha, params.b)
    for side in (1, -1):
        w = winding_count(params, side)
        if w != 1:
            raise NumericsError(f"winding count {w} != 1 on side {side:+d}")

    def y_function(mu, side=1):
        mus = np.asarray(mu, dtype=np.complex128)
        return -params.b / (mus + 1j * side * y)

    return -1j * y, 1j * y, 1.0, y_function
