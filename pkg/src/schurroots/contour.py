"""Contours for analytic continuation through the essential spectrum.

A contour for side l joins the interval endpoints through the half-plane
of sign l, traversed left to right, and carries Gauss-Legendre nodes and
complex weights so that sum(weights) reproduces integral of dmu over the
path. Two kinds are supported: a semicircle (depth fixed at half the
interval length) and a three-segment rectangle of adjustable depth.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, ModelError
from .model import SpectralModel

_LEG_CACHE: dict = {}


def _leggauss(n):
    if n not in _LEG_CACHE:
        _LEG_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _LEG_CACHE[n]


@dataclass(frozen=True)
class Contour:
    side: int
    kind: str
    depth: float
    endpoints: tuple
    nodes: np.ndarray
    weights: np.ndarray
    orientation: str
    segment_slices: tuple

    def __post_init__(self):
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    @property
    def num_nodes(self) -> int:
        return self.nodes.shape[0]

    def local_spacing(self, k: int) -> float:
        """Distance from node k to its nearest neighbor within the same
        segment, used by the quadrature-degeneracy guards."""
        for sl in self.segment_slices:
            if sl.start <= k < sl.stop:
                gaps = []
                if k > sl.start:
                    gaps.append(abs(self.nodes[k] - self.nodes[k - 1]))
                if k + 1 < sl.stop:
                    gaps.append(abs(self.nodes[k + 1] - self.nodes[k]))
                return max(gaps)
        raise IndexError(k)

    def contains_in_lens(self, z: complex) -> bool:
        """Whether z lies strictly between the interval and the contour."""
        a, b = self.endpoints
        x, y = z.real, z.imag
        if self.side * y <= 0:
            return False
        if self.kind == "semicircle":
            c = 0.5 * (a + b)
            return abs(z - c) < self.depth
        if self.kind == "rectangle":
            return a < x < b and self.side * y < self.depth
        raise ValueError(f"unknown contour kind {self.kind!r}")

    def mirror(self) -> "Contour":
        """The reflected contour for the opposite side."""
        return Contour(
            -self.side,
            self.kind,
            self.depth,
            self.endpoints,
            np.conj(self.nodes),
            np.conj(self.weights),
            self.orientation,
            self.segment_slices,
        )


def _segment_nodes(p, q, nodes_per_unit):
    length = abs(q - p)
    count = max(200, int(math.ceil(nodes_per_unit * length)))
    x, w = _leggauss(count)
    mid = 0.5 * (p + q)
    half = 0.5 * (q - p)
    return mid + half * x, w * half


def make_contour(model: SpectralModel, side: int, kind: str = "semicircle",
                 depth=None, nodes_per_unit: int = 200) -> Contour:
    """Build the side-l contour with Gauss-Legendre quadrature.

    Per segment the node count is max(200, nodes_per_unit * arclength).
    The weight sum is checked against the exact path integral of dmu,
    which equals the interval length.
    """
    if side not in (1, -1):
        raise ValueError(f"side must be +1 or -1, got {side}")
    a, b = model.interval
    length = b - a

    if kind == "semicircle":
        rho = 0.5 * length
        if depth is not None and abs(depth - rho) > 1e-12 * (1.0 + rho):
            raise ValueError(
                f"semicircle depth is fixed at half the interval length ({rho}), got {depth}"
            )
        c = 0.5 * (a + b)
        arclen = math.pi * rho
        count = max(200, int(math.ceil(nodes_per_unit * arclen)))
        x, w = _leggauss(count)
        theta = 0.5 * math.pi * (1.0 - x)
        phase = np.exp(1j * theta)
        nodes = c + rho * phase
        weights = w * (1j * rho * phase) * (-0.5 * math.pi)
        if side == -1:
            nodes = np.conj(nodes)
            weights = np.conj(weights)
        slices = (slice(0, count),)
        depth_val = rho
    elif kind == "rectangle":
        if depth is None:
            raise ValueError("rectangle contour requires a depth")
        h = float(depth)
        if h <= 0:
            raise ValueError(f"depth must be positive, got {depth}")
        top = 1j * side * h
        corners = [a, a + top, b + top, b]
        node_parts, weight_parts, slices = [], [], []
        start = 0
        for p, q in zip(corners[:-1], corners[1:]):
            seg_nodes, seg_w = _segment_nodes(p, q, nodes_per_unit)
            node_parts.append(seg_nodes)
            weight_parts.append(seg_w)
            slices.append(slice(start, start + seg_nodes.shape[0]))
            start += seg_nodes.shape[0]
        nodes = np.concatenate(node_parts)
        weights = np.concatenate(weight_parts)
        depth_val = h
    else:
        raise ValueError(f"unknown contour kind {kind!r}")

    total = complex(np.sum(weights))
    if abs(total - length) > 1e-10 * (1.0 + length + 2.0 * depth_val):
        raise ModelError(f"contour weight sum {total} misses interval length {length}")

    return Contour(int(side), kind, float(depth_val), (a, b),
                   np.ascontiguousarray(nodes, dtype=np.complex128),
                   np.ascontiguousarray(weights, dtype=np.complex128),
                   "left-to-right", tuple(slices))


def variation(model: SpectralModel, contour: Contour) -> float:
    """V0 = integral over the contour of ||K'(mu)|| |dmu| (spectral norm)."""
    kvals = model.kprime_values(contour.nodes)
    norms = np.linalg.norm(kvals, ord=2, axis=(1, 2))
    return float(np.sum(np.abs(contour.weights) * norms))


def _point_segment_distance(p: complex, q: complex, x: complex) -> float:
    d = q - p
    denom = abs(d) ** 2
    if denom == 0.0:
        return abs(x - p)
    t = ((x - p).real * d.real + (x - p).imag * d.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(x - (p + t * d))


def _dense_distance(contour: Contour, lam: float, num: int = 10000) -> float:
    # sampling fallback, kept as the oracle for the closed forms
    idx = np.linspace(0, contour.num_nodes - 1, min(num, contour.num_nodes)).astype(int)
    return float(np.min(np.abs(contour.nodes[idx] - lam)))


def distance_to_sigma1(model: SpectralModel, contour: Contour) -> float:
    """dist(sigma1, contour) by exact per-kind geometry.

    Semicircle: | |lam - center| - radius |. Rectangle: minimum over the
    three segments of the point-segment distance. A dense-sampling
    fallback covers any future kind and doubles as the test oracle.
    """
    a, b = contour.endpoints
    dists = []
    for lam in model.sigma1:
        lam = float(lam)
        if contour.kind == "semicircle":
            c = 0.5 * (a + b)
            dists.append(abs(abs(lam - c) - contour.depth))
        elif contour.kind == "rectangle":
            top = 1j * contour.side * contour.depth
            corners = [a, a + top, b + top, b]
            dists.append(min(
                _point_segment_distance(p, q, complex(lam))
                for p, q in zip(corners[:-1], corners[1:])
            ))
        else:
            dists.append(_dense_distance(contour, lam))
    return float(min(dists))


@dataclass(frozen=True)
class AdmissibilityReport:
    variation: float
    distance: float
    omega: float
    admissible: bool
    r_min: float | None
    r_max: float | None


def admissibility(model: SpectralModel, contour: Contour,
                  coupling_scale: float = 1.0) -> AdmissibilityReport:
    """Contraction test V0 < d^2/4 and the two enclosure radii.

    r_min = d/2 - sqrt(d^2/4 - V0) bounds how far roots move from sigma1,
    r_max = d - sqrt(V0) bounds the enclosure from above. The coupling
    scale t enters through V0 -> t^2 V0.
    """
    t = float(coupling_scale)
    v0 = variation(model, contour) * t * t
    d = distance_to_sigma1(model, contour)
    omega = d * d - 4.0 * v0
    admissible = omega > 0.0
    if admissible:
        r_min = 0.5 * d - math.sqrt(0.25 * d * d - v0)
        r_max = d - math.sqrt(v0)
    else:
        r_min = None
        r_max = None
    return AdmissibilityReport(v0, d, omega, admissible, r_min, r_max)


def require_admissible(model: SpectralModel, contour: Contour,
                       coupling_scale: float = 1.0) -> AdmissibilityReport:
    rep = admissibility(model, contour, coupling_scale)
    if not rep.admissible:
        raise AdmissibilityError(
            f"contour not admissible: V0={rep.variation:.6g} >= d^2/4={rep.distance ** 2 / 4:.6g}",
            report=rep,
        )
    return rep


def optimize_r0(model: SpectralModel, side: int, family,
                nodes_per_unit: int = 150, coupling_scale: float = 1.0,
                samples: int = 33, tol: float = 1e-6):
    """Minimize r_min over a one-parameter contour family.

    family is either "semicircle" (a singleton, returned directly) or
    ("rectangle", (depth_lo, depth_hi)). Coarse scan plus golden-section
    refinement; deterministic. Returns (best_contour, r0) where r0 is the
    optimal localization radius. Raises AdmissibilityError when no member
    of the family is admissible.
    """
    def r_of(contour):
        rep = admissibility(model, contour, coupling_scale)
        return rep.r_min if rep.admissible else math.inf

    if family == "semicircle":
        contour = make_contour(model, side, "semicircle", nodes_per_unit=nodes_per_unit)
        r0 = r_of(contour)
        if not math.isfinite(r0):
            raise AdmissibilityError("semicircle contour is not admissible",
                                     report=admissibility(model, contour, coupling_scale))
        return contour, r0

    kind, (lo, hi) = family
    if kind != "rectangle":
        raise ValueError(f"unknown contour family {family!r}")
    if not 0 < lo < hi:
        raise ValueError("depth range must satisfy 0 < lo < hi")

    depths = np.linspace(lo, hi, samples)
    values = [r_of(make_contour(model, side, "rectangle", d, nodes_per_unit)) for d in depths]
    best = int(np.argmin(values))
    if not math.isfinite(values[best]):
        raise AdmissibilityError("no admissible depth in the requested range", report=None)

    left = depths[max(best - 1, 0)]
    right = depths[min(best + 1, samples - 1)]
    phi = 0.5 * (math.sqrt(5.0) - 1.0)
    x1 = right - phi * (right - left)
    x2 = left + phi * (right - left)
    f1 = r_of(make_contour(model, side, "rectangle", x1, nodes_per_unit))
    f2 = r_of(make_contour(model, side, "rectangle", x2, nodes_per_unit))
    while right - left > tol * max(1.0, right):
        if f1 <= f2:
            right, x2, f2 = x2, x1, f1
            x1 = right - phi * (right - left)
            f1 = r_of(make_contour(model, side, "rectangle", x1, nodes_per_unit))
        else:
            left, x1, f1 = x1, x2, f2
            x2 = left + phi * (right - left)
            f2 = r_of(make_contour(model, side, "rectangle", x2, nodes_per_unit))
    depth = 0.5 * (left + right)
    contour = make_contour(model, side, "rectangle", depth, nodes_per_unit)
    r0 = r_of(contour)
    if not math.isfinite(r0):
        raise AdmissibilityError("refined depth lost admissibility", report=None)
    return contour, r0
