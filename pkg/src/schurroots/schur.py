"""Schur complement of the upper-left block, on and off the physical sheet.

Three independent evaluation paths are kept deliberately separate so they
can cross-check each other: a closed form built on the principal-branch
logarithm (physical sheet), contour quadrature (continuation through the
interval), and the jump formula value = physical - 2*pi*i*l*K'(z) inside
the lens between the interval and the contour.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import cauchy_sum, cauchy_sum_many
from .contour import Contour
from .model import SpectralModel


@dataclass(frozen=True)
class SchurEvaluation:
    z: complex
    value: np.ndarray
    path: str  # closed-form | contour-quadrature | sheets-formula


def _on_cut(model: SpectralModel, z: complex) -> bool:
    a, b = model.interval
    return z.imag == 0.0 and a <= z.real <= b


def _cut_moments(a: float, b: float, z: complex, degree: int, pv: bool = False):
    """Moments integral of mu^s/(mu - z) over [a, b] for s = 0..degree.

    Written as the exact division polynomial plus z^s times the logarithm
    of the single ratio (b - z)/(a - z); the principal branch then puts
    the cut exactly on [a, b]. With pv=True (z real inside) the log is
    replaced by the real principal value ln((b - z)/(z - a)).
    """
    if pv:
        log_term = np.log((b - z.real) / (z.real - a)) + 0j
    else:
        log_term = np.log((b - z) / (a - z))
    out = np.empty(degree + 1, dtype=np.complex128)
    zp = 1.0 + 0j  # z^s
    for s in range(degree + 1):
        q = 0.0 + 0j
        for j in range(s):
            q += z ** (s - 1 - j) * (b ** (j + 1) - a ** (j + 1)) / (j + 1)
        out[s] = q + zp * log_term
        zp *= z
    return out


def w1_physical(model: SpectralModel, z: complex) -> np.ndarray:
    """W1(z) = integral of K'(mu)/(mu - z) over the interval, closed form."""
    z = complex(z)
    if _on_cut(model, z):
        raise ValueError(f"z={z} lies on the cut; use w1_boundary")
    a, b = model.interval
    coeffs = model.kprime.coefficients
    moments = _cut_moments(a, b, z, coeffs.shape[0] - 1)
    return np.einsum("s,sij->ij", moments, coeffs)


def w1_boundary(model: SpectralModel, lam: float, approach: int) -> np.ndarray:
    """Boundary values W1(lam + i*approach*0) on the open interval.

    Principal value in closed form plus the jump i*pi*approach*K'(lam).
    """
    if approach not in (1, -1):
        raise ValueError("approach must be +1 or -1")
    a, b = model.interval
    lam = float(lam)
    if not (a < lam < b):
        raise ValueError(f"lambda={lam} not strictly inside ({a}, {b})")
    coeffs = model.kprime.coefficients
    moments = _cut_moments(a, b, complex(lam), coeffs.shape[0] - 1, pv=True)
    pv = np.einsum("s,sij->ij", moments, coeffs)
    return pv + 1j * np.pi * approach * model.kprime(lam)


def m1_physical(model: SpectralModel, z: complex) -> np.ndarray:
    """M1(z) = a1 - z + W1(z) on the physical sheet."""
    z = complex(z)
    eye = np.eye(model.n)
    return model.a1 - z * eye + w1_physical(model, z)


def _too_close(contour: Contour, z: complex):
    k = int(np.argmin(np.abs(contour.nodes - z)))
    dmin = abs(contour.nodes[k] - z)
    return dmin < 10.0 * contour.local_spacing(k)


def m1_continued(model: SpectralModel, contour: Contour, z: complex) -> np.ndarray:
    """Continued value M1(z, Gamma) by contour quadrature.

    Equals m1_physical outside the closed lens region; inside the lens it
    is the continuation from the opposite half-plane. Guard: z must stay
    10 local node spacings away from the quadrature nodes.
    """
    z = complex(z)
    if _too_close(contour, z):
        raise ValueError(f"z={z} too close to the contour for quadrature")
    kvals = model.kprime_values(contour.nodes)
    w1 = cauchy_sum(kvals, contour.nodes, contour.weights, z)
    return model.a1 - z * np.eye(model.n) + w1


def m1_continued_many(model: SpectralModel, contour: Contour, zs) -> np.ndarray:
    """Batched m1_continued over a 1-d array of points."""
    zs = np.asarray(zs, dtype=np.complex128)
    dmin = np.abs(contour.nodes[None, :] - zs[:, None])
    ks = np.argmin(dmin, axis=1)
    for z, k, d in zip(zs, ks, dmin[np.arange(zs.shape[0]), ks]):
        if d < 10.0 * contour.local_spacing(int(k)):
            raise ValueError(f"z={z} too close to the contour for quadrature")
    kvals = model.kprime_values(contour.nodes)
    w1 = cauchy_sum_many(kvals, contour.nodes, contour.weights, zs)
    eye = np.eye(model.n)
    return model.a1[None] - zs[:, None, None] * eye[None] + w1


def sheets_value(model: SpectralModel, z: complex, side: int,
                 contour: Contour | None = None) -> np.ndarray:
    """Continuation into the side-l lens via the jump of the density:
    value = M1(z) - 2*pi*i*l*K'(z).

    Independent of quadrature, so it cross-checks m1_continued. When a
    contour is supplied the lens membership is enforced strictly;
    otherwise only the half-plane is checked.
    """
    z = complex(z)
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    if contour is not None:
        if contour.side != side:
            raise ValueError("contour side disagrees with requested side")
        if not contour.contains_in_lens(z):
            raise ValueError(f"z={z} outside the side {side:+d} lens")
    elif side * z.imag <= 0:
        raise ValueError(f"z={z} not in the open half-plane of side {side:+d}")
    jump = -2j * np.pi * side * model.kprime(z)
    return m1_physical(model, z) + jump


def evaluate(model: SpectralModel, z: complex, path: str = "closed-form",
             contour: Contour | None = None) -> SchurEvaluation:
    """Tagged evaluation record; path selects the computation route."""
    if path == "closed-form":
        value = m1_physical(model, z)
    elif path == "contour-quadrature":
        if contour is None:
            raise ValueError("contour-quadrature path needs a contour")
        value = m1_continued(model, contour, z)
    elif path == "sheets-formula":
        if contour is None:
            raise ValueError("sheets-formula path needs a contour")
        value = sheets_value(model, z, contour.side, contour)
    else:
        raise ValueError(f"unknown path {path!r}")
    return SchurEvaluation(complex(z), value, path)
