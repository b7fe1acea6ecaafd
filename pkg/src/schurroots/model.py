"""Model layer.

A model couples the multiplication operator by mu on L2(Delta0; C^m)
(entries of the 2x2 block matrix: upper-left) to a finite self-adjoint
matrix a1 (lower-right) through multiplication by a matrix polynomial
b(mu) of shape (m, n). Everything downstream consumes the derived
coupling density K'(mu) = b#(mu) b(mu), a matrix polynomial with
Hermitian coefficients; b#(mu) := (b(conj(mu)))^* realized
coefficient-wise, so K' is entire and equals b(mu)^* b(mu) on the axis.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._kernels import polyval_matrix
from .errors import ModelError

_HERM_TOL = 1e-12


@dataclass(frozen=True)
class MatrixPolynomial:
    """Polynomial with constant matrix coefficients, lowest degree first.

    coefficients has shape (degree+1, rows, cols).
    """

    coefficients: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coefficients, dtype=np.complex128)
        if arr.ndim != 3 or arr.shape[0] == 0:
            raise ModelError("coefficients must have shape (degree+1, rows, cols)")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)

    @property
    def rows(self) -> int:
        return self.coefficients.shape[1]

    @property
    def cols(self) -> int:
        return self.coefficients.shape[2]

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def __call__(self, mu):
        mus = np.asarray(mu, dtype=np.complex128)
        if mus.ndim == 0:
            return polyval_matrix(self.coefficients, mus.reshape(1))[0]
        return polyval_matrix(self.coefficients, mus)

    def sharp(self) -> "MatrixPolynomial":
        """Coefficient-wise conjugate transpose: p#(mu) = (p(conj(mu)))^*."""
        coeffs = np.conj(np.swapaxes(self.coefficients, 1, 2))
        return MatrixPolynomial(coeffs)

    def scaled(self, t: float) -> "MatrixPolynomial":
        return MatrixPolynomial(self.coefficients * t)

    def antiderivative(self) -> "MatrixPolynomial":
        k = self.coefficients.shape[0]
        powers = np.arange(1, k + 1, dtype=np.float64)
        zero = np.zeros((1,) + self.coefficients.shape[1:], dtype=np.complex128)
        body = self.coefficients / powers[:, None, None]
        return MatrixPolynomial(np.concatenate([zero, body], axis=0))


@dataclass(frozen=True)
class CouplingDensity:
    """The derived density K'(mu), a matrix polynomial with Hermitian
    coefficients, PSD for real mu."""

    kprime: MatrixPolynomial

    def __call__(self, mu):
        return self.kprime(mu)

    @property
    def coefficients(self) -> np.ndarray:
        return self.kprime.coefficients


def _as_matrix_polynomial(b) -> MatrixPolynomial:
    if isinstance(b, MatrixPolynomial):
        return b
    coeffs = [np.atleast_2d(np.asarray(c, dtype=np.complex128)) for c in b]
    return MatrixPolynomial(np.stack(coeffs, axis=0))


@dataclass(frozen=True)
class SpectralModel:
    delta0: tuple
    a1: np.ndarray
    b: MatrixPolynomial
    feshbach: bool

    @property
    def interval(self) -> tuple:
        return self.delta0

    @property
    def n(self) -> int:
        return self.a1.shape[0]

    @property
    def m(self) -> int:
        return self.b.rows

    @cached_property
    def sigma1(self) -> np.ndarray:
        return np.sort(np.linalg.eigvalsh(self.a1))

    @cached_property
    def kprime(self) -> CouplingDensity:
        return kprime_of(self)

    def kprime_values(self, mus) -> np.ndarray:
        return polyval_matrix(self.kprime.coefficients, np.asarray(mus, dtype=np.complex128))

    def scaled(self, t: float) -> "SpectralModel":
        """Model with the coupling multiplied by t (a1 and Delta0 unchanged)."""
        if t == 1.0:
            return self
        return SpectralModel(self.delta0, self.a1, self.b.scaled(float(t)), self.feshbach)


def build_model(delta0, a1, b) -> SpectralModel:
    """Validate and assemble a model.

    delta0: (lo, hi) with lo < hi. a1: real symmetric (n, n). b: an (m, n)
    MatrixPolynomial with real coefficients, or a list of coefficient
    matrices lowest degree first. The feshbach flag records whether every
    eigenvalue of a1 lies strictly inside delta0.
    """
    lo, hi = float(delta0[0]), float(delta0[1])
    if not lo < hi:
        raise ModelError(f"delta0 must be an interval with lo < hi, got ({lo}, {hi})")

    a1c = np.atleast_2d(np.asarray(a1, dtype=np.complex128))
    if np.max(np.abs(a1c.imag)) > _HERM_TOL * (1.0 + np.max(np.abs(a1c))):
        raise ModelError("a1 must be real symmetric")
    a1m = a1c.real.copy()
    if a1m.ndim != 2 or a1m.shape[0] != a1m.shape[1]:
        raise ModelError("a1 must be square")
    if np.max(np.abs(a1m - a1m.T)) > _HERM_TOL * (1.0 + np.max(np.abs(a1m))):
        raise ModelError("a1 must be symmetric")
    a1m = 0.5 * (a1m + a1m.T)
    a1m.setflags(write=False)

    poly = _as_matrix_polynomial(b)
    if np.max(np.abs(poly.coefficients.imag)) > _HERM_TOL * (1.0 + np.max(np.abs(poly.coefficients))):
        raise ModelError("coupling coefficients must be real")
    poly = MatrixPolynomial(poly.coefficients.real.astype(np.complex128))
    if poly.cols != a1m.shape[0]:
        raise ModelError(
            f"coupling maps C^{a1m.shape[0]} but has {poly.cols} columns"
        )

    eigs = np.linalg.eigvalsh(a1m)
    feshbach = bool(np.all((eigs > lo) & (eigs < hi)))

    model = SpectralModel((lo, hi), a1m, poly, feshbach)
    _validate_density(model)
    return model


def kprime_of(model: SpectralModel) -> CouplingDensity:
    """K'(mu) = b#(mu) b(mu) as an explicit matrix polynomial.

    Coefficient s is sum over k+j=s of C_k^* C_j, Hermitian by symmetry of
    the index pairing; each is symmetrized to kill rounding skew.
    """
    c = model.b.coefficients
    deg = c.shape[0] - 1
    n = model.n
    out = np.zeros((2 * deg + 1, n, n), dtype=np.complex128)
    for k in range(deg + 1):
        ck = np.conj(c[k].T)
        for j in range(deg + 1):
            out[k + j] += ck @ c[j]
    out = 0.5 * (out + np.conj(np.swapaxes(out, 1, 2)))
    return CouplingDensity(MatrixPolynomial(out))


def _validate_density(model: SpectralModel, grid_points: int = 1000) -> None:
    lo, hi = model.interval
    mus = np.linspace(lo, hi, grid_points)
    kvals = model.kprime_values(mus)
    bvals = model.b(mus)
    direct = np.einsum("mij,mik->mjk", np.conj(bvals), bvals)
    scale = 1.0 + np.max(np.einsum("mij,mij->m", np.conj(bvals), bvals).real)
    if np.max(np.abs(kvals - direct)) > _HERM_TOL * scale:
        raise ModelError("derived density disagrees with b(mu)^* b(mu) on the axis")
    herm_gap = np.max(np.abs(kvals - np.conj(np.swapaxes(kvals, 1, 2))))
    if herm_gap > _HERM_TOL * scale:
        raise ModelError("density not Hermitian on the real axis")
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (kvals + np.conj(np.swapaxes(kvals, 1, 2))))))
    if min_eig < -_HERM_TOL * scale:
        raise ModelError(f"density not PSD on the real axis (min eigenvalue {min_eig:.3e})")


def kb_cumulative(model: SpectralModel, mu: float) -> np.ndarray:
    """Cumulative mass: integral of K' from the left endpoint to mu,
    via the exact polynomial antiderivative."""
    lo, hi = model.interval
    if not (lo <= mu <= hi):
        raise ModelError(f"mu={mu} outside [{lo}, {hi}]")
    anti = model.kprime.kprime.antiderivative()
    out = anti(complex(mu)) - anti(complex(lo))
    return 0.5 * (out + np.conj(out.T))


@dataclass(frozen=True)
class SemiboundednessVerdict:
    passed: bool
    min_eigenvalue: float
    c0: float
    samples: int


def check_semibounded_density(model: SpectralModel, region, c0: float) -> SemiboundednessVerdict:
    """Check lambda_min(K'(mu)) >= c0 at every sample point of region."""
    pts = np.asarray(list(region), dtype=np.float64)
    if pts.size == 0:
        raise ModelError("empty region")
    if c0 <= 0:
        raise ModelError("c0 must be positive")
    kvals = model.kprime_values(pts)
    kvals = 0.5 * (kvals + np.conj(np.swapaxes(kvals, 1, 2)))
    min_eig = float(np.min(np.linalg.eigvalsh(kvals)))
    return SemiboundednessVerdict(min_eig >= c0, min_eig, float(c0), int(pts.size))
