"""Angular operators, their Gram matrices, and the operator identities.

The angular operator for side l acts from C^n into L2 on the interval as
multiplication by the rational function y(mu) = b(mu) (Z - mu)^{-1}; it is
kept in that symbolic form (b, Z) and every derived quantity is an
adaptive quadrature of rational-polynomial integrands. Nothing here
discretizes the function space.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import resolvent_sum, sandwich_sum
from ._quad import adaptive_quad
from .contour import Contour, admissibility
from .errors import NumericsError
from .model import MatrixPolynomial, SpectralModel
from .rootsolver import RootSolution
from .schur import m1_continued_many


@dataclass(frozen=True)
class RationalAngular:
    """y(mu) = b(mu) @ inv(z - mu), shape (m, n), defined off spec(z)."""

    b: MatrixPolynomial
    z: np.ndarray

    def __call__(self, mus) -> np.ndarray:
        mus = np.asarray(mus, dtype=np.complex128)
        squeeze = mus.ndim == 0
        mus = np.atleast_1d(mus)
        n = self.z.shape[0]
        a = self.z[None] - mus[:, None, None] * np.eye(n)[None]
        bv = self.b(mus)
        out = np.swapaxes(
            np.linalg.solve(np.swapaxes(a, 1, 2), np.swapaxes(bv, 1, 2)), 1, 2
        )
        return out[0] if squeeze else out

    def adjoint_values(self, mus) -> np.ndarray:
        """ytilde(mu) = inv(z^* - mu) @ b#(mu), shape (n, m); equals
        y(mu)^* for real mu."""
        mus = np.asarray(mus, dtype=np.complex128)
        squeeze = mus.ndim == 0
        mus = np.atleast_1d(mus)
        n = self.z.shape[0]
        zh = np.conj(self.z.T)
        a = zh[None] - mus[:, None, None] * np.eye(n)[None]
        bs = self.b.sharp()(mus)
        out = np.linalg.solve(a, bs)
        return out[0] if squeeze else out


@dataclass(frozen=True)
class RiccatiSolution:
    side: int
    y_repr: RationalAngular
    gram: np.ndarray
    y_norm: float
    bstar_y: np.ndarray
    interval: tuple

    @property
    def z_op(self) -> np.ndarray:
        return self.y_repr.z

    def y_values(self, mus) -> np.ndarray:
        return self.y_repr(mus)


@dataclass(frozen=True)
class OmegaOperator:
    side: int
    omega: np.ndarray
    norm: float
    bound: float
    adjoint_residual: float


@dataclass(frozen=True)
class OneInSpectrumVerdict:
    present: bool
    min_distance: float
    graph_intersection_nontrivial: bool


def _segment_distance(lam: complex, interval) -> float:
    a, b = interval
    dx = max(a - lam.real, 0.0, lam.real - b)
    return float(np.hypot(dx, lam.imag))


def _pole_breaks(z: np.ndarray, interval) -> tuple:
    a, b = interval
    eigs = np.linalg.eigvals(z)
    return tuple(float(e.real) for e in eigs if a < e.real < b)


def compute_Y(model: SpectralModel, sol: RootSolution,
              quad_tol: float = 1e-11) -> RiccatiSolution:
    """Assemble the angular operator data for a solved root.

    Gram matrix G = integral of y(mu)^* y(mu) over the interval and
    bstar_y = integral of b#(mu) y(mu), both by adaptive quadrature with
    panels split at Re(spec Z) where the rational factors peak. Requires
    the spectrum of Z to stay clear of the interval (separation guard
    10 * sqrt(quad_tol)); the zero-coupling model short-circuits to exact
    zeros.
    """
    sm = model.scaled(sol.coupling_scale)
    n = model.n
    interval = model.interval
    y_repr = RationalAngular(sm.b, sol.z_op)

    if sm.b.is_zero:
        zeros = np.zeros((n, n), dtype=np.complex128)
        return RiccatiSolution(sol.side, y_repr, zeros, 0.0, zeros, interval)

    eigs = np.linalg.eigvals(sol.z_op)
    sep = min(_segment_distance(complex(e), interval) for e in eigs)
    guard = 10.0 * float(np.sqrt(quad_tol))
    if sep <= guard:
        raise NumericsError(
            f"spectrum within {sep:.3e} of the interval; separation guard {guard:.3e}"
        )

    a, b = interval
    breaks = _pole_breaks(sol.z_op, interval)
    z = sol.z_op
    zh = np.conj(z.T)
    kcoeffs = sm.kprime.coefficients

    def gram_panel(nodes, weights):
        kv = np.asarray(
            _polyval(kcoeffs, nodes), dtype=np.complex128)
        return sandwich_sum(kv, nodes.astype(np.complex128),
                            weights.astype(np.complex128), zh, z)

    def bstar_panel(nodes, weights):
        kv = np.asarray(
            _polyval(kcoeffs, nodes), dtype=np.complex128)
        return resolvent_sum(kv, nodes.astype(np.complex128),
                             weights.astype(np.complex128), z)

    gram, _ = adaptive_quad(gram_panel, a, b, rtol=quad_tol, breaks=breaks)
    bstar_y, _ = adaptive_quad(bstar_panel, a, b, rtol=quad_tol, breaks=breaks)

    gram = 0.5 * (gram + np.conj(gram.T))
    geigs = np.linalg.eigvalsh(gram)
    scale = 1.0 + float(geigs[-1])
    if geigs[0] < -1e-12 * scale:
        raise NumericsError(f"Gram matrix not PSD (min eigenvalue {geigs[0]:.3e})")
    y_norm = float(np.sqrt(max(float(geigs[-1]), 0.0)))
    return RiccatiSolution(sol.side, y_repr, gram, y_norm, bstar_y, interval)


def _polyval(coeffs, mus):
    from ._kernels import polyval_matrix

    return polyval_matrix(coeffs, np.asarray(mus, dtype=np.complex128))


def check_ZAY(model: SpectralModel, sol: RootSolution,
              ric: RiccatiSolution) -> float:
    """Residual of Z = A1 - B^* Y."""
    return float(np.linalg.norm(model.a1 - ric.bstar_y - sol.z_op, 2))


def riccati_residual(model: SpectralModel, ric: RiccatiSolution,
                     sample_mus, adjoint: bool = False) -> float:
    """Pointwise residual of the Riccati equation in multiplication form.

    Direct: mu y(mu) - y(mu) A1 + y(mu) (B^*Y) + b(mu) at each sample.
    Adjoint: the conjugate-transposed identity evaluated through
    ytilde(mu) = y(mu)^*.
    """
    mus = np.asarray(list(sample_mus), dtype=np.float64)
    a1 = model.a1.astype(np.complex128)
    bsy = ric.bstar_y
    worst = 0.0
    if not adjoint:
        yv = ric.y_values(mus)
        bv = ric.y_repr.b(mus)
        res = mus[:, None, None] * yv - yv @ a1 + yv @ bsy + bv
    else:
        yt = ric.y_repr.adjoint_values(mus)
        bs = ric.y_repr.b.sharp()(mus)
        coef = a1 - np.conj(bsy.T)
        res = mus[:, None, None] * yt - coef @ yt + bs
    for r in res:
        worst = max(worst, float(np.linalg.norm(r, 2)))
    return worst


def rational_trials(ric: RiccatiSolution, count: int, seed: int = 0) -> list:
    """Random rational trial pairs (x0 function, x1 vector) for the
    J-orthogonality check. Poles sit a fixed distance off the interval."""
    rng = np.random.default_rng(seed)
    a, b = ric.interval
    m = ric.y_repr.b.rows
    n = ric.y_repr.b.cols
    trials = []
    for _ in range(count):
        pole = complex(rng.uniform(a, b),
                       rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.0))
        c = rng.normal(size=m) + 1j * rng.normal(size=m)
        c /= np.linalg.norm(c)
        x1 = rng.normal(size=n) + 1j * rng.normal(size=n)
        x1 /= np.linalg.norm(x1)

        def x0(mus, pole=pole, c=c):
            mus = np.atleast_1d(np.asarray(mus, dtype=np.complex128))
            return c[None, :] / (mus[:, None] - pole)

        trials.append((x0, x1))
    return trials


def j_orthogonality(ric: RiccatiSolution, trial_vectors) -> float:
    """max over trials of |<x0, Y x1> - <Y^* x0, x1>|.

    Vanishing of this adjointness defect is what makes the two graph
    subspaces J-orthogonal; both sides are adaptive quadratures over the
    interval.
    """
    a, b = ric.interval
    breaks = _pole_breaks(ric.z_op, ric.interval)
    worst = 0.0
    for x0, x1 in trial_vectors:
        def lhs_panel(nodes, weights):
            yv = ric.y_values(nodes)
            yx1 = yv @ x1
            vals = np.einsum("mi,mi->m", np.conj(x0(nodes)), yx1)
            return np.asarray(np.sum(weights * vals))

        def rhs_panel(nodes, weights):
            yt = ric.y_repr.adjoint_values(nodes)
            ytx0 = np.einsum("mij,mj->mi", yt, x0(nodes))
            return np.einsum("m,mi->i", weights, ytx0)

        lhs, _ = adaptive_quad(lhs_panel, a, b, breaks=breaks)
        ystar_x0, _ = adaptive_quad(rhs_panel, a, b, breaks=breaks)
        rhs = complex(np.vdot(ystar_x0, x1))
        worst = max(worst, abs(complex(lhs) - rhs))
    return worst


def compute_Omega(model: SpectralModel, contour: Contour,
                  sol_l: RootSolution, sol_minus_l: RootSolution) -> OmegaOperator:
    """Omega for side l by contour quadrature, with its two contracts.

    Omega = integral over Gamma^l of (Z^(-l)* - mu)^{-1} K'(mu)
    (Z^(l) - mu)^{-1} dmu. Checks the norm bound V0 / (d^2/4) and the
    adjoint relation against the mirror-contour value for side -l.
    """
    if sol_l.side != contour.side or sol_minus_l.side != -contour.side:
        raise ValueError("solution sides must be (l, -l) for the side-l contour")
    if sol_l.coupling_scale != sol_minus_l.coupling_scale:
        raise ValueError("solutions were computed at different coupling scales")
    t = sol_l.coupling_scale
    sm = model.scaled(t)

    def omega_on(cont: Contour, zl: np.ndarray, zr: np.ndarray) -> np.ndarray:
        for zz in (zl, zr):
            eigs = np.linalg.eigvals(zz)
            gap = np.min(np.abs(eigs[:, None] - cont.nodes[None, :]))
            if gap <= 1e-6:
                raise NumericsError(
                    f"spectrum-on-contour violation (gap {gap:.3e})")
        kv = sm.kprime_values(cont.nodes)
        return sandwich_sum(kv, cont.nodes, cont.weights, zl, zr)

    zl_h = np.conj(sol_minus_l.z_op.T)
    omega = omega_on(contour, zl_h, sol_l.z_op)

    rep = admissibility(model, contour, t)
    bound = rep.variation / (0.25 * rep.distance ** 2)
    norm = float(np.linalg.norm(omega, 2))
    if norm >= bound:
        raise NumericsError(f"Omega norm {norm:.6g} violates bound {bound:.6g}")

    mirror = contour.mirror()
    omega_other = omega_on(mirror, np.conj(sol_l.z_op.T), sol_minus_l.z_op)
    adj_resid = float(np.linalg.norm(omega_other - np.conj(omega.T), 2))
    if adj_resid > 1e-8 * (1.0 + norm):
        raise NumericsError(f"adjoint relation residual {adj_resid:.3e}")
    return OmegaOperator(contour.side, omega, norm, bound, adj_resid)


def omega_by_deformation(model: SpectralModel, sol_l: RootSolution,
                         sol_minus_l: RootSolution,
                         quad_tol: float = 1e-11) -> np.ndarray:
    """Omega computed over the interval instead of the contour.

    Legitimate when the integrand is analytic in the lens, which the
    spectral separation guard ensures; used as the independent second
    path for the contour value.
    """
    t = sol_l.coupling_scale
    sm = model.scaled(t)
    a, b = model.interval
    zl = np.conj(sol_minus_l.z_op.T)
    zr = sol_l.z_op
    breaks = tuple(sorted(set(_pole_breaks(zl, model.interval))
                          | set(_pole_breaks(zr, model.interval))))
    kcoeffs = sm.kprime.coefficients

    def panel(nodes, weights):
        kv = _polyval(kcoeffs, nodes)
        return sandwich_sum(kv, nodes.astype(np.complex128),
                            weights.astype(np.complex128), zl, zr)

    omega, _ = adaptive_quad(panel, a, b, rtol=quad_tol, breaks=breaks)
    return omega


def ysn_integral(model: SpectralModel, ric: RiccatiSolution,
                 rtol: float = 1e-9) -> float:
    """The norm-ceiling integral of ||K'(mu)|| ||(Z - mu)^{-1}||^2 dmu."""
    a, b = ric.interval
    z = ric.z_op
    n = z.shape[0]
    breaks = _pole_breaks(z, ric.interval)
    kcoeffs = (ric.y_repr.b.sharp().coefficients, ric.y_repr.b.coefficients)

    def panel(nodes, weights):
        bv = _polyval(kcoeffs[1], nodes)
        kv = np.einsum("mij,mik->mjk", np.conj(bv), bv)
        knorms = np.linalg.norm(kv, ord=2, axis=(1, 2))
        aa = z[None] - nodes[:, None, None] * np.eye(n)[None]
        smin = np.linalg.svd(aa, compute_uv=False)[:, -1]
        return np.asarray(np.sum(weights * knorms / smin ** 2))

    val, _ = adaptive_quad(panel, a, b, rtol=rtol, breaks=breaks)
    return float(np.real(val))


def factor_F1(model: SpectralModel, contour: Contour, sol: RootSolution,
              z: complex) -> np.ndarray:
    """F1(z, Gamma) = I + integral of K'(mu)(Z - mu)^{-1}(mu - z)^{-1} dmu.

    The factorization M1(z, Gamma) = F1(z, Gamma)(Z - z) holds wherever
    both sides are defined; F1 is invertible on the d/2-neighborhood of
    sigma1.
    """
    from ._kernels import resolvent_cauchy_sum
    from .schur import _too_close

    z = complex(z)
    if _too_close(contour, z):
        raise ValueError(f"z={z} too close to the contour for quadrature")
    sm = model.scaled(sol.coupling_scale)
    kv = sm.kprime_values(contour.nodes)
    acc = resolvent_cauchy_sum(kv, contour.nodes, contour.weights, sol.z_op, z)
    return np.eye(model.n, dtype=np.complex128) + acc


def reconstruct_from_contour(model: SpectralModel, contour: Contour,
                             sol: RootSolution, gamma_spec=None,
                             num_nodes: int = 256):
    """Moments of -[M1(z, Gamma)]^{-1}/(2 pi i) around spec(Z).

    Returns (h0, h1, z_reconstructed): the zeroth moment equals
    (I - Omega)^{-1}, the first is its z-weighted sibling, and
    z_reconstructed = h1 @ inv(h0) recovers the operator root from
    nothing but contour data. gamma_spec overrides the default circle as
    (center, radius); the circle must enclose spec(Z) and stay inside the
    d/2-neighborhood of sigma1.
    """
    from .contour import distance_to_sigma1

    d = distance_to_sigma1(model, contour)
    eigs = np.linalg.eigvals(sol.z_op)
    if gamma_spec is None:
        center = complex(np.mean(eigs))
        spread = float(np.max(np.abs(eigs - center)))
        cap = 0.5 * d - _segment_eig_distance(center, model.sigma1)
        if cap <= 0:
            raise ValueError(
                "no default circle fits the d/2-neighborhood; pass gamma_spec")
        base = 1.5 * spread if spread > 0 else 0.25 * cap
        radius = min(base, 0.95 * cap)
    else:
        center, radius = complex(gamma_spec[0]), float(gamma_spec[1])

    spread = float(np.max(np.abs(eigs - center)))
    if spread >= radius:
        raise ValueError(
            f"circle radius {radius:.6g} does not enclose spec(Z) (need > {spread:.6g})")

    theta = 2.0 * np.pi * np.arange(num_nodes) / num_nodes
    ring = center + radius * np.exp(1j * theta)
    worst = max(_segment_eig_distance(complex(zz), model.sigma1) for zz in ring)
    if worst > 0.5 * d + 1e-12:
        raise ValueError(
            f"circle violates containment: reaches {worst:.6g} > d/2 = {0.5 * d:.6g}")

    sm = model.scaled(sol.coupling_scale)
    mvals = m1_continued_many(sm, contour, ring)
    try:
        minv = np.linalg.inv(mvals)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"singular continued value on the circle: {exc}") from exc
    phase = np.exp(1j * theta)
    h0 = -(radius / num_nodes) * np.einsum("p,pij->ij", phase, minv)
    h1 = -(radius / num_nodes) * np.einsum("p,pij->ij", phase * ring, minv)
    try:
        z_rec = np.linalg.solve(h0.T, h1.T).T
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"h0 singular: {exc}") from exc
    return h0, h1, z_rec


def _segment_eig_distance(z: complex, sigma1) -> float:
    return float(min(abs(z - complex(lam)) for lam in np.atleast_1d(sigma1)))


def check_one_in_spectrum(ric: RiccatiSolution, tol: float = 1e-8) -> OneInSpectrumVerdict:
    """Distance of spec(Y^*Y) to the point 1; presence flags that the two
    graph subspaces intersect nontrivially."""
    geigs = np.linalg.eigvalsh(ric.gram)
    dist = float(np.min(np.abs(geigs - 1.0)))
    present = dist <= tol
    return OneInSpectrumVerdict(present, dist, present)
