"""Fixed-point solver for the operator root, plus spectrum bookkeeping.

The root is the solution of X = t^2 W1(A1 + X, Gamma) for the side-l
contour Gamma; Z = A1 + X then carries the spectral points that moved off
the interval. Everything here is a contraction-mapping argument made
concrete: admissibility gives the ball, Picard iterates inside it.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._kernels import resolvent_sum
from .contour import Contour, admissibility, require_admissible
from .errors import NumericsError
from .model import SpectralModel
from .schur import m1_physical

_SPEC_GUARD = 1e-6


@dataclass(frozen=True)
class RootSolution:
    side: int
    x: np.ndarray
    z_op: np.ndarray
    coupling_scale: float
    iterations: int
    final_step_norm: float
    r_min: float
    r_max: float
    residual: float

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.z_op)


@dataclass(frozen=True)
class ClassifiedEigenvalue:
    eigenvalue: complex
    multiplicity: int
    label: str  # real | resonance | physical-complex
    physical_residual: float | None = None
    ambiguous: bool = False


@dataclass(frozen=True)
class SpectrumClassification:
    entries: tuple

    def count(self, label: str) -> int:
        return sum(e.multiplicity for e in self.entries if e.label == label)


def transformator(model: SpectralModel, contour: Contour, zmat) -> np.ndarray:
    """W1(Z, Gamma) = -integral over Gamma of K'(mu) (Z - mu)^{-1} dmu.

    The spectrum of zmat must stay clear of the quadrature nodes
    (distance > 1e-6), otherwise the resolvent blows through the rule.
    """
    zmat = np.asarray(zmat, dtype=np.complex128)
    eigs = np.linalg.eigvals(zmat)
    gap = np.min(np.abs(eigs[:, None] - contour.nodes[None, :]))
    if gap <= _SPEC_GUARD:
        raise NumericsError(
            f"spectrum-on-contour violation: eigenvalue within {gap:.3e} of a node"
        )
    kvals = model.kprime_values(contour.nodes)
    return -resolvent_sum(kvals, contour.nodes, contour.weights, zmat)


def _picard(model: SpectralModel, contour: Contour, t: float,
            tol: float, max_iter: int, x0: np.ndarray) -> RootSolution:
    rep = require_admissible(model, contour, t)
    n = model.n
    kvals = model.kprime_values(contour.nodes) * (t * t)
    nodes, weights = contour.nodes, contour.weights
    a1 = model.a1.astype(np.complex128)

    x = np.asarray(x0, dtype=np.complex128).copy()
    step = np.inf
    for it in range(1, max_iter + 1):
        z = a1 + x
        eigs = np.linalg.eigvals(z)
        gap = np.min(np.abs(eigs[:, None] - nodes[None, :]))
        if gap <= _SPEC_GUARD:
            raise NumericsError(
                f"spectrum-on-contour violation during iteration (gap {gap:.3e})"
            )
        xn = -resolvent_sum(kvals, nodes, weights, z)
        step = float(np.linalg.norm(xn - x, 2))
        x = xn
        norm_x = float(np.linalg.norm(x, 2))
        if norm_x > rep.r_max + 1e-9:
            raise NumericsError(
                f"iterate escaped the r_max ball ({norm_x:.6g} > {rep.r_max:.6g})"
            )
        if step <= tol * max(1.0, norm_x):
            break
    else:
        raise NumericsError(f"no convergence in {max_iter} iterations (step {step:.3e})")

    # independent residual confirmation at the converged point
    resid_mat = x + resolvent_sum(kvals, nodes, weights, a1 + x)
    residual = float(np.linalg.norm(resid_mat, 2))
    norm_x = float(np.linalg.norm(x, 2))
    if residual > max(2.0 * tol, 1e-13) * max(1.0, norm_x):
        raise NumericsError(f"fixed-point residual {residual:.3e} above tolerance")
    if norm_x > rep.r_min + 1e-9:
        raise NumericsError(
            f"solution left the r_min ball ({norm_x:.6g} > {rep.r_min:.6g})"
        )
    return RootSolution(contour.side, x, a1 + x, float(t), it, step,
                        rep.r_min, rep.r_max, residual)


def solve_basic(model: SpectralModel, contour: Contour, t: float = 1.0,
                tol: float = 1e-12, max_iter: int = 500) -> RootSolution:
    """Solve X = t^2 W1(A1 + X, Gamma) by Picard iteration from X = 0.

    Requires admissibility at coupling scale t. Convergence is geometric;
    the result is confirmed by an independent residual evaluation and the
    containment ||X|| <= r_min.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"coupling scale t={t} outside [0, 1]")
    x0 = np.zeros((model.n, model.n), dtype=np.complex128)
    return _picard(model, contour, float(t), tol, max_iter, x0)


def _label_for(lam: complex, side: int, tau: float) -> str:
    if abs(lam.imag) <= tau:
        return "real"
    return "resonance" if (lam.imag > 0) == (side > 0) else "physical-complex"


def _physical_residual(model: SpectralModel, t: float, lam: complex) -> float:
    scaled = model.scaled(t)
    svals = np.linalg.svd(m1_physical(scaled, lam), compute_uv=False)
    return float(svals[-1])


def classify(model: SpectralModel, contour: Contour, sol: RootSolution,
             tau_real: float | None = None,
             cluster_radius: float | None = None) -> SpectrumClassification:
    """Label the spectrum of Z: real band, resonance side, physical side.

    Eigenvalues within the clustering radius are grouped into one entry
    with the corresponding multiplicity. Each physical-complex entry
    records the smallest singular value of the physical-sheet Schur
    complement at the eigenvalue; genuine eigenvalues make it vanish.
    """
    if sol.side != contour.side:
        raise ValueError("solution and contour sides disagree")
    a_norm = float(np.linalg.norm(model.a1, 2))
    tau = tau_real if tau_real is not None else 1e-8 * (1.0 + a_norm)
    eigs = np.sort_complex(np.linalg.eigvals(sol.z_op))
    scale = 1.0 + float(np.max(np.abs(eigs)))
    radius = cluster_radius if cluster_radius is not None else 1e-8 * scale

    clusters: list[list[complex]] = []
    for lam in eigs:
        if clusters and abs(lam - np.mean(clusters[-1])) <= radius:
            clusters[-1].append(lam)
        else:
            clusters.append([lam])

    entries = []
    for group in clusters:
        lam = complex(np.mean(group))
        label = _label_for(lam, contour.side, tau)
        resid = None
        if label == "physical-complex":
            resid = _physical_residual(model, sol.coupling_scale, lam)
        entries.append(ClassifiedEigenvalue(lam, len(group), label, resid))
    return SpectrumClassification(tuple(entries))


def _pair(prev: np.ndarray, curr: np.ndarray) -> np.ndarray:
    cost = np.abs(curr[None, :] - prev[:, None])
    _, perm = linear_sum_assignment(cost)
    return perm


def homotopy_path(model: SpectralModel, contour: Contour, t_grid,
                  tol: float = 1e-12, max_iter: int = 500,
                  tau_real: float | None = None) -> list:
    """Track the root along the coupling homotopy t in t_grid.

    Each solve warm-starts from the previous X. Returned entries are
    (t, RootSolution, SpectrumClassification) with classification entries
    in trajectory order: entry i at each t continues entry i at the
    previous t (matched by global nearest-neighbor assignment, no
    multiplicity grouping). Suspicious jumps and ambiguous pairings are
    reported as warnings, never as errors.
    """
    ts = [float(t) for t in t_grid]
    if not ts:
        raise ValueError("empty t grid")
    if any(tb <= ta for ta, tb in zip(ts[:-1], ts[1:])):
        raise ValueError("t grid must be strictly increasing")
    if ts[0] < 0.0 or ts[-1] > 1.0:
        raise ValueError("t grid must lie in [0, 1]")
    require_admissible(model, contour, ts[-1])

    a_norm = float(np.linalg.norm(model.a1, 2))
    tau = tau_real if tau_real is not None else 1e-8 * (1.0 + a_norm)

    out = []
    x_prev = np.zeros((model.n, model.n), dtype=np.complex128)
    eigs_prev = None
    lipschitz = 0.0
    t_prev = None
    for t in ts:
        sol = _picard(model, contour, t, tol, max_iter, x_prev)
        eigs = np.linalg.eigvals(sol.z_op)
        if eigs_prev is None:
            eigs = np.sort_complex(eigs)
        else:
            eigs = eigs[_pair(eigs_prev, eigs)]
            dt = t - t_prev
            jump = float(np.max(np.abs(eigs - eigs_prev)))
            if lipschitz > 0.0 and jump > 10.0 * dt * lipschitz:
                warnings.warn(
                    f"eigenvalue jump {jump:.3e} at t={t} exceeds continuity estimate",
                    RuntimeWarning,
                )
            if dt > 0:
                lipschitz = max(lipschitz, jump / dt)

        scale = 1.0 + float(np.max(np.abs(eigs)))
        sep = np.abs(eigs[None, :] - eigs[:, None]) + np.eye(eigs.size) * 1e30
        ambiguous_mask = np.min(sep, axis=1) < 1e-8 * scale
        if np.any(ambiguous_mask) and eigs_prev is not None:
            warnings.warn(f"ambiguous trajectory pairing at t={t}", RuntimeWarning)

        entries = []
        for lam, amb in zip(eigs, ambiguous_mask):
            lam = complex(lam)
            label = _label_for(lam, contour.side, tau)
            resid = None
            if label == "physical-complex":
                resid = _physical_residual(model, t, lam)
            entries.append(ClassifiedEigenvalue(lam, 1, label, resid, bool(amb)))
        out.append((t, sol, SpectrumClassification(tuple(entries))))

        x_prev = sol.x
        eigs_prev = eigs
        t_prev = t
    return out
