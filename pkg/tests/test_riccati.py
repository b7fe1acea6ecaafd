"""Angular operator, Gram normalization, Omega, and contour reconstruction.

Independent oracle: the Gram matrix recomputed by brute-force trapezoid
summation of y(mu)^* y(mu) on a million-point grid, sharing nothing with
the adaptive quadrature under test.
"""

import numpy as np
import pytest

import schurroots as sr
from schurroots.errors import NumericsError
from schurroots.riccati import factor_F1, rational_trials, ysn_integral


def dense_gram(ric, nodes=1_000_001):
    a, b = ric.interval
    grid = np.linspace(a, b, nodes)
    yv = ric.y_values(grid)
    integrand = np.conj(np.swapaxes(yv, 1, 2)) @ yv
    return np.trapezoid(integrand, grid, axis=0)


@pytest.fixture(scope="module")
def matrix_case(model_zoo):
    model = next(m for m in model_zoo if m.n == 2)
    contours = {s: sr.make_contour(model, s) for s in (1, -1)}
    sols = {s: sr.solve_basic(model, contours[s]) for s in (1, -1)}
    rics = {s: sr.compute_Y(model, sols[s]) for s in (1, -1)}
    return model, contours, sols, rics


def test_gram_against_dense_grid(friedrichs_model, friedrichs_contours, matrix_case):
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1])
    ric = sr.compute_Y(friedrichs_model, sol)
    assert np.max(np.abs(ric.gram - dense_gram(ric))) < 1e-8

    model, _, _, rics = matrix_case
    assert np.max(np.abs(rics[1].gram - dense_gram(rics[1]))) < 1e-8


def test_gram_is_identity_for_nonreal_spectrum(matrix_case):
    # J-neutrality of the graph subspace forces Y*Y = I
    model, _, _, rics = matrix_case
    for side in (1, -1):
        assert np.max(np.abs(rics[side].gram - np.eye(model.n))) < 1e-10
        assert abs(rics[side].y_norm - 1.0) < 1e-10


def test_scalar_norm_one(friedrichs_model, friedrichs_contours):
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1])
    ric = sr.compute_Y(friedrichs_model, sol)
    assert abs(ric.y_norm - 1.0) < 1e-8
    verdict = sr.check_one_in_spectrum(ric)
    assert verdict.present
    assert verdict.min_distance < 1e-8
    assert verdict.graph_intersection_nontrivial


def test_zay(matrix_case):
    model, _, sols, rics = matrix_case
    for side in (1, -1):
        assert sr.check_ZAY(model, sols[side], rics[side]) < 1e-10


def test_riccati_residuals(matrix_case):
    model, _, _, rics = matrix_case
    mus = np.linspace(-0.93, 0.93, 17)
    for side in (1, -1):
        assert sr.riccati_residual(model, rics[side], mus) < 1e-10
        assert sr.riccati_residual(model, rics[side], mus, adjoint=True) < 1e-10


def test_adjoint_values_consistent(matrix_case):
    # ytilde(mu) on the axis is exactly y(mu)^* entrywise
    _, _, _, rics = matrix_case
    ric = rics[1]
    mus = np.linspace(-0.8, 0.8, 5)
    yv = ric.y_values(mus)
    yt = ric.y_repr.adjoint_values(mus)
    assert np.max(np.abs(yt - np.conj(np.swapaxes(yv, 1, 2)))) < 1e-13


def test_j_orthogonality(matrix_case):
    _, _, _, rics = matrix_case
    for side in (1, -1):
        trials = rational_trials(rics[side], 8, seed=5)
        assert sr.j_orthogonality(rics[side], trials) < 1e-10


def test_rational_trials_reproducible(matrix_case):
    _, _, _, rics = matrix_case
    t1 = rational_trials(rics[1], 3, seed=9)
    t2 = rational_trials(rics[1], 3, seed=9)
    for (f1, v1), (f2, v2) in zip(t1, t2):
        assert np.array_equal(v1, v2)
        grid = np.linspace(-0.5, 0.5, 4)
        assert np.array_equal(f1(grid), f2(grid))


def test_zero_coupling_short_circuit(friedrichs_model, friedrichs_contours):
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1], t=0.0)
    ric = sr.compute_Y(friedrichs_model, sol)
    assert ric.y_norm == 0.0
    assert np.max(np.abs(ric.gram)) == 0.0
    assert np.max(np.abs(ric.bstar_y)) == 0.0


def test_separation_guard(friedrichs_model, friedrichs_contours):
    # at t = 0.01 the root sits ~1e-5 off the interval: inside the guard
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1], t=0.01)
    with pytest.raises(NumericsError):
        sr.compute_Y(friedrichs_model, sol)


def test_omega_properties(matrix_case):
    model, contours, sols, _ = matrix_case
    oms = {}
    for side in (1, -1):
        om = sr.compute_Omega(model, contours[side], sols[side], sols[-side])
        assert om.norm < om.bound
        assert om.adjoint_residual < 1e-10 * (1 + om.norm)
        oms[side] = om
    # mirror relation between the two sides
    assert np.max(np.abs(oms[-1].omega - np.conj(oms[1].omega.T))) < 1e-10


def test_omega_two_path(matrix_case):
    model, contours, sols, _ = matrix_case
    om = sr.compute_Omega(model, contours[1], sols[1], sols[-1])
    alt = sr.omega_by_deformation(model, sols[1], sols[-1])
    assert np.linalg.norm(om.omega - alt, 2) < 1e-9 * (1 + om.norm)


def test_omega_side_validation(matrix_case):
    model, contours, sols, _ = matrix_case
    with pytest.raises(ValueError):
        sr.compute_Omega(model, contours[1], sols[1], sols[1])


def test_reconstruction(matrix_case):
    model, contours, sols, _ = matrix_case
    for side in (1, -1):
        om = sr.compute_Omega(model, contours[side], sols[side], sols[-side])
        h0, h1, z_rec = sr.reconstruct_from_contour(model, contours[side], sols[side])
        target = np.linalg.inv(np.eye(model.n) - om.omega)
        assert np.linalg.norm(h0 - target, 2) < 1e-8 * (1 + np.linalg.norm(h0, 2))
        assert np.linalg.norm(z_rec - sols[side].z_op, 2) < 1e-8
        # first moment is consistent with the zeroth: h1 = h0 adj-similar
        assert np.linalg.norm(h1 - z_rec @ h0, 2) < 1e-8 * (1 + np.linalg.norm(h1, 2))


def test_reconstruction_explicit_circle(friedrichs_model, friedrichs_contours):
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1])
    z0 = sol.z_op[0, 0]
    h0, h1, z_rec = sr.reconstruct_from_contour(
        friedrichs_model, friedrichs_contours[1], sol,
        gamma_spec=(complex(z0), 0.05))
    assert abs(z_rec[0, 0] - z0) < 1e-9


def test_reconstruction_needs_circle():
    # spread-out interior spectrum: no default circle fits the d/2 rule
    a1 = np.diag([-0.5, 0.5])
    model = sr.build_model((-1.0, 1.0), a1, [0.05 * np.eye(2)])
    c = sr.make_contour(model, 1)
    assert sr.admissibility(model, c).admissible
    sol = sr.solve_basic(model, c)
    with pytest.raises(ValueError):
        sr.reconstruct_from_contour(model, c, sol)


def test_ysn_bounds_norm(matrix_case, friedrichs_model, friedrichs_contours):
    model, _, _, rics = matrix_case
    for side in (1, -1):
        bound = ysn_integral(model, rics[side])
        assert rics[side].y_norm ** 2 <= bound + 1e-8
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1])
    ric = sr.compute_Y(friedrichs_model, sol)
    # scalar case: the bound saturates (single rational mode)
    assert abs(ysn_integral(friedrichs_model, ric) - ric.y_norm ** 2) < 1e-8


def test_factorization(matrix_case):
    model, contours, sols, _ = matrix_case
    rng = np.random.default_rng(31)
    d = sr.admissibility(model, contours[1]).distance
    for side in (1, -1):
        sol = sols[side]
        for _ in range(10):
            lam = float(rng.choice(model.sigma1))
            z = lam + rng.uniform(0.05, 0.45) * d * np.exp(2j * np.pi * rng.uniform())
            f1 = factor_F1(model, contours[side], sol, complex(z))
            m1 = sr.m1_continued(model, contours[side], complex(z))
            prod = f1 @ (sol.z_op - z * np.eye(model.n))
            assert np.linalg.norm(m1 - prod, 2) < 1e-9 * (1 + np.linalg.norm(m1, 2))
            assert np.isfinite(np.linalg.cond(f1))
