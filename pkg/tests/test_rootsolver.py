"""Fixed-point root solver, classification, and the coupling homotopy.

Independent oracle for the scalar reference model: bisection on
f(y) = y - 2 b^2 arctan(alpha / y), which is strictly increasing from
negative values at 0+ to positive values at b^2 pi. The frozen root for
alpha = 1, b = 0.2 is below; the generic solver must land on -i y (side
+1) and +i y (side -1).
"""

import warnings

import numpy as np
import pytest

import schurroots as sr
from schurroots.errors import AdmissibilityError
from schurroots.rootsolver import RootSolution, transformator

Y_ORACLE = 0.11639390461355939


def bisect_y(alpha, b, lo=1e-12, hi=None, steps=200):
    hi = hi if hi is not None else b * b * np.pi + 1e-9
    f = lambda y: y - 2 * b * b * np.arctan(alpha / y)
    assert f(lo) < 0 < f(hi)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_frozen_oracle_value():
    assert abs(bisect_y(1.0, 0.2) - Y_ORACLE) < 1e-14


def test_scalar_root_both_sides(friedrichs_model, friedrichs_contours):
    for side in (1, -1):
        sol = sr.solve_basic(friedrichs_model, friedrichs_contours[side])
        expect = -1j * side * Y_ORACLE
        assert abs(sol.z_op[0, 0] - expect) < 1e-9
        assert sol.residual < 1e-11
        assert np.linalg.norm(sol.x, 2) <= sol.r_min + 1e-9


def test_picard_contraction(friedrichs_model, friedrichs_contours):
    # manual iteration through the public transformator
    c = friedrichs_contours[1]
    a1 = friedrichs_model.a1.astype(np.complex128)
    x = np.zeros((1, 1), dtype=np.complex128)
    steps = []
    for _ in range(12):
        x_new = transformator(friedrichs_model, c, a1 + x)
        steps.append(np.linalg.norm(x_new - x, 2))
        x = x_new
    ratios = [steps[k + 1] / steps[k] for k in range(1, len(steps) - 1)]
    assert all(r <= 0.95 for r in ratios)
    # and the limit agrees with solve_basic
    sol = sr.solve_basic(friedrichs_model, c)
    assert abs(x[0, 0] - sol.x[0, 0]) < 1e-10


def test_fixed_point_property(zoo_solutions):
    for model, contours, sols in zoo_solutions[:6]:
        for side in (1, -1):
            sol = sols[side]
            fx = transformator(model, contours[side], model.a1 + sol.x)
            assert np.linalg.norm(fx - sol.x, 2) < 1e-10


def test_contour_independence(friedrichs_model, friedrichs_contours):
    rect = sr.make_contour(friedrichs_model, 1, kind="rectangle", depth=0.9)
    s_semi = sr.solve_basic(friedrichs_model, friedrichs_contours[1])
    s_rect = sr.solve_basic(friedrichs_model, rect)
    assert np.max(np.abs(s_semi.z_op - s_rect.z_op)) < 1e-8


def test_conjugate_symmetry(zoo_solutions):
    for model, contours, sols in zoo_solutions:
        assert np.max(np.abs(sols[-1].x - np.conj(sols[1].x))) < 1e-8


def test_root_property(zoo_solutions):
    # every eigenpair of Z annihilates the continued Schur complement
    for model, contours, sols in zoo_solutions[:6]:
        for side in (1, -1):
            sol = sols[side]
            vals, vecs = np.linalg.eig(sol.z_op)
            for k, lam in enumerate(vals):
                m1 = sr.m1_continued(model, contours[side], complex(lam))
                assert np.linalg.norm(m1 @ vecs[:, k]) <= 1e-7


def test_solution_record_fields(friedrichs_model, friedrichs_contours):
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1])
    assert sol.side == 1
    assert sol.coupling_scale == 1.0
    assert sol.iterations > 1
    assert 0 < sol.r_min < sol.r_max
    assert sol.final_step_norm < 1e-12 * max(1.0, np.linalg.norm(sol.x, 2))
    assert np.max(np.abs(sol.eigenvalues()
                         - np.sort_complex(np.linalg.eigvals(sol.z_op)))) == 0


def test_t_validation(friedrichs_model, friedrichs_contours):
    with pytest.raises(ValueError):
        sr.solve_basic(friedrichs_model, friedrichs_contours[1], t=1.5)
    with pytest.raises(ValueError):
        sr.solve_basic(friedrichs_model, friedrichs_contours[1], t=-0.1)


def test_zero_coupling_real_labels(friedrichs_model, friedrichs_contours):
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1], t=0.0)
    assert np.max(np.abs(sol.x)) == 0.0
    cls = sr.classify(friedrichs_model, friedrichs_contours[1], sol)
    assert [e.label for e in cls.entries] == ["real"]


def test_classify_scalar(friedrichs_model, friedrichs_contours):
    sol = sr.solve_basic(friedrichs_model, friedrichs_contours[1])
    cls = sr.classify(friedrichs_model, friedrichs_contours[1], sol)
    assert cls.count("physical-complex") == 1
    entry = cls.entries[0]
    assert entry.multiplicity == 1
    assert entry.physical_residual < 1e-9


def _fake_solution(z, side):
    z = np.atleast_2d(np.asarray(z, dtype=np.complex128))
    return RootSolution(side=side, x=z.copy(), z_op=z, coupling_scale=1.0,
                        iterations=1, final_step_norm=0.0, r_min=0.5,
                        r_max=0.8, residual=0.0)


def test_classify_labels(friedrichs_model, friedrichs_contours):
    cases = [
        (0.1 + 0.05j, 1, "resonance"),
        (0.1 - 0.05j, 1, "physical-complex"),
        (0.1 - 0.05j, -1, "resonance"),
        (0.1 + 1e-12j, 1, "real"),
    ]
    for z, side, expect in cases:
        sol = _fake_solution([[z]], side)
        cls = sr.classify(friedrichs_model, friedrichs_contours[side], sol)
        assert [e.label for e in cls.entries] == [expect], (z, side)


def test_classify_multiplicity(friedrichs_model, friedrichs_contours):
    z = np.diag([0.1 + 0.2j, 0.1 + 0.2j + 1e-13, -0.3 + 0.1j])
    sol = _fake_solution(z, 1)
    cls = sr.classify(friedrichs_model, friedrichs_contours[1], sol)
    mults = sorted(e.multiplicity for e in cls.entries)
    assert mults == [1, 2]
    assert sum(e.multiplicity for e in cls.entries) == 3


def test_classify_side_mismatch(friedrichs_model, friedrichs_contours):
    sol = _fake_solution([[0.1j]], 1)
    with pytest.raises(ValueError):
        sr.classify(friedrichs_model, friedrichs_contours[-1], sol)


def test_homotopy_trajectories(friedrichs_model, friedrichs_contours):
    grid = [0.1, 0.3, 0.5, 0.8, 1.0]
    with warnings.catch_warnings():
        warnings.simplefilter("error")  # the smooth path must not warn
        path = sr.homotopy_path(friedrichs_model, friedrichs_contours[1], grid)
    assert [t for t, _, _ in path] == grid
    lam_prev = None
    for t, sol, cls in path:
        assert len(cls.entries) == 1
        lam = cls.entries[0].eigenvalue
        assert cls.entries[0].label == "physical-complex"
        assert lam.imag < 0  # side +1 root stays in the lower half-plane
        if lam_prev is not None:
            assert abs(lam - lam_prev) < 0.12
        lam_prev = lam
    # endpoint agrees with the direct solve
    end = path[-1][1]
    direct = sr.solve_basic(friedrichs_model, friedrichs_contours[1])
    assert np.max(np.abs(end.z_op - direct.z_op)) < 1e-10


def test_homotopy_validation(friedrichs_model, friedrichs_contours):
    c = friedrichs_contours[1]
    with pytest.raises(ValueError):
        sr.homotopy_path(friedrichs_model, c, [])
    with pytest.raises(ValueError):
        sr.homotopy_path(friedrichs_model, c, [0.5, 0.5])
    with pytest.raises(ValueError):
        sr.homotopy_path(friedrichs_model, c, [0.5, 1.2])


def test_homotopy_inadmissible():
    model = sr.build_model((-1.0, 1.0), [[0.0]], [[[np.sqrt(0.1)]]])
    c = sr.make_contour(model, 1)
    with pytest.raises(AdmissibilityError):
        sr.homotopy_path(model, c, [0.5, 1.0])
    # small couplings on the same model are fine
    path = sr.homotopy_path(model, c, [0.2, 0.4])
    assert len(path) == 2


def test_transformator_gap_guard(friedrichs_model, friedrichs_contours):
    c = friedrichs_contours[1]
    node = complex(c.nodes[len(c.nodes) // 2])
    with pytest.raises(sr.NumericsError):
        transformator(friedrichs_model, c, np.array([[node]]))
