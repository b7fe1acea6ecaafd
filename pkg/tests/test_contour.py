"""Contour construction, variation, distance, and admissibility radii.

Frozen oracle (scalar reference model, semicircle of radius 1):
V0 = 0.04 * pi, d = 1, hence
r_min = 1/2 - sqrt(1/4 - 0.04 pi) = 0.14738648089387119
r_max = 1 - sqrt(0.04 pi)         = 0.6455092298188968
"""

import numpy as np
import pytest

import schurroots as sr
from schurroots.errors import AdmissibilityError, ModelError

R_MIN_ORACLE = 0.14738648089387119
R_MAX_ORACLE = 0.6455092298188968
V0_ORACLE = 0.04 * np.pi


def test_frozen_radii(friedrichs_model, friedrichs_contours):
    rep = sr.admissibility(friedrichs_model, friedrichs_contours[1])
    assert rep.admissible
    assert abs(rep.variation - V0_ORACLE) < 1e-10
    assert abs(rep.distance - 1.0) < 1e-12
    assert abs(rep.r_min - R_MIN_ORACLE) < 1e-12
    assert abs(rep.r_max - R_MAX_ORACLE) < 1e-12
    # defining identities of the two radii
    d, v0 = rep.distance, rep.variation
    assert abs((d / 2 - rep.r_min) ** 2 - (d * d / 4 - v0)) < 1e-12
    assert abs((d - rep.r_max) ** 2 - v0) < 1e-12


def test_weights_integrate_path(friedrichs_contours):
    # sum of weights telescopes to the chord b - a for any deformation
    for side in (1, -1):
        c = friedrichs_contours[side]
        assert abs(np.sum(c.weights) - 2.0) < 1e-10


def test_mirror_symmetry(friedrichs_model):
    cp = sr.make_contour(friedrichs_model, 1)
    cm = sr.make_contour(friedrichs_model, -1)
    assert np.max(np.abs(cm.nodes - np.conj(cp.nodes))) < 1e-14
    assert np.max(np.abs(cm.weights - np.conj(cp.weights))) < 1e-14
    mm = cp.mirror()
    assert mm.side == -1
    assert np.max(np.abs(mm.nodes - cm.nodes)) < 1e-14


def test_side_orientation(friedrichs_contours):
    # side +1 dips into the upper half-plane
    assert np.max(friedrichs_contours[1].nodes.imag) > 0.5
    assert np.min(friedrichs_contours[1].nodes.imag) >= -1e-15
    assert np.min(friedrichs_contours[-1].nodes.imag) < -0.5


def test_rectangle_contour(friedrichs_model):
    c = sr.make_contour(friedrichs_model, 1, kind="rectangle", depth=0.4)
    assert c.kind == "rectangle"
    assert abs(np.sum(c.weights) - 2.0) < 1e-10
    assert np.max(c.nodes.imag) <= 0.4 + 1e-12
    d = sr.distance_to_sigma1(friedrichs_model, c)
    assert abs(d - 0.4) < 1e-12  # top side is nearest to sigma1 = {0}


def test_distance_semicircle_formula():
    a1 = np.array([[0.2]])
    model = sr.build_model((-1.0, 1.0), a1, [[[0.1]]])
    c = sr.make_contour(model, 1)
    # point at 0.2 inside the unit semicircle: distance min(0.8, |0.2 -+ 1|)
    assert abs(sr.distance_to_sigma1(model, c) - 0.8) < 1e-12


def test_distance_matches_dense_sampling(friedrichs_model):
    for kind, depth in (("semicircle", None), ("rectangle", 0.35)):
        c = sr.make_contour(friedrichs_model, 1, kind=kind, depth=depth)
        d = sr.distance_to_sigma1(friedrichs_model, c)
        dense = np.min(np.abs(c.nodes - 0.0))
        # node sampling can only overestimate, and not by much
        assert d <= dense + 1e-12
        assert dense - d < 5e-3


def test_variation_node_doubling():
    # polynomial scalar density: the norm is smooth, doubling is idle
    model = sr.build_model((-1.0, 1.0), [[0.0]],
                           [[[0.15]], [[0.05]], [[0.02]], [[0.01]], [[0.005]]])
    c1 = sr.make_contour(model, 1, nodes_per_unit=200)
    c2 = sr.make_contour(model, 1, nodes_per_unit=400)
    v1 = sr.variation(model, c1)
    v2 = sr.variation(model, c2)
    assert abs(v1 - v2) < 1e-10 * max(1.0, v1)


def test_variation_scaling(friedrichs_model, friedrichs_contours):
    rep1 = sr.admissibility(friedrichs_model, friedrichs_contours[1], 1.0)
    rep_half = sr.admissibility(friedrichs_model, friedrichs_contours[1], 0.5)
    assert abs(rep_half.variation - 0.25 * rep1.variation) < 1e-13


def test_contains_in_lens(friedrichs_contours):
    c = friedrichs_contours[1]
    assert c.contains_in_lens(0.0 + 0.3j)
    assert not c.contains_in_lens(0.0 - 0.3j)
    assert not c.contains_in_lens(0.0 + 1.5j)
    assert not c.contains_in_lens(2.0 + 0.1j)


def test_inadmissible_report():
    # b^2 = 0.1 breaks the contraction condition on the unit semicircle
    model = sr.build_model((-1.0, 1.0), [[0.0]], [[[np.sqrt(0.1)]]])
    c = sr.make_contour(model, 1)
    rep = sr.admissibility(model, c)
    assert not rep.admissible
    assert rep.omega < 0
    assert rep.r_min is None and rep.r_max is None
    with pytest.raises(AdmissibilityError) as exc_info:
        sr.require_admissible(model, c)
    assert exc_info.value.report is rep or exc_info.value.report.omega < 0


def test_semicircle_depth_fixed(friedrichs_model):
    with pytest.raises(ValueError):
        sr.make_contour(friedrichs_model, 1, depth=0.3)
    c = sr.make_contour(friedrichs_model, 1, depth=1.0)
    assert c.depth == 1.0


def test_bad_side(friedrichs_model):
    with pytest.raises(ValueError):
        sr.make_contour(friedrichs_model, 0)


def test_optimize_r0_semicircle(friedrichs_model):
    contour, r0 = sr.optimize_r0(friedrichs_model, 1, "semicircle")
    assert contour.kind == "semicircle"
    assert abs(r0 - R_MIN_ORACLE) < 1e-9


def test_optimize_r0_rectangle(friedrichs_model):
    family = ("rectangle", (0.2, 1.2))
    contour, r0 = sr.optimize_r0(friedrichs_model, 1, family)
    assert contour.kind == "rectangle"
    rep = sr.admissibility(friedrichs_model, contour)
    assert rep.admissible
    assert abs(rep.r_min - r0) < 1e-9
    # no scanned depth beats the optimum by more than the tolerance
    for depth in np.linspace(0.25, 1.15, 13):
        c = sr.make_contour(friedrichs_model, 1, kind="rectangle", depth=depth,
                            nodes_per_unit=150)
        cand = sr.admissibility(friedrichs_model, c)
        if cand.admissible:
            assert cand.r_min > r0 - 1e-5


def test_admissibility_radii_identities_random(model_zoo):
    for model in model_zoo[:8]:
        c = sr.make_contour(model, 1)
        rep = sr.admissibility(model, c)
        assert rep.admissible
        d, v0 = rep.distance, rep.variation
        assert abs((d / 2 - rep.r_min) ** 2 - (d * d / 4 - v0)) < 1e-12
        assert abs((d - rep.r_max) ** 2 - v0) < 1e-12
        assert 0 < rep.r_min < rep.r_max < d
