"""Adaptive panel quadrature against closed-form integrals."""

import numpy as np
import pytest

from schurroots._quad import adaptive_quad
from schurroots.errors import NumericsError


def test_cubic_exact():
    val, stats = adaptive_quad(lambda x, w: np.sum(w * x ** 3), 0.0, 1.0)
    assert abs(val - 0.25) < 1e-13
    assert stats["panels"] >= 1


def test_exponential():
    val, _ = adaptive_quad(lambda x, w: np.sum(w * np.exp(x)), -1.0, 1.0)
    assert abs(val - (np.e - 1.0 / np.e)) < 1e-12


def test_oscillatory():
    # int_0^pi sin(7x) dx = 2/7
    val, _ = adaptive_quad(lambda x, w: np.sum(w * np.sin(7 * x)), 0.0, np.pi,
                           rtol=1e-12)
    assert abs(val - 2.0 / 7.0) < 1e-11


def test_matrix_valued():
    def f(x, w):
        vals = np.stack([np.ones_like(x), x, x ** 2, x ** 3]).reshape(2, 2, -1)
        return np.sum(w * vals, axis=-1)

    val, _ = adaptive_quad(f, 0.0, 2.0)
    expect = np.array([[2.0, 2.0], [8.0 / 3.0, 4.0]])
    assert np.max(np.abs(val - expect)) < 1e-12


def test_break_at_kink():
    # |x| on [-1, 1]: a break at 0 makes each panel smooth
    f = lambda x, w: np.sum(w * np.abs(x))
    val, stats = adaptive_quad(f, -1.0, 1.0, breaks=(0.0,))
    assert abs(val - 1.0) < 1e-12
    # the kink never sits inside a panel, so few panels suffice
    assert stats["panels"] <= 8


def test_budget_exhaustion():
    # needle too sharp for two panels
    f = lambda x, w: np.sum(w / (1e-8 + x ** 2))
    with pytest.raises(NumericsError):
        adaptive_quad(f, -1.0, 1.0, rtol=1e-13, max_panels=2)


def test_complex_integrand():
    val, _ = adaptive_quad(lambda x, w: np.sum(w * np.exp(1j * x)), 0.0, np.pi)
    assert abs(val - 2j) < 1e-12
