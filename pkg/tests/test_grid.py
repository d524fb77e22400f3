import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwolct.errors import AsymmetricGrid, GridMismatch, NonGridShift
from qwolct.grid import GridSpec, QField, inner, l2_norm, modulate, pairwise_sum, parity, shift
from qwolct.quat import exp_i, exp_j, qmul, qnorm, quat


def test_pairwise_sum_matches_and_is_layout_independent(rng):
    x = rng.standard_normal((37, 19, 4))
    s = pairwise_sum(x, axes=(0, 1))
    assert np.allclose(s, x.sum(axis=(0, 1)), rtol=1e-13)
    assert np.array_equal(s, pairwise_sum(np.asfortranarray(x), axes=(0, 1)))
    assert pairwise_sum(np.zeros((0,))) == 0.0


@settings(max_examples=30)
@given(st.integers(1, 200))
def test_pairwise_sum_of_ones(n):
    assert pairwise_sum(np.ones(n)) == n


def test_grid_coordinates_exact():
    g = GridSpec(4, 6, 0.5, 0.25, -1.0, -0.75)
    assert g.t1[3] == -1.0 + 3 * 0.5
    assert g.t2[5] == -0.75 + 5 * 0.25
    assert g.weight == 0.125
    assert GridSpec.symmetric(8, 0.5).origin1 == -2.0
    assert GridSpec.symmetric(8, 0.5).is_symmetric()
    assert not GridSpec(8, 8, 0.5, 0.5, -1.0, -2.0).is_symmetric()
    d = GridSpec.desk()
    assert d.shape == (64, 64) and d.dt1 == 0.25


def test_bad_grids():
    with pytest.raises(ValueError):
        GridSpec(0, 4, 1.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        GridSpec(4, 4, -1.0, 1.0, 0.0, 0.0)
    g = GridSpec.symmetric(4, 1.0)
    with pytest.raises(GridMismatch):
        QField(g, np.zeros((4, 5, 4)))
    with pytest.raises(GridMismatch):
        QField.zeros(g) + QField.zeros(GridSpec.symmetric(4, 0.5))
    with pytest.raises(NonGridShift):
        g.steps((0.5, 0.0))


def test_inner_self_is_real(smooth):
    ip = inner(smooth, smooth)
    assert ip[0] == pytest.approx(l2_norm(smooth) ** 2, rel=1e-12)
    assert np.all(np.abs(ip[1:]) < 1e-12 * ip[0])


def test_inner_disjoint_supports_vanish(grid32, rng):
    a = np.zeros(grid32.shape + (4,))
    b = np.zeros(grid32.shape + (4,))
    a[:10] = rng.standard_normal((10, 32, 4))
    b[20:] = rng.standard_normal((12, 32, 4))
    assert np.array_equal(inner(QField(grid32, a), QField(grid32, b)), np.zeros(4))


def test_inner_gaussian_analytic():
    g = GridSpec.symmetric(256, 16 / 256)
    f = QField.from_function(g, lambda t1, t2: np.exp(-(t1**2 + t2**2)))
    assert inner(f, f)[0] == pytest.approx(math.pi / 2, rel=1e-10)


def test_inner_quadrature_converges_fast():
    errs = []
    for n in (8, 16):
        g = GridSpec.symmetric(n, 16 / n)
        f = QField.from_function(g, lambda t1, t2: np.exp(-(t1**2 + t2**2)))
        errs.append(abs(inner(f, f)[0] - math.pi / 2))
    assert errs[1] <= errs[0] / 4


def test_inner_conjugate_symmetric_and_left_linear(smooth, rng):
    other = QField(smooth.grid, rng.standard_normal(smooth.samples.shape))
    a, b = inner(smooth, other), inner(other, smooth)
    assert np.allclose(a, b * np.array([1, -1, -1, -1]), rtol=1e-12, atol=1e-12 * qnorm(a))
    q = quat(0.3, -1.2, 0.5, 2.0)
    assert np.allclose(inner(smooth.lmul(q), other), qmul(q, a), rtol=1e-12, atol=1e-12 * qnorm(a))


def test_norm_zero_iff_zero(grid32):
    assert l2_norm(QField.zeros(grid32)) == 0.0
    s = np.zeros(grid32.shape + (4,))
    s[3, 4, 2] = 1e-200
    assert l2_norm(QField(grid32, s)) > 0.0


def test_shift():
    g = GridSpec.symmetric(8, 0.5)
    s = np.zeros(g.shape + (4,))
    s[3, 4] = quat(1, 2, 3, 4)
    f = QField(g, s)
    assert np.array_equal(shift(f, (0, 0)).samples, s)
    moved = shift(f, (0.5, 0.0)).samples
    assert np.array_equal(moved[4, 4], s[3, 4])
    assert l2_norm(shift(f, (-1.0, 1.5))) == l2_norm(f)
    assert l2_norm(shift(f, (10.0, 0.0))) == 0.0


def test_modulate(smooth):
    assert np.array_equal(modulate(smooth, (0.0, 0.0)).samples, smooth.samples)
    m = modulate(smooth, (0.7, -1.3))
    assert np.allclose(m.magnitude(), smooth.magnitude(), rtol=1e-13)


def test_modulate_real_field_expansion():
    g = GridSpec.symmetric(8, 0.5)
    f = QField.from_function(g, lambda t1, t2: 1.0 + t1 * t2)
    w = (0.4, 0.9)
    t1, t2 = g.coords()
    th, ph = t1 * w[0], t2 * w[1]
    expect = (1.0 + t1 * t2)[..., None] * np.stack(
        [np.cos(th) * np.cos(ph), np.sin(th) * np.cos(ph), np.cos(th) * np.sin(ph), np.sin(th) * np.sin(ph)], axis=-1
    )
    assert np.allclose(modulate(f, w).samples, expect, atol=1e-14)
    assert np.allclose(expect, qmul(exp_i(th), exp_j(ph)) * (1.0 + t1 * t2)[..., None])


def test_parity():
    g = GridSpec.symmetric(8, 0.5)
    rng = np.random.default_rng(1)
    f = QField(g, rng.standard_normal(g.shape + (4,)))
    pp = parity(parity(f)).samples
    assert np.array_equal(pp[1:, 1:], f.samples[1:, 1:])
    gauss = QField.from_function(g, lambda t1, t2: np.exp(-(t1**2 + t2**2)))
    assert np.array_equal(parity(gauss).samples[1:, 1:], gauss.samples[1:, 1:])
    s = np.zeros(g.shape + (4,))
    s[5, 4, 0] = 1.0  # t = (dt, 0)
    out = parity(QField(g, s)).samples
    assert out[3, 4, 0] == 1.0 and out.sum() == 1.0
    with pytest.raises(AsymmetricGrid):
        parity(QField.zeros(GridSpec(8, 8, 0.5, 0.5, 0.0, 0.0)))
