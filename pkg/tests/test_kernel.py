import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qwolct.errors import DegenerateB, NegativeD, NotUnimodular
from qwolct.kernel import (
    OlctParams,
    chirp_factor,
    kernel_left,
    kernel_phase,
    kernel_right,
    split_phase,
    validate,
)
from qwolct.quat import exp_i, exp_j, qnorm


def test_fourier_kernel_at_origin():
    A = OlctParams.fourier()
    expect = exp_i(-math.pi / 4) / math.sqrt(2 * math.pi)
    assert np.allclose(kernel_left(0.0, 0.0, A), expect, atol=1e-15)
    assert np.allclose(kernel_right(0.0, 0.0, A), exp_j(-math.pi / 4) / math.sqrt(2 * math.pi), atol=1e-15)


def test_kernel_modulus_and_units():
    A = OlctParams(1, 2, 0.5, 2, 0.3, -0.2)
    t = np.linspace(-3, 3, 7)
    kl = kernel_left(t, 1.1, A)
    assert np.allclose(qnorm(kl), 1 / math.sqrt(4 * math.pi))
    assert np.all(kl[..., 2:] == 0)
    kr = kernel_right(t, 1.1, A)
    assert np.all(kr[..., [1, 3]] == 0)


def test_kernel_phase_by_hand():
    A = OlctParams(1, 1, 1, 2, 0.3, -0.2)
    t, w = 0.7, -0.4
    expect = (1 * t**2 - 2 * t * (w - 0.3) - 2 * w * (2 * 0.3 - 1 * -0.2) + 2 * (w**2 + 0.09) - math.pi / 2) / 2
    assert kernel_phase(t, w, A) == pytest.approx(expect, rel=1e-14)


def test_negative_b_uses_absolute_amplitude():
    A = OlctParams(0, -1, 1, 0)
    assert A.amplitude == pytest.approx(1 / math.sqrt(2 * math.pi))


def test_validation():
    assert OlctParams(1, 0, 5, 1).degenerate
    with pytest.raises(NotUnimodular):
        validate(1, 1, 1, 1)
    with pytest.raises(NotUnimodular):
        OlctParams(1, 2, 3, 2)
    with pytest.raises(DegenerateB):
        OlctParams(1, 0, 5, 1).amplitude
    assert OlctParams(1, 1, 1, 2, 0.3, -0.2).as_tuple() == (1.0, 1.0, 1.0, 2.0, 0.3, -0.2)
    assert OlctParams(1, 1, 1, 2, 0.3, -0.2).mirrored().as_tuple()[4:] == (-0.3, 0.2)


@given(st.floats(-math.pi, math.pi))
def test_fractional_is_unimodular(angle):
    A = OlctParams.fractional(angle)
    assert A.a * A.d - A.b * A.c == pytest.approx(1.0)


def test_chirp_factor_examples():
    A = OlctParams(1, 0, 2, 1)
    assert np.allclose(chirp_factor(1.0, A), [math.cos(1), math.sin(1), 0, 0])
    assert np.allclose(chirp_factor(0.0, OlctParams(1, 0, 0, 1)), [1, 0, 0, 0])
    B = OlctParams(0.5, 0, 0, 2)
    assert np.allclose(chirp_factor(0.0, B, "j"), [math.sqrt(2), 0, 0, 0])
    with pytest.raises(NegativeD):
        chirp_factor(0.0, OlctParams(-1, 0, 0, -1))
    with pytest.raises(ValueError):
        chirp_factor(0.0, OlctParams.fourier())
    with pytest.raises(ValueError):
        chirp_factor(0.0, A, "k")


def test_split_phase_reassembles(rng):
    A = OlctParams(1, 2, 0.5, 2, 0.3, -0.2)
    pre, post = split_phase(A)
    t = rng.uniform(-4, 4, 20)
    w = rng.uniform(-4, 4, 20)
    full = kernel_phase(t[:, None], w[None, :], A)
    rebuilt = pre(t)[:, None] + post(w)[None, :] - t[:, None] * (w[None, :] - A.p) / A.b
    assert np.allclose(np.exp(1j * full), np.exp(1j * rebuilt), atol=1e-12)
