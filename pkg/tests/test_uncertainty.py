import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwolct.errors import MeasureTooLarge, NotNormalized, ZeroSignal
from qwolct.grid import GridSpec, QField
from qwolct.kernel import OlctParams
from qwolct.oracle import gaussian_heisenberg_ratio
from qwolct.qwolct import WindowSpec, analyze
from qwolct.uncertainty import (
    CONSTANTS,
    ConcentrationRegion,
    UncertaintyConstants,
    ball_measure,
    concentration_bound,
    concentration_measure,
    heisenberg_check,
    localisation_check,
    local_uncertainty_check,
    log_uncertainty_check,
    moment_local_check,
    region_of_measure,
    spatial_spread,
    spectral_spread,
    sup_bound_check,
)
from qwolct.verify import unit_gaussian

F = OlctParams.fourier()
A1 = OlctParams(1, 2, 0.5, 2, 0.3, -0.2)
A2 = OlctParams(1, 1, 1, 2, 0.3, -0.2)


@pytest.fixture(scope="module")
def minimiser():
    grid = GridSpec.desk(32, 16)
    f = unit_gaussian(grid, 1.0)
    g = WindowSpec.gaussian(grid, 3.0)
    return f, g, analyze(f, g, F, F)


def test_spatial_spread_gaussian():
    grid = GridSpec.symmetric(128, 0.125)
    f = QField.from_function(grid, lambda a, b: np.exp(-(a**2 + b**2) / 2) / math.sqrt(math.pi))
    assert spatial_spread(f, 1) == pytest.approx(0.5, rel=1e-10)
    assert spatial_spread(f, 2) == pytest.approx(0.5, rel=1e-10)
    with pytest.raises(ValueError):
        spatial_spread(f, 3)


def test_spatial_spread_point_mass_at_origin():
    grid = GridSpec.symmetric(8, 0.5)
    s = np.zeros(grid.shape + (4,))
    s[4, 4, 0] = 1.0
    assert spatial_spread(QField(grid, s), 1) == 0.0


def test_spectral_spread_brute_force():
    grid = GridSpec.symmetric(8, 1.0)
    rng = np.random.default_rng(2)
    f = QField(grid, rng.standard_normal(grid.shape + (4,)))
    C = analyze(f, WindowSpec.gaussian(grid, 1.0), A1, A2)
    total = 0.0
    for idx in np.ndindex(*C.samples.shape[:4]):
        total += C.wgrid.w2[idx[3]] ** 2 * float(np.sum(C.samples[idx] ** 2))
    assert spectral_spread(C, 2) == pytest.approx(total * C.weight, rel=1e-12)


def test_heisenberg_gaussian_ratio(minimiser):
    f, g, C = minimiser
    for axis in (1, 2):
        r = heisenberg_check(f, g, F, F, axis, C=C)
        assert r.lhs >= r.rhs
        assert r.ratio == pytest.approx(gaussian_heisenberg_ratio(1.0, 3.0), rel=1e-3)


def test_heisenberg_ratio_independent_of_b(minimiser):
    f, g, _ = minimiser
    B = OlctParams(0.0, 2.0, -0.5, 0.0)
    r = heisenberg_check(f, g, B, B, 1)
    assert r.rhs == pytest.approx(1.0)
    assert r.ratio == pytest.approx(gaussian_heisenberg_ratio(1.0, 3.0), rel=1e-3)


def test_heisenberg_random_cases_hold():
    grid = GridSpec.desk(16, 16)
    rng = np.random.default_rng(4)
    for _ in range(3):
        f = QField(grid, rng.standard_normal(grid.shape + (4,)) * np.exp(-np.hypot(*grid.coords()))[..., None])
        g = WindowSpec.gaussian(grid, rng.uniform(0.8, 2.0))
        for axis in (1, 2):
            assert heisenberg_check(f, g, A1, A2, axis).ratio >= 1.0


@settings(max_examples=5, deadline=None)
@given(st.floats(0.1, 10.0))
def test_heisenberg_homogeneous(lam):
    grid = GridSpec.desk(16, 16)
    f = unit_gaussian(grid, 1.0, center=(0.5, 0.0))
    g = WindowSpec.gaussian(grid, 2.0)
    r1 = heisenberg_check(f, g, A1, A2, 1)
    r2 = heisenberg_check(f.scale(lam), g, A1, A2, 1)
    assert r2.lhs == pytest.approx(lam**2 * r1.lhs, rel=1e-10)
    assert r2.ratio == pytest.approx(r1.ratio, rel=1e-10)


def test_zero_signal_rejected():
    grid = GridSpec.desk(8, 8)
    with pytest.raises(ZeroSignal):
        heisenberg_check(QField.zeros(grid), WindowSpec.gaussian(grid, 1.0), F, F, 1)


def test_log_constant_independent_series():
    # psi(1/2) = -gamma + sum_k (1/(k+1) - 1/(k+1/2)), tail ~ -1/(2N)
    n = 2_000_000
    k = np.arange(n, dtype=float)
    psi = -np.euler_gamma + np.sum(1.0 / (k + 1) - 1.0 / (k + 0.5)) - 1.0 / (2 * n)
    d = psi - math.log(2.0)
    assert abs(d + 2.65666) < 1e-4
    assert CONSTANTS.D == pytest.approx(d, abs=1e-9)
    assert UncertaintyConstants.closed_form() == pytest.approx(CONSTANTS.D, abs=1e-14)


def test_log_inequality_holds_with_negative_lhs():
    grid = GridSpec.desk(32, 16)
    f = unit_gaussian(grid, 0.8)
    g = WindowSpec.gaussian(grid, 1.5)
    B = OlctParams(0.0, 2.0, -0.5, 0.0)
    r = log_uncertainty_check(f, g, F, B)
    assert r.lhs < 0 and r.lhs >= r.rhs
    rc = log_uncertainty_check(f, g, F, B, mode="componentwise")
    assert math.isfinite(rc.lhs)
    with pytest.raises(ValueError):
        log_uncertainty_check(f, g, F, B, mode="polar")


def test_sup_bound_equality_for_point_masses():
    grid = GridSpec.symmetric(8, 0.5)
    s = np.zeros(grid.shape + (4,))
    s[4, 4, 0] = 1.0 / math.sqrt(grid.weight)
    f = QField(grid, s)
    C = analyze(f, f, A1, A2)
    r = sup_bound_check(C, f, f, A1, A2)
    assert r.rhs == pytest.approx(1.0 / (2 * math.pi * math.sqrt(2.0)))
    assert r.lhs == pytest.approx(r.rhs, rel=1e-12)


def test_sup_bound_holds(minimiser):
    f, g, C = minimiser
    r = sup_bound_check(C, f, g, F, F)
    assert r.lhs <= r.rhs * (1 + 1e-12)


def test_concentration(minimiser):
    f, g, C = minimiser
    assert concentration_measure(C, 0.0).measure == 0.0
    E = concentration_measure(C, 0.9, f, g)
    assert E.captured >= 0.9 - 1e-12
    assert E.measure >= concentration_bound(0.9, F, F)
    assert concentration_bound(0.5, A1, A2) == pytest.approx(math.pi * math.sqrt(2))
    with pytest.raises(NotNormalized):
        concentration_measure(C, 0.9, f.scale(2.0), g)


def test_local_inequality(minimiser):
    f, g, C = minimiser
    empty = ConcentrationRegion(np.zeros(C.samples.shape[:4], bool), C.weight, 0.0)
    rep = local_uncertainty_check(C, f, g, empty)
    assert rep.measure == 0.0 and rep.rhs == pytest.approx(rep.lhs, rel=1e-3)
    for kind in ("greedy", "ball"):
        E = region_of_measure(C, 0.5, kind)
        assert E.measure <= 0.5
        assert local_uncertainty_check(C, f, g, E).slack >= 0
    full = ConcentrationRegion(np.ones(C.samples.shape[:4], bool), C.weight, 1.0)
    with pytest.raises(MeasureTooLarge):
        local_uncertainty_check(C, f, g, full)
    with pytest.raises(ValueError):
        region_of_measure(C, 0.5, "cube")


def test_moment_form(minimiser):
    f, g, C = minimiser
    assert ball_measure(1.0) == pytest.approx(math.pi**2 / 2)
    assert moment_local_check(C, f, g, 1.0, 0.5).slack > 0
    with pytest.raises(MeasureTooLarge):
        moment_local_check(C, f, g, 1.0, 1.0)
    with pytest.raises(ValueError):
        moment_local_check(C, f, g, -1.0, 0.5)


def test_localisation_identity(minimiser):
    f, g, C = minimiser
    assert localisation_check(f, g, F, F, 1, C=C) < 1e-2
    assert localisation_check(f, g, F, F, 2, C=C) < 1e-2
