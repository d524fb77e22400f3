"""Spread functionals and numerical checks of the uncertainty inequalities.

All moments are taken about the origin of the respective domain.  The
coefficient-side integrals run over the full ``(u, w)`` lattice of a
``CoeffTensor`` with the cell measure ``du1 du2 dw1 dw2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from .errors import MeasureTooLarge, NotNormalized, ZeroSignal
from .grid import QField, l2_norm, pairwise_sum
from .kernel import OlctParams
from .qolct import _fast_samples
from .qwolct import CoeffTensor, _as_window, analyze
from .quat import qnorm, qnorm2


@dataclass(frozen=True)
class UncertaintyConstants:
    """``D = psi(1/2) - ln 2``, the logarithmic lower-bound constant."""

    D: float = float(digamma(0.5) - math.log(2.0))

    @staticmethod
    def closed_form() -> float:
        return -np.euler_gamma - 3.0 * math.log(2.0)


CONSTANTS = UncertaintyConstants()


@dataclass(frozen=True)
class CheckResult:
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs else math.inf

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class ConcentrationRegion:
    mask: np.ndarray
    cell: float
    captured: float

    @property
    def measure(self) -> float:
        return float(np.count_nonzero(self.mask)) * self.cell


# -- moments ---------------------------------------------------------------


def spatial_spread(f: QField, axis: int) -> float:
    """``sum t_k^2 |f(t)|^2 dt1 dt2`` for ``axis`` in {1, 2}."""
    t1, t2 = f.grid.coords()
    t = (t1, t2)[_axis(axis)]
    return float(pairwise_sum(t**2 * qnorm2(f.samples)) * f.grid.weight)


def spectral_spread(C: CoeffTensor, axis: int) -> float:
    """``sum w_k^2 |C(u, w)|^2 du dw`` for ``axis`` in {1, 2}."""
    k = _axis(axis)
    w = (C.wgrid.w1[None, None, :, None], C.wgrid.w2[None, None, None, :])[k]
    return float(pairwise_sum(w**2 * C.magnitude2()) * C.weight)


def _axis(axis: int) -> int:
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis}")
    return axis - 1


def _norms(f: QField, g) -> tuple[float, float]:
    nf = l2_norm(f)
    ng = _as_window(g).norm
    if nf == 0.0:
        raise ZeroSignal("signal has zero norm")
    return nf, ng


# -- Heisenberg ------------------------------------------------------------


def heisenberg_check(
    f: QField, g, A1: OlctParams, A2: OlctParams, axis: int, C: CoeffTensor | None = None
) -> CheckResult:
    """``sqrt(spatial) sqrt(spectral)`` against ``|b_k| / 2 ||f||^2 ||g||^2``.

    The window should be normalised; with ``||g|| != 1`` the two sides carry
    different powers of ``||g||`` and the comparison is only indicative.
    """
    nf, ng = _norms(f, g)
    C = analyze(f, g, A1, A2) if C is None else C
    b = (A1, A2)[_axis(axis)].b
    lhs = math.sqrt(spatial_spread(f, axis)) * math.sqrt(spectral_spread(C, axis))
    return CheckResult(lhs, abs(b) / 2.0 * nf**2 * ng**2)


# -- logarithmic -----------------------------------------------------------


def _safe_log(r: np.ndarray) -> np.ndarray:
    # zero radius is a null set; its samples contribute nothing
    out = np.zeros_like(r, dtype=float)
    nz = r > 0
    out[nz] = np.log(r[nz])
    return out


def log_uncertainty_check(
    f: QField,
    g,
    A1: OlctParams,
    A2: OlctParams,
    C: CoeffTensor | None = None,
    mode: str = "euclidean",
) -> CheckResult:
    """Logarithmic moments against ``D ||f||^2 ||g||^2``.

    ``mode="euclidean"`` uses ``ln |(w1/b1, w2/b2)|`` and ``ln |t|``;
    ``mode="componentwise"`` replaces each by the sum of the per-axis logs.
    """
    nf, ng = _norms(f, g)
    C = analyze(f, g, A1, A2) if C is None else C
    x1 = C.wgrid.w1[:, None] / A1.b
    x2 = C.wgrid.w2[None, :] / A2.b
    t1, t2 = f.grid.coords()
    if mode == "euclidean":
        lw = _safe_log(np.hypot(x1, x2))
        lt = _safe_log(np.hypot(t1, t2))
    elif mode == "componentwise":
        lw = _safe_log(np.abs(x1)) + _safe_log(np.abs(x2))
        lt = _safe_log(np.abs(t1)) + _safe_log(np.abs(t2))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    spec = pairwise_sum(lw[None, None] * C.magnitude2()) * C.weight
    space = pairwise_sum(lt * qnorm2(f.samples)) * f.grid.weight
    lhs = float(spec + ng**2 * space)
    return CheckResult(lhs, CONSTANTS.D * ng**2 * nf**2)


# -- sup-norm and concentration ---------------------------------------------


def sup_bound(f: QField, g, A1: OlctParams, A2: OlctParams) -> float:
    nf = l2_norm(f)
    ng = _as_window(g).norm
    return nf * ng / (2.0 * math.pi * math.sqrt(abs(A1.b * A2.b)))


def sup_bound_check(C: CoeffTensor, f: QField, g, A1: OlctParams, A2: OlctParams) -> CheckResult:
    """``max |C|`` against ``||f|| ||g|| / (2 pi sqrt|b1 b2|)``."""
    sup = float(qnorm(C.samples).max(initial=0.0))
    return CheckResult(sup, sup_bound(f, g, A1, A2))


def concentration_measure(C: CoeffTensor, fraction: float, f: QField | None = None, g=None) -> ConcentrationRegion:
    """Smallest greedy set of cells holding ``fraction`` of the coefficient energy.

    Cells are taken in order of decreasing ``|C|^2``.  When ``f`` and ``g``
    are given they must have unit norm.
    """
    if f is not None and g is not None:
        for name, v in (("signal", l2_norm(f)), ("window", _as_window(g).norm)):
            if abs(v - 1.0) > 1e-6:
                raise NotNormalized(f"{name} norm is {v}, expected 1")
    cell = C.weight
    e = C.magnitude2().ravel() * cell
    mask = np.zeros(e.size, dtype=bool)
    if fraction <= 0:
        return ConcentrationRegion(mask.reshape(C.samples.shape[:4]), cell, 0.0)
    order = np.argsort(-e, kind="stable")
    cum = np.cumsum(e[order])
    target = fraction * float(pairwise_sum(e)) if f is None else fraction
    k = int(np.searchsorted(cum, target * (1 - 1e-15))) + 1
    k = min(k, e.size)
    mask[order[:k]] = True
    return ConcentrationRegion(mask.reshape(C.samples.shape[:4]), cell, float(cum[k - 1]))


def concentration_bound(fraction: float, A1: OlctParams, A2: OlctParams) -> float:
    """Lower bound ``2 pi fraction sqrt|b1 b2|`` on the measure of the region."""
    return 2.0 * math.pi * fraction * math.sqrt(abs(A1.b * A2.b))


def region_of_measure(C: CoeffTensor, mu: float, kind: str = "greedy") -> ConcentrationRegion:
    """Region of about measure ``mu`` made of whole cells.

    ``kind="greedy"`` takes the largest-magnitude cells, the hardest case for
    the local inequality; ``kind="ball"`` takes the cells closest to the
    peak of ``|C|``.
    """
    cell = C.weight
    k = int(math.floor(mu / cell + 1e-9))
    mag = C.magnitude2()
    if kind == "greedy":
        key = -mag.ravel()
    elif kind == "ball":
        u1, u2 = C.ugrid.t1, C.ugrid.t2
        w1, w2 = C.wgrid.w1, C.wgrid.w2
        peak = np.unravel_index(int(np.argmax(mag)), mag.shape)
        axes = np.meshgrid(u1 - u1[peak[0]], u2 - u2[peak[1]], w1 - w1[peak[2]], w2 - w2[peak[3]], indexing="ij")
        key = sum(a**2 for a in axes).ravel()
    else:
        raise ValueError(f"unknown region kind {kind!r}")
    order = np.argsort(key, kind="stable")
    mask = np.zeros(mag.size, dtype=bool)
    mask[order[:k]] = True
    captured = float(pairwise_sum(mag.ravel()[mask]) * cell) if k else 0.0
    return ConcentrationRegion(mask.reshape(mag.shape), cell, captured)


# -- local inequality ------------------------------------------------------


@dataclass(frozen=True)
class LocalReport:
    lhs: float
    rhs: float
    measure: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def local_uncertainty_check(C: CoeffTensor, f: QField, g, E: ConcentrationRegion) -> LocalReport:
    """``||f|| ||g||`` against ``(1 - mu(E))^{-1/2} ||C||`` on the complement of E."""
    mu = E.measure
    if mu >= 1.0:
        raise MeasureTooLarge(f"mu(E) = {mu} must be below 1")
    nf = l2_norm(f)
    ng = _as_window(g).norm
    outside = pairwise_sum(np.where(E.mask, 0.0, C.magnitude2())) * C.weight
    return LocalReport(nf * ng, float(np.sqrt(outside)) / math.sqrt(1.0 - mu), mu)


def ball_measure(r0: float) -> float:
    """Lebesgue measure of the radius-``r0`` ball in four dimensions."""
    return math.pi**2 * r0**4 / 2.0


def moment_local_check(C: CoeffTensor, f: QField, g, alpha: float, r0: float) -> LocalReport:
    """``||f|| ||g||`` against ``C(alpha) [sum |(u, w)|^(2 alpha) |C|^2]^(1/2)``.

    ``C(alpha) = r0^-alpha / sqrt(1 - mu(B_r0))`` with the exact ball measure.
    """
    if alpha <= 0 or not (0 < r0 <= 1):
        raise ValueError("need alpha > 0 and r0 in (0, 1]")
    mu = ball_measure(r0)
    if mu >= 1.0:
        raise MeasureTooLarge(f"ball measure {mu} must be below 1")
    u1, u2 = C.ugrid.t1, C.ugrid.t2
    r2 = (
        u1[:, None, None, None] ** 2
        + u2[None, :, None, None] ** 2
        + C.wgrid.w1[None, None, :, None] ** 2
        + C.wgrid.w2[None, None, None, :] ** 2
    )
    moment = pairwise_sum(r2**alpha * C.magnitude2()) * C.weight
    c_alpha = 1.0 / (r0**alpha * math.sqrt(1.0 - mu))
    return LocalReport(l2_norm(f) * _as_window(g).norm, c_alpha * float(np.sqrt(moment)), mu)


# -- localisation identity -------------------------------------------------


def localisation_sides(C: CoeffTensor, f: QField, g, axis: int) -> tuple[float, float]:
    """``||g||^2 sum t_k^2 |f|^2`` and the same moment of the per-u inverses."""
    window = _as_window(g)
    lhs = window.norm**2 * spatial_spread(f, axis)
    t1, t2 = f.grid.coords()
    t = (t1, t2)[_axis(axis)]
    acc = np.zeros(C.ugrid.n1)
    for r in range(C.ugrid.n1):
        h = _fast_samples(C.samples[r], C.tgrid, C.A1, C.A2, inverse=True)
        acc[r] = pairwise_sum(t**2 * qnorm2(h))
    rhs = float(pairwise_sum(acc) * f.grid.weight * C.ugrid.weight)
    return lhs, rhs


def localisation_check(f: QField, g, A1: OlctParams, A2: OlctParams, axis: int, C: CoeffTensor | None = None) -> float:
    """Relative gap between the two sides of the localisation identity."""
    C = analyze(f, g, A1, A2) if C is None else C
    lhs, rhs = localisation_sides(C, f, g, axis)
    if lhs == 0.0:
        return abs(rhs)
    return abs(lhs - rhs) / abs(lhs)


__all__ = [
    "CONSTANTS",
    "CheckResult",
    "ConcentrationRegion",
    "LocalReport",
    "UncertaintyConstants",
    "ball_measure",
    "concentration_bound",
    "concentration_measure",
    "heisenberg_check",
    "localisation_check",
    "localisation_sides",
    "local_uncertainty_check",
    "log_uncertainty_check",
    "moment_local_check",
    "region_of_measure",
    "spatial_spread",
    "spectral_spread",
    "sup_bound",
    "sup_bound_check",
]
