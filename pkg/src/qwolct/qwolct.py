"""Windowed two-sided QOLCT: analysis with synthesis, plus covariance checks.

The coefficient at window position ``u`` and modulation ``w`` is the QOLCT of
``t -> f(t) conj(g(t - u))``; the conjugated window sits between the signal
and the right kernel, so for non-commuting quaternion windows the order
matters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AsymmetricGrid, GridMismatch, NonInvertibleWindowPair, OffGridTarget, UnalignedGrid, ZeroWindow
from .grid import ALIGN_TOL, GridSpec, QField, inner, l2_norm, modulate, pairwise_sum, parity, shift
from .kernel import OlctParams
from .qolct import FreqGrid, _degenerate_samples, _direct_samples, _fast_samples
from .quat import exp_i, exp_j, qconj, qinv, qmul, qnorm, qnorm2

# Coefficients are produced in blocks of u1 rows to bound peak memory.
_U_BLOCK_BYTES = 64 * 2**20


@dataclass(frozen=True)
class WindowSpec:
    g: QField
    norm: float = field(init=False)

    def __post_init__(self):
        nrm = l2_norm(self.g)
        if nrm == 0.0:
            raise ZeroWindow("window must be nonzero")
        object.__setattr__(self, "norm", nrm)

    @classmethod
    def gaussian(cls, grid: GridSpec, sigma: float, normalize: bool = True) -> "WindowSpec":
        g = QField.from_function(grid, lambda t1, t2: np.exp(-(t1**2 + t2**2) / (2.0 * sigma**2)))
        if normalize:
            g = g.scale(1.0 / l2_norm(g))
        return cls(g)

    def normalized(self) -> "WindowSpec":
        return WindowSpec(self.g.scale(1.0 / self.norm))


def _as_window(g) -> WindowSpec:
    return g if isinstance(g, WindowSpec) else WindowSpec(g)


@dataclass(frozen=True)
class CoeffTensor:
    """Coefficients indexed ``(u1, u2, w1, w2, 4)``."""

    tgrid: GridSpec
    ugrid: GridSpec
    wgrid: FreqGrid
    samples: np.ndarray
    A1: OlctParams
    A2: OlctParams

    @property
    def weight(self) -> float:
        return self.ugrid.weight * self.wgrid.weight

    @property
    def cell_measure(self) -> float:
        return self.weight

    def magnitude2(self) -> np.ndarray:
        return qnorm2(self.samples)


def _u_steps(tgrid: GridSpec, ugrid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Integer sample offsets of every window position relative to the signal grid."""
    out = []
    for n, dt, o, un, udt, uo in (
        (tgrid.n1, tgrid.dt1, tgrid.origin1, ugrid.n1, ugrid.dt1, ugrid.origin1),
        (tgrid.n2, tgrid.dt2, tgrid.origin2, ugrid.n2, ugrid.dt2, ugrid.origin2),
    ):
        pos = (uo + np.arange(un) * udt) / dt
        steps = np.rint(pos)
        if np.any(np.abs(pos - steps) > ALIGN_TOL * np.maximum(1.0, np.abs(pos))):
            raise GridMismatch("window positions must be multiples of the sample spacing")
        out.append(steps.astype(int))
    return out[0], out[1]


def _window_index(tgrid: GridSpec, g: GridSpec, axis: int, steps: np.ndarray):
    """Index into the window samples for ``g(t - u)``, per (u, t) pair."""
    if axis == 0:
        n, dt, o, gn, gdt, go = tgrid.n1, tgrid.dt1, tgrid.origin1, g.n1, g.dt1, g.origin1
    else:
        n, dt, o, gn, gdt, go = tgrid.n2, tgrid.dt2, tgrid.origin2, g.n2, g.dt2, g.origin2
    if abs(gdt - dt) > 1e-12 * dt:
        raise GridMismatch("window and signal must share the sample spacing")
    off = (o - go) / dt
    if abs(off - round(off)) > ALIGN_TOL:
        raise GridMismatch("window grid is not aligned with the signal grid")
    idx = np.arange(n)[None, :] - steps[:, None] + int(round(off))
    ok = (idx >= 0) & (idx < gn)
    return np.where(ok, idx, 0), ok


def shifted_windows(tgrid: GridSpec, g: QField, ugrid: GridSpec, rows=None) -> np.ndarray:
    """``conj(g(t - u))`` sampled as an array ``(u1, u2, t1, t2, 4)``."""
    s1, s2 = _u_steps(tgrid, ugrid)
    if rows is not None:
        s1 = s1[rows]
    i1, ok1 = _window_index(tgrid, g.grid, 0, s1)
    i2, ok2 = _window_index(tgrid, g.grid, 1, s2)
    gs = g.samples[i1[:, None, :, None], i2[None, :, None, :]]
    mask = ok1[:, None, :, None] & ok2[None, :, None, :]
    return qconj(gs) * mask[..., None]


def _plan(f: QField, A1: OlctParams, A2: OlctParams, ugrid, wgrid):
    ugrid = f.grid if ugrid is None else ugrid
    wgrid = FreqGrid.aligned_for(f.grid, A1, A2) if wgrid is None else wgrid
    return ugrid, wgrid


def analyze_blocks(
    f: QField,
    g,
    A1: OlctParams,
    A2: OlctParams,
    ugrid: GridSpec | None = None,
    wgrid: FreqGrid | None = None,
):
    """Yield ``(rows, block)`` with the coefficients for a slice of u1 rows.

    Lets callers reduce over the coefficients without holding the whole
    tensor, which at n = 64 is half a gigabyte.
    """
    window = _as_window(g)
    ugrid, wgrid = _plan(f, A1, A2, ugrid, wgrid)
    degenerate = A1.degenerate or A2.degenerate
    fast = not degenerate and wgrid.matches(f.grid, A1, A2)
    row_bytes = ugrid.n2 * f.grid.n1 * f.grid.n2 * 4 * 8 * 6
    block = max(1, _U_BLOCK_BYTES // row_bytes)
    for start in range(0, ugrid.n1, block):
        rows = slice(start, min(start + block, ugrid.n1))
        h = qmul(f.samples, shifted_windows(f.grid, window.g, ugrid, rows))
        if degenerate:
            out = _degenerate_samples(h, f.grid, A1, A2, wgrid.w1, wgrid.w2)
        elif fast:
            out = _fast_samples(h, f.grid, A1, A2)
        else:
            out = _direct_samples(h, f.grid, A1, A2, wgrid.w1, wgrid.w2)
        yield rows, out


def analyze(
    f: QField,
    g,
    A1: OlctParams,
    A2: OlctParams,
    ugrid: GridSpec | None = None,
    wgrid: FreqGrid | None = None,
) -> CoeffTensor:
    """Windowed transform on the ``ugrid`` x ``wgrid`` lattice.

    ``ugrid`` defaults to the signal grid and ``wgrid`` to the aligned grid.
    Degenerate axes go through the chirp-resampling branch applied to
    ``f conj(g(. - u))``.
    """
    ugrid, wgrid = _plan(f, A1, A2, ugrid, wgrid)
    out = np.empty((ugrid.n1, ugrid.n2) + wgrid.shape + (4,))
    for rows, block in analyze_blocks(f, g, A1, A2, ugrid, wgrid):
        out[rows] = block
    return CoeffTensor(f.grid, ugrid, wgrid, out, A1, A2)


def streamed_energy(
    f: QField,
    g,
    A1: OlctParams,
    A2: OlctParams,
    ugrid: GridSpec | None = None,
    wgrid: FreqGrid | None = None,
) -> float:
    """``energy(analyze(f, g, ...))`` without materialising the tensor."""
    ugrid, wgrid = _plan(f, A1, A2, ugrid, wgrid)
    rows_sums = np.zeros(ugrid.n1)
    for rows, block in analyze_blocks(f, g, A1, A2, ugrid, wgrid):
        rows_sums[rows] = pairwise_sum(qnorm2(block), axes=(1, 2, 3))
    return float(pairwise_sum(rows_sums) * ugrid.weight * wgrid.weight)


def window_gram(g1: QField, g2: QField) -> np.ndarray:
    """``sum_s conj(g1(s)) g2(s) ds``, the factor that synthesis must undo."""
    g1.grid.check_same(g2.grid)
    return pairwise_sum(qmul(qconj(g1.samples), g2.samples), axes=(0, 1)) * g1.grid.weight


def synthesize(C: CoeffTensor, g1, g2=None, A1: OlctParams | None = None, A2: OlctParams | None = None) -> QField:
    """Reconstruct the signal from coefficients computed with window ``g1``.

    Each window position is inverted with the conjugate kernels, multiplied
    on the right by ``g2(t - u)`` and accumulated over ``u``.  The sum equals
    ``f(t) G`` with ``G = sum conj(g1) g2``; the result is right-multiplied
    by ``G^-1``.  For real windows ``G`` is the inner product ``<g2, g1>``.
    """
    w1 = _as_window(g1)
    w2 = w1 if g2 is None else _as_window(g2)
    A1 = C.A1 if A1 is None else A1
    A2 = C.A2 if A2 is None else A2
    gram = window_gram(w1.g, w2.g)
    if qnorm(gram) <= 1e-9 * w1.norm * w2.norm:
        raise NonInvertibleWindowPair("windows are (nearly) orthogonal")
    tgrid = C.tgrid
    if not C.wgrid.matches(tgrid, A1, A2):
        raise UnalignedGrid("synthesis needs the aligned frequency grid")

    acc = np.zeros(tgrid.shape + (4,))
    row_bytes = C.ugrid.n2 * tgrid.n1 * tgrid.n2 * 4 * 8 * 6
    block = max(1, _U_BLOCK_BYTES // row_bytes)
    for start in range(0, C.ugrid.n1, block):
        rows = slice(start, min(start + block, C.ugrid.n1))
        h = _fast_samples(C.samples[rows], tgrid, A1, A2, inverse=True)
        win = qconj(shifted_windows(tgrid, w2.g, C.ugrid, rows))
        acc += pairwise_sum(qmul(h, win), axes=(0, 1))
    acc *= C.ugrid.weight
    return QField(tgrid, qmul(acc, qinv(gram)))


def coeff_inner(C1: CoeffTensor, C2: CoeffTensor) -> np.ndarray:
    """``sum C1 conj(C2) du dw`` as a quaternion."""
    if C1.samples.shape != C2.samples.shape:
        raise GridMismatch("coefficient tensors have different shapes")
    C1.ugrid.check_same(C2.ugrid)
    if not (np.allclose(C1.wgrid.w1, C2.wgrid.w1) and np.allclose(C1.wgrid.w2, C2.wgrid.w2)):
        raise GridMismatch("coefficient tensors use different modulation grids")
    return pairwise_sum(qmul(C1.samples, qconj(C2.samples)), axes=(0, 1, 2, 3)) * C1.weight


def energy(C: CoeffTensor) -> float:
    return float(pairwise_sum(C.magnitude2()) * C.weight)


# -- covariance checks -----------------------------------------------------


def _rel_dev(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(np.abs(lhs).max(initial=0.0), np.abs(rhs).max(initial=0.0))
    if scale == 0.0:
        return 0.0
    return float(np.sqrt(qnorm2(lhs - rhs)).max() / scale)


def _overlap(n: int, s: int) -> tuple[slice, slice]:
    """Slices ``dst``, ``src`` with ``dst[m] == src[m - s]``, both in range."""
    lo, hi = max(0, s), min(n, n + s)
    return slice(lo, hi), slice(lo - s, hi - s)


def _w_steps(C: CoeffTensor, offsets, what: str) -> tuple[int, int]:
    """Convert modulation offsets into aligned-grid index steps."""
    out = []
    for w, off in ((C.wgrid.w1, offsets[0]), (C.wgrid.w2, offsets[1])):
        step = w[1] - w[0]
        s = off / step
        r = int(round(s))
        if abs(s - r) > ALIGN_TOL * max(1.0, abs(s)):
            raise OffGridTarget(f"{what} offset {off} is not a multiple of the grid step {step}")
        out.append(r)
    return out[0], out[1]


def time_shift_phases(A1: OlctParams, A2: OlctParams, k, w1, w2):
    """Left and right unit factors of the time-shift covariance."""
    th1 = A1.a * k[0] * A1.q - A1.c * k[0] * A1.p + A1.c * k[0] * np.asarray(w1) - A1.a * A1.c * k[0] ** 2 / 2.0
    th2 = A2.a * k[1] * A2.q - A2.c * k[1] * A2.p + A2.c * k[1] * np.asarray(w2) - A2.a * A2.c * k[1] ** 2 / 2.0
    return exp_i(th1), exp_j(th2)


def check_time_shift(f: QField, g, A1: OlctParams, A2: OlctParams, k) -> float:
    """Residual of ``O[f(. - k)](u, w) = e_i O[f](u - k, w - a k) e_j``."""
    base = analyze(f, g, A1, A2)
    su = f.grid.steps(k)
    sw = _w_steps(base, (A1.a * k[0], A2.a * k[1]), "a k")
    moved = analyze(shift(f, k), g, A1, A2)
    du1, su1 = _overlap(f.grid.n1, su[0])
    du2, su2 = _overlap(f.grid.n2, su[1])
    dw1, sw1 = _overlap(len(base.wgrid.w1), sw[0])
    dw2, sw2 = _overlap(len(base.wgrid.w2), sw[1])
    left, right = time_shift_phases(A1, A2, k, base.wgrid.w1[dw1], base.wgrid.w2[dw2])
    rhs = base.samples[su1, su2, sw1, sw2]
    rhs = qmul(qmul(left[None, None, :, None, :], rhs), right[None, None, None, :, :])
    return _rel_dev(moved.samples[du1, du2, dw1, dw2], rhs)


def modulation_phases(A1: OlctParams, A2: OlctParams, w0):
    th1 = w0[0] * (A1.b * A1.q - A1.d * A1.p) - A1.d * A1.b * w0[0] ** 2 / 2.0 + A1.d * w0[0] ** 2
    th2 = w0[1] * (A2.b * A2.q - A2.d * A2.p) - A2.d * A2.b * w0[1] ** 2 / 2.0 + A2.d * w0[1] ** 2
    return exp_i(th1), exp_j(th2)


def _node(w: np.ndarray, target: float) -> int:
    step = abs(w[1] - w[0])
    m = int(np.argmin(np.abs(w - target)))
    if abs(w[m] - target) > ALIGN_TOL * max(1.0, abs(target), step):
        raise OffGridTarget(f"{target} is not a node of the modulation grid")
    return m


def check_modulation(f: QField, g, A1: OlctParams, A2: OlctParams, w0) -> float:
    """Residual of ``O[M_w0 f](u, w0) = e_i O[f](u, (1 - b) w0) e_j``.

    Evaluated at the single modulation node ``w0`` for every window position.
    Exact only for windows with values in span{1, j}, which commute with the
    right kernel.
    """
    base = analyze(f, g, A1, A2)
    m0 = (_node(base.wgrid.w1, w0[0]), _node(base.wgrid.w2, w0[1]))
    m1 = (_node(base.wgrid.w1, (1 - A1.b) * w0[0]), _node(base.wgrid.w2, (1 - A2.b) * w0[1]))
    moved = analyze(modulate(f, w0), g, A1, A2)
    left, right = modulation_phases(A1, A2, w0)
    rhs = qmul(qmul(left, base.samples[:, :, m1[0], m1[1]]), right)
    return _rel_dev(moved.samples[:, :, m0[0], m0[1]], rhs)


def check_window_shift(f: QField, g, A1: OlctParams, A2: OlctParams, k) -> float:
    """Residual of ``O_{g(. - k)}[f](u, w) = O_g[f](u + k, w)``."""
    window = _as_window(g)
    s = f.grid.steps(k)
    base = analyze(f, window, A1, A2)
    moved = analyze(f, shift(window.g, k), A1, A2)
    d1, src1 = _overlap(f.grid.n1, -s[0])
    d2, src2 = _overlap(f.grid.n2, -s[1])
    return _rel_dev(moved.samples[d1, d2], base.samples[src1, src2])


@dataclass(frozen=True)
class ParityReport:
    factor: float
    residual: float
    raw_residual: float


def check_parity(f: QField, g, A1: OlctParams, A2: OlctParams) -> ParityReport:
    """Compare ``O_g[Pf](u, w)`` with ``O^{A'}_{Pg}[f](-u, -w)``.

    ``A'`` negates the offsets.  The best-fit real factor between the two
    sides is reported together with the residual after applying it;
    ``raw_residual`` is the residual with factor 1.
    """
    window = _as_window(g)
    if not f.grid.is_symmetric():
        raise AsymmetricGrid("parity check needs a symmetric grid")
    lhs = analyze(parity(f), window, A1, A2).samples
    rhs_full = analyze(f, parity(window.g), A1.mirrored(), A2.mirrored()).samples
    # -x sits at index n - m on a symmetric grid; index 0 has no partner
    rhs = np.zeros_like(rhs_full)
    rhs[1:, 1:, 1:, 1:] = rhs_full[:0:-1, :0:-1, :0:-1, :0:-1]
    lhs = lhs[1:, 1:, 1:, 1:]
    rhs = rhs[1:, 1:, 1:, 1:]
    denom = float(np.sum(qnorm2(rhs)))
    factor = float(np.sum(lhs * rhs) / denom) if denom > 0 else 1.0
    return ParityReport(factor, _rel_dev(lhs, factor * rhs), _rel_dev(lhs, rhs))


def check_linearity(
    fs: Sequence[QField],
    alphas: Sequence[float],
    g,
    A1: OlctParams,
    A2: OlctParams,
    windows: Sequence | None = None,
    betas: Sequence | None = None,
) -> float:
    """Largest residual of superposition in the signal and in the window.

    Signal combinations use real coefficients.  Window combinations use
    quaternion coefficients ``beta`` and compare against the coefficients
    right-multiplied by ``conj(beta)``; that identity is exact when every
    ``beta`` lies in span{1, j}.
    """
    if len(fs) != len(alphas):
        raise ValueError("fs and alphas must have equal length")
    mix = fs[0].scale(alphas[0])
    for f, a in zip(fs[1:], alphas[1:]):
        mix = mix + f.scale(a)
    lhs = analyze(mix, g, A1, A2).samples
    rhs = sum(float(a) * analyze(f, g, A1, A2).samples for f, a in zip(fs, alphas))
    res = _rel_dev(lhs, rhs)
    if windows:
        betas = [np.asarray(b, float) for b in betas]
        gs = [_as_window(w).g for w in windows]
        mixed = gs[0].lmul(betas[0])
        for w, b in zip(gs[1:], betas[1:]):
            mixed = mixed + w.lmul(b)
        lhs = analyze(fs[0], mixed, A1, A2).samples
        rhs = sum(qmul(analyze(fs[0], w, A1, A2).samples, qconj(b)) for w, b in zip(gs, betas))
        res = max(res, _rel_dev(lhs, rhs))
    return res


def inner_product_rhs(f1: QField, f2: QField, g1: QField, g2: QField) -> np.ndarray:
    """``<f1, f2> conj(<g1, g2>)``, the closed-form side of the inner product relation."""
    return qmul(inner(f1, f2), qconj(inner(g1, g2)))


def isometry_defect(C: CoeffTensor, f: QField, g) -> float:
    """Relative gap between coefficient energy and ``||f||^2 ||g||^2``."""
    window = _as_window(g)
    target = l2_norm(f) ** 2 * window.norm**2
    return abs(energy(C) - target) / target if target else math.nan
