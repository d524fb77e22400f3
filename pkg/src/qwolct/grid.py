"""Uniformly sampled 2D quaternion fields and their L2 geometry."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AsymmetricGrid, GridMismatch, NonGridShift
from .quat import as_quat, exp_i, exp_j, qconj, qmul, qnorm2

ALIGN_TOL = 1e-9


def pairwise_sum(x: np.ndarray, axes=None) -> np.ndarray:
    """Sum over ``axes`` by a fixed binary tree.

    The reduction order depends only on the array shape, so the result is
    reproducible regardless of memory layout or thread count.
    """
    x = np.asarray(x)
    if axes is None:
        axes = tuple(range(x.ndim))
    elif isinstance(axes, int):
        axes = (axes,)
    axes = sorted(a % x.ndim for a in axes)
    rest = [a for a in range(x.ndim) if a not in axes]
    y = np.transpose(x, axes + rest).reshape((-1,) + tuple(x.shape[a] for a in rest))
    if y.shape[0] == 0:
        return np.zeros(y.shape[1:], dtype=x.dtype)
    while y.shape[0] > 1:
        if y.shape[0] % 2:
            y = np.concatenate([y, np.zeros((1,) + y.shape[1:], dtype=y.dtype)])
        y = y[0::2] + y[1::2]
    return y[0]


@dataclass(frozen=True)
class GridSpec:
    n1: int
    n2: int
    dt1: float
    dt2: float
    origin1: float
    origin2: float

    def __post_init__(self):
        if self.n1 <= 0 or self.n2 <= 0:
            raise ValueError("sample counts must be positive")
        if not (self.dt1 > 0 and self.dt2 > 0):
            raise ValueError("spacings must be positive")

    @classmethod
    def symmetric(cls, n1: int, dt1: float, n2: int | None = None, dt2: float | None = None) -> "GridSpec":
        """Grid with origin ``-(n/2) dt`` on each axis, so that t = 0 is a node."""
        n2 = n1 if n2 is None else n2
        dt2 = dt1 if dt2 is None else dt2
        return cls(n1, n2, float(dt1), float(dt2), -(n1 // 2) * float(dt1), -(n2 // 2) * float(dt2))

    @classmethod
    def desk(cls, n: int = 64, extent: float = 16.0) -> "GridSpec":
        return cls.symmetric(n, extent / n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def weight(self) -> float:
        return self.dt1 * self.dt2

    @property
    def t1(self) -> np.ndarray:
        return self.origin1 + np.arange(self.n1) * self.dt1

    @property
    def t2(self) -> np.ndarray:
        return self.origin2 + np.arange(self.n2) * self.dt2

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.t1, self.t2, indexing="ij")

    def is_symmetric(self) -> bool:
        return (
            self.n1 % 2 == 0
            and self.n2 % 2 == 0
            and abs(self.origin1 + (self.n1 // 2) * self.dt1) <= ALIGN_TOL * self.dt1
            and abs(self.origin2 + (self.n2 // 2) * self.dt2) <= ALIGN_TOL * self.dt2
        )

    def check_same(self, other: "GridSpec") -> None:
        if self.shape != other.shape or not np.allclose(
            [self.dt1, self.dt2, self.origin1, self.origin2],
            [other.dt1, other.dt2, other.origin1, other.origin2],
            rtol=1e-12,
            atol=1e-12,
        ):
            raise GridMismatch(f"grids differ: {self} vs {other}")

    def steps(self, k) -> tuple[int, int]:
        """Convert a displacement to integer sample steps, or raise NonGridShift."""
        s = (k[0] / self.dt1, k[1] / self.dt2)
        r = tuple(int(round(v)) for v in s)
        if any(abs(v - ri) > ALIGN_TOL for v, ri in zip(s, r)):
            raise NonGridShift(f"shift {k} is not a multiple of the grid spacing")
        return r


@dataclass(frozen=True)
class QField:
    grid: GridSpec
    samples: np.ndarray

    def __post_init__(self):
        s = as_quat(self.samples)
        if s.shape != (self.grid.n1, self.grid.n2, 4):
            raise GridMismatch(f"samples shape {s.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "samples", s)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "QField":
        return cls(grid, np.zeros(grid.shape + (4,)))

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "QField":
        """Sample ``fn(t1, t2)`` (returning ``(..., 4)`` or a real array) on ``grid``."""
        t1, t2 = grid.coords()
        v = np.asarray(fn(t1, t2), dtype=float)
        if v.shape == grid.shape:
            v = np.stack([v, np.zeros_like(v), np.zeros_like(v), np.zeros_like(v)], axis=-1)
        return cls(grid, v)

    def __add__(self, other: "QField") -> "QField":
        self.grid.check_same(other.grid)
        return QField(self.grid, self.samples + other.samples)

    def __sub__(self, other: "QField") -> "QField":
        self.grid.check_same(other.grid)
        return QField(self.grid, self.samples - other.samples)

    def __neg__(self) -> "QField":
        return QField(self.grid, -self.samples)

    def scale(self, alpha: float) -> "QField":
        return QField(self.grid, float(alpha) * self.samples)

    def lmul(self, q) -> "QField":
        """Left-multiply every sample by the quaternion ``q``."""
        return QField(self.grid, qmul(q, self.samples))

    def rmul(self, q) -> "QField":
        return QField(self.grid, qmul(self.samples, q))

    def conj(self) -> "QField":
        return QField(self.grid, qconj(self.samples))

    def magnitude(self) -> np.ndarray:
        return np.sqrt(qnorm2(self.samples))


def inner(f: QField, g: QField) -> np.ndarray:
    """Discrete ``<f, g> = sum f conj(g) dt1 dt2`` as a quaternion."""
    f.grid.check_same(g.grid)
    return pairwise_sum(qmul(f.samples, qconj(g.samples)), axes=(0, 1)) * f.grid.weight


def l2_norm(f: QField) -> float:
    # rescale by the peak so tiny nonzero fields do not underflow to zero
    peak = float(np.max(np.abs(f.samples), initial=0.0))
    if peak == 0.0 or not np.isfinite(peak):
        return peak
    return peak * float(np.sqrt(pairwise_sum(qnorm2(f.samples / peak)) * f.grid.weight))


def _shifted(samples: np.ndarray, s1: int, s2: int) -> np.ndarray:
    out = np.zeros_like(samples)
    n1, n2 = samples.shape[:2]
    if abs(s1) >= n1 or abs(s2) >= n2:
        return out
    dst1 = slice(max(s1, 0), n1 + min(s1, 0))
    src1 = slice(max(-s1, 0), n1 + min(-s1, 0))
    dst2 = slice(max(s2, 0), n2 + min(s2, 0))
    src2 = slice(max(-s2, 0), n2 + min(-s2, 0))
    out[dst1, dst2] = samples[src1, src2]
    return out


def shift(f: QField, k) -> QField:
    """``t -> f(t - k)`` for a grid-aligned ``k``; vacated samples are zero."""
    s1, s2 = f.grid.steps(k)
    return QField(f.grid, _shifted(f.samples, s1, s2))


def modulate(f: QField, w) -> QField:
    """``t -> exp_i(t1 w1) f(t) exp_j(t2 w2)``."""
    t1, t2 = f.grid.coords()
    return QField(f.grid, qmul(qmul(exp_i(t1 * w[0]), f.samples), exp_j(t2 * w[1])))


def parity(f: QField) -> QField:
    """``t -> f(-t)`` on a symmetric grid.

    The first row and column (coordinate ``-n/2 dt``) have no mirror node and
    become zero.
    """
    if not f.grid.is_symmetric():
        raise AsymmetricGrid("parity needs an even grid with origin -(n/2) dt")
    out = np.zeros_like(f.samples)
    out[1:, 1:] = f.samples[:0:-1, :0:-1]
    return QField(f.grid, out)
