"""Closed-form reference signals and coefficients.

The chirped Gaussian ``beta exp(-alpha1 t1^2) exp(-alpha2 t2^2)`` with
``alpha_s = +unit_s a_s / (2 b_s)`` cancels the quadratic kernel phase, and
its windowed transform against a square indicator window reduces to a
product of two elementary exponential integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OffGridHalfWidth, RemovableSingularity
from .grid import ALIGN_TOL, GridSpec, QField
from .kernel import OlctParams
from .quat import as_quat, exp_i, exp_j, qmul


@dataclass(frozen=True)
class GaussianSpec:
    """``beta exp(-alpha1 t1^2) exp(-alpha2 t2^2)``.

    ``alpha1 = (r1, s1)`` means ``r1 + i s1`` and sits to the left of
    ``beta``; ``alpha2 = (r2, s2)`` means ``r2 + j s2`` and sits to the right.
    """

    alpha1: tuple[float, float]
    alpha2: tuple[float, float]
    beta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "beta", as_quat(self.beta))
        object.__setattr__(self, "alpha1", tuple(float(v) for v in self.alpha1))
        object.__setattr__(self, "alpha2", tuple(float(v) for v in self.alpha2))

    @property
    def decaying(self) -> bool:
        return self.alpha1[0] > 0 and self.alpha2[0] > 0

    @classmethod
    def chirp_cancelling(cls, A1: OlctParams, A2: OlctParams, beta) -> "GaussianSpec":
        """Unit-modulus choice whose phase cancels the kernel's ``a t^2 / (2b)``."""
        return cls((0.0, A1.a / (2.0 * A1.b)), (0.0, A2.a / (2.0 * A2.b)), beta)


@dataclass(frozen=True)
class RectWindowSpec:
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("half-width must be positive")


def make_gaussian(spec: GaussianSpec, grid: GridSpec) -> QField:
    t1, t2 = grid.coords()
    r1, s1 = spec.alpha1
    r2, s2 = spec.alpha2
    left = np.exp(-r1 * t1**2)[..., None] * exp_i(-s1 * t1**2)
    right = np.exp(-r2 * t2**2)[..., None] * exp_j(-s2 * t2**2)
    return QField(grid, qmul(qmul(left, spec.beta), right))


def make_rect_window(spec: RectWindowSpec, grid: GridSpec) -> QField:
    """Indicator of the open square ``|t1| < a, |t2| < a``."""
    for dt in (grid.dt1, grid.dt2):
        m = spec.a / dt
        if abs(m - round(m)) > ALIGN_TOL * max(1.0, m):
            raise OffGridHalfWidth(f"half-width {spec.a} is not a multiple of {dt}")
    t1, t2 = grid.coords()
    tol = ALIGN_TOL * min(grid.dt1, grid.dt2)
    inside = (np.abs(t1) < spec.a - tol) & (np.abs(t2) < spec.a - tol)
    return QField.from_function(grid, lambda *_: inside.astype(float))


# Readings of the closed form that differ in sign or subscript choices.
VARIANTS = ("standard", "kernel_sign", "swapped_b")


def _side(w, u, a, A: OlctParams, exp_unit, limit: bool, sign: float = 1.0, b_upper: float | None = None):
    """One axis of the closed form: phase times the exponential difference over ``w - p``.

    ``sign`` multiplies the ``pi b / 2`` phase term; ``b_upper`` replaces
    ``b`` in the ``u + a`` exponential.
    """
    w = np.asarray(w, dtype=float)
    u = np.asarray(u, dtype=float)
    b, d, p, q = A.b, A.d, A.p, A.q
    bu = b if b_upper is None else b_upper
    delta = w - p
    if np.any(delta == 0) and not limit:
        raise RemovableSingularity("w == p; pass limit=True for the limiting value")
    phase = exp_unit((2.0 * w * (b * q - d * p) + d * (w**2 + p**2) + sign * math.pi * b / 2.0) / (2.0 * b))
    diff = exp_unit(-delta * (u + a) / bu) - exp_unit(-delta * (u - a) / b)
    safe = np.where(delta == 0, 1.0, delta)
    quotient = diff / safe[..., None]
    if limit:
        # (e^{-x(u+a)/b} - e^{-x(u-a)/b}) / x -> -2a/b * unit * e^{0}
        unit = exp_unit(math.pi / 2.0)
        lim = (-2.0 * a / b) * unit * np.ones(delta.shape + (1,))
        quotient = np.where((delta == 0)[..., None], lim, quotient)
    return phase, quotient


def box_chirp_closed_form(
    u, w, A1: OlctParams, A2: OlctParams, a: float, beta, limit: bool = False, variant: str = "standard"
) -> np.ndarray:
    """Closed-form coefficient of the chirp-cancelling Gaussian under the square window.

    ``u`` and ``w`` are pairs of broadcastable arrays.  The result is
    ``amp * phase_i * D_i / (w1 - p1) * beta * D_j / (w2 - p2) * phase_j`` with
    ``amp = b1 b2 / (2 pi sqrt|b1 b2|)``, which is ``sqrt(b1 b2) / (2 pi)``
    for positive ``b``.  At ``w_s == p_s`` the removable singularity is
    replaced by its limit when ``limit`` is true.

    ``variant`` selects an alternative reading for comparison:
    ``"kernel_sign"`` keeps the kernel's ``-pi b / 2`` phase term and
    ``"swapped_b"`` uses ``b1`` in the second axis ``u + a`` exponential.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    beta = as_quat(beta)
    sign = -1.0 if variant == "kernel_sign" else 1.0
    ph1, q1 = _side(w[0], u[0], a, A1, exp_i, limit, sign)
    ph2, q2 = _side(w[1], u[1], a, A2, exp_j, limit, sign, A1.b if variant == "swapped_b" else None)
    amp = A1.b * A2.b / (2.0 * math.pi * math.sqrt(abs(A1.b * A2.b)))
    left = qmul(ph1, q1)
    right = qmul(q2, ph2)
    return amp * qmul(qmul(left, beta), right)


def _gauss_legendre_side(w, u, a, A: OlctParams, exp_unit, chirp: float, nodes: int):
    """``int_{u-a}^{u+a} K(t, w) exp_unit(-chirp t^2) dt`` by Gauss-Legendre, per (u, w)."""
    x, wt = np.polynomial.legendre.leggauss(nodes)
    u = np.asarray(u, float)[..., None]
    t = u + a * x
    w = np.asarray(w, float)[..., None]
    b, d, p, q = A.b, A.d, A.p, A.q
    theta = (A.a * t**2 - 2.0 * t * (w - p) - 2.0 * w * (d * p - b * q) + d * (w**2 + p**2) - math.pi * b / 2.0) / (2.0 * b)
    z = np.sum(wt * np.exp(1j * (theta - chirp * t**2)), axis=-1) * a / math.sqrt(2.0 * math.pi * abs(b))
    one = exp_unit(0.0)
    unit = exp_unit(math.pi / 2.0)
    return z.real[..., None] * one + z.imag[..., None] * unit


def box_chirp_quadrature(u, w, spec: GaussianSpec, A1: OlctParams, A2: OlctParams, a: float, nodes: int = 400):
    """Continuous windowed coefficient of a pure-phase Gaussian, by Gauss-Legendre.

    Independent of the sampled engine: the integral factorises as
    ``[int K_L e_i dt1] beta [int e_j K_R dt2]`` over the window square.
    Only the imaginary parts of the exponents are supported.
    """
    if spec.alpha1[0] != 0.0 or spec.alpha2[0] != 0.0:
        raise ValueError("only unit-modulus Gaussians are supported")
    left = _gauss_legendre_side(w[0], u[0], a, A1, exp_i, spec.alpha1[1], nodes)
    right = _gauss_legendre_side(w[1], u[1], a, A2, exp_j, spec.alpha2[1], nodes)
    return qmul(qmul(left, spec.beta), right)


def box_chirp_magnitude(u, w, A1: OlctParams, A2: OlctParams, a: float, beta) -> np.ndarray:
    """``|closed form|`` through the sine factorisation."""
    beta = as_quat(beta)
    out = np.sqrt(np.sum(beta**2)) / (2.0 * math.pi * math.sqrt(abs(A1.b * A2.b)))
    for ws, A in ((w[0], A1), (w[1], A2)):
        x = np.asarray(ws, float) - A.p
        safe = np.where(x == 0, 1.0, x)
        out = out * np.abs(A.b) * np.where(x == 0, 2.0 * a / abs(A.b), np.abs(2.0 * np.sin(x * a / A.b) / safe))
    return out


# -- Gaussian moments ------------------------------------------------------


def gaussian_norm2(sigma1: float, sigma2: float) -> float:
    """``int exp(-t1^2/sigma1^2 - t2^2/sigma2^2) dt`` for the squared Gaussian."""
    return math.pi * sigma1 * sigma2


def gaussian_second_moment(sigma: float) -> float:
    """Per-axis ``int t^2 |f|^2 / int |f|^2`` for ``f = exp(-t^2 / (2 sigma^2))``."""
    return sigma**2 / 2.0


def gaussian_heisenberg_ratio(sigma_f: float, sigma_g: float) -> float:
    """Heisenberg ratio of a Gaussian signal under a Gaussian window (Fourier-shaped axis).

    The windowed piece ``f(t) g(t - u)`` has inverse width
    ``1 / sigma_f^2 + 1 / sigma_g^2``, which widens its spectrum relative
    to the unwindowed signal.
    """
    return math.sqrt(1.0 + sigma_f**2 / sigma_g**2)


__all__ = [
    "GaussianSpec",
    "RectWindowSpec",
    "box_chirp_closed_form",
    "VARIANTS",
    "box_chirp_magnitude",
    "box_chirp_quadrature",
    "gaussian_heisenberg_ratio",
    "gaussian_norm2",
    "gaussian_second_moment",
    "make_gaussian",
    "make_rect_window",
]
