"""Offset linear canonical kernels.

Each axis carries a parameter set ``(a, b, c, d | p, q)`` with ``ad - bc = 1``.
Axis 1 uses the i-exponential kernel applied from the left, axis 2 the
j-exponential kernel applied from the right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateB, NegativeD, NotUnimodular
from .quat import exp_i, exp_j

UNIMODULAR_TOL = 1e-12
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class OlctParams:
    a: float
    b: float
    c: float
    d: float
    p: float = 0.0
    q: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "p", "q"):
            object.__setattr__(self, name, float(getattr(self, name)))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > UNIMODULAR_TOL:
            raise NotUnimodular(f"ad - bc = {det!r}, expected 1")

    @classmethod
    def fourier(cls, p: float = 0.0, q: float = 0.0) -> "OlctParams":
        """The Fourier-shaped matrix ``[[0, 1], [-1, 0]]``."""
        return cls(0.0, 1.0, -1.0, 0.0, p, q)

    @classmethod
    def fractional(cls, angle: float) -> "OlctParams":
        return cls(math.cos(angle), math.sin(angle), -math.sin(angle), math.cos(angle))

    @property
    def degenerate(self) -> bool:
        return abs(self.b) <= DEGENERATE_TOL

    @property
    def amplitude(self) -> float:
        """``1 / sqrt(2 pi |b|)``; the sign of b stays in the phase."""
        if self.degenerate:
            raise DegenerateB("kernel amplitude undefined for b = 0")
        return 1.0 / math.sqrt(2.0 * math.pi * abs(self.b))

    def mirrored(self) -> "OlctParams":
        """Same matrix with the offsets negated."""
        return OlctParams(self.a, self.b, self.c, self.d, -self.p, -self.q)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c, self.d, self.p, self.q)


def validate(a, b, c, d, p=0.0, q=0.0) -> OlctParams:
    return OlctParams(a, b, c, d, p, q)


def kernel_phase(t, w, A: OlctParams) -> np.ndarray:
    """Phase of the kernel exponential, broadcasting over ``t`` and ``w``."""
    if A.degenerate:
        raise DegenerateB("kernel phase undefined for b = 0")
    t = np.asarray(t, dtype=float)
    w = np.asarray(w, dtype=float)
    a, b, d, p, q = A.a, A.b, A.d, A.p, A.q
    bracket = a * t**2 - 2.0 * t * (w - p) - 2.0 * w * (d * p - b * q) + d * (w**2 + p**2) - math.pi * b / 2.0
    return bracket / (2.0 * b)


def split_phase(A: OlctParams):
    """Factor the phase as ``pre(t) - t (w - p) / b + post(w)``.

    Returns the callables ``pre`` and ``post``; the cross term is linear in
    ``t`` and is what the fast path evaluates with an FFT.
    """
    if A.degenerate:
        raise DegenerateB("no chirp factorisation for b = 0")
    a, b, d, p, q = A.a, A.b, A.d, A.p, A.q

    def pre(t):
        t = np.asarray(t, dtype=float)
        return a * t**2 / (2.0 * b)

    def post(w):
        w = np.asarray(w, dtype=float)
        return (-2.0 * w * (d * p - b * q) + d * (w**2 + p**2) - math.pi * b / 2.0) / (2.0 * b)

    return pre, post


def kernel_left(t1, w1, A1: OlctParams) -> np.ndarray:
    return A1.amplitude * exp_i(kernel_phase(t1, w1, A1))


def kernel_right(t2, w2, A2: OlctParams) -> np.ndarray:
    return A2.amplitude * exp_j(kernel_phase(t2, w2, A2))


def chirp_phase(w, A: OlctParams) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    return A.c * A.d / 2.0 * (w - A.p) ** 2 + w * A.p


def chirp_factor(w, A: OlctParams, unit: str = "i") -> np.ndarray:
    """``sqrt(d) exp_unit(cd/2 (w - p)^2 + w p)``, the b = 0 branch multiplier."""
    if not A.degenerate:
        raise ValueError("chirp_factor applies to the b = 0 branch only")
    if A.d <= 0:
        raise NegativeD(f"d = {A.d} must be positive on a degenerate axis")
    phase = chirp_phase(w, A)
    e = exp_i(phase) if unit == "i" else exp_j(phase) if unit == "j" else None
    if e is None:
        raise ValueError(f"unit must be 'i' or 'j', got {unit!r}")
    return math.sqrt(A.d) * e
