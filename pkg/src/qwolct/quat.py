"""Vectorised quaternion arithmetic.

A quaternion ``w + x i + y j + z k`` is stored as a float64 array whose last
axis has length 4, ordered ``(w, x, y, z)``.  Every function broadcasts over
leading axes, so a single quaternion is just an array of shape ``(4,)`` and a
sampled field is an array of shape ``(n1, n2, 4)``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

Quaternion = np.ndarray


def quat(w=0.0, x=0.0, y=0.0, z=0.0) -> Quaternion:
    return np.stack(np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (w, x, y, z))), axis=-1)


ONE = quat(1.0)
I = quat(0.0, 1.0)
J = quat(0.0, 0.0, 1.0)
K = quat(0.0, 0.0, 0.0, 1.0)


def as_quat(a) -> Quaternion:
    a = np.asarray(a, dtype=float)
    if a.shape[-1:] != (4,):
        raise ValueError(f"expected trailing axis of length 4, got shape {a.shape}")
    return a


def qmul(a, b) -> Quaternion:
    """Hamilton product ``a b``."""
    a0, a1, a2, a3 = np.moveaxis(as_quat(a), -1, 0)
    b0, b1, b2, b3 = np.moveaxis(as_quat(b), -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a1 * b0 + a0 * b1 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        ],
        axis=-1,
    )


def qconj(a) -> Quaternion:
    a = as_quat(a)
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def qnorm2(a) -> np.ndarray:
    a = as_quat(a)
    return np.einsum("...i,...i->...", a, a)


def qnorm(a) -> np.ndarray:
    return np.sqrt(qnorm2(a))


def qinv(a) -> Quaternion:
    n2 = qnorm2(a)
    if np.any(n2 == 0):
        raise ZeroDivisionError("quaternion inverse of zero")
    return qconj(a) / n2[..., None]


def qinner(a, b) -> Quaternion:
    """Pointwise quaternion inner product ``a conj(b)``."""
    return qmul(a, qconj(b))


def scalar(a) -> np.ndarray:
    return as_quat(a)[..., 0]


def exp_i(theta) -> Quaternion:
    theta = np.asarray(theta, dtype=float)
    return quat(np.cos(theta), np.sin(theta), 0.0, 0.0)


def exp_j(phi) -> Quaternion:
    phi = np.asarray(phi, dtype=float)
    return quat(np.cos(phi), 0.0, np.sin(phi), 0.0)


class ComplexPair(NamedTuple):
    """``q = f1 + j f2`` with ``f1``, ``f2`` complex numbers in the i-plane."""

    f1: np.ndarray
    f2: np.ndarray


def cd_split(a) -> ComplexPair:
    a = as_quat(a)
    return ComplexPair(a[..., 0] + 1j * a[..., 1], a[..., 2] - 1j * a[..., 3])


def cd_join(p: ComplexPair) -> Quaternion:
    f1 = np.asarray(p.f1, dtype=complex)
    f2 = np.asarray(p.f2, dtype=complex)
    return quat(f1.real, f1.imag, f2.real, -f2.imag)


def from_complex(z, unit: str = "i") -> Quaternion:
    """Embed a complex array into the plane spanned by 1 and ``unit``."""
    z = np.asarray(z, dtype=complex)
    if unit == "i":
        return quat(z.real, z.imag, 0.0, 0.0)
    if unit == "j":
        return quat(z.real, 0.0, z.imag, 0.0)
    raise ValueError(f"unit must be 'i' or 'j', got {unit!r}")


# Left multiplication by a complex-in-i scalar acts on the pairs
# (w + I x, y + I z) as ordinary complex multiplication; right multiplication
# by a complex-in-j scalar acts the same way on (w + I y, x + I z).


def left_pairs(a) -> tuple[np.ndarray, np.ndarray]:
    a = as_quat(a)
    return a[..., 0] + 1j * a[..., 1], a[..., 2] + 1j * a[..., 3]


def from_left_pairs(p, q) -> Quaternion:
    return np.stack([p.real, p.imag, q.real, q.imag], axis=-1)


def right_pairs(a) -> tuple[np.ndarray, np.ndarray]:
    a = as_quat(a)
    return a[..., 0] + 1j * a[..., 2], a[..., 1] + 1j * a[..., 3]


def from_right_pairs(p, q) -> Quaternion:
    return np.stack([p.real, q.real, p.imag, q.imag], axis=-1)
