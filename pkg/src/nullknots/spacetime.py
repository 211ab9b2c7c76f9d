"""Complex 3-vector arithmetic and the Riemann-Silberstein field value.

Vectors are numpy arrays whose last axis has length 3; leading axes are
batch axes and broadcast normally. Natural units, c = 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class SpacetimePoint(NamedTuple):
    t: float
    x: float
    y: float
    z: float

    @property
    def xyz(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


def cross(a, b) -> np.ndarray:
    """Component-wise cross product; no conjugation."""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.stack(
        [
            a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
            a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2],
            a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0],
        ],
        axis=-1,
    )


def dot(a, b):
    """Unconjugated bilinear product a1*b1 + a2*b2 + a3*b3.

    This is deliberately not the Hermitian inner product: a field F is
    null exactly when dot(F, F) == 0.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def norm(a) -> np.ndarray:
    a = np.asarray(a)
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=-1))


@dataclass(frozen=True)
class RSValue:
    """Riemann-Silberstein vector F = E + iB with derived real views."""

    F: np.ndarray

    @property
    def E(self) -> np.ndarray:
        return np.real(self.F)

    @property
    def B(self) -> np.ndarray:
        return np.imag(self.F)

    @property
    def S(self) -> np.ndarray:
        return cross(self.E, self.B)

    @property
    def u(self) -> np.ndarray:
        return 0.5 * np.sum(np.abs(self.F) ** 2, axis=-1)


def rs_decompose(F):
    """Split F into (E, B, S, u) with S = E x B and u = (|E|^2 + |B|^2) / 2."""
    v = RSValue(np.asarray(F, dtype=complex))
    return v.E, v.B, v.S, v.u


def _shifted(fn, t, xyz, axis, step):
    if axis == 0:
        return np.asarray(fn(t + step, xyz))
    e = np.zeros(3)
    e[axis - 1] = step
    return np.asarray(fn(t, xyz + e))


def central_partials(fn, t, xyz, h=1e-4, order=2):
    """Central differences of ``fn(t, xyz)`` along t, x, y, z.

    ``order=2`` is the 3-point stencil, ``order=4`` the 5-point one (same
    step h). Returns an array with a new leading axis of length 4, d_t first.
    """
    xyz = np.asarray(xyz, dtype=float)
    t = np.asarray(t, dtype=float)
    out = []
    for axis in range(4):
        if order == 2:
            d = (_shifted(fn, t, xyz, axis, h) - _shifted(fn, t, xyz, axis, -h)) / (2 * h)
        elif order == 4:
            d = (
                -_shifted(fn, t, xyz, axis, 2 * h)
                + 8 * _shifted(fn, t, xyz, axis, h)
                - 8 * _shifted(fn, t, xyz, axis, -h)
                + _shifted(fn, t, xyz, axis, -2 * h)
            ) / (12 * h)
        else:
            raise ValueError("order must be 2 or 4")
        out.append(d)
    return np.stack(out)


def stencil_max_norm(fn, t, xyz, h=1e-4, order=2):
    """Largest |fn| over the point and its central-difference neighbours."""
    xyz = np.asarray(xyz, dtype=float)
    t = np.asarray(t, dtype=float)
    best = norm(fn(t, xyz))
    reach = (1, 2) if order == 4 else (1,)
    for axis in range(4):
        for k in reach:
            for sgn in (1, -1):
                best = np.maximum(best, norm(_shifted(fn, t, xyz, axis, sgn * k * h)))
    return best
