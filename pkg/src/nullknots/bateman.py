"""Closed-form Bateman pairs and the null fields they generate.

All evaluators take a time ``t`` (scalar or array) and positions ``xyz``
with a trailing axis of length 3, and broadcast over leading axes.
Derivatives are hand-derived (quotient rule over ``d``) so the inner
loops of tracing and quadrature stay allocation-light.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

from .errors import InvalidKnotParams
from .spacetime import RSValue, cross, dot, norm


@dataclass(frozen=True)
class KnotParams:
    p: int
    q: int

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, numbers.Integral):
                raise InvalidKnotParams(f"{name} must be an integer, got {v!r}")
            if v < 1:
                raise InvalidKnotParams(f"{name} must be >= 1, got {v}")
            object.__setattr__(self, name, int(v))

    @classmethod
    def coerce(cls, kp) -> "KnotParams":
        if isinstance(kp, KnotParams):
            return kp
        p, q = kp
        return cls(p, q)

    def __iter__(self):
        return iter((self.p, self.q))


@dataclass(frozen=True)
class ABD:
    a: np.ndarray
    b: np.ndarray
    d: np.ndarray


@dataclass(frozen=True)
class BatemanEval:
    """Values and first derivatives of a scalar pair (alpha, beta)."""

    alpha: np.ndarray
    beta: np.ndarray
    dt_alpha: np.ndarray
    dt_beta: np.ndarray
    grad_alpha: np.ndarray
    grad_beta: np.ndarray


def _split(t, xyz):
    xyz = np.asarray(xyz, dtype=float)
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    t = np.asarray(t, dtype=float)
    return t, x, y, z


def eval_abd(t, xyz) -> ABD:
    t, x, y, z = _split(t, xyz)
    r2 = x * x + y * y + z * z
    a = x - 1j * y
    b = t - 1j - z
    d = r2 - (t - 1j) ** 2
    return ABD(a, b + 0 * a, d)


def eval_alpha_beta(t, xyz) -> BatemanEval:
    """The S^3-valued pair with |alpha|^2 + |beta|^2 = 1 for every t."""
    t, x, y, z = _split(t, xyz)
    r2 = x * x + y * y + z * z
    d = r2 - t * t + 1.0 + 2j * t
    inv_d = 1.0 / d
    alpha = (r2 - t * t - 1.0 + 2j * z) * inv_d
    beta = 2.0 * (x - 1j * y) * inv_d
    # d(d)/dx_i = 2 x_i, d(d)/dt = -2 (t - i)
    dd_t = -2.0 * (t - 1j)
    grad_alpha = np.stack(
        [
            2.0 * x * (1.0 - alpha) * inv_d,
            2.0 * y * (1.0 - alpha) * inv_d,
            (2.0 * z + 2j - 2.0 * z * alpha) * inv_d,
        ],
        axis=-1,
    )
    dt_alpha = (-2.0 * t - alpha * dd_t) * inv_d
    grad_beta = np.stack(
        [
            (2.0 - 2.0 * x * beta) * inv_d,
            (-2j - 2.0 * y * beta) * inv_d,
            -2.0 * z * beta * inv_d,
        ],
        axis=-1,
    )
    dt_beta = -beta * dd_t * inv_d
    return BatemanEval(alpha, beta, dt_alpha, dt_beta, grad_alpha, grad_beta)


def plane_wave_pair(t, xyz) -> BatemanEval:
    """alpha = z - t, beta = x + iy (used with f = exp(i alpha), g = beta)."""
    t, x, y, z = _split(t, xyz)
    shape = np.broadcast(t, x).shape
    one = np.ones(shape, dtype=complex)
    zero = np.zeros(shape, dtype=complex)
    alpha = (z - t) * one
    beta = (x + 1j * y) * one
    return BatemanEval(
        alpha,
        beta,
        -one,
        zero,
        np.stack([zero, zero, one], axis=-1),
        np.stack([one, 1j * one, zero], axis=-1),
    )


def knot_factor(kp: KnotParams, be: BatemanEval):
    """h(alpha, beta) = p q alpha^(p-1) beta^(q-1) for f = alpha^p, g = beta^q."""
    p, q = kp.p, kp.q
    return p * q * be.alpha ** (p - 1) * be.beta ** (q - 1)


def eval_knotted_field(kp, t, xyz) -> RSValue:
    """F = grad(alpha^p) x grad(beta^q), evaluated in factored form."""
    kp = KnotParams.coerce(kp)
    be = eval_alpha_beta(t, xyz)
    h = knot_factor(kp, be)
    return RSValue(h[..., None] * cross(be.grad_alpha, be.grad_beta))


def eval_hopfion(t, xyz) -> RSValue:
    abd = eval_abd(t, xyz)
    a, b, d = abd.a, abd.b, abd.d
    F = np.stack([b * b - a * a, -1j * (a * a + b * b), 2.0 * a * b], axis=-1)
    return RSValue(F / (d**3)[..., None])


def eval_plane_wave(t, xyz) -> RSValue:
    t, x, y, z = _split(t, xyz)
    phase = np.exp(1j * (z - t))
    return RSValue(np.stack([phase, 1j * phase, 0 * phase], axis=-1))


# eval_knotted_field((1, 1), ...) == HOPFION_SCALE * eval_hopfion(...)
HOPFION_SCALE = 4.0


def eval_potential(kp, t, xyz) -> np.ndarray:
    """C = alpha^p grad(beta^q); curl C equals eval_knotted_field.F."""
    kp = KnotParams.coerce(kp)
    be = eval_alpha_beta(t, xyz)
    coeff = kp.q * be.alpha**kp.p * be.beta ** (kp.q - 1)
    return coeff[..., None] * be.grad_beta


def bateman_constraint_residual(t, xyz, pair=eval_alpha_beta):
    """Norm of grad(a) x grad(b) - i (dt(a) grad(b) - dt(b) grad(a))."""
    be = pair(t, xyz)
    lhs = cross(be.grad_alpha, be.grad_beta)
    rhs = 1j * (be.dt_alpha[..., None] * be.grad_beta - be.dt_beta[..., None] * be.grad_alpha)
    return norm(lhs - rhs)


def nontriviality_residual(t, xyz, pair=eval_alpha_beta):
    be = pair(t, xyz)
    ra = np.abs(be.dt_alpha * (be.dt_alpha**2 - dot(be.grad_alpha, be.grad_alpha)))
    rb = np.abs(be.dt_beta * (be.dt_beta**2 - dot(be.grad_beta, be.grad_beta)))
    return ra, rb


def knotted_point(p, q, t, x, y, z):
    """Scalar fast path: (F, alpha, beta) at one point using Python complex math.

    Equivalent to eval_knotted_field but roughly an order of magnitude
    cheaper per call, which matters for adaptive tracing.
    """
    r2 = x * x + y * y + z * z
    d = complex(r2 - t * t + 1.0, 2.0 * t)
    inv_d = 1.0 / d
    alpha = complex(r2 - t * t - 1.0, 2.0 * z) * inv_d
    beta = complex(2.0 * x, -2.0 * y) * inv_d
    oma = (1.0 - alpha) * inv_d
    ax = 2.0 * x * oma
    ay = 2.0 * y * oma
    az = (2.0 * z * (1.0 - alpha) + 2j) * inv_d
    bx = (2.0 - 2.0 * x * beta) * inv_d
    by = (-2j - 2.0 * y * beta) * inv_d
    bz = -2.0 * z * beta * inv_d
    h = p * q * alpha ** (p - 1) * beta ** (q - 1)
    F = (h * (ay * bz - az * by), h * (az * bx - ax * bz), h * (ax * by - ay * bx))
    return F, alpha, beta
