"""S^3 coordinates, the surface functions Psi_B / Psi_E and the core curves."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .bateman import KnotParams, eval_alpha_beta
from .errors import PointAtInfinity


@dataclass(frozen=True)
class S3Point:
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class CoreCurveSpec:
    kp: KnotParams
    sign: int  # +1 for maxima, -1 for minima
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kp", KnotParams.coerce(self.kp))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        g = gcd(self.kp.p, self.kp.q)
        if not 0 <= self.k < g:
            raise ValueError(f"k must lie in [0, {g})")


@dataclass(frozen=True)
class KnotType:
    """Metadata for a core set: ``count`` components of reduced type (p, q)."""

    kind: str  # "torus-knot" or "ring"
    p: int
    q: int
    count: int

    def __str__(self):
        if self.kind == "ring":
            return f"{self.count} rings"
        return f"{self.count} x torus-knot({self.p},{self.q})"


def stereographic(xyz) -> S3Point:
    xyz = np.asarray(xyz, dtype=float)
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    r2 = x * x + y * y + z * z
    den = r2 + 1.0
    return S3Point(((r2 - 1.0) + 2j * z) / den, 2.0 * (x - 1j * y) / den)


def inverse_stereographic(s: S3Point, tol=1e-12) -> np.ndarray:
    u = np.asarray(s.u, dtype=complex)
    v = np.asarray(s.v, dtype=complex)
    one_minus = 1.0 - u.real
    if np.any(np.abs(one_minus) < tol):
        raise PointAtInfinity("u = 1 maps to infinity")
    r2 = (1.0 + u.real) / one_minus
    half = 0.5 * (r2 + 1.0)
    return np.stack([v.real * half, -v.imag * half, u.imag * half], axis=-1)


def psi_complex(kp, t, xyz):
    kp = KnotParams.coerce(kp)
    be = eval_alpha_beta(t, xyz)
    return be.alpha**kp.p * be.beta**kp.q


def psi(kp, t, xyz, which="B"):
    """Psi_B = Re(alpha^p beta^q) or Psi_E = Im(alpha^p beta^q)."""
    w = psi_complex(kp, t, xyz)
    if which == "B":
        return w.real
    if which == "E":
        return w.imag
    raise ValueError(f"which must be 'B' or 'E', got {which!r}")


def psi_extremes(kp) -> float:
    p, q = KnotParams.coerce(kp)
    return float(np.sqrt(p**p * q**q / float(p + q) ** (p + q)))


def core_alpha_beta(spec: CoreCurveSpec, theta, field="B"):
    """(alpha, beta) along the core curve K^sign, component k.

    For ``field="E"`` the beta phase is shifted so that Im(alpha^p beta^q)
    is extremal instead of the real part.
    """
    p, q = spec.kp
    theta = np.asarray(theta, dtype=float)
    # Components are separated by rotating beta alone by 2 pi k / q: this
    # leaves alpha^p beta^q unchanged and, unlike a common shift of both
    # phases, lands on a different component for every k < gcd(p, q).
    shift = 2 * np.pi * spec.k / q
    beta_phase = -p * theta - np.pi / (2 * q) + shift + spec.sign * np.pi / (2 * q)
    if field == "E":
        beta_phase = beta_phase + np.pi / (2 * q)
    norm = 1.0 / np.sqrt(p + q)
    alpha = norm * np.sqrt(p) * np.exp(1j * q * theta)
    beta = norm * np.sqrt(q) * np.exp(1j * beta_phase)
    return alpha, beta


def core_curve_point(spec: CoreCurveSpec, theta, field="B"):
    """Core point in S^3 and its t = 0 image in R^3."""
    alpha, beta = core_alpha_beta(spec, theta, field)
    s = S3Point(alpha, beta)
    return s, inverse_stereographic(s)


def core_period(kp) -> float:
    """Theta range after which a single core component closes."""
    p, q = KnotParams.coerce(kp)
    return 2 * np.pi / gcd(p, q)


def core_curve(spec: CoreCurveSpec, n=1024, field="B") -> np.ndarray:
    """n points of one closed core component (last point not repeated)."""
    theta = np.linspace(0.0, core_period(spec.kp), n, endpoint=False)
    return core_curve_point(spec, theta, field)[1]


def describe(p, q, count) -> KnotType:
    kind = "ring" if (p == 1 or q == 1) else "torus-knot"
    return KnotType(kind, p, q, count)


def core_component_count(kp):
    """Number of core curves (2 gcd(p, q)) and their reduced type."""
    p, q = KnotParams.coerce(kp)
    g = gcd(p, q)
    return 2 * g, describe(p // g, q // g, 2 * g)


def core_specs(kp):
    """All core components: K^+ then K^-, each for k = 0 .. gcd(p, q) - 1."""
    kp = KnotParams.coerce(kp)
    g = gcd(kp.p, kp.q)
    return [CoreCurveSpec(kp, s, k) for s in (1, -1) for k in range(g)]
