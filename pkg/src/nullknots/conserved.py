"""Energy, momentum, angular momentum and helicities by spherical quadrature.

Helicities use the closed-form potential W = alpha^p grad(beta^q), whose
curl is the Riemann-Silberstein field: A = Im W gives curl A = B and
C = Re W gives curl C = E. Helicity convention: H_m = int A.B and
H_e = int C.E (no factor 1/2); with it H/energy = 1/(p + q).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .bateman import KnotParams, eval_knotted_field, eval_potential
from .spacetime import RSValue, cross

HELICITY_CONVENTION = "H_m = int A.B, H_e = int C.E, curl A = B, curl C = E (no 1/2 factor)"


@dataclass(frozen=True)
class QuadratureSpec:
    R: float = 24.0
    n_r: int = 96
    n_theta: int = 64
    n_phi: int = 64

    def __post_init__(self):
        if not self.R > 1:
            raise ValueError("R must exceed 1")
        if min(self.n_r, self.n_theta, self.n_phi) < 1:
            raise ValueError("node counts must be positive")

    def scaled(self, nodes=1.0, radius=1.0) -> "QuadratureSpec":
        return QuadratureSpec(
            self.R * radius,
            int(round(self.n_r * nodes)),
            int(round(self.n_theta * nodes)),
            int(round(self.n_phi * nodes)),
        )


@dataclass
class ConservedSet:
    energy: float
    P: np.ndarray
    L: np.ndarray
    H_m: float
    H_e: float
    truncation_estimate: float = float("nan")
    meta: dict = field(default_factory=dict)

    @property
    def normalized(self) -> dict:
        e = self.energy
        return {
            "H_m": self.H_m / e,
            "H_e": self.H_e / e,
            "P": self.P / e,
            "L": self.L / e,
        }

    def as_dict(self) -> dict:
        n = self.normalized
        return {
            "energy": self.energy,
            "P": [float(v) for v in self.P],
            "L": [float(v) for v in self.L],
            "H_m": self.H_m,
            "H_e": self.H_e,
            "normalized": {
                "H_m": n["H_m"],
                "H_e": n["H_e"],
                "P": [float(v) for v in n["P"]],
                "L": [float(v) for v in n["L"]],
            },
            "truncation_estimate": self.truncation_estimate,
            **self.meta,
        }


def spherical_grid(qs: QuadratureSpec):
    """Nodes (n_r, n_theta, n_phi, 3) and matching volume weights."""
    xr, wr = np.polynomial.legendre.leggauss(qs.n_r)
    r = 0.5 * qs.R * (xr + 1.0)
    wr = 0.5 * qs.R * wr * r**2
    mu, wmu = np.polynomial.legendre.leggauss(qs.n_theta)  # mu = cos(theta)
    phi = 2 * np.pi * np.arange(qs.n_phi) / qs.n_phi
    wphi = np.full(qs.n_phi, 2 * np.pi / qs.n_phi)
    st = np.sqrt(1.0 - mu**2)
    unit = np.stack(
        [st[:, None] * np.cos(phi)[None, :], st[:, None] * np.sin(phi)[None, :], np.broadcast_to(mu[:, None], (qs.n_theta, qs.n_phi))],
        axis=-1,
    )
    ang_w = wmu[:, None] * wphi[None, :]
    return r, wr, unit, ang_w


def densities(kp, t, xyz, gauge=None):
    """Pointwise integrands: u, S, x cross S, A.B, C.E.

    ``gauge`` optionally returns grad(chi) at xyz, added to A (used to
    probe gauge robustness of the magnetic helicity).
    """
    F = eval_knotted_field(kp, t, xyz).F
    W = eval_potential(kp, t, xyz)
    v = RSValue(F)
    E, B, S = v.E, v.B, v.S
    A = W.imag
    if gauge is not None:
        A = A + gauge(xyz)
    return {
        "u": v.u,
        "S": S,
        "xS": cross(xyz, S),
        "AB": np.sum(A * B, axis=-1),
        "CE": np.sum(W.real * E, axis=-1),
    }


def _integrate(kp, t, qs: QuadratureSpec, gauge=None) -> dict:
    r, wr, unit, ang_w = spherical_grid(qs)
    acc = {"u": [], "S": [], "xS": [], "AB": [], "CE": []}
    for ri, wi in zip(r, wr):
        dens = densities(kp, t, ri * unit, gauge)
        for key, val in dens.items():
            if val.ndim == unit.ndim:
                shell = np.array([np.sum(val[..., c] * ang_w) for c in range(3)])
            else:
                shell = np.sum(val * ang_w)
            acc[key].append(wi * shell)
    out = {}
    for key, vals in acc.items():
        vals = np.array(vals)
        if vals.ndim == 2:
            out[key] = np.array([math.fsum(vals[:, c]) for c in range(3)])
        else:
            out[key] = math.fsum(vals)
    return out


def _to_set(raw) -> ConservedSet:
    return ConservedSet(
        energy=float(raw["u"]),
        P=raw["S"],
        L=raw["xS"],
        H_m=float(raw["AB"]),
        H_e=float(raw["CE"]),
    )


def _spread(a: ConservedSet, b: ConservedSet) -> float:
    """Largest energy-normalized difference between two sets."""
    e = a.energy
    diffs = [abs(a.energy - b.energy) / e, abs(a.H_m - b.H_m) / e, abs(a.H_e - b.H_e) / e]
    diffs += list(np.abs(a.P - b.P) / e) + list(np.abs(a.L - b.L) / e)
    return float(max(diffs))


def conserved_set(kp, t=0.0, qs: QuadratureSpec | None = None, truncation=True, gauge=None) -> ConservedSet:
    """Integrate energy, P, L, H_m, H_e over the ball of radius qs.R.

    ``truncation_estimate`` is the largest energy-normalized change when
    the ball radius is halved (same node counts).
    """
    kp = KnotParams.coerce(kp)
    qs = qs or QuadratureSpec()
    cs = _to_set(_integrate(kp, t, qs, gauge))
    if truncation:
        half = _to_set(_integrate(kp, t, qs.scaled(radius=0.5), gauge))
        cs.truncation_estimate = _spread(cs, half)
    cs.meta = {
        "p": kp.p,
        "q": kp.q,
        "t": float(t),
        "quadrature": asdict(qs),
        "helicity_convention": HELICITY_CONVENTION,
    }
    return cs


def expected_ratios(kp) -> dict:
    """Closed-form energy-normalized charges of the (p, q) field."""
    p, q = KnotParams.coerce(kp)
    return {"H_m": 1 / (p + q), "H_e": 1 / (p + q), "P_z": -p / (p + q), "L_z": q / (p + q)}


@dataclass
class InvarianceReport:
    kp: tuple
    times: list
    sets: list
    max_drift: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_drift <= self.tolerance


def time_invariance_check(kp, qs: QuadratureSpec | None = None, times=(0.0, 0.5, 1.0), tolerance=0.03) -> InvarianceReport:
    """Compare normalized charges (and energy) pairwise across times."""
    kp = KnotParams.coerce(kp)
    sets = [conserved_set(kp, t, qs, truncation=False) for t in times]
    drift = 0.0
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            a, b = sets[i], sets[j]
            drift = max(drift, abs(b.energy / a.energy - 1.0))
            na, nb = a.normalized, b.normalized
            for key in ("H_m", "H_e"):
                drift = max(drift, abs(na[key] - nb[key]) / max(abs(na[key]), 1e-300))
            drift = max(drift, abs(na["P"][2] - nb["P"][2]) / abs(na["P"][2]))
            drift = max(drift, abs(na["L"][2] - nb["L"][2]) / abs(na["L"][2]))
    return InvarianceReport(tuple(kp), list(times), sets, drift, tolerance)
