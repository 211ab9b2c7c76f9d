"""Field-line tracing at fixed time and Poynting-flow advection of markers.

Lines are integrated in arc length, dx/ds = V / |V|, with scipy's DOP853
stepper (an embedded 8(5,3) Runge-Kutta pair). Every accepted step is
resampled through the stepper's dense output so that the unwrapped
phases of alpha and beta never jump by more than a quarter turn between
samples.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import DOP853, solve_ivp
from scipy.optimize import minimize_scalar

from .bateman import KnotParams, eval_alpha_beta, eval_hopfion, eval_knotted_field, eval_plane_wave, knotted_point
from .errors import NonFinite, Stagnation, StagnationAtSeed
from .spacetime import RSValue


class Termination(str, Enum):
    CLOSED = "Closed"
    MAX_LENGTH = "MaxLength"
    STAGNATION = "Stagnation"
    MAX_STEPS = "MaxSteps"


@dataclass
class TraceConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_arc_length: float = 500.0
    closure_eps: float = 1e-4
    min_speed: float = 1e-9
    max_steps: int = 1_000_000
    # largest accepted step; keeps phase unwrapping and closure search local
    max_step: float = 0.5

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_arc_length", "closure_eps", "min_speed", "max_steps", "max_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def tightened(self, factor=10.0) -> "TraceConfig":
        return TraceConfig(
            self.rel_tol / factor,
            self.abs_tol / factor,
            self.max_arc_length,
            self.closure_eps,
            self.min_speed,
            self.max_steps,
            self.max_step,
        )


@dataclass
class TraceResult:
    points: np.ndarray  # (N, 3)
    arc_length: np.ndarray  # (N,)
    closed: bool
    closure_gap: float
    psi_drift: float
    psi0: float
    windings: tuple
    windings_determinate: bool
    termination: Termination
    steps: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def polyline(self) -> np.ndarray:
        return self.points

    def summary(self) -> dict:
        return {
            "closed": self.closed,
            "closure_gap": self.closure_gap,
            "psi_drift": self.psi_drift,
            "psi0": self.psi0,
            "windings": list(self.windings),
            "windings_determinate": self.windings_determinate,
            "termination": self.termination.value,
            "arc_length": float(self.arc_length[-1]),
            "points": int(len(self.points)),
            **self.meta,
        }


def _component(F, which):
    if which == "E":
        return F.real
    if which == "B":
        return F.imag
    if which == "S":
        E, B = F.real, F.imag
        return np.cross(E, B)
    raise ValueError(f"field must be one of E, B, S; got {which!r}")


def _scalar_field(kp: KnotParams, which, t):
    """Point evaluator returning (vector, alpha, beta) for the knotted family."""
    p, q = kp.p, kp.q

    def ev(x):
        F, a, b = knotted_point(p, q, t, x[0], x[1], x[2])
        if which == "B":
            v = (F[0].imag, F[1].imag, F[2].imag)
        elif which == "E":
            v = (F[0].real, F[1].real, F[2].real)
        else:
            e = (F[0].real, F[1].real, F[2].real)
            m = (F[0].imag, F[1].imag, F[2].imag)
            v = (e[1] * m[2] - e[2] * m[1], e[2] * m[0] - e[0] * m[2], e[0] * m[1] - e[1] * m[0])
        return v, a, b

    return ev


def _psi_value(which, p, q, a, b):
    w = a**p * b**q
    return w.imag if which == "E" else w.real


def trace(which, kp, seed, t=0.0, cfg: TraceConfig | None = None) -> TraceResult:
    """Trace the E, B or Poynting (S) line of the (p, q) field through ``seed``.

    Stops when the line returns to within ``cfg.closure_eps`` of the seed
    with a tangent aligned to the initial one, when the field stagnates,
    or when the arc-length / step budget runs out. ``psi_drift`` is the
    largest excursion of the conserved surface function (Psi_B for B-lines,
    Psi_E for E-lines; zero for S-lines, which carry no such surface).
    """
    cfg = cfg or TraceConfig()
    kp = KnotParams.coerce(kp)
    p, q = kp.p, kp.q
    ev = _scalar_field(kp, which, float(t))
    seed = np.asarray(seed, dtype=float)

    v0, a0, b0 = ev(seed)
    speed0 = math.sqrt(v0[0] ** 2 + v0[1] ** 2 + v0[2] ** 2)
    if not math.isfinite(speed0):
        raise NonFinite("field is not finite at the seed")
    if speed0 < cfg.min_speed:
        raise StagnationAtSeed(f"|field(seed)| = {speed0:.3e} < {cfg.min_speed:.1e}")
    tangent0 = np.array(v0) / speed0

    stalled = []

    def rhs(s, x):
        v, _, _ = ev(x)
        n = math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
        if not math.isfinite(n):
            raise NonFinite(f"field overflow at {x}")
        if n < cfg.min_speed:
            stalled.append(s)
            return np.zeros(3)
        return np.array(v) / n

    solver = DOP853(
        rhs, 0.0, seed, cfg.max_arc_length, rtol=cfg.rel_tol, atol=cfg.abs_tol, max_step=cfg.max_step
    )

    track_psi = which in ("B", "E")
    psi0 = _psi_value(which, p, q, a0, b0) if track_psi else 0.0
    drift = 0.0
    phase_a = cmath.phase(a0)
    phase_b = cmath.phase(b0)
    wind_a = wind_b = 0.0
    determinate = abs(a0) >= 1e-8 and abs(b0) >= 1e-8

    pts = [seed.copy()]
    arcs = [0.0]
    left_seed = False
    leave_radius = 10.0 * cfg.closure_eps
    closed = False
    gap = float(np.linalg.norm(solver.y - seed))
    termination = Termination.MAX_LENGTH
    steps = 0

    while True:
        if steps >= cfg.max_steps:
            termination = Termination.MAX_STEPS
            break
        s_prev = solver.t
        solver.step()
        steps += 1
        if solver.status == "failed":
            termination = Termination.STAGNATION
            break
        if stalled:
            termination = Termination.STAGNATION
            break
        s_new = solver.t
        dense = solver.dense_output()

        # resample the step so phase increments stay below a quarter turn
        n_sub = 4
        while True:
            ss = np.linspace(s_prev, s_new, n_sub + 1)[1:]
            xs = dense(ss).T
            vals = [ev(x) for x in xs]
            pa, pb = phase_a, phase_b
            ok = True
            incs = []
            for _, a, b in vals:
                if abs(a) < 1e-8 or abs(b) < 1e-8:
                    determinate = False
                na, nb = cmath.phase(a), cmath.phase(b)
                da = (na - pa + math.pi) % (2 * math.pi) - math.pi
                db = (nb - pb + math.pi) % (2 * math.pi) - math.pi
                if abs(da) > math.pi / 2 or abs(db) > math.pi / 2:
                    ok = False
                    break
                incs.append((da, db))
                pa, pb = na, nb
            if ok or n_sub >= 1024:
                break
            n_sub *= 4
        for da, db in incs:
            wind_a += da
            wind_b += db
        phase_a, phase_b = pa, pb
        if track_psi:
            for _, a, b in vals:
                drift = max(drift, abs(_psi_value(which, p, q, a, b) - psi0))

        x_new = solver.y.copy()
        if not np.all(np.isfinite(x_new)):
            raise NonFinite("trace left the finite domain")

        if not left_seed and np.linalg.norm(x_new - seed) > leave_radius and s_new > leave_radius:
            left_seed = True
        elif left_seed:
            seg = s_new - s_prev
            if np.linalg.norm(x_new - seed) < seg + cfg.closure_eps or np.linalg.norm(pts[-1] - seed) < seg + cfg.closure_eps:
                res = minimize_scalar(
                    lambda s: float(np.sum((dense(s) - seed) ** 2)),
                    bounds=(s_prev, s_new),
                    method="bounded",
                    options={"xatol": 1e-12 * max(1.0, s_new)},
                )
                s_close = float(res.x)
                x_close = dense(s_close)
                d_close = float(np.linalg.norm(x_close - seed))
                if d_close < cfg.closure_eps:
                    v, _, _ = ev(x_close)
                    tan = np.array(v) / (np.linalg.norm(v) + 1e-300)
                    if float(tan @ tangent0) > 0.99:
                        # drop the overshoot past the closest approach from the windings
                        back = dense(np.linspace(s_new, s_close, 5)[1:]).T
                        pa, pb = phase_a, phase_b
                        for xb in back:
                            _, a, b = ev(xb)
                            na, nb = cmath.phase(a), cmath.phase(b)
                            wind_a += (na - pa + math.pi) % (2 * math.pi) - math.pi
                            wind_b += (nb - pb + math.pi) % (2 * math.pi) - math.pi
                            pa, pb = na, nb
                        pts.append(x_close)
                        arcs.append(s_close)
                        closed = True
                        gap = d_close
                        termination = Termination.CLOSED
                        break

        pts.append(x_new)
        arcs.append(s_new)
        if solver.status == "finished":
            termination = Termination.MAX_LENGTH
            break

    if not closed:
        gap = float(np.linalg.norm(pts[-1] - seed))
    windings = (wind_a / (2 * math.pi), wind_b / (2 * math.pi)) if determinate else (math.nan, math.nan)
    return TraceResult(
        points=np.array(pts),
        arc_length=np.array(arcs),
        closed=closed,
        closure_gap=gap,
        psi_drift=float(drift),
        psi0=float(psi0),
        windings=windings,
        windings_determinate=determinate,
        termination=termination,
        steps=steps,
        meta={"field": which, "p": p, "q": q, "t": float(t)},
    )


def field_source(spec):
    """Resolve a field description to a vectorized ``F(t, xyz)`` callable.

    Accepts KnotParams or a (p, q) pair, ``"hopfion"``, ``"plane-wave"``,
    or any callable with that signature.
    """
    if callable(spec):
        return spec
    if spec == "hopfion":
        return lambda t, x: eval_hopfion(t, x).F
    if spec == "plane-wave":
        return lambda t, x: eval_plane_wave(t, x).F
    kp = KnotParams.coerce(spec)
    return lambda t, x: eval_knotted_field(kp, t, x).F


def poynting_velocity(F):
    """S / u; unit length wherever the field is null."""
    v = RSValue(F)
    return v.S / v.u[..., None]


_REFERENCE_SHELL = np.array(
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]
) * 0.8


def advect_marker(seed, t0, t1, kp, rtol=1e-11, atol=1e-12):
    """Carry a point along the energy-transport velocity S/u from t0 to t1."""
    Ffn = field_source(kp)
    u_ref = float(np.max(RSValue(Ffn(t0, _REFERENCE_SHELL)).u))
    floor = 1e-12 * max(u_ref, 1e-300)

    def rhs(t, x):
        F = Ffn(t, x)
        u = RSValue(F).u
        if u < floor:
            raise Stagnation(f"energy density {u:.3e} below floor at {x}")
        return poynting_velocity(F)

    seed = np.asarray(seed, dtype=float)
    if t1 == t0:
        return seed.copy()
    sol = solve_ivp(rhs, (t0, t1), seed, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise Stagnation(sol.message)
    return sol.y[:, -1]


def alpha_beta_at(t, xyz):
    be = eval_alpha_beta(t, xyz)
    return be.alpha, be.beta
