"""Residual and property checks with deliberate-violation controls.

Every check returns a :class:`CheckReport`; ``pass`` holds exactly when
the largest scaled residual is within tolerance. Each check also has a
negative control in :data:`CONTROLS` that feeds it a deliberately broken
input and must fail; :func:`run_all` can fold those in as self-tests.

Derivatives of field functions use central differences with h = 1e-4
on the 5-point (fourth-order) stencil; residuals are scaled by the local
field magnitude (largest |F| over the stencil) plus a 1e-30 floor. The
higher-order stencil matters near the z-axis, where beta^(q-1) gives the
field a zero of order q-1 and the 3-point truncation error would swamp
the local magnitude.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .bateman import (
    BatemanEval,
    KnotParams,
    bateman_constraint_residual,
    eval_abd,
    eval_alpha_beta,
    eval_knotted_field,
    eval_potential,
    nontriviality_residual,
    plane_wave_pair,
)
from .conserved import QuadratureSpec, conserved_set, spherical_grid
from .errors import NullKnotsError
from .geometry import CoreCurveSpec, core_curve, core_specs, core_curve_point, psi, psi_extremes
from .spacetime import RSValue, central_partials, cross, norm, stencil_max_norm
from .spinors import (
    bateman_knotted_spinor,
    bateman_to_spinor,
    field_from_phi,
    gsf_residual,
    gsf_scale,
    hopfion_spinor,
    knotted_spinor,
    phi_from,
    phi_square,
    plane_wave_spinor,
    spinor_maxwell_residual,
)
from .topology import gauss_linking
from .tracer import TraceConfig, advect_marker, field_source, trace

FD_STEP = 1e-4
FD_ORDER = 4
FLOOR = 1e-30
TIMES = (0.0, 0.7, 1.3)
DEFAULT_KP = ((1, 1), (2, 3), (2, 5), (1, 2), (2, 2))


@dataclass
class CheckReport:
    check: str
    samples: int
    max_residual: float
    tolerance: float
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_json(self) -> dict:
        r = self.max_residual
        return {
            "check": self.check,
            "samples": self.samples,
            "max_residual": r if math.isfinite(r) else str(r),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "meta": self.meta,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


def label(construction) -> str:
    if isinstance(construction, str):
        return construction
    if callable(construction):
        return getattr(construction, "__name__", "custom")
    p, q = KnotParams.coerce(construction)
    return f"kp={p},{q}"


def sample_points(n, rng, r_inner=5.0, r_outer=20.0, far_fraction=0.1) -> np.ndarray:
    """Uniform in the ball r <= r_inner, plus a far_fraction share in the shell up to r_outer."""
    n_far = int(round(n * far_fraction))
    n_near = n - n_far

    def directions(m):
        v = rng.normal(size=(m, 3))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    r_near = r_inner * rng.uniform(size=n_near) ** (1 / 3)
    r_far = (r_inner**3 + rng.uniform(size=n_far) * (r_outer**3 - r_inner**3)) ** (1 / 3)
    return np.concatenate([directions(n_near) * r_near[:, None], directions(n_far) * r_far[:, None]])


def _rng(seed):
    return np.random.default_rng(seed)


def _meta(construction=None, times=None, seed=None, **extra):
    m = {}
    if construction is not None:
        m["construction"] = label(construction)
    if times is not None:
        m["t"] = [float(t) for t in np.atleast_1d(times)]
    if seed is not None:
        m["seed"] = seed
    m.update(extra)
    return m


# -- field-level checks -----------------------------------------------------


def nullity_check(construction, n=1000, times=TIMES, seed=0, tol=1e-10) -> CheckReport:
    """max(|E.B|, ||E|^2 - |B|^2|) / u over the sample plan."""
    fn = field_source(construction)
    rng = _rng(seed)
    worst = 0.0
    for t in times:
        pts = sample_points(n, rng)
        v = RSValue(np.asarray(fn(t, pts), dtype=complex))
        E, B = v.E, v.B
        eb = np.abs(np.sum(E * B, axis=-1))
        ee = np.abs(np.sum(E * E, axis=-1) - np.sum(B * B, axis=-1))
        worst = max(worst, float(np.max(np.maximum(eb, ee) / (v.u + FLOOR))))
    return CheckReport("nullity", n * len(times), worst, tol, _meta(construction, times, seed))


def maxwell_residuals(fn, t, pts, h=FD_STEP, order=FD_ORDER):
    """Scaled |dF/dt + i curl F| and |div F| by central differences."""
    D = central_partials(fn, t, pts, h, order)
    curl = np.stack(
        [D[2][..., 2] - D[3][..., 1], D[3][..., 0] - D[1][..., 2], D[1][..., 1] - D[2][..., 0]], axis=-1
    )
    evo = norm(D[0] + 1j * curl)
    div = np.abs(D[1][..., 0] + D[2][..., 1] + D[3][..., 2])
    scale = stencil_max_norm(fn, t, pts, h, order) + FLOOR
    return evo / scale, div / scale


def maxwell_check(construction, n=1000, times=TIMES, seed=0, h=FD_STEP, tol=1e-5) -> CheckReport:
    fn = field_source(construction)
    rng = _rng(seed)
    worst = 0.0
    for t in times:
        pts = sample_points(n, rng)
        evo, div = maxwell_residuals(fn, t, pts, h)
        worst = max(worst, float(np.max(evo)), float(np.max(div)))
    return CheckReport("maxwell", n * len(times), worst, tol, _meta(construction, times, seed, h=h))


def bateman_constraint_check(pair=eval_alpha_beta, n=1000, times=TIMES, seed=0, tol=1e-10, name="bateman_constraint"):
    rng = _rng(seed)
    worst = 0.0
    for t in times:
        pts = sample_points(n, rng)
        be = pair(t, pts)
        scale = norm(cross(be.grad_alpha, be.grad_beta)) + FLOOR
        worst = max(worst, float(np.max(bateman_constraint_residual(t, pts, pair) / scale)))
    return CheckReport(name, n * len(times), worst, tol, _meta(None, times, seed, pair=getattr(pair, "__name__", "custom")))


def nontriviality_check(pair=eval_alpha_beta, n=1000, times=TIMES, seed=0, tol=1e-10):
    rng = _rng(seed)
    worst = 0.0
    for t in times:
        pts = sample_points(n, rng)
        be = pair(t, pts)
        ra, rb = nontriviality_residual(t, pts, pair)
        sa = np.abs(be.dt_alpha) * (np.abs(be.dt_alpha) ** 2 + norm(be.grad_alpha) ** 2) + FLOOR
        sb = np.abs(be.dt_beta) * (np.abs(be.dt_beta) ** 2 + norm(be.grad_beta) ** 2) + FLOOR
        worst = max(worst, float(np.max(ra / sa)), float(np.max(rb / sb)))
    return CheckReport("nontriviality", n * len(times), worst, tol, _meta(None, times, seed, pair=getattr(pair, "__name__", "custom")))


def s3_norm_check(n=10_000, seed=0, t_max=10.0, r_max=10.0, tol=1e-12, pair=eval_alpha_beta) -> CheckReport:
    """max ||alpha|^2 + |beta|^2 - 1| with |t| <= t_max, r <= r_max."""
    rng = _rng(seed)
    pts = sample_points(n, rng, r_inner=r_max, far_fraction=0.0)
    t = rng.uniform(-t_max, t_max, size=n)
    be = pair(t, pts)
    res = np.abs(np.abs(be.alpha) ** 2 + np.abs(be.beta) ** 2 - 1.0)
    return CheckReport("s3_norm", n, float(np.max(res)), tol, _meta(None, [-t_max, t_max], seed))


def derivative_check(pair=eval_alpha_beta, n=1000, times=TIMES, seed=0, h=FD_STEP, tol=1e-6) -> CheckReport:
    """Closed-form derivatives against central differences, relative error."""
    rng = _rng(seed)
    worst = 0.0
    for t in times:
        pts = sample_points(n, rng)
        be = pair(t, pts)
        for attr, dt_attr, grad_attr in (("alpha", "dt_alpha", "grad_alpha"), ("beta", "dt_beta", "grad_beta")):
            D = central_partials(lambda tt, xx: getattr(pair(tt, xx), attr), t, pts, h, FD_ORDER)
            an = np.concatenate([getattr(be, dt_attr)[..., None], getattr(be, grad_attr)], axis=-1)
            fd = np.moveaxis(D, 0, -1)
            err = norm(an - fd) / (norm(an) + FLOOR)
            worst = max(worst, float(np.max(err)))
    return CheckReport("derivatives", n * len(times), worst, tol, _meta(None, times, seed, h=h))


def potential_curl_check(kp, n=200, times=TIMES, seed=0, h=FD_STEP, tol=1e-6, potential=None) -> CheckReport:
    """curl(alpha^p grad beta^q) reproduces F."""
    kp = KnotParams.coerce(kp)
    pot = potential or (lambda t, x: eval_potential(kp, t, x))
    rng = _rng(seed)
    worst = 0.0
    Ffn = field_source(kp)
    for t in times:
        pts = sample_points(n, rng)
        D = central_partials(pot, t, pts, h, FD_ORDER)
        curl = np.stack([D[2][..., 2] - D[3][..., 1], D[3][..., 0] - D[1][..., 2], D[1][..., 1] - D[2][..., 0]], axis=-1)
        scale = stencil_max_norm(Ffn, t, pts, h, FD_ORDER) + FLOOR
        worst = max(worst, float(np.max(norm(curl - Ffn(t, pts)) / scale)))
    return CheckReport("potential_curl", n * len(times), worst, tol, _meta(kp, times, seed))


def _grad_psi(kp, which, t, pts, h=FD_STEP):
    D = central_partials(lambda tt, xx: psi(kp, t, xx, which), t, pts, h, FD_ORDER)
    return np.moveaxis(D[1:], 0, -1)


def psi_transport_check(kp, n=1000, times=TIMES, seed=0, tol=1e-5, swap=False) -> CheckReport:
    """B.grad(Psi_B) = 0 and E.grad(Psi_E) = 0, scaled by |V||grad Psi|.

    ``swap=True`` pairs B with Psi_E and E with Psi_B (negative control).
    """
    kp = KnotParams.coerce(kp)
    rng = _rng(seed)
    worst = 0.0
    for t in times:
        pts = sample_points(n, rng)
        v = eval_knotted_field(kp, t, pts)
        for vec, which in ((v.B, "E" if swap else "B"), (v.E, "B" if swap else "E")):
            g = _grad_psi(kp, which, t, pts)
            res = np.abs(np.sum(vec * g, axis=-1)) / (norm(vec) * norm(g) + FLOOR)
            worst = max(worst, float(np.max(res)))
    name = "psi_transport" + ("[swapped]" if swap else "")
    return CheckReport(name, n * len(times), worst, tol, _meta(kp, times, seed))


# -- spinor checks -----------------------------------------------------------


def _plane_wave_bateman_spinor(t, pts):
    be = plane_wave_pair(t, pts)
    return bateman_to_spinor(be, 1j * np.exp(1j * be.alpha))


def _spinor_routes(construction):
    """(label, spinor function, Bateman-side field function) triples."""
    if construction == "plane-wave":
        ref = field_source("plane-wave")
        return [("closed-form", plane_wave_spinor, ref), ("bateman", _plane_wave_bateman_spinor, ref)]
    if construction == "hopfion":
        return [("closed-form", hopfion_spinor, field_source("hopfion"))]
    kp = KnotParams.coerce(construction)
    ref = field_source(kp)
    return [
        ("closed-form", lambda t, x: knotted_spinor(kp, t, x), ref),
        ("bateman", lambda t, x: bateman_knotted_spinor(kp, t, x), ref),
    ]


def cross_formalism_check(construction, n=100, times=TIMES, seed=0, tol=1e-8, kappa_scale=1.0) -> CheckReport:
    """Spinor-reconstructed F against the Bateman-side F, relative error."""
    rng = _rng(seed)
    worst = 0.0
    routes = _spinor_routes(construction)
    for t in times:
        pts = sample_points(n, rng)
        for _, sp, ref in routes:
            xi, kappa = sp(t, pts)
            F = field_from_phi(phi_from(xi, kappa * kappa_scale)).F
            R = ref(t, pts)
            worst = max(worst, float(np.max(norm(F - R) / (norm(R) + FLOOR))))
    return CheckReport(
        "cross_formalism", n * len(times) * len(routes), worst, tol, _meta(construction, times, seed, routes=[r[0] for r in routes])
    )


def _gsf_fields(construction):
    if construction == "hopfion":
        return [lambda t, x: hopfion_spinor(t, x)[0]]
    if construction == "plane-wave":
        return [lambda t, x: plane_wave_spinor(t, x)[0]]
    kp = KnotParams.coerce(construction)
    return [lambda t, x: knotted_spinor(kp, t, x)[0], lambda t, x: bateman_knotted_spinor(kp, t, x)[0]]


def gsf_check(construction, n=100, times=TIMES, seed=0, tol=1e-5, spinor_fields=None) -> CheckReport:
    """Geodesic shear-free condition on the congruence spinor, scaled."""
    rng = _rng(seed)
    fields = spinor_fields or _gsf_fields(construction)
    worst = 0.0
    for t in times:
        pts = sample_points(n, rng)
        for sf in fields:
            res = np.max(np.abs(gsf_residual(sf, t, pts, order=FD_ORDER)), axis=-1) / gsf_scale(sf, t, pts, order=FD_ORDER)
            worst = max(worst, float(np.max(res)))
    return CheckReport("gsf", n * len(times) * len(fields), worst, tol, _meta(construction, times, seed))


def _phi_field(construction):
    routes = _spinor_routes(construction)
    sp = routes[0][1]
    return lambda t, x: phi_from(*sp(t, x))


def spinor_maxwell_check(construction, n=200, times=TIMES, seed=0, tol=1e-6, phi_field=None) -> CheckReport:
    """g^{mu AA'} d_mu Phi_AB = 0, scaled by the local |Phi| over the stencil."""
    rng = _rng(seed)
    pf = phi_field or _phi_field(construction)
    worst = 0.0

    def flat(t, x):
        return pf(t, x).reshape(np.shape(x)[:-1] + (4,))

    for t in times:
        pts = sample_points(n, rng)
        res = spinor_maxwell_residual(pf, t, pts, order=FD_ORDER)
        mag = np.sqrt(np.sum(np.abs(res) ** 2, axis=(-2, -1)))
        scale = stencil_max_norm(flat, t, pts, order=FD_ORDER) + FLOOR
        worst = max(worst, float(np.max(mag / scale)))
    return CheckReport("spinor_maxwell", n * len(times), worst, tol, _meta(construction, times, seed))


def phi_null_check(construction, n=200, times=TIMES, seed=0, tol=1e-12, phi_field=None) -> CheckReport:
    """Phi_AB Phi^AB vanishes, relative to |Phi|^2."""
    rng = _rng(seed)
    pf = phi_field or _phi_field(construction)
    worst = 0.0
    for t in times:
        pts = sample_points(n, rng)
        phi = pf(t, pts)
        res = np.abs(phi_square(phi)) / (np.sum(np.abs(phi) ** 2, axis=(-2, -1)) + FLOOR)
        worst = max(worst, float(np.max(res)))
    return CheckReport("phi_null", n * len(times), worst, tol, _meta(construction, times, seed))


# -- evolution checks --------------------------------------------------------


def _unit_poynting(fn, t, pts):
    S = RSValue(fn(t, pts)).S
    return S / (norm(S)[..., None] + FLOOR)


def hopfion_translation_check(n=100, t=1.0, seed=0, tol=1e-8, construction="hopfion", force_sign=None) -> CheckReport:
    """Normalized Poynting field at time t equals the t = 0 one shifted along z by s t."""
    fn = field_source(construction)
    rng = _rng(seed)
    pts = sample_points(n, rng)
    shift = np.array([0.0, 0.0, 1.0]) * t
    now = _unit_poynting(fn, t, pts)

    def mismatch(s):
        return norm(now - _unit_poynting(fn, 0.0, pts - s * shift))

    if force_sign is None:
        s = 1.0 if mismatch(1.0)[0] <= mismatch(-1.0)[0] else -1.0
    else:
        s = float(force_sign)
    res = float(np.max(mismatch(s)))
    return CheckReport("hopfion_translation", n, res, tol, _meta(construction, t, seed, direction=s))


# -- tracing and topology checks ---------------------------------------------


def expected_core_windings(kp, sign):
    """Signed (w_alpha, w_beta) of a B-line traced along the core K^sign.

    Following +B runs K^- in the direction of increasing theta and K^+
    against it, so the pair is (q, -p)/g on K^- and its negative on K^+.
    """
    kp = KnotParams.coerce(kp)
    g = gcd(kp.p, kp.q)
    return (-sign * kp.q / g, sign * kp.p / g)


def core_trace_check(kp, t=0.0, cfg=None, gap_tol=1e-4, winding_tol=1e-2, offset=0.0):
    """Trace every core component at time t; returns (closure report, winding report).

    For t != 0 the seeds are the t = 0 core points advected along S/u.
    ``offset`` displaces the seeds (negative control).
    """
    kp = KnotParams.coerce(kp)
    cfg = cfg or TraceConfig(max_arc_length=200.0)
    gaps, werr, details = [], [], []
    for spec in core_specs(kp):
        _, x0 = core_curve_point(spec, 0.0)
        seed = advect_marker(x0, 0.0, t, kp) if t != 0.0 else x0
        seed = seed + offset
        res = trace("B", kp, seed, t, cfg)
        exp = expected_core_windings(kp, spec.sign)
        gaps.append(res.closure_gap if res.closed else math.inf)
        if res.windings_determinate:
            werr.append(max(abs(res.windings[0] - exp[0]), abs(res.windings[1] - exp[1])))
        else:
            werr.append(math.inf)
        details.append({"sign": spec.sign, "k": spec.k, "closed": res.closed, "gap": res.closure_gap, "windings": list(res.windings)})
    n = len(details)
    meta = _meta(kp, t, None, components=details)
    return (
        CheckReport("core_closure", n, float(max(gaps)), gap_tol, meta),
        CheckReport("core_windings", n, float(max(werr)), winding_tol, meta),
    )


def generic_seeds(kp, count, rng, t=0.0, r_max=2.5, min_fraction=0.1):
    """Random seeds whose torus level |Psi_B| is at least min_fraction of the extreme."""
    kp = KnotParams.coerce(kp)
    m = psi_extremes(kp)
    out = []
    while len(out) < count:
        x = sample_points(1, rng, r_inner=r_max, far_fraction=0.0)[0]
        if abs(psi(kp, t, x, "B")) >= min_fraction * m:
            out.append(x)
    return np.array(out)


def torus_confinement_check(kp, t=0.0, seeds=4, seed=0, arc_length=100.0, tol=1e-5, psi_field="B", line_field="B"):
    """psi_drift / psi_extremes along generic B-lines (stays on its torus)."""
    kp = KnotParams.coerce(kp)
    rng = _rng(seed)
    cfg = TraceConfig(max_arc_length=arc_length)
    m = psi_extremes(kp)
    worst = 0.0
    for x in generic_seeds(kp, seeds, rng, t):
        res = trace(line_field, kp, x, t, cfg)
        if psi_field == line_field:
            drift = res.psi_drift
        else:
            vals = psi(kp, t, res.points, psi_field)
            drift = float(np.max(np.abs(vals - vals[0])))
        worst = max(worst, drift / m)
    return CheckReport("torus_confinement", seeds, worst, tol, _meta(kp, t, seed, arc_length=arc_length))


def hopfion_closure_check(seeds=10, seed=0, kp=(1, 1), gap_tol=1e-4, arc_length=500.0, r_max=2.0):
    """Generic B-lines of the (1, 1) field close on themselves."""
    kp = KnotParams.coerce(kp)
    rng = _rng(seed)
    cfg = TraceConfig(max_arc_length=arc_length)
    worst = 0.0
    for x in sample_points(seeds, rng, r_inner=r_max, far_fraction=0.0):
        res = trace("B", kp, x, 0.0, cfg)
        worst = max(worst, res.closure_gap if res.closed else math.inf)
    return CheckReport("hopfion_closure", seeds, worst, gap_tol, _meta(kp, 0.0, seed, arc_length=arc_length))


def core_linking_check(kp, n=512, tol=1e-2, curves=None):
    """Pairwise Gauss linking of all core components; residual is distance to an integer."""
    kp = KnotParams.coerce(kp)
    if curves is None:
        curves = [core_curve(s, n) for s in core_specs(kp)]
    values = []
    worst = 0.0
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            try:
                lk = gauss_linking(curves[i], curves[j])
            except NullKnotsError as exc:
                values.append(str(exc))
                worst = math.inf
                continue
            values.append(lk)
            worst = max(worst, abs(lk - round(lk)))
    return CheckReport("core_linking", len(values), worst, tol, _meta(kp, 0.0, None, linking=values))


# -- conserved-quantity checks -------------------------------------------------


def helicity_equality_check(kp, qs=None, tol=1e-2, swap_potential=False):
    """|H_m - H_e| / energy."""
    kp = KnotParams.coerce(kp)
    cs = conserved_set(kp, 0.0, qs, truncation=False)
    h_m = cs.H_m
    if swap_potential:
        # A . B with A replaced by the electric potential C = Re W
        h_m = _integrate_scalar(kp, 0.0, qs, lambda t, x: np.sum(eval_potential(kp, t, x).real * eval_knotted_field(kp, t, x).B, axis=-1))
    res = abs(h_m - cs.H_e) / cs.energy
    return CheckReport("helicity_equality", 1, res, tol, _meta(kp, 0.0, None, H_m=h_m, H_e=cs.H_e, energy=cs.energy))


def _integrate_scalar(kp, t, qs, fn):
    qs = qs or QuadratureSpec()
    r, wr, unit, ang_w = spherical_grid(qs)
    return math.fsum(wi * float(np.sum(fn(t, ri * unit) * ang_w)) for ri, wi in zip(r, wr))


_GAUGE_DIR = np.array([1.0, 2.0, 3.0])


def _gauge_gradient(kp, gradient=True):
    """grad(chi) for chi = (1 + c.x)^2 exp(-r^2 / 2), or a non-gradient stand-in.

    chi has no symmetry, so its gradient pairs with B pointwise; only the
    volume integral cancels. ``gradient=False`` returns 0.1 B, which has
    nonzero curl and shifts int A.B by 0.1 int |B|^2.
    """
    kp = KnotParams.coerce(kp)

    def grad_chi(xyz):
        if not gradient:
            return 0.1 * eval_knotted_field(kp, 0.0, xyz).B
        g = np.exp(-0.5 * np.sum(xyz * xyz, axis=-1))[..., None]
        lin = (1.0 + xyz @ _GAUGE_DIR)[..., None]
        return g * (2.0 * lin * _GAUGE_DIR - lin**2 * xyz)

    return grad_chi


def gauge_check(kp, qs=None, tol=1e-3, gradient=True):
    """Adding a decaying gradient to A leaves int A.B unchanged (relative).

    ``gradient=False`` adds a field with nonzero curl instead (negative control).
    """
    kp = KnotParams.coerce(kp)
    base = conserved_set(kp, 0.0, qs, truncation=False)
    shifted = conserved_set(kp, 0.0, qs, truncation=False, gauge=_gauge_gradient(kp, gradient))
    res = abs(shifted.H_m - base.H_m) / abs(base.H_m)
    return CheckReport("gauge_robustness", 1, res, tol, _meta(kp, 0.0, None, gradient=gradient))


def energy_conservation_check(kp, t1=1.0, qs=None, tol=0.03):
    kp = KnotParams.coerce(kp)
    a = conserved_set(kp, 0.0, qs, truncation=False)
    b = conserved_set(kp, t1, qs, truncation=False)
    res = abs(b.energy / a.energy - 1.0)
    return CheckReport("energy_conservation", 2, res, tol, _meta(kp, [0.0, t1], None, R=(qs or QuadratureSpec()).R))


# -- negative controls ---------------------------------------------------------


def _perturbed_beta_pair(t, xyz):
    be = eval_alpha_beta(t, xyz)
    xyz = np.asarray(xyz, dtype=float)
    g = be.grad_beta + np.array([0.1, 0.0, 0.0])
    return BatemanEval(be.alpha, be.beta + 0.1 * xyz[..., 0], be.dt_alpha, be.dt_beta, be.grad_alpha, g)


def _boosted_alpha_pair(t, xyz):
    """alpha = x + 2t: (d_t alpha)^2 - (grad alpha)^2 = 3, so nontriviality fails."""
    be = eval_alpha_beta(t, xyz)
    xyz = np.asarray(xyz, dtype=float)
    shape = be.alpha.shape
    one = np.ones(shape, dtype=complex)
    a = xyz[..., 0] + 2 * np.asarray(t) + 0j
    ga = np.stack([one, 0 * one, 0 * one], axis=-1)
    return BatemanEval(a * one, be.beta, 2 * one, be.dt_beta, ga, be.grad_beta)


def _scaled_alpha_pair(t, xyz):
    be = eval_alpha_beta(t, xyz)
    return BatemanEval(1.01 * be.alpha, be.beta, be.dt_alpha, be.dt_beta, be.grad_alpha, be.grad_beta)


def _wrong_derivative_pair(t, xyz):
    be = eval_alpha_beta(t, xyz)
    return BatemanEval(be.alpha, be.beta, be.dt_alpha, be.dt_beta, 1.001 * be.grad_alpha, be.grad_beta)


def _non_null_field(t, xyz):
    shape = np.shape(xyz)[:-1]
    F = np.zeros(shape + (3,), dtype=complex)
    F[..., 0] = 1.0 + 1.0j
    return F


def _x_times_field(t, xyz):
    F = eval_knotted_field((2, 3), t, xyz).F
    return np.asarray(xyz)[..., :1] * F


def _perturbed_hopfion_spinor(t, xyz):
    abd = eval_abd(t, xyz)
    x = np.asarray(xyz, dtype=float)[..., 0]
    return np.stack([-np.conj(abd.b) + 0.1 * x**2, np.conj(abd.a)], axis=-1)


def _x_times_phi(t, xyz):
    phi = phi_from(*hopfion_spinor(t, xyz))
    return np.asarray(xyz)[..., 0, None, None] * phi


def _rank_two_phi(t, xyz):
    phi = phi_from(*hopfion_spinor(t, xyz))
    phi = phi.copy()
    phi[..., 0, 0] = 0.0
    phi[..., 1, 1] = 0.0
    return phi


def _crossing_circles():
    """Two coplanar unit circles that intersect, so no linking number exists."""
    # 60 nodes put both crossing points (theta = +-pi/3) on vertices
    th = np.linspace(0, 2 * np.pi, 60, endpoint=False)
    a = np.c_[np.cos(th), np.sin(th), 0 * th]
    return [a, a + np.array([1.0, 0.0, 0.0])]


def _controls(seed=0):
    """name -> zero-argument callable producing a report that must fail."""
    return {
        "nullity": lambda: nullity_check(_non_null_field, n=100, seed=seed),
        "maxwell": lambda: maxwell_check(_x_times_field, n=100, seed=seed),
        "bateman_constraint": lambda: bateman_constraint_check(_perturbed_beta_pair, n=100, seed=seed),
        "nontriviality": lambda: nontriviality_check(_boosted_alpha_pair, n=100, seed=seed),
        "s3_norm": lambda: s3_norm_check(n=100, seed=seed, pair=_scaled_alpha_pair),
        "derivatives": lambda: derivative_check(_wrong_derivative_pair, n=100, seed=seed),
        "potential_curl": lambda: potential_curl_check(
            (2, 3), n=50, seed=seed, potential=lambda t, x: 1.01 * eval_potential((2, 3), t, x)
        ),
        "psi_transport": lambda: psi_transport_check((2, 3), n=100, seed=seed, swap=True),
        "cross_formalism": lambda: cross_formalism_check("hopfion", n=20, seed=seed, kappa_scale=1.001),
        "gsf": lambda: gsf_check("hopfion", n=50, seed=seed, spinor_fields=[_perturbed_hopfion_spinor]),
        "spinor_maxwell": lambda: spinor_maxwell_check("hopfion", n=50, seed=seed, phi_field=_x_times_phi),
        "phi_null": lambda: phi_null_check("hopfion", n=50, seed=seed, phi_field=_rank_two_phi),
        "hopfion_translation": lambda: _wrong_direction_translation(seed),
        "core_closure": lambda: core_trace_check((2, 3), cfg=TraceConfig(max_arc_length=60.0), offset=np.array([0.05, 0.0, 0.0]))[0],
        "core_windings": lambda: _shifted_winding_control(),
        "torus_confinement": lambda: torus_confinement_check((2, 3), seeds=1, seed=seed, arc_length=20.0, line_field="E"),
        "hopfion_closure": lambda: hopfion_closure_check(seeds=2, seed=seed, kp=(2, 3), arc_length=60.0),
        "core_linking": lambda: core_linking_check((1, 1), curves=_crossing_circles()),
        "helicity_equality": lambda: helicity_equality_check((1, 1), QuadratureSpec(12.0, 32, 24, 24), swap_potential=True),
        "gauge_robustness": lambda: gauge_check((1, 1), QuadratureSpec(24.0, 48, 32, 32), gradient=False),
        "energy_conservation": lambda: energy_conservation_check((1, 1), qs=QuadratureSpec(1.5, 32, 24, 24)),
    }


def _wrong_direction_translation(seed):
    right = hopfion_translation_check(n=10, seed=seed)
    return hopfion_translation_check(n=10, seed=seed, force_sign=-right.meta["direction"])


def _shifted_winding_control():
    """Trace the (2, 3) core but score it against the (2, 5) winding pattern."""
    kp = KnotParams(2, 3)
    spec = CoreCurveSpec(kp, -1)
    _, x0 = core_curve_point(spec, 0.0)
    res = trace("B", kp, x0, 0.0, TraceConfig(max_arc_length=200.0))
    exp = expected_core_windings((2, 5), -1)
    err = max(abs(res.windings[0] - exp[0]), abs(res.windings[1] - exp[1]))
    return CheckReport("core_windings", 1, float(err), 1e-2, {"control": "scored against (2,5)"})


CONTROLS = tuple(_controls().keys())


def negative_controls(seed=0, names=None):
    """Run the deliberate-violation variant of each check (each should fail)."""
    table = _controls(seed)
    names = names or list(table)
    return {name: table[name]() for name in names}


# -- orchestration ---------------------------------------------------------------


def run_all(kp_list=DEFAULT_KP, seed=0, times=TIMES, samples=1000, inject_fault=None, self_test=True, progress=None):
    """Run the full battery for each (p, q) in kp_list plus the fixed constructions.

    ``inject_fault`` names a check whose input is swapped for its negative
    control (harness self-test). With ``self_test`` each control is also
    run and recorded as ``control:<name>``, passing when the control fails.
    Returns the list of reports; aggregate with :func:`aggregate`.
    """
    kp_list = [KnotParams.coerce(kp) for kp in kp_list]
    reports = []
    controls = _controls(seed)
    faults = set([inject_fault] if isinstance(inject_fault, str) else (inject_fault or ()))
    unknown = faults - set(controls)
    if unknown:
        raise ValueError(f"unknown fault(s): {sorted(unknown)}")

    def emit(name, make):
        start = time.perf_counter()
        rep = controls[name]() if name in faults else make()
        rep.meta["seconds"] = round(time.perf_counter() - start, 4)
        if name in faults:
            rep.meta["injected_fault"] = True
        reports.append(rep)
        if progress:
            progress(rep)

    if not kp_list:
        return reports

    n = samples
    emit("s3_norm", lambda: s3_norm_check(n=10 * n, seed=seed))
    emit("bateman_constraint", lambda: bateman_constraint_check(n=n, times=times, seed=seed))
    emit("nontriviality", lambda: nontriviality_check(n=n, times=times, seed=seed))
    emit("derivatives", lambda: derivative_check(n=n, times=times, seed=seed))
    for c in ("plane-wave", "hopfion"):
        emit("nullity", lambda: nullity_check(c, n=n, times=times, seed=seed))
        emit("maxwell", lambda: maxwell_check(c, n=n, times=times, seed=seed))
        emit("cross_formalism", lambda: cross_formalism_check(c, n=100, times=times, seed=seed))
        emit("gsf", lambda: gsf_check(c, n=100, times=times, seed=seed))
        emit("spinor_maxwell", lambda: spinor_maxwell_check(c, n=100, times=times, seed=seed))
        emit("phi_null", lambda: phi_null_check(c, n=100, times=times, seed=seed))
    emit("hopfion_translation", lambda: hopfion_translation_check(n=100, t=1.0, seed=seed))
    emit("hopfion_closure", lambda: hopfion_closure_check(seeds=10, seed=seed))

    for kp in kp_list:
        emit("nullity", lambda: nullity_check(kp, n=n, times=times, seed=seed))
        emit("maxwell", lambda: maxwell_check(kp, n=n, times=times, seed=seed))
        emit("potential_curl", lambda: potential_curl_check(kp, n=100, times=times, seed=seed))
        emit("psi_transport", lambda: psi_transport_check(kp, n=n, times=times, seed=seed))
        emit("cross_formalism", lambda: cross_formalism_check(kp, n=100, times=times, seed=seed))
        emit("gsf", lambda: gsf_check(kp, n=100, times=times, seed=seed))
        emit("spinor_maxwell", lambda: spinor_maxwell_check(kp, n=100, times=times, seed=seed))
        emit("phi_null", lambda: phi_null_check(kp, n=100, times=times, seed=seed))
        closure, windings = core_trace_check(kp)
        emit("core_closure", lambda: closure)
        emit("core_windings", lambda: windings)
        emit("core_linking", lambda: core_linking_check(kp))
        emit("torus_confinement", lambda: torus_confinement_check(kp, t=times[-1], seeds=2, seed=seed))
        emit("helicity_equality", lambda: helicity_equality_check(kp))
        emit("gauge_robustness", lambda: gauge_check(kp))
        emit("energy_conservation", lambda: energy_conservation_check(kp))

    if self_test:
        for name, make in controls.items():
            start = time.perf_counter()
            rep = make()
            # residual 0 when the control failed as it must, 1 when it slipped through
            ctl = CheckReport(
                f"control:{name}",
                rep.samples,
                0.0 if not rep.passed else 1.0,
                0.5,
                {
                    "control_residual": rep.max_residual if math.isfinite(rep.max_residual) else str(rep.max_residual),
                    "control_tolerance": rep.tolerance,
                    "seconds": round(time.perf_counter() - start, 4),
                },
            )
            reports.append(ctl)
            if progress:
                progress(ctl)
    return reports


def aggregate(reports) -> bool:
    return all(r.passed for r in reports)
