"""Gauss linking numbers of closed polylines and torus-knot classification."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import CurvesTooClose, NoConvergence, NonIntegerWinding
from .geometry import KnotType, describe

MAX_SEGMENTS = 2**14
_CHUNK = 1 << 22


@dataclass(frozen=True)
class ClosedCurve:
    """Ordered points of a closed curve; the last point joins the first."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 3:
            raise ValueError("a closed curve needs at least 3 points in R^3")
        if np.linalg.norm(pts[-1] - pts[0]) == 0.0:
            pts = pts[:-1]
        if np.any(np.all(np.diff(pts, axis=0) == 0.0, axis=1)):
            raise ValueError("consecutive points must differ")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    def segments(self):
        """(midpoints, tangent vectors) of the closing polygon."""
        a = self.points
        b = np.roll(a, -1, axis=0)
        return 0.5 * (a + b), b - a

    def refined(self) -> "ClosedCurve":
        """Halve every segment (linear subdivision)."""
        a = self.points
        mid = 0.5 * (a + np.roll(a, -1, axis=0))
        out = np.empty((2 * len(a), 3))
        out[0::2] = a
        out[1::2] = mid
        return ClosedCurve(out)

    def diameter(self) -> float:
        lo, hi = self.points.min(axis=0), self.points.max(axis=0)
        return float(np.linalg.norm(hi - lo))

    def reversed(self) -> "ClosedCurve":
        return ClosedCurve(self.points[::-1].copy())


def _as_curve(c) -> ClosedCurve:
    return c if isinstance(c, ClosedCurve) else ClosedCurve(np.asarray(c, dtype=float))


def min_distance(c1: ClosedCurve, c2: ClosedCurve) -> float:
    best = np.inf
    b = c2.points
    step = max(1, _CHUNK // max(len(b), 1))
    for i in range(0, len(c1.points), step):
        a = c1.points[i : i + step]
        d = np.sqrt(np.sum((a[:, None, :] - b[None, :, :]) ** 2, axis=-1))
        best = min(best, float(d.min()))
    return best


def gauss_double_sum(c1: ClosedCurve, c2: ClosedCurve) -> float:
    """Midpoint-rule discretization of (1/4pi) oint oint (dr1 x dr2).(r1 - r2)/|r1 - r2|^3.

    The reduction order is fixed (row blocks of c1, summed in order), so
    results do not depend on chunking or threading.
    """
    m1, d1 = c1.segments()
    m2, d2 = c2.segments()
    total = 0.0
    step = max(1, _CHUNK // len(m2))
    for i in range(0, len(m1), step):
        r = m1[i : i + step, None, :] - m2[None, :, :]
        cr = np.cross(d1[i : i + step, None, :], d2[None, :, :])
        num = np.sum(cr * r, axis=-1)
        den = np.sum(r * r, axis=-1) ** 1.5
        total += float(np.sum(np.sum(num / den, axis=1)))
    return total / (4.0 * np.pi)


def gauss_linking(c1, c2, tol=1e-2, integer_tol=1e-2, max_segments=MAX_SEGMENTS) -> float:
    """Gauss linking number of two disjoint closed polylines.

    Segments are halved until successive estimates differ by less than
    ``tol``; the converged value must then sit within ``integer_tol`` of
    an integer.
    """
    c1, c2 = _as_curve(c1), _as_curve(c2)
    scale = max(c1.diameter(), c2.diameter())
    if min_distance(c1, c2) <= 1e-3 * scale:
        raise CurvesTooClose("curves come within 1e-3 of their diameter")
    prev = gauss_double_sum(c1, c2)
    while True:
        if max(c1.n, c2.n) * 2 > max_segments:
            raise NoConvergence(f"linking estimate still moving at {max(c1.n, c2.n)} segments (last {prev:.6f})")
        c1, c2 = c1.refined(), c2.refined()
        cur = gauss_double_sum(c1, c2)
        if abs(cur - prev) < tol:
            break
        prev = cur
    if abs(cur - round(cur)) > integer_tol:
        raise NoConvergence(f"linking estimate {cur:.6f} is not within {integer_tol} of an integer")
    return cur


def classify_torus_knot(windings, component_count, tol=1e-2) -> KnotType:
    """Knot type of a core set from one line's (alpha, beta) phase windings.

    A core line of the (p, q) family winds (q, -p) / gcd(p, q) times; the
    traversal direction only flips the overall sign, which is ignored.
    """
    w_alpha, w_beta = windings
    if not (np.isfinite(w_alpha) and np.isfinite(w_beta)):
        raise NonIntegerWinding("windings are indeterminate")
    qa, pb = round(w_alpha), round(w_beta)
    if abs(w_alpha - qa) > tol or abs(w_beta - pb) > tol:
        raise NonIntegerWinding(f"windings {windings} are not within {tol} of integers")
    if qa * pb > 0 or qa == 0 or pb == 0:
        raise NonIntegerWinding(f"windings {windings} do not have the (q, -p) sign pattern")
    q, p = abs(qa), abs(pb)
    g = gcd(p, q)
    return describe(p // g, q // g, int(component_count))
