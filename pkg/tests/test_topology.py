import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullknots.errors import CurvesTooClose, NoConvergence, NonIntegerWinding
from nullknots.geometry import CoreCurveSpec, core_curve, core_specs
from nullknots.topology import ClosedCurve, classify_torus_knot, gauss_double_sum, gauss_linking


def _tri_solid_angle(a, b, c):
    na, nb, nc = (np.linalg.norm(v, axis=-1) for v in (a, b, c))
    num = np.sum(a * np.cross(b, c), -1)
    den = na * nb * nc + np.sum(a * b, -1) * nc + np.sum(a * c, -1) * nb + np.sum(b * c, -1) * na
    return 2 * np.arctan2(num, den)


def exact_polygon_linking(p1, p2):
    """Exact Gauss integral of two closed polygons.

    For straight segments the difference vectors sweep a planar
    parallelogram; each segment pair contributes minus its signed solid
    angle over 4 pi (two triangles, arctan formula).
    """
    a0, a1 = p1, np.roll(p1, -1, 0)
    b0, b1 = p2, np.roll(p2, -1, 0)
    v1 = a0[:, None] - b0[None]
    v2 = a1[:, None] - b0[None]
    v3 = a1[:, None] - b1[None]
    v4 = a0[:, None] - b1[None]
    return -float(np.sum(_tri_solid_angle(v1, v2, v3) + _tri_solid_angle(v1, v3, v4))) / (4 * np.pi)


def circle(center, u, v, n=200, r=1.0):
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return np.asarray(center) + r * (np.cos(th)[:, None] * np.asarray(u) + np.sin(th)[:, None] * np.asarray(v))


HOPF_A = circle([0, 0, 0], [1, 0, 0], [0, 1, 0])
HOPF_B = circle([1, 0, 0], [1, 0, 0], [0, 0, 1])


def test_oracle_matches_brute_force_on_one_segment_pair():
    rng = np.random.default_rng(3)
    a0, a1, b0, b1 = rng.normal(size=(4, 3))
    n = 1500
    s = (np.arange(n) + 0.5) / n
    A = a0 + s[:, None] * (a1 - a0)
    B = b0 + s[:, None] * (b1 - b0)
    r = A[:, None] - B[None]
    brute = np.sum(np.sum(np.cross(a1 - a0, b1 - b0) * r, -1) / np.linalg.norm(r, axis=-1) ** 3) / n**2 / (4 * np.pi)
    v = [a0 - b0, a1 - b0, a1 - b1, a0 - b1]
    exact = -(_tri_solid_angle(v[0], v[1], v[2]) + _tri_solid_angle(v[0], v[2], v[3])) / (4 * np.pi)
    assert exact == pytest.approx(brute, rel=1e-5)


def test_hopf_link():
    lk = gauss_linking(HOPF_A, HOPF_B)
    assert abs(abs(lk) - 1) < 1e-2
    assert exact_polygon_linking(HOPF_A, HOPF_B) == pytest.approx(round(lk), abs=1e-9)


def test_unlinked_coplanar_circles():
    far = circle([3, 0, 0], [1, 0, 0], [0, 1, 0])
    assert abs(gauss_linking(HOPF_A, far)) < 1e-2


def test_orientation_flips_sign():
    a = gauss_linking(HOPF_A, HOPF_B)
    b = gauss_linking(ClosedCurve(HOPF_A).reversed(), HOPF_B)
    assert a == pytest.approx(-b, abs=1e-9)


def test_symmetric_in_arguments():
    assert gauss_linking(HOPF_A, HOPF_B) == pytest.approx(gauss_linking(HOPF_B, HOPF_A), abs=1e-2)


def torus_knot(p, q, n=600, R=2.0, r=0.7, phase=0.0):
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    phi = p * th + phase
    return np.stack([(R + r * np.cos(q * th)) * np.cos(phi), (R + r * np.cos(q * th)) * np.sin(phi), r * np.sin(q * th)], 1)


@pytest.mark.parametrize("p, q", [(1, 1), (1, 2), (2, 3), (3, 2)])
def test_parallel_torus_curves_link_pq(p, q):
    # two (p, q) curves on nested tori link p q times
    a = torus_knot(p, q, r=0.5)
    b = torus_knot(p, q, r=1.0, phase=np.pi / (2 * p * q))
    lk = gauss_linking(a, b)
    assert abs(abs(lk) - p * q) < 1e-2
    assert exact_polygon_linking(a, b) == pytest.approx(round(lk), abs=1e-6)


@pytest.mark.parametrize("kp", [(1, 1), (1, 2), (2, 3), (2, 2)])
def test_core_linking_agrees_with_oracle(kp):
    curves = [core_curve(s, 512) for s in core_specs(kp)]
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            lk = gauss_linking(curves[i], curves[j])
            assert abs(lk - round(lk)) < 1e-2
            assert exact_polygon_linking(curves[i], curves[j]) == pytest.approx(round(lk), abs=1e-3)


def test_core_pair_linking_values():
    values = {}
    for kp in [(1, 1), (1, 2), (1, 3), (2, 3), (2, 5)]:
        plus, minus = (core_curve(CoreCurveSpec(kp, s), 512) for s in (1, -1))
        values[kp] = round(gauss_linking(plus, minus))
    assert values == {(1, 1): -1, (1, 2): -2, (1, 3): -3, (2, 3): -6, (2, 5): -10}


def test_touching_curves_raise():
    a = circle([0, 0, 0], [1, 0, 0], [0, 1, 0], n=60)
    b = circle([1, 0, 0], [1, 0, 0], [0, 1, 0], n=60)
    with pytest.raises(CurvesTooClose):
        gauss_linking(a, b)


def test_budget_exhaustion_raises():
    a = circle([0, 0, 0], [1, 0, 0], [0, 1, 0], n=8)
    b = circle([1, 0, 0.01], [1, 0, 0], [0, 0, 1], n=8)
    with pytest.raises(NoConvergence):
        gauss_linking(a, b, tol=1e-12, max_segments=64)


def test_refinement_keeps_the_value():
    c1, c2 = ClosedCurve(HOPF_A), ClosedCurve(HOPF_B)
    assert gauss_double_sum(c1.refined(), c2.refined()) == pytest.approx(gauss_double_sum(c1, c2), abs=1e-3)


def test_closed_curve_drops_repeated_endpoint():
    pts = np.vstack([HOPF_A, HOPF_A[:1]])
    assert ClosedCurve(pts).n == len(HOPF_A)
    with pytest.raises(ValueError):
        ClosedCurve(np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0.0]]))


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_rigid_translation_invariance(dx, dy, dz):
    shift = np.array([dx, dy, dz])
    a = gauss_double_sum(ClosedCurve(HOPF_A), ClosedCurve(HOPF_B))
    b = gauss_double_sum(ClosedCurve(HOPF_A + shift), ClosedCurve(HOPF_B + shift))
    assert a == pytest.approx(b, abs=1e-9)


@pytest.mark.parametrize(
    "w, count, text",
    [((3.0001, -1.9998), 2, "2 x torus-knot(2,3)"), ((2, -2), 4, "4 rings"), ((2, -1), 2, "2 rings"), ((-3, 2), 2, "2 x torus-knot(2,3)")],
)
def test_classify(w, count, text):
    kt = classify_torus_knot(w, count)
    assert str(kt) == text


@pytest.mark.parametrize("w", [(3.2, -2), (3, 2), (0, -1), (float("nan"), 1)])
def test_classify_rejects(w):
    with pytest.raises(NonIntegerWinding):
        classify_torus_knot(w, 2)
