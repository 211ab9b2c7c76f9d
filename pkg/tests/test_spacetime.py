import numpy as np
import pytest
from hypothesis import given

from nullknots.spacetime import RSValue, SpacetimePoint, central_partials, cross, dot, norm, rs_decompose

from strategies import cvec


def test_cross_basis():
    assert np.allclose(cross([1, 0, 0], [0, 1, 0]), [0, 0, 1])


def test_cross_imaginary_basis():
    # i * i = -1
    assert np.allclose(cross([1j, 0, 0], [0, 1j, 0]), [0, 0, -1])


@given(cvec)
def test_cross_self_is_zero(a):
    assert np.allclose(cross(a, a), 0)


@given(cvec, cvec)
def test_cross_antisymmetric_and_orthogonal(a, b):
    c = cross(a, b)
    assert np.allclose(c, -cross(b, a))
    scale = 1 + np.abs(a).max() ** 2 * np.abs(b).max()
    assert abs(dot(c, a)) <= 1e-12 * scale


@pytest.mark.parametrize(
    "a, b, expected",
    [((1, 1j, 0), (1, 1j, 0), 0), ((1, 0, 0), (0, 1, 0), 0), ((2, 0, 0), (3, 0, 0), 6)],
)
def test_dot_examples(a, b, expected):
    assert dot(np.array(a), np.array(b)) == pytest.approx(expected)


def test_dot_is_bilinear_not_hermitian():
    a = np.array([1j, 0, 0])
    assert dot(a, a) == pytest.approx(-1)
    assert norm(a) == pytest.approx(1)


def test_decompose_hopfion_origin_value():
    E, B, S, u = rs_decompose(np.array([-1, 1j, 0]))
    assert np.allclose(E, [-1, 0, 0])
    assert np.allclose(B, [0, 1, 0])
    assert np.allclose(S, [0, 0, -1])
    assert u == pytest.approx(1)


def test_decompose_plane_wave_value():
    v = RSValue(np.array([1, 1j, 0]))
    assert np.allclose(v.S, [0, 0, 1])
    assert v.u == pytest.approx(1)


def test_decompose_zero():
    v = RSValue(np.zeros(3, dtype=complex))
    assert not np.any(v.E) and not np.any(v.B) and not np.any(v.S) and v.u == 0


def test_spacetime_point():
    p = SpacetimePoint(1.0, 2.0, 3.0, 4.0)
    assert np.allclose(p.xyz, [2, 3, 4])


@pytest.mark.parametrize("order, tol", [(2, 1e-7), (4, 1e-10)])
def test_central_partials_on_polynomial(order, tol):
    def fn(t, x):
        return t**3 + x[..., 0] ** 2 * x[..., 1] + np.sin(x[..., 2])

    x = np.array([[0.3, -0.7, 1.1]])
    D = central_partials(fn, 0.5, x, 1e-3, order)
    exact = [3 * 0.25, 2 * 0.3 * -0.7, 0.09, np.cos(1.1)]
    assert np.allclose(D[:, 0], exact, atol=tol)
