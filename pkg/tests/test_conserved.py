import math

import numpy as np
import pytest
from scipy.integrate import quad

from nullknots.conserved import (
    HELICITY_CONVENTION,
    QuadratureSpec,
    conserved_set,
    densities,
    expected_ratios,
    spherical_grid,
    time_invariance_check,
)


@pytest.fixture(scope="module")
def sets():
    return {kp: conserved_set(kp, 0.0) for kp in [(1, 1), (2, 3), (1, 2)]}


def test_grid_integrates_polynomials_exactly():
    r, wr, unit, ang = spherical_grid(QuadratureSpec(2.0, 8, 8, 8))
    vol = sum(w * ang.sum() for w in wr)
    assert vol == pytest.approx(4 / 3 * math.pi * 8, rel=1e-13)
    z2 = sum(w * ri**2 * np.sum(unit[..., 2] ** 2 * ang) for ri, w in zip(r, wr))
    assert z2 == pytest.approx(4 * math.pi * 2**5 / 15, rel=1e-13)


def test_hopfion_energy_closed_form(sets):
    # |F_hp|^2 = 2 / (1 + r^2)^4 at t = 0, and the (1, 1) field is 4 F_hp
    radial, _ = quad(lambda r: 16 * r * r / (1 + r * r) ** 4, 0, np.inf)
    assert radial * 4 * math.pi == pytest.approx(2 * math.pi**2, rel=1e-12)
    assert sets[(1, 1)].energy == pytest.approx(2 * math.pi**2, rel=1e-4)


@pytest.mark.parametrize("kp", [(1, 1), (2, 3), (1, 2)])
def test_ratios_h_and_p(kp, sets):
    n = sets[kp].normalized
    ex = expected_ratios(kp)
    assert n["H_m"] == pytest.approx(ex["H_m"], rel=0.02)
    assert n["H_e"] == pytest.approx(ex["H_e"], rel=0.02)
    assert n["P"][2] == pytest.approx(ex["P_z"], rel=0.02)


@pytest.mark.parametrize("kp", [(1, 1), (2, 3), (1, 2)])
def test_angular_momentum_magnitude(kp, sets):
    # |L_z| / E = q / (p + q); with L = int x cross (E x B) the sign comes out negative
    n = sets[kp].normalized
    assert abs(n["L"][2]) == pytest.approx(expected_ratios(kp)["L_z"], rel=0.02)
    assert n["L"][2] < 0


@pytest.mark.parametrize("kp", [(1, 1), (2, 3), (1, 2)])
def test_transverse_components_vanish(kp, sets):
    cs = sets[kp]
    assert np.all(np.abs(cs.P[:2]) < 1e-3 * cs.energy)
    assert np.all(np.abs(cs.L[:2]) < 1e-3 * cs.energy)


def test_helicities_agree(sets):
    for cs in sets.values():
        assert abs(cs.H_m - cs.H_e) < 1e-3 * cs.energy


def test_truncation_estimate_is_small(sets):
    for cs in sets.values():
        assert 0 <= cs.truncation_estimate < 1e-3


def test_quadrature_converged():
    base = conserved_set((2, 3), 0.0, truncation=False)
    fine = conserved_set((2, 3), 0.0, QuadratureSpec().scaled(nodes=1.5), truncation=False)
    assert fine.energy == pytest.approx(base.energy, rel=1e-5)
    assert fine.H_m == pytest.approx(base.H_m, rel=1e-5)


def test_metadata(sets):
    d = sets[(2, 3)].as_dict()
    assert d["helicity_convention"] == HELICITY_CONVENTION
    assert d["p"] == 2 and d["q"] == 3
    assert set(d["normalized"]) == {"H_m", "H_e", "P", "L"}


def test_gauge_shift_does_not_change_helicity():
    def grad_chi(x):
        g = np.exp(-np.sum(x * x, -1))[..., None]
        return g * (np.array([1.0, -2.0, 0.5]) - 2 * (x @ np.array([1.0, -2.0, 0.5]))[..., None] * x)

    qs = QuadratureSpec(24.0, 64, 48, 48)
    a = conserved_set((1, 2), 0.0, qs, truncation=False)
    b = conserved_set((1, 2), 0.0, qs, truncation=False, gauge=grad_chi)
    assert b.H_m == pytest.approx(a.H_m, rel=1e-6)
    # the gradient really does change the integrand pointwise
    x = np.array([[0.3, 0.1, -0.2]])
    assert densities((1, 2), 0.0, x, grad_chi)["AB"] != pytest.approx(densities((1, 2), 0.0, x)["AB"])


def test_time_invariance_one_one():
    rep = time_invariance_check((1, 1), times=(0.0, 1.0))
    assert rep.passed
    assert rep.sets[1].energy / rep.sets[0].energy == pytest.approx(1, abs=0.03)


def test_time_invariance_two_three_helicity():
    rep = time_invariance_check((2, 3), times=(0.0, 1.0))
    h0, h1 = rep.sets[0].H_m, rep.sets[1].H_m
    assert abs(h1 / h0 - 1) < 0.03


def test_time_invariance_one_two_angular_momentum():
    rep = time_invariance_check((1, 2), times=(0.0, 1.0))
    for cs in rep.sets:
        assert abs(cs.normalized["L"][2]) == pytest.approx(2 / 3, rel=0.03)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(0.5)
    with pytest.raises(ValueError):
        QuadratureSpec(10, 0, 4, 4)
