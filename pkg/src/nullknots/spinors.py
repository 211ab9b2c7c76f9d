"""Two-component spinor description of the null fields.

Conventions (all fixed here and pinned by tests):

* ``EPS`` is the symplectic form with ``EPS[0, 1] = +1``; both the
  unprimed and primed epsilons are this matrix, and ``EPS @ EPS = -I``.
* Indices are raised as ``xi^A = EPS[A, B] xi_B``.
* ``IVDW[mu]`` is the Infeld-van der Waerden matrix ``g^{mu A A'}`` with
  rows indexed by A and columns by A'.
* ``E_i = F^{i0}`` and ``B_i = -1/2 eps_ijk F^{jk}``; this extraction makes
  ``field_from_phi(phi_from(*hopfion_spinor(t, x)))`` reproduce the
  Hopfion closed form exactly.

Spinor-side derivatives use central differences; these routines are for
verification, not inner loops.
"""
from __future__ import annotations

import numpy as np

from .bateman import BatemanEval, KnotParams, eval_abd, eval_alpha_beta, knot_factor
from .errors import AsymmetricInput, DegenerateSpinor
from .spacetime import RSValue, central_partials

EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])

PAULI = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ]
)

IVDW = np.array([np.eye(2), -PAULI[0], PAULI[1], -PAULI[2]]) / np.sqrt(2.0)

FD_STEP = 1e-4
BRANCH_TOL = 1e-12
SYMMETRY_RTOL = 1e-12


def _pack(xi0, xi1):
    return np.stack(np.broadcast_arrays(xi0, xi1), axis=-1)


def hopfion_spinor(t, xyz):
    """Robinson congruence spinor (-conj(b), conj(a)) with kappa = conj(d)^-3."""
    abd = eval_abd(t, xyz)
    xi = _pack(-np.conj(abd.b), np.conj(abd.a))
    return xi, np.conj(abd.d) ** -3


def knotted_spinor(kp, t, xyz):
    """Same spinor as the Hopfion; only the scale kappa changes with (p, q)."""
    kp = KnotParams.coerce(kp)
    abd = eval_abd(t, xyz)
    be = eval_alpha_beta(t, xyz)
    xi = _pack(-np.conj(abd.b), np.conj(abd.a))
    kappa = (
        4.0 * kp.p * kp.q
        * np.conj(be.alpha) ** (kp.p - 1)
        * np.conj(be.beta) ** (kp.q - 1)
        * np.conj(abd.d) ** -3
    )
    return xi, kappa


def plane_wave_spinor(t, xyz):
    xyz = np.asarray(xyz, dtype=float)
    phase = np.exp(-1j * (xyz[..., 2] - t))
    xi = _pack(np.zeros_like(phase), -np.ones_like(phase))
    return xi, -phase


def _wbar_derivs(grad):
    """(d_w, d_wbar, d_z) of a scalar from its Cartesian gradient, w = x + iy."""
    dw = 0.5 * (grad[..., 0] - 1j * grad[..., 1])
    dwb = 0.5 * (grad[..., 0] + 1j * grad[..., 1])
    return dw, dwb, grad[..., 2]


def bateman_to_spinor(be: BatemanEval, h=None):
    """Spinor (xi, kappa) for the field grad(alpha) x grad(beta).

    The generic formula is used where its discriminant is nonzero and the
    special-case formula elsewhere. ``h`` is the family factor of
    F = h grad(alpha) x grad(beta); it enters as kappa -> kappa * conj(h).
    Works pointwise over batches; raises DegenerateSpinor if both
    discriminants vanish anywhere.
    """
    ga_bar = np.conj(be.grad_alpha)
    gb_bar = np.conj(be.grad_beta)
    aw, awb, az = _wbar_derivs(ga_bar)
    bw, bwb, bz = _wbar_derivs(gb_bar)

    xi0_gen = aw * bwb - awb * bw
    xi1_gen = awb * bz - az * bwb
    xi0_spec = aw * bz - az * bw

    scale = np.sqrt(np.sum(np.abs(ga_bar) ** 2, axis=-1) * np.sum(np.abs(gb_bar) ** 2, axis=-1))
    scale = scale + 1e-300
    use_gen = np.abs(xi1_gen) > BRANCH_TOL * scale
    degenerate = ~use_gen & (np.abs(xi0_spec) <= BRANCH_TOL * scale)
    if np.any(degenerate):
        raise DegenerateSpinor("both spinor branch discriminants vanish")

    with np.errstate(divide="ignore", invalid="ignore"):
        xi0 = np.where(use_gen, xi0_gen, xi0_spec)
        xi1 = np.where(use_gen, xi1_gen, 0.0)
        kappa = 1j / np.where(use_gen, xi1_gen, xi0_spec)
    if h is not None:
        kappa = kappa * np.conj(h)
    return _pack(xi0, xi1), kappa


def bateman_knotted_spinor(kp, t, xyz):
    """Spinor for grad(alpha^p) x grad(beta^q) routed through bateman_to_spinor."""
    kp = KnotParams.coerce(kp)
    be = eval_alpha_beta(t, xyz)
    return bateman_to_spinor(be, knot_factor(kp, be))


def phi_from(xi, kappa) -> np.ndarray:
    """Phi_AB = kappa xi_A xi_B; shape (..., 2, 2)."""
    xi = np.asarray(xi)
    kappa = np.asarray(kappa)
    off = kappa * xi[..., 0] * xi[..., 1]
    row0 = np.stack(np.broadcast_arrays(kappa * xi[..., 0] ** 2, off), axis=-1)
    row1 = np.stack(np.broadcast_arrays(off, kappa * xi[..., 1] ** 2), axis=-1)
    return np.stack([row0, row1], axis=-2)


def raise_both(phi) -> np.ndarray:
    """Phi^AB = eps^AC eps^BD Phi_CD."""
    return np.einsum("ac,bd,...cd->...ab", EPS, EPS, phi)


def phi_square(phi):
    """Phi_AB Phi^AB; zero for every null field."""
    return np.einsum("...ab,...ab->...", phi, raise_both(phi))


def field_tensor(phi) -> np.ndarray:
    """F^{mu nu} = g^{mu AA'} g^{nu BB'} (Phi_AB eps_A'B' + eps_AB conj(Phi)_A'B')."""
    phi = np.asarray(phi)
    return np.einsum("maA,nbB,...ab,AB->...mn", IVDW, IVDW, phi, EPS) + np.einsum(
        "maA,nbB,ab,...AB->...mn", IVDW, IVDW, EPS, np.conj(phi)
    )


def field_from_phi(phi) -> RSValue:
    phi = np.asarray(phi, dtype=complex)
    if not np.allclose(phi[..., 0, 1], phi[..., 1, 0], rtol=SYMMETRY_RTOL, atol=0.0):
        raise AsymmetricInput("Phi_01 != Phi_10")
    Fmn = np.real(field_tensor(phi))
    E = Fmn[..., 1:, 0]
    B = -np.stack([Fmn[..., 2, 3], Fmn[..., 3, 1], Fmn[..., 1, 2]], axis=-1)
    return RSValue(E + 1j * B)


def null_direction(xi) -> np.ndarray:
    """xi^mu = g^{mu AA'} xi_A conj(xi)_A' (real, future-pointing)."""
    xi = np.asarray(xi)
    return np.real(np.einsum("maA,...a,...A->...m", IVDW, xi, np.conj(xi)))


def _partials(fn, t, xyz, h=FD_STEP, order=2):
    return central_partials(fn, t, xyz, h, order)


def gsf_residual(spinor_field, t, xyz, h=FD_STEP, order=2):
    """xi^A xi_B g^{mu BB'} d_mu xi_A, one complex number per primed index B'.

    ``spinor_field(t, xyz)`` must return xi with trailing axis 2.
    """
    xi = np.asarray(spinor_field(t, xyz))
    dxi = _partials(spinor_field, t, xyz, h, order)
    xi_up = np.einsum("ab,...b->...a", EPS, xi)
    return np.einsum("...a,...b,mbB,m...a->...B", xi_up, xi, IVDW, dxi)


def gsf_scale(spinor_field, t, xyz, h=FD_STEP, order=2):
    xi = np.asarray(spinor_field(t, xyz))
    dxi = _partials(spinor_field, t, xyz, h, order)
    mag = np.sum(np.abs(xi) ** 2, axis=-1)
    dmag = np.sqrt(np.sum(np.abs(dxi) ** 2, axis=(0, -1)))
    return mag * dmag + 1e-30


def spinor_maxwell_residual(phi_field, t, xyz, h=FD_STEP, order=2):
    """g^{mu AA'} d_mu Phi_AB for a callable returning Phi of shape (..., 2, 2)."""
    dphi = _partials(phi_field, t, xyz, h, order)
    return np.einsum("maA,m...ab->...Ab", IVDW, dphi)
