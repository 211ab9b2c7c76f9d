"""Knotted null electromagnetic fields from the Bateman construction.

Closed-form (p, q) fields, their spinor description, S^3 geometry and core
curves, field-line tracing, Gauss linking, conserved quantities and a
self-checking verification battery.
"""
from .bateman import (
    HOPFION_SCALE,
    BatemanEval,
    KnotParams,
    eval_alpha_beta,
    eval_hopfion,
    eval_knotted_field,
    eval_plane_wave,
    eval_potential,
)
from .conserved import ConservedSet, QuadratureSpec, conserved_set, expected_ratios, time_invariance_check
from .errors import (
    AsymmetricInput,
    CurvesTooClose,
    DegenerateSpinor,
    InvalidKnotParams,
    NoConvergence,
    NonFinite,
    NonIntegerWinding,
    NullKnotsError,
    PointAtInfinity,
    Stagnation,
    StagnationAtSeed,
)
from .geometry import (
    CoreCurveSpec,
    KnotType,
    S3Point,
    core_component_count,
    core_curve,
    core_specs,
    inverse_stereographic,
    psi,
    psi_extremes,
    stereographic,
)
from .spacetime import RSValue, SpacetimePoint, rs_decompose
from .spinors import field_from_phi, hopfion_spinor, knotted_spinor, phi_from
from .topology import ClosedCurve, classify_torus_knot, gauss_linking
from .tracer import Termination, TraceConfig, TraceResult, advect_marker, trace
from .verify import CheckReport, aggregate, run_all

__version__ = "0.1.0"
