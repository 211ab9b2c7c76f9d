"""Acceptance criteria 1-10, each at its stated tolerance and runtime budget.

Run with ``pytest tests/test_acceptance.py``; a summary section lists one
PASS/FAIL line per criterion.
"""
import sys
import time

import numpy as np
import pytest

from nullknots.cli import main as cli_main
from nullknots.conserved import conserved_set, expected_ratios
from nullknots.geometry import CoreCurveSpec, core_component_count, core_curve, core_curve_point
from nullknots.topology import gauss_linking
from nullknots.tracer import TraceConfig, trace
from nullknots import verify as V

KPS = [(1, 1), (2, 3), (2, 5), (1, 2), (2, 2)]
TIMES = (0.0, 0.7, 1.3)


def fmt(x):
    return f"{x:.3e}" if isinstance(x, float) else str(x)


def test_criterion_01_nullity(acceptance_line):
    start = time.perf_counter()
    worst = max(V.nullity_check(kp, n=1000, times=TIMES).max_residual for kp in KPS)
    dt = time.perf_counter() - start
    ok = worst <= 1e-10 and dt < 5
    acceptance_line(1, ok, f"nullity max scaled residual {fmt(worst)} (tol 1e-10), {dt:.1f} s (< 5 s)")
    assert ok


def test_criterion_02_maxwell(acceptance_line):
    start = time.perf_counter()
    worst = max(V.maxwell_check(kp, n=1000, times=TIMES, h=1e-4).max_residual for kp in KPS)
    dt = time.perf_counter() - start
    ok = worst <= 1e-5 and dt < 30
    acceptance_line(2, ok, f"Maxwell max scaled residual {fmt(worst)} (tol 1e-5, h = 1e-4), {dt:.1f} s (< 30 s)")
    assert ok


def test_criterion_03_constraint_and_nontriviality(acceptance_line):
    c = V.bateman_constraint_check(n=1000)
    n = V.nontriviality_check(n=1000)
    controls = V.negative_controls(0, ["bateman_constraint", "nontriviality"])
    controls_fail = all(not r.passed for r in controls.values())
    ok = c.max_residual <= 1e-10 and n.max_residual <= 1e-10 and controls_fail
    acceptance_line(
        3, ok, f"constraint {fmt(c.max_residual)}, nontriviality {fmt(n.max_residual)} (tol 1e-10); controls fail: {controls_fail}"
    )
    assert ok


def test_criterion_04_s3_norm(acceptance_line):
    r = V.s3_norm_check(n=10_000, t_max=10.0)
    ok = r.max_residual <= 1e-12
    acceptance_line(4, ok, f"| |alpha|^2 + |beta|^2 - 1 | max {fmt(r.max_residual)} over 1e4 points, |t| <= 10 (tol 1e-12)")
    assert ok


def test_criterion_05_cross_formalism(acceptance_line):
    cf = {c: V.cross_formalism_check(c, n=100, times=(0.0,)).max_residual for c in ("plane-wave", "hopfion", (2, 3))}
    gsf = {c: V.gsf_check(c, n=100, times=(0.0,)).max_residual for c in ("hopfion", (2, 3))}
    ok = max(cf.values()) <= 1e-8 and max(gsf.values()) <= 1e-5
    acceptance_line(5, ok, f"spinor vs Bateman max rel {fmt(max(cf.values()))} (tol 1e-8); GSF {fmt(max(gsf.values()))} (tol 1e-5)")
    assert ok


def test_criterion_06_conserved_ratios(acceptance_line):
    start = time.perf_counter()
    lines, ok = [], True
    for kp in [(1, 1), (2, 3), (1, 2)]:
        ex = expected_ratios(kp)
        s0, s1 = conserved_set(kp, 0.0), conserved_set(kp, 1.0)
        for tag, cs in (("t=0", s0),):
            n = cs.normalized
            got = {"H_m": n["H_m"], "H_e": n["H_e"], "P_z": n["P"][2], "L_z": n["L"][2]}
            for key, want in ex.items():
                err = abs(got[key] - want) / abs(want)
                if err > 0.02:
                    ok = False
                    lines.append(f"{kp} {key} {got[key]:+.4f} vs {want:+.4f}")
        n0, n1 = s0.normalized, s1.normalized
        drift = max(
            abs(s1.energy / s0.energy - 1),
            abs(n1["H_m"] / n0["H_m"] - 1),
            abs(n1["H_e"] / n0["H_e"] - 1),
            abs(n1["P"][2] / n0["P"][2] - 1),
            abs(n1["L"][2] / n0["L"][2] - 1),
        )
        if drift > 0.03:
            ok = False
            lines.append(f"{kp} drift {drift:.2e}")
    dt = time.perf_counter() - start
    ok = ok and dt < 300
    detail = "; ".join(lines) if lines else "all ratios within 2%, drift within 3%"
    acceptance_line(6, ok, f"{detail}; {dt:.1f} s (< 300 s)")
    assert ok, detail


def test_criterion_07_core_topology(acceptance_line):
    start = time.perf_counter()
    parts, ok = [], True
    for sign, want in ((-1, (3, -2)), (1, (-3, 2))):
        x0 = core_curve_point(CoreCurveSpec((2, 3), sign), 0.0)[1]
        res = trace("B", (2, 3), x0, 0.0, TraceConfig())
        w_ok = res.closed and res.closure_gap < 1e-4 and np.allclose(res.windings, want, atol=1e-2)
        ok &= w_ok
        parts.append(f"K{'+' if sign > 0 else '-'} gap {res.closure_gap:.1e} windings ({res.windings[0]:+.3f}, {res.windings[1]:+.3f})")
    count, _ = core_component_count((2, 2))
    ok &= count == 4
    parts.append(f"(2,2) components {count}")
    plus, minus = (core_curve(CoreCurveSpec((1, 2), s), 1024) for s in (1, -1))
    lk = gauss_linking(plus, minus)
    lk_ok = abs(abs(lk) - 4) < 1e-2
    ok &= lk_ok
    parts.append(f"(1,2) core pair linking {lk:+.4f} (want |Lk| = 4)")
    dt = time.perf_counter() - start
    ok &= dt < 120
    acceptance_line(7, ok, "; ".join(parts) + f"; {dt:.1f} s (< 120 s)")
    assert ok, parts


def test_criterion_08_torus_confinement(acceptance_line):
    reps = [V.torus_confinement_check((2, 3), t=t, seeds=20, seed=1, arc_length=100.0, tol=1e-5) for t in (0.0, 1.3)]
    worst = max(r.max_residual for r in reps)
    ok = worst < 1e-5
    acceptance_line(8, ok, f"max psi_drift / psi_extreme {fmt(worst)} over 2 x 20 B-lines, arc length 100 (tol 1e-5)")
    assert ok


def test_criterion_09_hopfion_closure_and_translation(acceptance_line):
    closure = V.hopfion_closure_check(seeds=100, seed=2, gap_tol=1e-4)
    transl = V.hopfion_translation_check(n=100, t=1.0, tol=1e-8)
    ok = closure.passed and transl.passed
    acceptance_line(
        9, ok, f"100 Hopfion B-lines max gap {fmt(closure.max_residual)} (tol 1e-4); rigid translation {fmt(transl.max_residual)} (tol 1e-8)"
    )
    assert ok


def test_criterion_10_harness_integrity(acceptance_line, tmp_path):
    controls = V.negative_controls(0)
    slipped = [name for name, r in controls.items() if r.passed]
    start = time.perf_counter()
    code = cli_main(["verify", "--out", str(tmp_path / "report.jsonl")])
    dt = time.perf_counter() - start
    ok = not slipped and code == 0 and dt < 600
    acceptance_line(
        10, ok, f"{len(controls)} negative controls, slipped through: {slipped or 'none'}; verify exit {code} in {dt:.1f} s (< 600 s)"
    )
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
