"""Acceptance criteria, one test per criterion.

Each criterion prints a single PASS/FAIL line (collected into the pytest
terminal summary). Run this file directly to get the lines without pytest.
"""

from __future__ import annotations

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest
import sympy as sp
from oracles import denominator_oracle, hypersurface_min_ricci

from isoparam.clifford import build_system, constructible_families, delta_of_m, trace_invariant
from isoparam.curvature import (
    FamilyDescriptor,
    HypersurfaceState,
    expected_nonnegative,
    hypersurface_ricci_extremes,
    mean_curvature,
    min_sectional_scan,
    minimal_theta,
)
from isoparam.field import gradient_F, laplacian_F, sample_points
from isoparam.focal import RegistryCase, Side, frame_at, block_pair_witness, registry_witness, sample_focal_point
from isoparam.homogeneous import ModelCase, exact_ricci_matrix, exact_sectional_curvature, load_model, model_witness
from isoparam.topology import Tri, classify_family, j_denominator

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

FAMILIES = list(constructible_families(9, 4))
NEG_RESTARTS = 32


def _patterns(m, k):
    """Definite and most indefinite sign pattern when m = 0 mod 4."""
    if m % 4:
        return [(1,) * k]
    half = k // 2
    return [(1,) * k, (1,) * (k - half) + (-1,) * half]


def _systems():
    for m, k in FAMILIES:
        for signs in _patterns(m, k):
            yield build_system(m, k, signs=signs)


def _cluster(values, gap=1e-6):
    out = []
    for v in np.sort(values):
        if out and v - out[-1][-1] <= gap:
            out[-1].append(v)
        else:
            out.append([v])
    return [(float(np.mean(c)), len(c)) for c in out]


# ---------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    for s in _systems():
        X = sample_points(s.dim, 100, seed=1000 + s.m * 10 + s.k, radius=(0.5, 2.0))
        for x in X:
            r2 = float(x @ x)
            g = gradient_F(s, x)
            worst = max(worst, abs(float(g @ g) - 16 * r2**3), abs(float(laplacian_F(s, x)) - 8 * (s.m2 - s.m1) * r2))
        count += 1
    dt = time.perf_counter() - t0
    return worst <= 1e-8 and dt < 60, f"{count} systems x 100 samples, max residual {worst:.2e}, {dt:.1f}s"


def criterion_2():
    bad, count = [], 0
    for s in _systems():
        for side in Side:
            want = [(-1.0, s.m2), (0.0, s.m1), (1.0, s.m2)] if side is Side.PLUS else [(-1.0, s.m1), (0.0, s.m2), (1.0, s.m1)]
            for seed in range(10):
                f = frame_at(s, side, sample_focal_point(s, side, seed=seed))
                for A in f.shape_ops:
                    got = _cluster(np.linalg.eigvalsh(A))
                    ok = [c for _, c in got] == [c for _, c in want] and all(abs(v - w) <= 1e-6 for (v, _), (w, _) in zip(got, want))
                    if not ok:
                        bad.append(f"{s.label()} {side.value} seed {seed}")
                        break
                count += 1
    return not bad, f"{count} frames, {len(bad)} with a wrong spectrum {bad[:3]}"


def criterion_3():
    rows = []
    for m, k in FAMILIES:
        if k * delta_of_m(m) > 2 * m:
            rows.append((f"block pair {build_system(m, k).label()}", block_pair_witness(build_system(m, k)).K, -1.0, "eq"))
    for case in RegistryCase:
        rows.append((case.value, registry_witness(case).K, -1.0, "eq"))
    expected = {
        ModelCase.G4_22_Plus: (-1, "eq"),
        ModelCase.G4_45_Plus: (-1, "eq"),
        ModelCase.G6M1Plus: (-5, "eq"),
        ModelCase.G6M1Minus: (-2, "eq"),
        ModelCase.G6M2Plus: (-5, "eq"),
        ModelCase.G6M2Minus: (-2, "eq"),
        ModelCase.G4_45_Minus: (sp.Rational(-1, 3), "le"),
    }
    for case, (K, rel) in expected.items():
        X, Y, _, _ = load_model(case).witness
        exact = exact_sectional_curvature(load_model(case), X, Y)
        rows.append((case.value, model_witness(case).K, float(K), rel))
        rows.append((case.value + " exact", float(exact), float(K), rel))
    bad = [r for r in rows if not (abs(r[1] - r[2]) <= 1e-9 if r[3] == "eq" else r[1] <= r[2] + 1e-9)]
    return not bad, f"{len(rows)} witness values, failures {[(n, K) for n, K, _, _ in bad]}"


def criterion_4():
    want = {
        ModelCase.G6M1Plus: [-2, -2, sp.Rational(10, 3), sp.Rational(10, 3), 4],
        ModelCase.G6M1Minus: [sp.Rational(-2, 3), sp.Rational(-2, 3), 2, 2, 4],
        ModelCase.G6M2Plus: [0] * 4 + [8] * 4 + [9] * 2,
        ModelCase.G6M2Minus: [4] * 8 + [9] * 2,
    }
    bad = []
    for case, values in want.items():
        R = exact_ricci_matrix(load_model(case))
        exact = sorted(sp.nsimplify(k) for k, v in R.eigenvals().items() for _ in range(v))
        numeric = np.sort(np.linalg.eigvalsh(np.array(R.evalf(30), dtype=float)))
        ref = np.array(sorted(float(v) for v in values))
        if exact != sorted(sp.nsimplify(v) for v in values) or np.abs(numeric - ref).max() > 1e-10:
            bad.append(case.value)
    return not bad, f"4 Ricci spectra, mismatches {bad}"


def criterion_5():
    lines, ok = [], True
    nonneg = [(build_system(2, 2), Side.PLUS), (build_system(1, 4), Side.MINUS), (build_system(1, 8), Side.MINUS),
              (build_system(4, 2, signs=(1, 1)), Side.PLUS)]
    worst_nonneg = math.inf
    for s, side in nonneg:
        K = min_sectional_scan(frame_at(s, side, sample_focal_point(s, side, seed=0)), restarts=200, seed=0).K
        worst_nonneg = min(worst_nonneg, K)
        ok &= K >= -1e-8
    worst_neg, count = -math.inf, 0
    for s in _systems():
        fam = FamilyDescriptor(4, s.m1, s.m2, definite=s.definite if s.m % 4 == 0 else None)
        for side in Side:
            if expected_nonnegative(fam, side.value):
                continue
            K = min_sectional_scan(frame_at(s, side, sample_focal_point(s, side, seed=0)), restarts=NEG_RESTARTS, seed=0).K
            worst_neg = max(worst_neg, K)
            ok &= K <= -0.3
            count += 1
    for case in ModelCase:
        K = min_sectional_scan(load_model(case), restarts=NEG_RESTARTS, seed=0).K
        worst_neg = max(worst_neg, K)
        ok &= K <= -0.3
        count += 1
    lines.append(f"nonnegative scans min {worst_nonneg:.2e}; {count} negative scans, largest minimum {worst_neg:.3f}")
    return ok, "; ".join(lines)


def _hyp_cases():
    cases = [(3, m, m) for m in (1, 2, 4, 8)] + [(6, 1, 1), (6, 2, 2)]
    g4 = {(m, k * delta_of_m(m) - m - 1) for m, k in FAMILIES} | {(2, 2), (4, 5)}
    g4 |= {(b, a) for a, b in g4}
    return cases + [(4, a, b) for a, b in sorted(g4)]


def _expected_theta(g, m1, m2):
    if g == 3:
        return math.pi / 6
    if g == 6:
        return math.pi / 12
    r = m2 / m1
    return math.atan(1 / (math.sqrt(r) + math.sqrt(r + 1)))


def criterion_6():
    bad = []
    for g, m1, m2 in _hyp_cases():
        th0 = _expected_theta(g, m1, m2)
        _, H = hypersurface_min_ricci(g, m1, m2, th0)
        if abs(minimal_theta(g, m1, m2) - th0) > 1e-12 or abs(H) > 1e-10 or abs(mean_curvature(HypersurfaceState(g, m1, m2, th0))) > 1e-10:
            bad.append((g, m1, m2, "H"))
        always_negative = (g == 3 and m1 == 1) or (g == 4 and 1 in (m1, m2)) or (g == 6 and m1 == 1)
        for j in range(50):
            th = (j + 1) * (math.pi / g) / 51
            ex = hypersurface_ricci_extremes(HypersurfaceState(g, m1, m2, th))
            ref, _ = hypersurface_min_ricci(g, m1, m2, th)
            if abs(ex.minimum - ref) > 1e-10 * max(1.0, abs(ref)) or (always_negative and not ex.minimum < 0):
                bad.append((g, m1, m2, th))
        ex0 = hypersurface_ricci_extremes(HypersurfaceState(g, m1, m2, th0))
        want = "negative" if always_negative or g == 6 else "positive"
        if (ex0.minimum < 0) != (want == "negative") or ex0.expected_sign != want:
            bad.append((g, m1, m2, "minimal"))
    g62 = hypersurface_ricci_extremes(HypersurfaceState(6, 2, 2, math.pi / 12)).minimum
    target = 11 - (2 + math.sqrt(3)) ** 2
    if abs(g62 - target) > 1e-10:
        bad.append(("g6m2", g62))
    return not bad, f"{len(_hyp_cases())} cases x 50 angles, g=6 m=2 minimal min Ric {g62:.12f} vs {target:.12f}, failures {bad[:3]}"


def criterion_7():
    got = [j_denominator(m) for m in (4, 8, 12, 16)]
    ref = [denominator_oracle(m) for m in (4, 8, 12, 16)]
    return got == ref == [24, 240, 504, 480], f"j_denominator {got}, oracle {ref}"


def criterion_8():
    eta_list = {(1, 2), (2, 1), (1, 6), (6, 1), (2, 5), (5, 2), (3, 4)}
    bad, count = [], 0
    for m, k in FAMILIES:
        sign_sets = [(1,) * p + (-1,) * (k - p) for p in range(k + 1)] if m % 4 == 0 else [(1,) * k]
        for signs in sign_sets:
            s = build_system(m, k, signs=signs)
            q = trace_invariant(s) if m % 4 == 0 else None
            f = classify_family(m, k, q)
            definite = q is not None and abs(q) == k
            eta = (s.m1, s.m2) in eta_list or ((s.m1, s.m2) == (4, 3) and q == 0)
            if (s.m1, s.m2) in ((8, 7), (9, 6)):
                cats = ("Unknown", "Unknown")
            elif (s.m1, s.m2) == (1, 1) or ((s.m1, s.m2) == (4, 3) and definite):
                cats = (3, 4)
            else:
                cats = (2, 3)
            ok = (
                f.eta_trivial is Tri.of(eta)
                and (f.cat_m_plus, f.cat_hypersurface) == cats
                and f.cat_m_minus == 2
                and f.m_plus_parallelizable is Tri.YES
                and f.hypersurface_parallelizable is Tri.YES
            )
            count += 1
            if not ok:
                bad.append(f"{s.label()} q={q}")
    n_eta = len(eta_list) + 1
    return not bad, f"{count} systems, eta list of {n_eta} entries, mismatches {bad}"


def _report_json(seed: int, tmpdir) -> bytes:
    out = tmpdir / f"report_{time.perf_counter_ns()}.json"
    cmd = [sys.executable, "-m", "isoparam", "report", "--seed", str(seed), "--restarts", "8", "--samples", "10", "--out", str(out)]
    subprocess.run(cmd, check=False, capture_output=True)
    doc = json.loads(out.read_text())
    doc.pop("wall_clock_seconds")
    return json.dumps(doc, sort_keys=True, indent=2).encode()


def criterion_9(tmpdir):
    a = _report_json(7, tmpdir)
    b = _report_json(7, tmpdir)
    return a == b and b'"fail": 0' in a, f"two report runs, {len(a)} bytes each, identical={a == b}"


# ---------------------------------------------------------------------------

TITLES = {
    1: "Cartan-Muenzner identities",
    2: "focal shape-operator spectra",
    3: "negative-curvature witnesses",
    4: "g=6 Ricci spectra",
    5: "sign-consistency scans",
    6: "hypersurface Ricci analysis",
    7: "Bernoulli denominators",
    8: "classification round-trip",
    9: "report determinism",
}


def _record(n, ok, detail):
    line = f"criterion {n} {'PASS' if ok else 'FAIL'}  {TITLES[n]}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n):
    ok, detail = globals()[f"criterion_{n}"]()
    assert _record(n, ok, detail), detail


def test_criterion_9(tmp_path):
    ok, detail = criterion_9(tmp_path)
    assert _record(9, ok, detail), detail


if __name__ == "__main__":
    import pathlib
    import tempfile

    results = [_record(n, *globals()[f"criterion_{n}"]()) for n in range(1, 9)]
    with tempfile.TemporaryDirectory() as d:
        results.append(_record(9, *criterion_9(pathlib.Path(d))))
    sys.exit(0 if all(results) else 1)
