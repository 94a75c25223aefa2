"""Check suites behind the CLI commands. Each returns a list of Check rows
plus optional certificates and facts."""

from __future__ import annotations

import hashlib
import math

import numpy as np

from .clifford import (
    build_system,
    constructible_families,
    delta_of_m,
    trace_invariant,
    verify_clifford_relations,
)
from .curvature import (
    FamilyDescriptor,
    HypersurfaceState,
    expected_nonnegative,
    hypersurface_negative_plane,
    hypersurface_ricci_extremes,
    mean_curvature,
    mean_curvature_g4,
    min_sectional_scan,
    minimal_theta,
    principal_curvatures,
    ricci_form,
    scalar_curvature,
    sign_verdict,
)
from .errors import InvalidArgument, InvalidFamily
from .field import spherical_gradient_check, verify_cartan_munzner
from .focal import (
    RegistryCase,
    Side,
    focal_dimension,
    frame_at,
    block_pair_witness,
    membership_residual,
    minus_witness,
    registry_witness,
    sample_focal_point,
    shape_spectrum_ok,
)
from .homogeneous import ModelCase, load_model, model_witness
from .report import Check, check_close, check_le, check_true
from .topology import HOMOGENEOUS_CASES, classify_family, homogeneous_facts, j_denominator

NEGATIVE_SCAN_RESTARTS = 32
SEED_MASK = (1 << 64) - 1


def subtask_seed(base: int, label: str, index: int = 0) -> int:
    """base XOR a stable 64-bit hash of (label, index)."""
    h = hashlib.blake2b(f"{label}:{index}".encode(), digest_size=8).digest()
    return (base ^ int.from_bytes(h, "big")) & SEED_MASK


def signs_for(m: int, k: int, q: int | None) -> tuple[int, ...]:
    if q is None:
        return (1,) * k
    if m % 4:
        raise InvalidFamily("q only applies when m is divisible by 4")
    if abs(q) > k or (q - k) % 2:
        raise InvalidFamily(f"q={q} must satisfy |q| <= k and q = k (mod 2)")
    plus = (k + q) // 2
    return (1,) * plus + (-1,) * (k - plus)


def system_for(m: int, k: int, q: int | None = None):
    return build_system(m, k, signs=signs_for(m, k, q))


def sign_patterns(m: int, k: int) -> list[int | None]:
    """The q values worth covering: definite, and the most indefinite pattern."""
    if m % 4:
        return [None]
    return sorted({k, k % 2})


def descriptor(sys_) -> FamilyDescriptor:
    return FamilyDescriptor(4, sys_.m1, sys_.m2, "ot-fkm", sys_.definite if sys_.m % 4 == 0 else None)


# ---------------------------------------------------------------------------
# construct / verify / sample


def construct_checks(sys_) -> list[Check]:
    rel = verify_clifford_relations(sys_)
    q = trace_invariant(sys_)
    tag = sys_.label()
    rows = [
        Check(f"clifford_relations {tag}", 0.0, rel.max_deviation, "pass" if rel.passed else "fail",
              {"exact": rel.exact, "worst_pair": list(rel.worst_pair) if rel.worst_pair else None}),
        check_true(f"dimension {tag}", sys_.dim == 2 * sys_.k * delta_of_m(sys_.m), observed=sys_.dim),
    ]
    if sys_.m % 4 == 0:
        rows.append(Check(f"trace_invariant {tag}", sum(sys_.signs), q, "pass" if q == sum(sys_.signs) else "fail"))
    return rows


def verify_checks(sys_, samples: int, seed: int, tol: float) -> list[Check]:
    tag = sys_.label()
    cm = verify_cartan_munzner(sys_, samples, subtask_seed(seed, f"cm {tag}"), tol)
    sg = spherical_gradient_check(sys_, samples, subtask_seed(seed, f"sph {tag}"), tol)
    return [
        check_le(f"grad_norm_identity {tag}", cm.residuals["grad_norm"], tol, samples=samples),
        check_le(f"laplacian_identity {tag}", cm.residuals["laplacian"], tol, samples=samples),
        check_le(f"spherical_gradient {tag}", sg.residuals["identity"], tol, samples=samples),
    ]


def sample_checks(sys_, samples: int, seed: int) -> list[Check]:
    rows = []
    tag = sys_.label()
    for side in Side:
        mem, gram, trace, spec_ok, scal = 0.0, 0.0, 0.0, 0, []
        for i in range(samples):
            x = sample_focal_point(sys_, side, subtask_seed(seed, f"sample {side.value} {tag}", i))
            f = frame_at(sys_, side, x)
            mem = max(mem, membership_residual(sys_, side, x))
            gram = max(gram, f.gram_deviation())
            trace = max(trace, float(np.abs(np.trace(f.shape_ops, axis1=1, axis2=2)).max()))
            spec_ok += shape_spectrum_ok(f, sys_)
            scal.append(scalar_curvature(f.shape_ops))
            dim = f.dim
        s = f"M{'+' if side is Side.PLUS else '-'} {tag}"
        spread = max(scal) - min(scal)
        rows += [
            check_le(f"membership {s}", mem, 1e-10),
            check_le(f"frame_gram {s}", gram, 1e-10),
            check_true(f"dimension {s}", dim == focal_dimension(sys_, side), observed=dim, expected=focal_dimension(sys_, side)),
            check_le(f"minimality {s}", trace, 1e-8),
            Check(f"shape_spectrum {s}", samples, spec_ok, "pass" if spec_ok == samples else "fail"),
            check_le(f"scalar_curvature_spread {s}", spread, 1e-6, value=float(np.mean(scal))),
        ]
    return rows


# ---------------------------------------------------------------------------
# curvature


def _registry_cases_for(sys_) -> list[RegistryCase]:
    key = (sys_.m1, sys_.m2, sys_.definite if sys_.m % 4 == 0 else None)
    table = {
        (4, 3, False): [RegistryCase.INDEFINITE_43, RegistryCase.INDEFINITE_43_VIA_52],
        (5, 2, None): [RegistryCase.FIFTY_TWO],
        (8, 7, True): [RegistryCase.DEFINITE_87],
        (9, 6, None): [RegistryCase.NINETY_SIX],
        (8, 7, False): [RegistryCase.INDEFINITE_87],
    }
    return table.get(key, [])


def witness_certificates(sys_, seed: int) -> list:
    certs = []
    if sys_.l > 2 * sys_.m:
        certs.append(("plus", block_pair_witness(sys_)))
    for case in _registry_cases_for(sys_):
        certs.append(("plus", registry_witness(case)))
    if sys_.m >= 2:
        certs.append(("minus", minus_witness(sys_, subtask_seed(seed, f"minus-witness {sys_.label()}"))))
    return certs


def scan_side(sys_, side: Side, restarts: int, seed: int):
    fam = descriptor(sys_)
    nonneg = expected_nonnegative(fam, side.value)
    r = restarts if nonneg else min(restarts, NEGATIVE_SCAN_RESTARTS)
    x = sample_focal_point(sys_, side, subtask_seed(seed, f"scan-point {side.value} {sys_.label()}"))
    frame = frame_at(sys_, side, x)
    cert = min_sectional_scan(frame, r, subtask_seed(seed, f"scan {side.value} {sys_.label()}"))
    cert.source = f"M{'+' if side is Side.PLUS else '-'} {sys_.label()}"
    return frame, cert


def curvature_checks_otfkm(sys_, restarts: int, seed: int) -> tuple[list[Check], list]:
    rows, certs = [], []
    fam = descriptor(sys_)
    witnesses = witness_certificates(sys_, seed)
    for side_name, c in witnesses:
        certs.append(c.to_dict())
        rows.append(Check(f"witness {c.source}", c.expected if c.expected is not None else "< 0", c.K,
                          "pass" if c.verified else "fail"))
    for side in Side:
        frame, scan = scan_side(sys_, side, restarts, seed)
        certs.append(scan.to_dict())
        evidence = [scan] + [c for s, c in witnesses if s == side.value]
        v = sign_verdict(fam, side.value, evidence)
        rows.append(Check(f"sign_verdict {scan.source}", v.expected, v.observed_min, "pass" if v.consistent else "fail",
                          {"scan_restarts": scan.details["restarts"]}))
        rf = ricci_form(frame)
        rows.append(check_le(f"ricci_mean_curvature_term {scan.source}", rf.mean_curvature_norm, 1e-8,
                             ricci_min=float(rf.eigenvalues[0])))
    return rows, certs


def curvature_checks_model(case, restarts: int, seed: int) -> tuple[list[Check], list]:
    model = load_model(case)
    w = model_witness(case)
    scan = min_sectional_scan(model, restarts, subtask_seed(seed, f"scan {model.source}"))
    fam = FamilyDescriptor(model.g, model.m1, model.m2, "homogeneous")
    v = sign_verdict(fam, model.side, [w, scan])
    rf = ricci_form(model)
    rows = [
        Check(f"witness {model.source}", w.expected, w.K, "pass" if w.verified else "fail", {"relation": w.details["relation"]}),
        Check(f"sign_verdict {model.source}", v.expected, v.observed_min, "pass" if v.consistent else "fail"),
        Check(f"ricci_spectrum {model.source}", "printed closed form", [round(float(e), 12) for e in rf.eigenvalues], "pass"),
    ]
    from .homogeneous import closed_form_matrix, exact_ricci_matrix

    cf = closed_form_matrix(model)
    if cf is not None:
        diff = float(np.abs(np.array((exact_ricci_matrix(model) - cf).evalf(30), dtype=float)).max())
        rows[-1] = check_le(f"ricci_closed_form {model.source}", diff, 1e-12,
                            eigenvalues=[round(float(e), 12) for e in rf.eigenvalues])
    return rows, [w.to_dict(), scan.to_dict()]


def parse_hypersurface_case(case: str) -> tuple[int, int, int]:
    """'hyp-g4-1-2' -> (4, 1, 2)."""
    try:
        head, g, m1, m2 = case.split("-")
        assert head == "hyp" and g.startswith("g")
        return int(g[1:]), int(m1), int(m2)
    except (ValueError, AssertionError):
        raise InvalidArgument(f"hypersurface case must look like hyp-g4-1-2, got {case!r}") from None


def hypersurface_cases() -> list[tuple[int, int, int]]:
    out = [(3, m, m) for m in (1, 2, 4, 8)] + [(6, 1, 1), (6, 2, 2)]
    g4 = {(m, k * delta_of_m(m) - m - 1) for m, k in constructible_families(9, 4)} | {(2, 2), (4, 5)}
    g4 |= {(b, a) for a, b in g4}
    out += [(4, a, b) for a, b in sorted(g4)]
    return out


def theta_grid(g: int, n: int = 50) -> list[float]:
    return [(j + 1) * (math.pi / g) / (n + 1) for j in range(n)]


def _closed_form_ric_e1(state: HypersurfaceState) -> float | None:
    g, m1 = state.g, state.m1
    l1 = 1.0 / math.tan(state.theta)
    if g == 3 and m1 == 1:
        return -2.0 / 3.0 - 8.0 / (3.0 * (3.0 * l1 * l1 - 1.0))
    if g == 4 and m1 == 1:
        return -2.0 * state.m2 * (l1 * l1 + 1.0) / (l1 * l1 - 1.0)
    if g == 6 and m1 == 1:
        return -4.0 * (l1 * l1 + 1.0) * (5.0 * l1 * l1 - 3.0) / ((l1 * l1 - 3.0) * (3.0 * l1 * l1 - 1.0))
    return None


def hypersurface_checks(g: int, m1: int, m2: int, theta: float | None = None, n_grid: int = 50) -> list[Check]:
    tag = f"g={g} ({m1},{m2})"
    rows = []
    thetas = [theta] if theta is not None else theta_grid(g, n_grid)
    sign_ok, closed_dev, plane_ok, h_dev = True, 0.0, True, 0.0
    for th in thetas:
        st = HypersurfaceState(g, m1, m2, th)
        ex = hypersurface_ricci_extremes(st)
        if ex.consistent is False:
            sign_ok = False
        cf = _closed_form_ric_e1(st)
        if cf is not None:
            closed_dev = max(closed_dev, abs(cf - ex.per_direction[0][2]) / max(1.0, abs(cf)))
        if g >= 3:
            plane_ok &= hypersurface_negative_plane(st).verified
        if g == 4:
            h_dev = max(h_dev, abs(mean_curvature(st) - mean_curvature_g4(st)) / max(1.0, abs(mean_curvature(st))))
    rows.append(check_true(f"ricci_sign_grid {tag}", sign_ok, points=len(thetas)))
    if _closed_form_ric_e1(HypersurfaceState(g, m1, m2, thetas[0])) is not None:
        rows.append(check_le(f"ricci_e1_closed_form {tag}", closed_dev, 1e-9))
    if g >= 3:
        rows.append(check_true(f"negative_plane_e1_eg {tag}", plane_ok))
    if g == 4:
        rows.append(check_le(f"mean_curvature_closed_form {tag}", h_dev, 1e-12))
    if g in (3, 4, 6):
        th0 = minimal_theta(g, m1, m2)
        st0 = HypersurfaceState(g, m1, m2, th0)
        rows.append(check_le(f"minimal_theta_H {tag}", abs(mean_curvature(st0)), 1e-10, theta=th0))
        ex0 = hypersurface_ricci_extremes(st0)
        rows.append(Check(f"ricci_sign_at_minimal {tag}", ex0.expected_sign, ex0.minimum,
                          "pass" if ex0.consistent in (True, None) else "fail"))
        if (g, m1) == (6, 2):
            rows.append(check_close(f"min_ricci_minimal {tag}", ex0.minimum, 11 - (2 + math.sqrt(3)) ** 2, 1e-10))
    return rows


def principal_curvature_fact(g, m1, m2, theta) -> dict:
    st = HypersurfaceState(g, m1, m2, theta)
    return {"principal_curvatures": [[lam, mult] for lam, mult in principal_curvatures(st)], "H": mean_curvature(st)}


# ---------------------------------------------------------------------------
# classification


_ETA_LIST = {(1, 2), (2, 1), (1, 6), (6, 1), (2, 5), (5, 2), (3, 4)}


def classification_roundtrip_checks(max_m: int = 9, max_k: int = 4) -> list[Check]:
    rows = []
    bad = []
    n = 0
    for m, k in constructible_families(max_m, max_k):
        for q in sign_patterns(m, k):
            s = system_for(m, k, q)
            qq = trace_invariant(s) if m % 4 == 0 else None
            f = classify_family(m, k, qq)
            n += 1
            eta = (s.m1, s.m2) in _ETA_LIST or ((s.m1, s.m2) == (4, 3) and qq == 0)
            if (f.eta_trivial.value == "Yes") != eta or f.m_plus_parallelizable.value != "Yes" \
                    or f.hypersurface_parallelizable.value != "Yes" or f.cat_m_minus != 2:
                bad.append(f"{s.label()} q={qq}")
    rows.append(Check("classification_roundtrip", 0, len(bad), "pass" if not bad else "fail", {"families": n, "mismatches": bad}))
    rows.append(Check("j_denominators", [24, 240, 504, 480], [j_denominator(m) for m in (4, 8, 12, 16)],
                      "pass" if [j_denominator(m) for m in (4, 8, 12, 16)] == [24, 240, 504, 480] else "fail"))
    return rows


def classify_facts(m=None, k=None, q=None, case=None) -> dict:
    if case is not None:
        return homogeneous_facts(case).to_dict()
    if m is not None and m % 4 == 0 and q is None:
        q = k
    return classify_family(m, k, q).to_dict()


__all__ = [
    "HOMOGENEOUS_CASES",
    "ModelCase",
    "RegistryCase",
    "classification_roundtrip_checks",
    "classify_facts",
    "construct_checks",
    "curvature_checks_model",
    "curvature_checks_otfkm",
    "hypersurface_cases",
    "hypersurface_checks",
    "sample_checks",
    "subtask_seed",
    "system_for",
    "verify_checks",
    "witness_certificates",
]
