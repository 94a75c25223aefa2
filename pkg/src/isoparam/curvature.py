"""Intrinsic curvature from shape operators via the Gauss equation.

Everything here works in an orthonormal tangent basis: a submanifold of the
unit sphere is described at a point by a stack ``A`` of symmetric matrices,
one per orthonormal normal direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegeneratePair, InvalidArgument, NotApplicable

NONNEG_THRESHOLD = -1e-8
DEFAULT_RESTARTS = 200
_CHUNK = 32


@dataclass
class CurvatureCertificate:
    source: str
    X: np.ndarray
    Y: np.ndarray
    K: float
    kind: str  # "witness" | "scan-min" | "spectrum"
    status: str  # "verified" | "failed"
    tolerance: float
    expected: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "kind": self.kind,
            "status": self.status,
            "K": float(self.K),
            "expected": None if self.expected is None else float(self.expected),
            "tolerance": self.tolerance,
            "X": [float(v) for v in self.X],
            "Y": [float(v) for v in self.Y],
            "details": self.details,
        }


def as_shape_stack(shape_ops, n: int | None = None) -> np.ndarray:
    """Coerce a frame, model, list or array into a (p, n, n) float array."""
    ops = getattr(shape_ops, "shape_ops", shape_ops)
    if isinstance(ops, np.ndarray):
        A = ops.astype(float, copy=False)
    else:
        ops = list(ops)
        if not ops:
            if n is None:
                raise InvalidArgument("empty shape-operator list needs an explicit dimension")
            return np.zeros((0, n, n))
        A = np.stack([np.asarray(a, dtype=float) for a in ops])
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise InvalidArgument(f"shape operators must be square, got array of shape {A.shape}")
    if n is not None and A.shape[0] and A.shape[1] != n:
        raise InvalidArgument(f"shape operators act on R^{A.shape[1]}, expected R^{n}")
    if n is not None and A.shape[0] == 0:
        return np.zeros((0, n, n))
    return A


def orthonormal_pair(X, Y, gram_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    nx, ny = np.linalg.norm(X), np.linalg.norm(Y)
    if nx == 0 or ny == 0:
        raise DegeneratePair("zero vector in pair")
    x, y = X / nx, Y / ny
    c = float(x @ y)
    if 1.0 - c * c <= gram_tol:
        raise DegeneratePair(f"Gram determinant {1.0 - c * c:.3e} <= {gram_tol:g}")
    y = y - c * x
    y -= (x @ y) * x
    return x, y / np.linalg.norm(y)


def sectional_curvature(shape_ops, X, Y) -> float:
    """K(X, Y) = 1 + sum <A X,X><A Y,Y> - <A X,Y>^2 on the orthonormalized pair."""
    x, y = orthonormal_pair(X, Y)
    A = as_shape_stack(shape_ops, n=len(x))
    if A.shape[0] == 0:
        return 1.0
    Ax = A @ x
    Ay = A @ y
    return float(1.0 + np.sum((Ax @ x) * (Ay @ y)) - np.sum((Ax @ y) ** 2))


@dataclass
class RicciForm:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    mean_curvature_norm: float

    def trace(self) -> float:
        return float(np.trace(self.matrix))


def ricci_form(shape_ops, n: int | None = None) -> RicciForm:
    """Ric = (n-1) I + sum tr(A) A - sum A^2; the trace term is kept, not assumed zero."""
    A = as_shape_stack(shape_ops, n=n)
    dim = A.shape[1] if n is None else n
    tr = np.trace(A, axis1=1, axis2=2) if A.shape[0] else np.zeros(0)
    R = (dim - 1) * np.eye(dim)
    if A.shape[0]:
        R = R + np.einsum("p,pij->ij", tr, A) - np.einsum("pij,pjk->ik", A, A)
    R = 0.5 * (R + R.T)
    return RicciForm(matrix=R, eigenvalues=np.linalg.eigvalsh(R), mean_curvature_norm=float(np.linalg.norm(tr)))


def scalar_curvature(shape_ops, n: int | None = None) -> float:
    A = as_shape_stack(shape_ops, n=n)
    dim = A.shape[1] if n is None else n
    if A.shape[0] == 0:
        return float(dim * (dim - 1))
    tr = np.trace(A, axis1=1, axis2=2)
    return float(dim * (dim - 1) + np.sum(tr**2) - np.sum(A * A))


# ---------------------------------------------------------------------------
# multi-start minimization of K over orthonormal pairs


def _pair_energy(A2: np.ndarray, p: int, n: int, W: np.ndarray):
    """K and its Euclidean gradient for a batch W of shape (R, n, 2)."""
    R = W.shape[0]
    # one GEMM: (p*n, n) @ (n, 2R)
    AW = (A2 @ W.transpose(1, 0, 2).reshape(n, 2 * R)).reshape(p, n, R, 2)
    AX, AY = AW[..., 0], AW[..., 1]  # (p, n, R)
    X, Y = W[:, :, 0].T, W[:, :, 1].T  # (n, R)
    a = (AX * X).sum(axis=1)
    b = (AY * Y).sum(axis=1)
    c = (AX * Y).sum(axis=1)
    K = 1.0 + np.sum(a * b - c * c, axis=0)
    gX = 2.0 * (b[:, None, :] * AX - c[:, None, :] * AY).sum(axis=0)
    gY = 2.0 * (a[:, None, :] * AY - c[:, None, :] * AX).sum(axis=0)
    G = np.stack([gX.T, gY.T], axis=2)
    return K, G


def _retract(W: np.ndarray) -> np.ndarray:
    Q, Rm = np.linalg.qr(W)
    s = np.sign(np.diagonal(Rm, axis1=1, axis2=2))
    s[s == 0] = 1.0
    return Q * s[:, None, :]


def _initial_pairs(n: int, seed: int, start: int, count: int) -> np.ndarray:
    W = np.empty((count, n, 2))
    for j in range(count):
        rng = np.random.default_rng([seed, start + j])
        W[j] = rng.standard_normal((n, 2))
    return _retract(W)


def _descend(A2, p, n, W, step0, max_iter, dk_tol):
    R = W.shape[0]
    K, G = _pair_energy(A2, p, n, W)
    t = np.full(R, step0)
    active = np.ones(R, dtype=bool)
    iters = np.zeros(R, dtype=int)
    for _ in range(max_iter):
        if not active.any():
            break
        sym = W.transpose(0, 2, 1) @ G
        sym = 0.5 * (sym + sym.transpose(0, 2, 1))
        D = G - W @ sym  # Riemannian gradient
        g2 = (D * D).sum(axis=(1, 2))
        Wt = _retract(W - t[:, None, None] * D)
        Kt, Gt = _pair_energy(A2, p, n, Wt)
        ok = active & (Kt <= K - 1e-4 * t * g2)
        dK = K - Kt
        W = np.where(ok[:, None, None], Wt, W)
        G = np.where(ok[:, None, None], Gt, G)
        K = np.where(ok, Kt, K)
        iters += active
        done = ok & (dK <= dk_tol)
        t = np.where(ok, np.minimum(2.0 * t, 1e3 * step0), np.where(active, 0.5 * t, t))
        stuck = active & ~ok & (t < 1e-18 * step0)
        active &= ~(done | stuck | (g2 <= 1e-28))
    return W, K, iters


def min_sectional_scan(
    shape_ops,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = 1e-12,
    max_iter: int = 5000,
    source: str | None = None,
) -> CurvatureCertificate:
    """Best-effort minimum of K over tangent 2-planes.

    Restarts are processed in fixed-size chunks with initial pairs seeded by
    (seed, restart index), so the first r restarts give the same numbers for any
    total count and the reported minimum never increases with more restarts.
    """
    if restarts < 1:
        raise InvalidArgument("restarts must be >= 1")
    A = as_shape_stack(shape_ops)
    p, n = A.shape[0], A.shape[1]
    if n < 2:
        raise NotApplicable("tangent space must have dimension >= 2")
    label = source or getattr(shape_ops, "source", None) or "shape_ops"
    if p == 0:
        e = np.eye(n)
        return CurvatureCertificate(label, e[0], e[1], 1.0, "scan-min", "verified", tol, details={"restarts": restarts})
    A2 = A.reshape(p * n, n)
    lip = float(np.sum(np.linalg.norm(A, ord=2, axis=(1, 2)) ** 2))
    step0 = 0.25 / max(1.0, lip)
    best_K, best_W, best_idx = np.inf, None, -1
    per_restart = []
    for start in range(0, restarts, _CHUNK):
        W0 = _initial_pairs(n, seed, start, _CHUNK)
        W, K, _ = _descend(A2, p, n, W0, step0, max_iter, tol)
        count = min(_CHUNK, restarts - start)
        per_restart.extend(K[:count].tolist())
        j = int(np.argmin(K[:count]))
        if K[j] < best_K:
            best_K, best_W, best_idx = float(K[j]), W[j], start + j
    X, Y = best_W[:, 0], best_W[:, 1]
    K_check = sectional_curvature(A, X, Y)
    status = "verified" if abs(K_check - best_K) <= 1e-9 else "failed"
    return CurvatureCertificate(
        source=label,
        X=X,
        Y=Y,
        K=best_K,
        kind="scan-min",
        status=status,
        tolerance=tol,
        details={"restarts": restarts, "seed": seed, "best_restart": best_idx, "consistent_with_nonneg": best_K >= NONNEG_THRESHOLD},
    )


# ---------------------------------------------------------------------------
# isoparametric hypersurfaces, principal curvatures cot(theta + (i-1) pi / g)

_G3_MULTS = (1, 2, 4, 8)
_G6_MULTS = (1, 2)


@dataclass(frozen=True)
class HypersurfaceState:
    g: int
    m1: int
    m2: int
    theta: float

    def __post_init__(self):
        g, m1, m2 = self.g, self.m1, self.m2
        if g not in (1, 2, 3, 4, 6):
            raise InvalidArgument(f"g must be one of 1,2,3,4,6, got {g}")
        if m1 < 1 or m2 < 1:
            raise InvalidArgument("multiplicities must be positive")
        if g in (3, 6) and m1 != m2:
            raise InvalidArgument(f"g={g} forces equal multiplicities")
        if g == 3 and m1 not in _G3_MULTS:
            raise InvalidArgument(f"g=3 needs m in {_G3_MULTS}")
        if g == 6 and m1 not in _G6_MULTS:
            raise InvalidArgument(f"g=6 needs m in {_G6_MULTS}")
        if not (0.0 < self.theta < math.pi / g):
            raise InvalidArgument(f"theta={self.theta} outside (0, pi/{g})")

    @property
    def n(self) -> int:
        return sum(mult for _, mult in principal_curvatures(self))


def principal_curvatures(state: HypersurfaceState) -> list[tuple[float, int]]:
    out = []
    for i in range(state.g):
        lam = 1.0 / math.tan(state.theta + i * math.pi / state.g)
        out.append((lam, state.m1 if i % 2 == 0 else state.m2))
    return out


def mean_curvature(state: HypersurfaceState) -> float:
    return float(sum(mult * lam for lam, mult in principal_curvatures(state)))


def mean_curvature_g4(state: HypersurfaceState) -> float:
    """Closed form for g = 4 in terms of lambda_1 = cot(theta)."""
    if state.g != 4:
        raise NotApplicable("closed form only for g = 4")
    l1 = 1.0 / math.tan(state.theta)
    return state.m1 * (l1 * l1 - 1.0) / l1 - 4.0 * state.m2 * l1 / (l1 * l1 - 1.0)


def minimal_theta(g: int, m1: int, m2: int) -> float:
    """The unique theta in (0, pi/g) with H = 0."""
    if g == 1:
        raise NotApplicable("a g=1 hypersurface is minimal only for the equator, theta = pi/2")
    if g == 2:
        return math.atan(math.sqrt(m1 / m2))
    if g == 4:
        r = m2 / m1
        return math.atan(1.0 / (math.sqrt(r) + math.sqrt(r + 1.0)))
    return math.pi / (2 * g)


@dataclass
class RicciExtremes:
    minimum: float
    per_direction: list  # (lambda_i, multiplicity, Ric(e_i))
    expected_sign: str | None  # "negative" / "positive" / None when no claim applies
    consistent: bool | None


def _expected_hypersurface_sign(state: HypersurfaceState) -> str | None:
    g, m1, m2 = state.g, state.m1, state.m2
    if g == 3 and m1 == 1:
        return "negative"
    if g == 4 and (m1 == 1 or m2 == 1):
        return "negative"
    if g == 6 and m1 == 1:
        return "negative"
    near_min = g in (3, 4, 6) and abs(state.theta - minimal_theta(g, m1, m2)) <= 1e-12
    if near_min:
        return "negative" if g == 6 else "positive"
    return None


def hypersurface_ricci_extremes(state: HypersurfaceState) -> RicciExtremes:
    """Ric(e_i) = n - 1 + lambda_i H - lambda_i^2; Ric(X) is affine in the a_i^2,
    so the minimum over unit X is attained on a principal direction."""
    pcs = principal_curvatures(state)
    n = sum(mult for _, mult in pcs)
    H = mean_curvature(state)
    per = [(lam, mult, n - 1 + lam * H - lam * lam) for lam, mult in pcs]
    mn = min(r for _, _, r in per)
    exp = _expected_hypersurface_sign(state)
    if exp is None:
        ok = None
    else:
        ok = mn < 0 if exp == "negative" else mn > 0
    return RicciExtremes(minimum=mn, per_direction=per, expected_sign=exp, consistent=ok)


def hypersurface_negative_plane(state: HypersurfaceState) -> CurvatureCertificate:
    """The plane (e_1, e_g): K = 1 + lambda_1 lambda_g < 0 for g >= 3."""
    if state.g < 3:
        raise NotApplicable("needs g >= 3")
    pcs = principal_curvatures(state)
    l1, lg = pcs[0][0], pcs[-1][0]
    K = 1.0 + l1 * lg
    c = 1.0 / math.tan(math.pi / state.g)
    closed = -c * (1.0 + l1 * l1) / (l1 - c)
    n = sum(m for _, m in pcs)
    X = np.zeros(n)
    Y = np.zeros(n)
    X[0] = 1.0
    Y[n - pcs[-1][1]] = 1.0
    return CurvatureCertificate(
        source=f"hypersurface g={state.g} ({state.m1},{state.m2}) theta={state.theta!r}",
        X=X,
        Y=Y,
        K=K,
        kind="witness",
        status="verified" if K < 0 and abs(K - closed) <= 1e-9 * max(1.0, abs(K)) else "failed",
        tolerance=1e-9,
        expected=closed,
    )


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class FamilyDescriptor:
    """An isoparametric family identified by (g, m1, m2).

    kind is "ot-fkm" or "homogeneous"; definite only matters for OT-FKM with
    m = m1 divisible by 4.
    """

    g: int
    m1: int
    m2: int
    kind: str = "ot-fkm"
    definite: bool | None = None

    def label(self) -> str:
        tag = ""
        if self.definite is not None:
            tag = "-definite" if self.definite else "-indefinite"
        return f"{self.kind} g={self.g} ({self.m1},{self.m2}){tag}"


def expected_nonnegative(family: FamilyDescriptor, side: str) -> bool:
    """Whether the focal submanifold on `side` has K >= 0 everywhere."""
    side = side.lower()
    if side not in ("plus", "minus"):
        raise InvalidArgument(f"side must be plus or minus, got {side!r}")
    g, m1, m2 = family.g, family.m1, family.m2
    if g in (1, 2, 3):
        return True
    if g == 6:
        return False
    if family.kind == "homogeneous":
        # (2,2): the Grassmannian side is M-, CP^3 is M+; (4,5) both negative
        return (m1, m2) == (2, 2) and side == "minus"
    if side == "plus":
        return (m1, m2) in ((2, 1), (6, 1)) or ((m1, m2) == (4, 3) and family.definite is True)
    return m1 == 1


@dataclass
class SignVerdict:
    family: str
    side: str
    expected: str  # "nonnegative" | "negative"
    observed_min: float
    consistent: bool
    evidence: list

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "side": self.side,
            "expected": self.expected,
            "observed_min": self.observed_min,
            "consistent": self.consistent,
            "evidence": self.evidence,
        }


def sign_verdict(family: FamilyDescriptor, side: str, evidence: Sequence[CurvatureCertificate]) -> SignVerdict:
    """Compare scan/witness evidence with the expected sign.

    Nonnegative families are consistent when every observed K >= -1e-8 (never a
    proof). Negative families are consistent once any certificate shows K < 0.
    A mismatch points at a bug in the computation.
    """
    if not evidence:
        raise InvalidArgument("sign_verdict needs at least one certificate")
    nonneg = expected_nonnegative(family, side)
    mn = min(float(c.K) for c in evidence)
    consistent = mn >= NONNEG_THRESHOLD if nonneg else mn < NONNEG_THRESHOLD
    return SignVerdict(
        family=family.label(),
        side=side.lower(),
        expected="nonnegative" if nonneg else "negative",
        observed_min=mn,
        consistent=bool(consistent),
        evidence=[f"{c.kind}:{c.source}:K={c.K:.12g}" for c in evidence],
    )
