"""Frames and shape operators at points of the focal submanifolds M+ and M-.

M+ = {x in S^{2l-1} : <P_a x, x> = 0 for all a}, codimension m+1 in the sphere.
M- = {x in S^{2l-1} : P x = x for some unit P in span(P_0..P_m)}, codimension l-m.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._linalg import extend_basis, householder_completion, orthonormalize
from .clifford import CliffordSystem, build_system, drop_generator
from .curvature import CurvatureCertificate, sectional_curvature
from .errors import (
    InvalidArgument,
    MembershipError,
    NotApplicable,
    SamplingFailure,
)

MEMBERSHIP_TOL = 1e-8
SAMPLE_TOL = 1e-10
WITNESS_TOL = 1e-9
CLUSTER_GAP = 1e-6


class Side(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @classmethod
    def parse(cls, side) -> "Side":
        if isinstance(side, Side):
            return side
        try:
            return cls(str(side).lower())
        except ValueError:
            raise InvalidArgument(f"side must be 'plus' or 'minus', got {side!r}") from None


def focal_dimension(sys_: CliffordSystem, side) -> int:
    return 2 * sys_.l - 2 - sys_.m if Side.parse(side) is Side.PLUS else sys_.l + sys_.m - 1


@dataclass
class FocalFrame:
    side: Side
    x: np.ndarray
    tangent: np.ndarray  # rows, orthonormal
    normal: np.ndarray  # rows, orthonormal, tangent to the sphere
    shape_ops: np.ndarray  # (len(normal), dim, dim), in the tangent basis
    source: str = ""
    Q: np.ndarray | None = None  # M- only: Q_0..Q_m with Q_0 x = x

    @property
    def dim(self) -> int:
        return self.tangent.shape[0]

    def coords(self, v) -> np.ndarray:
        """Tangent-basis coordinates of an ambient vector."""
        return self.tangent @ np.asarray(v, dtype=float)

    def tangency_residual(self, v) -> float:
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.tangent.T @ (self.tangent @ v)))

    def gram_deviation(self) -> float:
        B = np.vstack([self.x[None, :], self.tangent, self.normal])
        return float(np.abs(B @ B.T - np.eye(B.shape[0])).max())


# ---------------------------------------------------------------------------
# membership and sampling


def _bilinear(sys_: CliffordSystem, x: np.ndarray):
    Px = sys_.stack @ x
    return Px, Px @ x


def membership_residual(sys_: CliffordSystem, side, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (sys_.dim,):
        raise InvalidArgument(f"point must have shape ({sys_.dim},), got {x.shape}")
    _, s = _bilinear(sys_, x)
    norm_res = abs(float(x @ x) - 1.0)
    if Side.parse(side) is Side.PLUS:
        return max(norm_res, float(np.abs(s).max()))
    return max(norm_res, abs(float(np.linalg.norm(s)) - 1.0))


def _newton_plus(sys_: CliffordSystem, x: np.ndarray, max_iter: int) -> tuple[np.ndarray, float]:
    def residual(y):
        Py, s = _bilinear(sys_, y)
        return Py, np.append(s, y @ y - 1.0)

    Px, h = residual(x)
    r = float(np.abs(h).max())
    for _ in range(max_iter):
        if r <= 1e-15:
            break
        J = 2.0 * np.vstack([Px, x[None, :]])
        dx = -J.T @ np.linalg.solve(J @ J.T, h)
        t = 1.0
        while t >= 1.0 / 1024:
            y = x + t * dx
            Py, hy = residual(y)
            ry = float(np.abs(hy).max())
            if ry < r:
                x, Px, h, r = y, Py, hy, ry
                break
            t *= 0.5
        else:
            break
    return x, r


def sample_focal_point(
    sys_: CliffordSystem,
    side,
    seed: int = 0,
    max_iter: int = 100,
    retries: int = 10,
) -> np.ndarray:
    side = Side.parse(side)
    n = sys_.dim
    if side is Side.MINUS:
        rng = np.random.default_rng([seed, 1])
        c = rng.standard_normal(sys_.m + 1)
        c /= np.linalg.norm(c)
        Q0 = np.einsum("a,aij->ij", c, sys_.stack)
        v = rng.standard_normal(n)
        x = v + Q0 @ v
        return x / np.linalg.norm(x)
    for attempt in range(retries):
        rng = np.random.default_rng([seed, 0, attempt])
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)
        try:
            x, _ = _newton_plus(sys_, x, max_iter)
        except np.linalg.LinAlgError:
            continue
        if membership_residual(sys_, side, x) <= SAMPLE_TOL:
            return x
    raise SamplingFailure(f"Newton projection onto M+ of {sys_.label()} failed after {retries} attempts")


# ---------------------------------------------------------------------------
# frames


def _shape_ops_minus(Q: np.ndarray, x: np.ndarray, normal: np.ndarray, tangent: np.ndarray) -> np.ndarray:
    # A_a X = sum_i <X, Q_i x> Q_i eta_a + <X, Q_i eta_a> Q_i x
    Qx = Q[1:] @ x  # (m, n)
    Qeta = Q[1:] @ normal.T  # (m, n, p)
    Tqx = tangent @ Qx.T  # (d, m)
    Tqe = (tangent @ Qeta).transpose(2, 1, 0)  # (p, d, m)
    A = Tqe @ Tqx.T
    return A + A.transpose(0, 2, 1)


def frame_at(sys_: CliffordSystem, side, x, tol: float = MEMBERSHIP_TOL) -> FocalFrame:
    side = Side.parse(side)
    x = np.asarray(x, dtype=float)
    res = membership_residual(sys_, side, x)
    if res > tol:
        raise MembershipError(f"point is off M{'+' if side is Side.PLUS else '-'} (residual {res:.3e})")
    x = x / np.linalg.norm(x)
    n = sys_.dim
    label = f"M{'+' if side is Side.PLUS else '-'} {sys_.label()}"
    if side is Side.PLUS:
        base = orthonormalize(np.vstack([x, sys_.stack @ x]))
        if base.shape[0] != sys_.m + 2:
            raise MembershipError("x, P_a x are not independent")
        normal = base[1:]
        tangent = extend_basis(base, np.eye(n), n - sys_.m - 2)
        A = -(tangent @ sys_.stack @ tangent.T)
        return FocalFrame(side, x, tangent, normal, 0.5 * (A + A.transpose(0, 2, 1)), label)

    c = sys_.stack @ x @ x
    if abs(np.linalg.norm(c) - 1.0) > tol:
        raise MembershipError(f"|c| = {np.linalg.norm(c):.12f} deviates from 1")
    C = householder_completion(c / np.linalg.norm(c))
    Q = np.tensordot(C, sys_.stack, axes=1)
    l, m = sys_.l, sys_.m
    Qx = orthonormalize(Q[1:] @ x)
    if Qx.shape[0] != m:
        raise MembershipError("Q_i x are not independent")
    I = np.eye(n)
    normal = extend_basis(Qx, 0.5 * (I - Q[0]), l - m)
    xb = x[None, :]
    plus_part = extend_basis(xb, 0.5 * (I + Q[0]), l - 1)
    tangent = np.vstack([Qx, plus_part])
    A = _shape_ops_minus(Q, x, normal, tangent)
    return FocalFrame(side, x, tangent, normal, A, label, Q=Q)


def cluster_eigenvalues(values, gap: float = CLUSTER_GAP) -> list[tuple[float, int]]:
    """Group sorted eigenvalues whose consecutive differences are <= gap."""
    vals = np.sort(np.asarray(values, dtype=float))
    out: list[list] = []
    for v in vals:
        if out and v - out[-1][2] <= gap:
            out[-1][1] += 1
            out[-1][2] = v
            out[-1][3] += v
        else:
            out.append([v, 1, v, v])
    return [(s / c, c) for _, c, _, s in out]


def expected_shape_spectrum(sys_: CliffordSystem, side) -> list[tuple[float, int]]:
    if Side.parse(side) is Side.PLUS:
        mults = (sys_.m2, sys_.m1, sys_.m2)
    else:
        mults = (sys_.m1, sys_.m2, sys_.m1)
    return [(v, c) for v, c in zip((-1.0, 0.0, 1.0), mults) if c > 0]


def shape_spectrum_ok(frame: FocalFrame, sys_: CliffordSystem, gap: float = CLUSTER_GAP) -> bool:
    want = expected_shape_spectrum(sys_, frame.side)
    for A in frame.shape_ops:
        got = cluster_eigenvalues(np.linalg.eigvalsh(A), gap)
        if len(got) != len(want):
            return False
        for (gv, gc), (wv, wc) in zip(got, want):
            if gc != wc or abs(gv - wv) > gap:
                return False
    return True


# ---------------------------------------------------------------------------
# witnesses


def _certificate(frame: FocalFrame, X, Y, expected: float | None, source: str, tol=WITNESS_TOL, **details):
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    tan_res = max(frame.tangency_residual(X), frame.tangency_residual(Y))
    gram = np.array([[X @ X, X @ Y], [Y @ X, Y @ Y]])
    ortho = float(np.abs(gram - np.eye(2)).max())
    cx, cy = frame.coords(X), frame.coords(Y)
    K = sectional_curvature(frame.shape_ops, cx, cy)
    ok = tan_res <= 1e-10 and ortho <= 1e-10
    if expected is not None:
        ok = ok and abs(K - expected) <= tol
    return CurvatureCertificate(
        source=source,
        X=cx,
        Y=cy,
        K=K,
        kind="witness",
        status="verified" if ok else "failed",
        tolerance=tol,
        expected=expected,
        details={"tangency_residual": tan_res, "orthonormality_deviation": ortho, **details},
    )


def _plus_point_block(sys_: CliffordSystem) -> np.ndarray:
    # z = (u, v)/sqrt2 with u = e_1 and v a unit vector orthogonal to u and all E_a u
    l = sys_.l
    u = np.zeros(l)
    u[0] = 1.0
    E = sys_.skew_generators()
    span = np.vstack([u] + [e @ u for e in E])
    v = extend_basis(orthonormalize(span), np.eye(l), 1)[0]
    return np.concatenate([u, v]) / math.sqrt(2.0)


def block_pair_witness(sys_: CliffordSystem, z=None) -> CurvatureCertificate:
    """K(X, Y) = -1 for X = (c, 0), Y = (0, c) with c orthogonal to z1, z2, E_a z1, E_a z2.

    Needs l > 2m so that such a c exists.
    """
    l, m = sys_.l, sys_.m
    if l <= 2 * m:
        raise NotApplicable(f"needs l > 2m, got l={l}, m={m}")
    z = _plus_point_block(sys_) if z is None else np.asarray(z, dtype=float)
    frame = frame_at(sys_, Side.PLUS, z)
    z1, z2 = z[:l], z[l:]
    E = sys_.skew_generators()
    span = np.vstack([z1, z2] + [e @ z1 for e in E] + [e @ z2 for e in E])
    c = extend_basis(orthonormalize(span), np.eye(l), 1)[0]
    zero = np.zeros(l)
    X = np.concatenate([c, zero])
    Y = np.concatenate([zero, c])
    return _certificate(frame, X, Y, -1.0, f"plus-block-pair {sys_.label()}")


class RegistryCase(str, enum.Enum):
    INDEFINITE_43 = "indefinite_43"
    INDEFINITE_43_VIA_52 = "indefinite_43_via_52"
    FIFTY_TWO = "52"
    DEFINITE_87 = "definite_87"
    NINETY_SIX = "96"
    INDEFINITE_87 = "indefinite_87"


def _joint_eigvec(mats, signs, seed: int) -> np.ndarray:
    """A unit vector in the joint eigenspace of commuting symmetric involutions."""
    n = mats[0].shape[0]
    Pr = np.eye(n)
    for M, s in zip(mats, signs):
        Pr = Pr @ (0.5 * (np.eye(n) + s * M))
    Pr = 0.5 * (Pr + Pr.T)
    w, V = np.linalg.eigh(Pr)
    B = V[:, w > 0.5]
    if B.shape[1] == 0:
        raise NotApplicable("joint eigenspace is trivial")
    if seed == 0:
        y = B[:, -1]
    else:
        y = B @ np.random.default_rng(seed).standard_normal(B.shape[1])
    return y / np.linalg.norm(y)


def _oct(slot: int, index: int, slots: int = 4) -> np.ndarray:
    v = np.zeros(8 * slots)
    v[8 * slot + index] = 1.0
    return v


def registry_witness(case, seed: int = 0) -> CurvatureCertificate:
    """Explicit planes with K = -1 on M+ for the families not covered by the
    block-pair construction (l <= 2m)."""
    try:
        case = RegistryCase(case)
    except ValueError:
        raise InvalidArgument(f"unsupported registry case {case!r}") from None
    r2 = math.sqrt(2.0)

    if case in (RegistryCase.INDEFINITE_43, RegistryCase.INDEFINITE_43_VIA_52):
        if case is RegistryCase.INDEFINITE_43:
            s = build_system(4, 2, signs=(1, -1))
            P = list(s.stack)
            prod = P[0] @ P[1] @ P[2] @ P[3]
            # on E+(P0P1P2P3) only <P4 x, x> can be nonzero; balance it
            u = _joint_eigvec([prod, P[4]], [1, 1], seed)
            w = _joint_eigvec([prod, P[4]], [1, -1], seed)
            x = (u + w) / r2
        else:
            big = build_system(5, 1)
            B = list(big.stack)
            x = _joint_eigvec([B[0] @ B[1] @ B[2] @ B[3], B[0] @ B[1] @ B[4] @ B[5]], [1, 1], seed)
            s = drop_generator(big, 5)
            P = list(s.stack)
        X = (P[0] @ P[1] @ P[4] @ x + P[1] @ P[4] @ x) / r2
        Y = (P[0] @ P[2] @ P[4] @ x - P[2] @ P[4] @ x) / r2
        return _certificate(frame_at(s, Side.PLUS, x), X, Y, -1.0, f"{case.value} {s.label()} q={s.q}", q=s.q)

    if case is RegistryCase.FIFTY_TWO:
        s = build_system(5, 1)
        P = list(s.stack)
        x = _joint_eigvec([P[0] @ P[1] @ P[2] @ P[3], P[0] @ P[1] @ P[4] @ P[5]], [1, 1], seed)
        X = (P[0] @ P[2] @ P[4] @ x - P[2] @ P[4] @ x) / r2
        Y = (P[0] @ P[2] @ P[5] @ x + P[2] @ P[5] @ x) / r2
        return _certificate(frame_at(s, Side.PLUS, x), X, Y, -1.0, f"{case.value} {s.label()}")

    if case is RegistryCase.DEFINITE_87:
        s = build_system(8, 2, variant="octonion_87_definite")
        x = (_oct(0, 0) + _oct(3, 0)) / r2
        X = (_oct(0, 2) + _oct(1, 3) + _oct(2, 3) - _oct(3, 2)) / 2.0
        Y = (-_oct(0, 7) + _oct(1, 6) + _oct(2, 6) + _oct(3, 7)) / 2.0
        return _certificate(frame_at(s, Side.PLUS, x), X, Y, -1.0, f"{case.value} {s.label()} q={s.q}", q=s.q)

    # (9,6) and the indefinite (8,7) obtained by dropping P_1
    s = build_system(9, 1, variant="octonion_96")
    if case is RegistryCase.INDEFINITE_87:
        s = drop_generator(s, 1)
    x = (_oct(0, 0) + _oct(3, 1)) / r2
    X = _oct(0, 2)
    Y = _oct(3, 2)
    return _certificate(frame_at(s, Side.PLUS, x), X, Y, -1.0, f"{case.value} {s.label()} q={s.q}", q=s.q)


def minus_witness(sys_: CliffordSystem, seed: int = 0, x=None, threshold: float = -1e-6) -> CurvatureCertificate:
    """Search X = (Q_i x + Q_i eta_a)/sqrt2, Y = (Q_j x - Q_j eta_a)/sqrt2 over
    i != j and normal directions a; return the most negative plane."""
    if sys_.m < 2:
        raise NotApplicable("needs m >= 2 (for m = 1, M- has K >= 0)")
    if x is None:
        x = sample_focal_point(sys_, Side.MINUS, seed)
    frame = frame_at(sys_, Side.MINUS, x)
    Q = frame.Q
    r2 = math.sqrt(2.0)
    Qx = Q[1:] @ frame.x  # (m, n)
    Qeta = np.einsum("ijk,ak->iaj", Q[1:], frame.normal)  # (m, p, n)
    best = (np.inf, None)
    A = frame.shape_ops
    for i in range(sys_.m):
        Xc = frame.tangent @ ((Qx[i][None, :] + Qeta[i]) / r2).T  # (d, p)
        AX = np.einsum("bde,ea->bda", A, Xc)
        aX = np.einsum("bda,da->ba", AX, Xc)
        for j in range(sys_.m):
            if j == i:
                continue
            Yc = frame.tangent @ ((Qx[j][None, :] - Qeta[j]) / r2).T
            bY = np.einsum("bde,ea,da->ba", A, Yc, Yc, optimize=True)
            cXY = np.einsum("bda,da->ba", AX, Yc)
            K = 1.0 + np.sum(aX * bY - cXY**2, axis=0)
            a = int(np.argmin(K))
            if K[a] < best[0] - 1e-15:
                best = (float(K[a]), (i + 1, j + 1, a))
    i, j, a = best[1]
    X = (Qx[i - 1] + Qeta[i - 1, a]) / r2
    Y = (Qx[j - 1] - Qeta[j - 1, a]) / r2
    cert = _certificate(frame, X, Y, None, f"minus-Q-pair {sys_.label()}", i=i, j=j, normal=a)
    if cert.K > threshold:
        cert.status = "failed"
    return cert
