"""The quartic F(x) = |x|^4 - 2 sum_a <P_a x, x>^2 and its Cartan-Muenzner identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import CliffordSystem
from .errors import DimensionMismatch, InvalidArgument


@dataclass
class FieldBundle:
    F: float
    gradF: np.ndarray
    lapF: float
    f: float  # F(x/|x|)


@dataclass
class FieldReport:
    name: str
    passed: bool
    n_samples: int
    tol: float
    residuals: dict

    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def _check(sys_: CliffordSystem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != sys_.dim:
        raise DimensionMismatch(f"point has dimension {x.shape[-1]}, system acts on R^{sys_.dim}")
    return x


def _bilinears(sys_: CliffordSystem, x: np.ndarray):
    # Px[..., a, :] = P_a x ; s[..., a] = <P_a x, x>
    Px = np.einsum("aij,...j->...ai", sys_.stack, x)
    s = np.einsum("...ai,...i->...a", Px, x)
    return Px, s


def evaluate_F(sys_: CliffordSystem, x) -> float | np.ndarray:
    x = _check(sys_, x)
    _, s = _bilinears(sys_, x)
    r2 = np.einsum("...i,...i->...", x, x)
    return r2**2 - 2.0 * np.sum(s**2, axis=-1)


def gradient_F(sys_: CliffordSystem, x) -> np.ndarray:
    x = _check(sys_, x)
    Px, s = _bilinears(sys_, x)
    r2 = np.einsum("...i,...i->...", x, x)
    return 4.0 * r2[..., None] * x - 8.0 * np.einsum("...a,...ai->...i", s, Px)


def laplacian_F(sys_: CliffordSystem, x) -> float | np.ndarray:
    """Laplacian computed from the matrices (valid for any symmetric P_a).

    Uses Delta |x|^4 = 4(n+2)|x|^2 and
    Delta <Px,x>^2 = 8|Px|^2 + 4 tr(P) <Px,x>.
    """
    x = _check(sys_, x)
    Px, s = _bilinears(sys_, x)
    n = sys_.dim
    r2 = np.einsum("...i,...i->...", x, x)
    tr = np.trace(sys_.stack, axis1=1, axis2=2)
    norms = np.einsum("...ai,...ai->...a", Px, Px)
    return 4.0 * (n + 2) * r2 - 2.0 * np.sum(8.0 * norms + 4.0 * tr * s, axis=-1)


def laplacian_closed_form(sys_: CliffordSystem, x) -> float | np.ndarray:
    """8 (l - 2m - 1) |x|^2, i.e. ((m2 - m1)/2) g^2 |x|^{g-2} with g = 4."""
    x = _check(sys_, x)
    return 8.0 * (sys_.m2 - sys_.m1) * np.einsum("...i,...i->...", x, x)


def field_bundle(sys_: CliffordSystem, x) -> FieldBundle:
    x = _check(sys_, x)
    if x.ndim != 1:
        raise InvalidArgument("field_bundle takes a single point")
    nrm = np.linalg.norm(x)
    f = float(evaluate_F(sys_, x / nrm)) if nrm > 0 else 0.0
    return FieldBundle(F=float(evaluate_F(sys_, x)), gradF=gradient_F(sys_, x), lapF=float(laplacian_F(sys_, x)), f=f)


def sample_points(dim: int, n: int, seed: int, radius: float | tuple | None = None) -> np.ndarray:
    """Standard Gaussian samples, optionally rescaled.

    radius=None keeps the raw samples, a float puts them on that sphere, and a
    (lo, hi) pair draws each radius uniformly from [lo, hi].
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, dim))
    if radius is None:
        return x
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    if isinstance(radius, tuple):
        r = rng.uniform(radius[0], radius[1], size=n)
        return x * r[:, None]
    return x * float(radius)


def verify_cartan_munzner(
    sys_: CliffordSystem,
    n_samples: int = 100,
    seed: int = 0,
    tol: float = 1e-8,
    radius: float | tuple | None = (0.5, 2.0),
) -> FieldReport:
    """Max residuals of |grad F|^2 = 16|x|^6 and Lap F = 8(m2-m1)|x|^2 over samples."""
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    x = sample_points(sys_.dim, n_samples, seed, radius)
    r2 = np.einsum("ni,ni->n", x, x)
    g = gradient_F(sys_, x)
    grad_res = np.abs(np.einsum("ni,ni->n", g, g) - 16.0 * r2**3)
    lap_res = np.abs(laplacian_F(sys_, x) - 8.0 * (sys_.m2 - sys_.m1) * r2)
    res = {"grad_norm": float(grad_res.max(initial=0.0)), "laplacian": float(lap_res.max(initial=0.0))}
    return FieldReport(
        name="cartan_munzner",
        passed=bool(res["grad_norm"] <= tol and res["laplacian"] <= tol),
        n_samples=n_samples,
        tol=tol,
        residuals=res,
    )


def spherical_gradient_check(
    sys_: CliffordSystem,
    n_samples: int = 100,
    seed: int = 0,
    tol: float = 1e-8,
    points: np.ndarray | None = None,
) -> FieldReport:
    """On the unit sphere the tangential gradient satisfies |grad F - 4 f x|^2 = 16 (1 - f^2)."""
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    if points is None:
        x = sample_points(sys_.dim, n_samples, seed, radius=1.0)
    else:
        x = np.atleast_2d(_check(sys_, points))
        x = x / np.linalg.norm(x, axis=1, keepdims=True)
    f = evaluate_F(sys_, x)
    tangential = gradient_F(sys_, x) - 4.0 * f[:, None] * x
    lhs = np.einsum("ni,ni->n", tangential, tangential)
    res = float(np.abs(lhs - 16.0 * (1.0 - f**2)).max(initial=0.0))
    return FieldReport(
        name="spherical_gradient",
        passed=res <= tol,
        n_samples=len(x),
        tol=tol,
        residuals={"identity": res, "max_tangential_sq": float(lhs.max(initial=0.0))},
    )
