"""Modified Gram-Schmidt helpers used for frame construction."""

from __future__ import annotations

import numpy as np

RANK_TOL = 1e-8


def orthonormalize(vectors, basis: np.ndarray | None = None, tol: float = RANK_TOL) -> np.ndarray:
    """MGS with one re-orthogonalization pass; vectors whose residual falls
    below tol are rejected. Returns only the new rows."""
    dim = np.shape(vectors)[-1]
    Q = [] if basis is None else [b for b in np.atleast_2d(basis)]
    out = []
    for v in np.atleast_2d(np.asarray(vectors, dtype=float)):
        w = v.copy()
        for _ in range(2):
            for q in Q:
                w -= (q @ w) * q
        nrm = np.linalg.norm(w)
        if nrm > tol:
            w /= nrm
            Q.append(w)
            out.append(w)
    return np.array(out).reshape(-1, dim)


def extend_basis(basis: np.ndarray, candidates: np.ndarray, count: int, tol: float = RANK_TOL) -> np.ndarray:
    """Add `count` orthonormal rows drawn from span(candidates) that are
    orthogonal to `basis`, always taking the candidate with the largest residual."""
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    R = np.array(candidates, dtype=float)
    for _ in range(2):
        R -= (R @ basis.T) @ basis
    new = []
    for _ in range(count):
        norms = np.linalg.norm(R, axis=1)
        j = int(np.argmax(norms))
        if norms[j] <= tol:
            raise np.linalg.LinAlgError(f"candidate span exhausted after {len(new)} of {count} vectors")
        w = R[j] / norms[j]
        for q in (*basis, *new):
            w -= (q @ w) * q
        w /= np.linalg.norm(w)
        new.append(w)
        R -= np.outer(R @ w, w)
    return np.array(new).reshape(-1, basis.shape[1])


def householder_completion(c: np.ndarray) -> np.ndarray:
    """Orthogonal matrix whose first row is the unit vector c."""
    c = np.asarray(c, dtype=float)
    e = np.zeros_like(c)
    e[0] = 1.0
    w = c - e
    nw = np.linalg.norm(w)
    if nw < 1e-14:
        return np.eye(len(c))
    w /= nw
    return np.eye(len(c)) - 2.0 * np.outer(w, w)
