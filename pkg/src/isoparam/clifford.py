"""Symmetric Clifford systems on R^{2l} and the octonion arithmetic behind them.

Every system built here is stored with exact integer matrices (entries in
{-1, 0, 1}); all generators are signed permutation matrices, so products of
any length stay exact in int64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from typing import Sequence

import numpy as np

from .errors import InternalInconsistency, InvalidArgument, InvalidFamily, InvalidVariant

VARIANTS = ("standard", "octonion_87_definite", "octonion_96")

_DELTA_BASE = (1, 2, 4, 4, 8, 8, 8, 8)


def delta_of_m(m: int) -> int:
    """Dimension of the irreducible module of the Clifford algebra C_{m-1}."""
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidArgument(f"delta_of_m needs an integer m >= 1, got {m!r}")
    periods, r = divmod(m - 1, 8)
    return _DELTA_BASE[r] * 16**periods


# --------------------------------------------------------------------------
# quaternions / octonions


def quat_mul(a: Sequence, b: Sequence) -> tuple:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def quat_conj(a: Sequence) -> tuple:
    return (a[0], -a[1], -a[2], -a[3])


@dataclass(frozen=True)
class Octonion:
    """An octonion over the basis (1, e1, ..., e7).

    The basis is identified with pairs of quaternions as
    1=(1,0), e1=(i,0), e2=(j,0), e3=(k,0), e4=(0,1), e5=(0,i), e6=(0,j), e7=(0,k),
    and the product is the Cayley-Dickson rule
    (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).
    """

    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != 8:
            raise InvalidArgument("an octonion has exactly 8 coefficients")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @classmethod
    def basis(cls, i: int) -> "Octonion":
        c = [0] * 8
        c[i] = 1
        return cls(tuple(c))

    @classmethod
    def from_array(cls, a) -> "Octonion":
        return cls(tuple(float(x) for x in a))

    def as_array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=float)

    def _halves(self):
        return self.coefficients[:4], self.coefficients[4:]

    def __mul__(self, other: "Octonion") -> "Octonion":
        a, b = self._halves()
        c, d = other._halves()
        left = [x - y for x, y in zip(quat_mul(a, c), quat_mul(quat_conj(d), b))]
        right = [x + y for x, y in zip(quat_mul(d, a), quat_mul(b, quat_conj(c)))]
        return Octonion(tuple(left + right))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(tuple(x + y for x, y in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(tuple(x - y for x, y in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "Octonion":
        return Octonion(tuple(-x for x in self.coefficients))

    def conj(self) -> "Octonion":
        c = self.coefficients
        return Octonion((c[0],) + tuple(-x for x in c[1:]))

    def norm(self) -> float:
        return math.sqrt(sum(float(x) ** 2 for x in self.coefficients))


def octonion_multiply(a: Octonion, b: Octonion) -> Octonion:
    return a * b


@lru_cache(maxsize=None)
def _octonion_left_mult(i: int) -> np.ndarray:
    """Matrix of z -> e_i z on R^8 (columns are images of the basis)."""
    e = Octonion.basis(i)
    cols = [(e * Octonion.basis(j)).coefficients for j in range(8)]
    mat = np.array(cols, dtype=np.int64).T
    mat.flags.writeable = False
    return mat


def octonion_left_mult(i: int) -> np.ndarray:
    return _octonion_left_mult(i)


# --------------------------------------------------------------------------
# skew generators E_1..E_{m-1} of one irreducible module


def _exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float64 BLAS is exact for integer entries well below 2**53
    out = np.asarray(a, dtype=float) @ np.asarray(b, dtype=float)
    if np.abs(out).max(initial=0.0) >= 2.0**50:
        return np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)
    return out.astype(np.int64)


def _product(mats: Sequence[np.ndarray], size: int) -> np.ndarray:
    return reduce(_exact_matmul, mats, np.eye(size, dtype=np.int64))


def _block_system(E: Sequence[np.ndarray], l: int) -> list[np.ndarray]:
    I = np.eye(l, dtype=np.int64)
    Z = np.zeros((l, l), dtype=np.int64)
    P = [np.block([[I, Z], [Z, -I]]), np.block([[Z, I], [I, Z]])]
    P += [np.block([[Z, e], [-e, Z]]) for e in E]
    return P


def _raw_irreducible(m: int) -> list[np.ndarray]:
    if m == 1:
        return []
    if m <= 4:
        # complex / quaternion left multiplications (first 2 or 4 octonion coordinates)
        d = delta_of_m(m)
        return [np.array(_octonion_left_mult(a)[:d, :d]) for a in range(1, m)]
    if m <= 8:
        return [np.array(_octonion_left_mult(a)) for a in range(1, m)]
    if m == 9:
        # E_a(u1, u2) = (e_a u1, -e_a u2), E_8(u1, u2) = (u2, -u1)
        Z = np.zeros((8, 8), dtype=np.int64)
        gens = [np.block([[_octonion_left_mult(a), Z], [Z, -_octonion_left_mult(a)]]) for a in range(1, 8)]
        I = np.eye(8, dtype=np.int64)
        gens.append(np.block([[Z, I], [-I, Z]]))
        return gens
    # Bott periodicity: (m-9) generators F_j (x) omega and 8 generators Id (x) G_i
    G = irreducible_generators(9)
    omega = _product(G, 16)
    F = irreducible_generators(m - 8)
    d = delta_of_m(m - 8)
    return [np.kron(np.eye(d, dtype=np.int64), g) for g in G] + [np.kron(f, omega) for f in F]


@lru_cache(maxsize=None)
def _irreducible(m: int) -> tuple[np.ndarray, ...]:
    gens = _raw_irreducible(m)
    if m % 4 == 0:
        # orient so that a single positive summand has Tr(P_0...P_m) = +2 delta(m)
        d = delta_of_m(m)
        if np.trace(_product(_block_system(gens, d), 2 * d)) < 0:
            gens = [-g for g in gens]
    for g in gens:
        g.flags.writeable = False
    return tuple(gens)


def irreducible_generators(m: int) -> tuple[np.ndarray, ...]:
    """m-1 anticommuting orthogonal skew integer matrices on R^{delta(m)}."""
    delta_of_m(m)
    return _irreducible(m)


# --------------------------------------------------------------------------
# Clifford systems


@dataclass(frozen=True, eq=False)
class CliffordSystem:
    m: int
    k: int
    l: int
    P: tuple
    signs: tuple
    q: int
    variant: str = "standard"
    block_form: bool = field(default=True)

    @property
    def m1(self) -> int:
        return self.m

    @property
    def m2(self) -> int:
        return self.l - self.m - 1

    @property
    def dim(self) -> int:
        return 2 * self.l

    @property
    def definite(self) -> bool:
        return self.m % 4 == 0 and abs(self.q) == self.k

    @cached_property
    def stack(self) -> np.ndarray:
        """Float view of the generators, shape (m+1, 2l, 2l)."""
        return np.array([np.asarray(p, dtype=float) for p in self.P])

    def skew_generators(self) -> list[np.ndarray]:
        """The E_alpha of the block form P_{1+alpha}(u, v) = (E v, -E u)."""
        if not self.block_form:
            raise InvalidVariant(f"system {self.variant!r} is not in block form")
        l = self.l
        return [np.asarray(p)[:l, l:] for p in self.P[2:]]

    def label(self) -> str:
        tag = ""
        if self.m % 4 == 0:
            tag = "-definite" if self.definite else "-indefinite"
        return f"({self.m1},{self.m2}){tag}"


def _canonical_signs(k: int, q: int) -> tuple[int, ...]:
    plus = (k + q) // 2
    return (1,) * plus + (-1,) * (k - plus)


def build_system(
    m: int,
    k: int = 1,
    signs: Sequence[int] | None = None,
    variant: str = "standard",
) -> CliffordSystem:
    """Build the block-form Clifford system P_0, ..., P_m on R^{2l}, l = k delta(m)."""
    if variant not in VARIANTS:
        raise InvalidVariant(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if m < 1 or k < 1:
        raise InvalidArgument(f"need m >= 1 and k >= 1, got m={m}, k={k}")
    l = k * delta_of_m(m)
    if l - m - 1 < 1:
        raise InvalidFamily(f"(m={m}, k={k}) gives m2 = {l - m - 1} < 1")
    signs = tuple(int(s) for s in (signs if signs is not None else (1,) * k))
    if len(signs) != k or any(s not in (1, -1) for s in signs):
        raise InvalidArgument(f"signs must be {k} entries of +-1, got {signs}")
    if m % 4 != 0 and len(set(signs)) > 1:
        raise InvalidVariant("mixed sign patterns only exist for m = 0 (mod 4)")

    if variant == "octonion_87_definite":
        if (m, k) != (8, 2):
            raise InvalidVariant("octonion_87_definite is the (m, k) = (8, 2) system")
        # E_a u = (e_a u1, e_a u2), literally; its product P_0...P_8 is -Id
        Z = np.zeros((8, 8), dtype=np.int64)
        E = [np.block([[_octonion_left_mult(a), Z], [Z, _octonion_left_mult(a)]]) for a in range(1, 8)]
    elif variant == "octonion_96":
        if (m, k) != (9, 1):
            raise InvalidVariant("octonion_96 is the (m, k) = (9, 1) system")
        E = [np.array(g) for g in irreducible_generators(9)]
    else:
        gens = irreducible_generators(m)
        E = []
        for a in range(m - 1):
            blocks = [s * gens[a] for s in signs]
            E.append(_block_diag(blocks))
    P = _block_system(E, l)
    for p in P:
        p.flags.writeable = False
    provisional = CliffordSystem(m=m, k=k, l=l, P=tuple(P), signs=signs, q=0, variant=variant)
    q = trace_invariant(provisional)
    if variant == "octonion_87_definite":
        signs = _canonical_signs(k, q)
    elif m % 4 == 0 and q != sum(signs):
        raise InternalInconsistency(f"trace invariant {q} disagrees with signs {signs}")
    return CliffordSystem(m=m, k=k, l=l, P=tuple(P), signs=signs, q=q, variant=variant)


def _block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    i = 0
    for b in blocks:
        d = b.shape[0]
        out[i : i + d, i : i + d] = b
        i += d
    return out


def system_from_matrices(P: Sequence[np.ndarray], variant: str = "custom") -> CliffordSystem:
    """Wrap arbitrary square matrices as a (possibly invalid) system.

    Used for fault injection and for loading dumps; q is taken from the
    trace when it is integral and 0 otherwise.
    """
    P = tuple(np.asarray(p) for p in P)
    m = len(P) - 1
    n = P[0].shape[0]
    if n % 2:
        raise InvalidArgument("Clifford system matrices must have even size")
    l = n // 2
    d = delta_of_m(m) if m >= 1 else 1
    k = max(l // d, 1)
    sys_ = CliffordSystem(m=m, k=k, l=l, P=P, signs=(1,) * k, q=0, variant=variant, block_form=False)
    try:
        q = trace_invariant(sys_)
    except InternalInconsistency:
        q = 0
    signs = _canonical_signs(k, q) if abs(q) <= k and (k - q) % 2 == 0 else (1,) * k
    return CliffordSystem(m=m, k=k, l=l, P=P, signs=signs, q=q, variant=variant, block_form=False)


@dataclass
class RelationReport:
    passed: bool
    max_deviation: float
    worst_pair: tuple[int, int] | None
    exact: bool


def verify_clifford_relations(sys_: CliffordSystem, tol: float = 1e-12) -> RelationReport:
    """Check symmetry and P_a P_b + P_b P_a = 2 delta_ab Id for every pair."""
    exact = all(np.issubdtype(np.asarray(p).dtype, np.integer) for p in sys_.P)
    P = [np.asarray(p) if exact else np.asarray(p, dtype=float) for p in sys_.P]
    n = P[0].shape[0]
    I = np.eye(n, dtype=P[0].dtype)
    worst, worst_pair = 0.0, None
    for a in range(len(P)):
        dev = float(np.abs(P[a] - P[a].T).max())
        if dev > worst:
            worst, worst_pair = dev, (a, a)
        for b in range(a, len(P)):
            if exact:
                anti = _exact_matmul(P[a], P[b]) + _exact_matmul(P[b], P[a])
            else:
                anti = P[a] @ P[b] + P[b] @ P[a]
            if a == b:
                anti = anti - 2 * I
            dev = float(np.abs(anti).max())
            if dev > worst:
                worst, worst_pair = dev, (a, b)
    passed = worst == 0 if exact else worst <= tol
    return RelationReport(passed=passed, max_deviation=worst, worst_pair=None if passed else worst_pair, exact=exact)


def trace_invariant(sys_: CliffordSystem) -> int:
    """q with 2 q delta(m) = Tr(P_0 P_1 ... P_m)."""
    P = [np.asarray(p) for p in sys_.P]
    n = P[0].shape[0]
    denom = 2 * delta_of_m(sys_.m)
    if all(np.issubdtype(p.dtype, np.integer) for p in P):
        tr = int(np.trace(_product(P, n)))
        q, r = divmod(tr, denom)
        if r:
            raise InternalInconsistency(f"Tr(P_0...P_m) = {tr} is not a multiple of {denom}")
        return q
    tr = float(np.trace(reduce(np.matmul, (p.astype(float) for p in P))))
    q = round(tr / denom)
    if abs(tr - q * denom) > 1e-8 * max(1.0, abs(tr)):
        raise InternalInconsistency(f"Tr(P_0...P_m) = {tr} is not a multiple of {denom}")
    return int(q)


def drop_generator(sys_: CliffordSystem, index: int) -> CliffordSystem:
    """Remove P_index; the remaining matrices are again a symmetric Clifford system."""
    if not 0 <= index <= sys_.m:
        raise InvalidArgument(f"index {index} out of range 0..{sys_.m}")
    m = sys_.m - 1
    if m < 1:
        raise InvalidFamily("cannot drop the last generator pair")
    l = sys_.l
    d = delta_of_m(m)
    if l % d:
        raise InternalInconsistency(f"l={l} is not a multiple of delta({m})={d}")
    k = l // d
    if l - m - 1 < 1:
        raise InvalidFamily(f"dropping leaves m2 = {l - m - 1} < 1")
    P = tuple(p for i, p in enumerate(sys_.P) if i != index)
    tmp = CliffordSystem(m=m, k=k, l=l, P=P, signs=(1,) * k, q=0, variant="tmp", block_form=False)
    q = trace_invariant(tmp)
    return CliffordSystem(
        m=m,
        k=k,
        l=l,
        P=P,
        signs=_canonical_signs(k, q),
        q=q,
        variant=f"{sys_.variant}-drop{index}",
        block_form=False,
    )


# --------------------------------------------------------------------------
# plain-text dump: header "m l k q", then m+1 blocks of 2l rows


def dump_system(sys_: CliffordSystem) -> str:
    lines = [f"{sys_.m} {sys_.l} {sys_.k} {sys_.q}"]
    for p in sys_.P:
        for row in np.asarray(p, dtype=np.int64):
            lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def load_system(text: str) -> CliffordSystem:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    m, l, k, q = (int(v) for v in rows[0])
    n = 2 * l
    body = np.array([[int(v) for v in r] for r in rows[1:]], dtype=np.int64)
    if body.shape != ((m + 1) * n, n):
        raise InvalidArgument(f"expected {(m + 1) * n} rows of {n} integers, got shape {body.shape}")
    P = tuple(body[i * n : (i + 1) * n] for i in range(m + 1))
    sys_ = system_from_matrices(P, variant="loaded")
    if sys_.q != q or sys_.k != k:
        raise InternalInconsistency(f"header says k={k}, q={q}; matrices give k={sys_.k}, q={sys_.q}")
    return sys_


def constructible_families(max_m: int = 9, max_k: int = 4):
    """Yield (m, k) with m2 = k delta(m) - m - 1 >= 1."""
    for m in range(1, max_m + 1):
        for k in range(1, max_k + 1):
            if k * delta_of_m(m) - m - 1 >= 1:
                yield m, k
