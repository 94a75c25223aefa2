"""Pointwise models of homogeneous focal submanifolds.

Each model is a list of symmetric shape operators in an orthonormal tangent
basis, either written down directly (g = 6) or obtained by polarizing the
components of the second fundamental form (g = 4 with multiplicities (2,2) and
(4,5)). Exact entries are kept as sympy objects; float copies are used for the
numerical curvature routines.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import sympy as sp

from .curvature import CurvatureCertificate, sectional_curvature
from .errors import InvalidArgument


class ModelCase(str, enum.Enum):
    G6M1Plus = "G6M1Plus"
    G6M1Minus = "G6M1Minus"
    G6M2Plus = "G6M2Plus"
    G6M2Minus = "G6M2Minus"
    G4_22_Plus = "G4_22_Plus"
    G4_45_Plus = "G4_45_Plus"
    G4_45_Minus = "G4_45_Minus"


@dataclass
class HomogeneousFocalModel:
    case: ModelCase
    g: int
    m1: int
    m2: int
    side: str
    coordinates: tuple[str, ...]
    exact: tuple  # sympy matrices
    forms: tuple = ()  # source quadratic forms, when the model came from polarization
    witness: tuple = ()  # (X, Y, expected K, relation) with exact sympy entries
    ricci_closed_form: str | None = None
    shape_ops: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.shape_ops = np.array([np.array(A.evalf(30), dtype=float) for A in self.exact])

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    @property
    def source(self) -> str:
        return self.case.value


# ---------------------------------------------------------------------------
# polarization


def _symbols(names) -> list[sp.Symbol]:
    return [sp.Symbol(n, real=True) for n in names]


def polarize_exact(form, coordinates) -> sp.Matrix:
    """The symmetric matrix A with <A X, X> = s(X), as exact sympy entries."""
    syms = _symbols(coordinates)
    local = {str(s): s for s in syms}
    expr = sp.sympify(form, locals=local) if isinstance(form, str) else sp.sympify(form)
    extra = expr.free_symbols - set(syms)
    if extra:
        raise InvalidArgument(f"form uses unknown coordinates {sorted(map(str, extra))}")
    expr = sp.expand(expr)
    if expr != 0:
        poly = sp.Poly(expr, *syms)
        if poly.total_degree() != 2 or not poly.is_homogeneous:
            raise InvalidArgument(f"not a quadratic form: {form}")
    return sp.hessian(expr, syms) / 2


def polarize(form, coordinates) -> np.ndarray:
    return np.array(polarize_exact(form, coordinates).evalf(30), dtype=float)


# ---------------------------------------------------------------------------
# printed data

_S3 = sp.sqrt(3)


def _block(pattern: dict, blk: sp.Matrix, nblocks: int = 5) -> sp.Matrix:
    """Assemble a block matrix from {(i, j): coefficient} with 1-based block indices."""
    s = blk.shape[0]
    M = sp.zeros(nblocks * s, nblocks * s)
    for (i, j), c in pattern.items():
        M[(i - 1) * s : i * s, (j - 1) * s : j * s] = c * blk
    return M


def _a0(blk):
    return _block({(1, 1): _S3, (2, 2): 1 / _S3, (4, 4): -1 / _S3, (5, 5): -_S3}, blk)


def _unit(n, *entries):
    v = sp.zeros(n, 1)
    for i, c in entries:
        v[i] = c
    return v


_G22_COORDS = ("x1", "x2", "y1", "y2", "z1", "z2")
_G22_FORMS = (
    "x1**2 + x2**2 - y1**2 - y2**2",
    "2*(x1*y1 + x2*y2)",
    "2*(x2*y1 - x1*y2)",
)

_G45P_COORDS = tuple(f"x{i}" for i in range(1, 6)) + tuple(f"y{i}" for i in range(1, 6)) + tuple(f"z{i}" for i in range(1, 5))
_G45P_FORMS = (
    "x1**2 + x2**2 + x3**2 + x4**2 + x5**2 - y1**2 - y2**2 - y3**2 - y4**2 - y5**2",
    "2*(x1*y1 + x2*y2 + x3*y3 + x4*y4) + sqrt(2)*(x5 + y5)*z1",
    "2*(x2*y1 - x1*y2) + 2*(x3*y4 - x4*y3) + sqrt(2)*(x5 + y5)*z2",
    "2*(x3*y1 - x1*y3) + 2*(x4*y2 - x2*y4) + sqrt(2)*(x5 + y5)*z3",
    "2*(x2*y3 - x3*y2) + 2*(x4*y1 - x1*y4) + sqrt(2)*(x5 + y5)*z4",
)

_G45M_COORDS = ("y12", "x13", "y13", "x14", "y14", "x15", "y15", "x23", "y23", "x24", "y24", "x25", "y25")
_G45M_FORMS = (
    "-2*x14*x23 + 2*x13*x24 + 2*y14*y23 - 2*y13*y24",
    "-2*x15*x23 + 2*x13*x25 + 2*y15*y23 - 2*y13*y25",
    "-2*x15*x24 + 2*x14*x25 + 2*y15*y24 - 2*y14*y25",
    # kept exactly as printed; see the decisions ledger on this component
    "-2*x14*x23 + 2*x13*y24 - 2*y14*x23 + 2*y13*x24",
    "-2*x15*y23 + 2*x13*y25 - 2*y15*x23 + 2*y13*x25",
    "-2*x15*y24 + 2*x14*y25 - 2*y15*x24 + 2*y14*x25",
)


def _coord_vec(coords, **values):
    v = sp.zeros(len(coords), 1)
    for k, c in values.items():
        v[coords.index(k)] = c
    return v


@lru_cache(maxsize=None)
def load_model(case) -> HomogeneousFocalModel:
    try:
        case = ModelCase(case)
    except ValueError:
        raise InvalidArgument(f"unknown model {case!r}; expected one of {[c.value for c in ModelCase]}") from None
    one = sp.Matrix([[1]])
    I2 = sp.eye(2)
    J2 = sp.Matrix([[0, -1], [-1, 0]])
    r2, r3 = 1 / sp.sqrt(2), 1 / sp.sqrt(3)

    if case is ModelCase.G6M1Plus:
        A1 = _block({(1, 5): _S3, (5, 1): _S3, (2, 4): -1 / _S3, (4, 2): -1 / _S3}, one)
        return HomogeneousFocalModel(
            case, 6, 1, 1, "plus", tuple(f"e{i}" for i in range(1, 6)), (_a0(one), A1),
            witness=(_unit(5, (0, 1)), _unit(5, (4, 1)), sp.Integer(-5), "eq"),
            ricci_closed_form="-2*a1**2 + 10*a2**2/3 + 4*a3**2 + 10*a4**2/3 - 2*a5**2",
        )
    if case is ModelCase.G6M1Minus:
        c = 2 / _S3
        A1 = _block({(1, 2): -1, (2, 1): -1, (2, 4): c, (4, 2): c, (4, 5): -1, (5, 4): -1}, one)
        return HomogeneousFocalModel(
            case, 6, 1, 1, "minus", tuple(f"e{i}" for i in range(1, 6)), (_a0(one), A1),
            witness=(_unit(5, (0, 1)), _unit(5, (4, 1)), sp.Integer(-2), "eq"),
            ricci_closed_form="4*a2**2/3 + 4*a3**2 + 4*a4**2/3 + 4*a1*a4/sqrt(3) + 4*a2*a5/sqrt(3)",
        )
    if case is ModelCase.G6M2Plus:
        # A1 as printed is not symmetric; the upper-triangle blocks are mirrored
        A1 = _block({(1, 5): _S3, (5, 1): _S3, (2, 4): 1 / _S3, (4, 2): 1 / _S3}, J2)
        A2 = _block({(1, 5): _S3, (5, 1): _S3, (2, 4): 1 / _S3, (4, 2): 1 / _S3}, I2)
        return HomogeneousFocalModel(
            case, 6, 2, 2, "plus", tuple(f"e{i}" for i in range(1, 11)), (_a0(I2), A1, A2),
            witness=(_unit(10, (0, 1)), _unit(10, (9, 1)), sp.Integer(-5), "eq"),
            ricci_closed_form="8*(a3**2 + a4**2 + a7**2 + a8**2) + 9*(a5**2 + a6**2)",
        )
    if case is ModelCase.G6M2Minus:
        c = 2 / _S3
        A1 = _block({(1, 2): -1, (2, 1): -1, (2, 4): c, (4, 2): c, (4, 5): -1, (5, 4): -1}, I2)
        # A2 as printed is not symmetric; this sign choice is the one that
        # reproduces the printed Ricci form 4|a|^2 + 5(a5^2 + a6^2)
        A2 = _block({(1, 2): 1, (2, 1): 1, (2, 4): c, (4, 2): c, (4, 5): 1, (5, 4): 1}, J2)
        return HomogeneousFocalModel(
            case, 6, 2, 2, "minus", tuple(f"e{i}" for i in range(1, 11)), (_a0(I2), A1, A2),
            witness=(_unit(10, (0, 1)), _unit(10, (9, 1)), sp.Integer(-2), "eq"),
            ricci_closed_form="4*(" + " + ".join(f"a{i}**2" for i in range(1, 11)) + ") + 5*(a5**2 + a6**2)",
        )
    if case is ModelCase.G4_22_Plus:
        coords = _G22_COORDS
        X = _coord_vec(coords, y1=r2, y2=r2)
        Y = _coord_vec(coords, x1=r2, x2=r2)
        return HomogeneousFocalModel(
            case, 4, 2, 2, "plus", coords, tuple(polarize_exact(f, coords) for f in _G22_FORMS),
            forms=_G22_FORMS, witness=(X, Y, sp.Integer(-1), "eq"),
        )
    if case is ModelCase.G4_45_Plus:
        coords = _G45P_COORDS
        return HomogeneousFocalModel(
            case, 4, 4, 5, "plus", coords, tuple(polarize_exact(f, coords) for f in _G45P_FORMS),
            forms=_G45P_FORMS, witness=(_coord_vec(coords, x1=1), _coord_vec(coords, y1=1), sp.Integer(-1), "eq"),
        )
    coords = _G45M_COORDS
    X = _coord_vec(coords, x14=r2, x23=r2)
    Y = _coord_vec(coords, x13=r3, x24=r3, y24=r3)
    return HomogeneousFocalModel(
        case, 4, 4, 5, "minus", coords, tuple(polarize_exact(f, coords) for f in _G45M_FORMS),
        forms=_G45M_FORMS, witness=(X, Y, sp.Rational(-1, 3), "le"),
    )


def exact_sectional_curvature(model: HomogeneousFocalModel, X: sp.Matrix, Y: sp.Matrix):
    """Gauss equation evaluated symbolically (X, Y orthonormalized first)."""
    X = X / sp.sqrt((X.T * X)[0])
    Y = Y - (X.T * Y)[0] * X
    Y = Y / sp.sqrt((Y.T * Y)[0])
    K = sp.Integer(1)
    for A in model.exact:
        K += (X.T * A * X)[0] * (Y.T * A * Y)[0] - (X.T * A * Y)[0] ** 2
    return sp.nsimplify(sp.simplify(K))


def exact_ricci_matrix(model: HomogeneousFocalModel) -> sp.Matrix:
    n = model.dim
    R = (n - 1) * sp.eye(n)
    for A in model.exact:
        R += A.trace() * A - A * A
    return sp.simplify(R)


def closed_form_matrix(model: HomogeneousFocalModel) -> sp.Matrix | None:
    if model.ricci_closed_form is None:
        return None
    names = [f"a{i}" for i in range(1, model.dim + 1)]
    return polarize_exact(model.ricci_closed_form, names)


def model_witness(case, tol: float = 1e-9) -> CurvatureCertificate:
    model = load_model(case)
    X, Y, expected, relation = model.witness
    x = np.array(X.evalf(30), dtype=float).ravel()
    y = np.array(Y.evalf(30), dtype=float).ravel()
    K = sectional_curvature(model.shape_ops, x, y)
    exact = exact_sectional_curvature(model, X, Y)
    exp_f = float(expected)
    ok = abs(K - exp_f) <= tol if relation == "eq" else K <= exp_f + tol
    return CurvatureCertificate(
        source=model.source,
        X=x,
        Y=y,
        K=K,
        kind="witness",
        status="verified" if ok else "failed",
        tolerance=tol,
        expected=exp_f,
        details={"relation": relation, "exact_K": str(exact)},
    )
