"""Classification facts for isoparametric families as a lookup engine.

Nothing here is computed from geometry. The answers encode known results on
bundle triviality, product types, parallelizability and Lusternik-Schnirelmann
category, with Unknown as a first-class answer wherever the question is open.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

from .clifford import delta_of_m
from .curvature import FamilyDescriptor
from .errors import InvalidArgument, InvalidFamily


class Tri(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    @classmethod
    def of(cls, flag: bool) -> "Tri":
        return cls.YES if flag else cls.NO


UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CatInterval:
    lo: int
    hi: int

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def _cat_json(v):
    if isinstance(v, CatInterval):
        return str(v)
    return v


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_modern(n: int) -> Fraction:
    """B_n by the Akiyama-Tanigawa algorithm (B_1 = +1/2 there; unused here)."""
    a = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        a[i] = Fraction(1, i + 1)
        for j in range(i, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def bernoulli_number(j: int) -> Fraction:
    """Classical convention used in topology: B_1 = 1/6, B_2 = 1/30, B_3 = 1/42, ...

    Equals |B_{2j}| in the modern signed convention.
    """
    if not isinstance(j, int) or j < 1:
        raise InvalidArgument(f"j must be a positive integer, got {j!r}")
    return abs(_bernoulli_modern(2 * j))


def j_denominator(m: int) -> int:
    """d_m: the denominator of B_{m/4} / m in lowest terms (m divisible by 4)."""
    if not isinstance(m, int) or m < 4 or m % 4:
        raise InvalidArgument(f"m must be a positive multiple of 4, got {m!r}")
    return (bernoulli_number(m // 4) / m).denominator


# ---------------------------------------------------------------------------
# OT-FKM families

ETA_TRIVIAL = frozenset({(1, 2), (2, 1), (1, 6), (6, 1), (2, 5), (5, 2), (3, 4)})
_CONGRUENT = {(2, 1): (1, 2), (6, 1): (1, 6), (5, 2): (2, 5)}


@dataclass(frozen=True)
class ProductType:
    homotopy: Tri
    homeo: Tri
    diffeo: Tri

    @classmethod
    def uniform(cls, t: Tri) -> "ProductType":
        return cls(t, t, t)


@dataclass
class TopologyFacts:
    family: FamilyDescriptor
    k: int
    l: int
    q: int | None
    xi_trivial: Tri
    eta_trivial: Tri
    m_minus_product: ProductType
    m_plus_product: ProductType
    hypersurface_product: ProductType
    m_minus_parallelizable: Tri
    m_plus_parallelizable: Tri
    hypersurface_parallelizable: Tri
    normal_bundle_m_minus_trivial: Tri
    cat_m_plus: int | str
    cat_m_minus: int | str
    cat_hypersurface: int | str
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.label()
        for key in ("cat_m_plus", "cat_m_minus", "cat_hypersurface"):
            d[key] = _cat_json(getattr(self, key))

        def plain(v):
            if isinstance(v, enum.Enum):
                return v.value
            if isinstance(v, dict):
                return {k: plain(x) for k, x in v.items()}
            return v

        return plain(d)


def _validate(m: int, k: int, q: int | None) -> int:
    if not all(isinstance(v, int) for v in (m, k)) or m < 1 or k < 1:
        raise InvalidFamily(f"need integers m >= 1, k >= 1, got m={m!r}, k={k!r}")
    l = k * delta_of_m(m)
    if l - m - 1 < 1:
        raise InvalidFamily(f"(m={m}, k={k}) gives m2 = {l - m - 1} < 1")
    if m % 4 == 0:
        if q is None:
            raise InvalidFamily("q is required when m is divisible by 4")
        if abs(q) > k or (q - k) % 2:
            raise InvalidFamily(f"q={q} must satisfy |q| <= k and q = k (mod 2) for k={k}")
    elif q is not None:
        raise InvalidFamily("q only applies when m is divisible by 4")
    return l


def normalize_congruence(m1: int, m2: int, definite: bool | None = None) -> tuple[int, int, bool | None]:
    """Canonical representative under the congruences (2,1)~(1,2), (6,1)~(1,6),
    (5,2)~(2,5) and indefinite (4,3)~(3,4); these swap the roles of M+ and M-."""
    if (m1, m2) in _CONGRUENT:
        return (*_CONGRUENT[(m1, m2)], None)
    if (m1, m2) == (4, 3) and definite is False:
        return (3, 4, None)
    return (m1, m2, definite)


def eta_trivial(m1: int, m2: int, definite: bool | None = None) -> bool:
    return (m1, m2) in ETA_TRIVIAL or ((m1, m2) == (4, 3) and definite is False)


def classify_family(m: int, k: int, q: int | None = None) -> TopologyFacts:
    l = _validate(m, k, q)
    m1, m2 = m, l - m - 1
    definite = (abs(q) == k) if m % 4 == 0 else None
    fam = FamilyDescriptor(4, m1, m2, "ot-fkm", definite)
    prov = {}

    r = m % 8
    if r in (3, 5, 6, 7):
        xi = Tri.YES
        prov["xi_trivial"] = "xi trivial whenever m = 3, 5, 6, 7 (mod 8)"
    elif r in (1, 2):
        xi = Tri.of(k % 2 == 0)
        prov["xi_trivial"] = "m = 1, 2 (mod 8): xi trivial iff k even"
    else:
        xi = Tri.of(q == 0)
        prov["xi_trivial"] = "m = 0 (mod 4): xi trivial iff q = 0"

    if m % 4 == 0:
        d = j_denominator(m)
        m_minus = ProductType(Tri.of(q % d == 0), Tri.of(q == 0), Tri.of(q == 0))
        prov["m_minus_product"] = f"homotopy iff q = 0 (mod d_m = {d}); homeo/diffeo iff q = 0"
    else:
        m_minus = ProductType.uniform(xi)
        prov["m_minus_product"] = "product type of M- agrees with triviality of xi"

    eta = Tri.of(eta_trivial(m1, m2, definite))
    prov["eta_trivial"] = "eta trivial exactly for (1,2),(2,1),(1,6),(6,1),(2,5),(5,2),(3,4), indefinite (4,3)"
    prov["m_plus_product"] = "M+ is a product of spheres iff eta is trivial"
    prov["hypersurface_product"] = "M = M+ x S^m is a product of spheres iff eta is trivial"
    prov["normal_bundle_m_minus_trivial"] = "normal bundle of M- trivial on the eta list"
    prov["m_minus_parallelizable"] = "M- parallelizable iff s-parallelizable iff xi trivial"
    prov["m_plus_parallelizable"] = "M+ always parallelizable"
    prov["hypersurface_parallelizable"] = "M always parallelizable"

    if (m1, m2) in ((8, 7), (9, 6)):
        cat_plus, cat_m = UNKNOWN, UNKNOWN
        prov["cat_m_plus"] = "open problem for (8,7) and (9,6)"
    elif (m1, m2) == (1, 1):
        cat_plus, cat_m = 3, 4
        prov["cat_m_plus"] = "(1,1): M+ = SO(3), cat 3; M has cat 4"
    elif (m1, m2) == (4, 3) and definite:
        cat_plus, cat_m = 3, 4
        prov["cat_m_plus"] = "definite (4,3): M+ = Sp(2), cat 3; M = S^4 x Sp(2), cat 4"
    else:
        cat_plus, cat_m = 2, 3
        prov["cat_m_plus"] = "generic: cat(M+) = 2, cat(M) = 3"
    prov["cat_m_minus"] = "cat(M-) = 2 for every OT-FKM family"
    prov["cat_hypersurface"] = prov["cat_m_plus"]

    return TopologyFacts(
        family=fam,
        k=k,
        l=l,
        q=q,
        xi_trivial=xi,
        eta_trivial=eta,
        m_minus_product=m_minus,
        m_plus_product=ProductType.uniform(eta),
        hypersurface_product=ProductType.uniform(eta),
        m_minus_parallelizable=xi,
        m_plus_parallelizable=Tri.YES,
        hypersurface_parallelizable=Tri.YES,
        normal_bundle_m_minus_trivial=eta,
        cat_m_plus=cat_plus,
        cat_m_minus=2,
        cat_hypersurface=cat_m,
        provenance=prov,
    )


# ---------------------------------------------------------------------------
# homogeneous families

HOMOGENEOUS_CASES = ("g3m1", "g3m2", "g3m4", "g3m8", "g6m1", "g6m2", "g4_22", "g4_45")


@dataclass
class HomogeneousFacts:
    case: str
    family: FamilyDescriptor
    cat_hypersurface: int | str | CatInterval
    cat_m_plus: int | str | CatInterval
    cat_m_minus: int | str | CatInterval
    facts: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "family": self.family.label(),
            "cat_hypersurface": _cat_json(self.cat_hypersurface),
            "cat_m_plus": _cat_json(self.cat_m_plus),
            "cat_m_minus": _cat_json(self.cat_m_minus),
            "facts": {k: (v.value if isinstance(v, Tri) else v) for k, v in self.facts.items()},
            "provenance": dict(self.provenance),
        }


_G3_SPACES = {1: "SO(3)/(Z2 + Z2)", 2: "SU(3)/T^2", 4: "Sp(3)/Sp(1)^3", 8: "F4/Spin(8)"}


def homogeneous_facts(case: str) -> HomogeneousFacts:
    if case not in HOMOGENEOUS_CASES:
        raise InvalidArgument(f"unknown case {case!r}; expected one of {HOMOGENEOUS_CASES}")
    if case.startswith("g3"):
        mm = int(case[3:])
        return HomogeneousFacts(
            case,
            FamilyDescriptor(3, mm, mm, "homogeneous"),
            3,
            2,
            2,
            provenance={
                "cat_hypersurface": f"M = {_G3_SPACES[mm]} has cat 3",
                "cat_focal": "focal submanifolds are projective planes, cat(FP^2) = 2",
            },
        )
    if case.startswith("g6"):
        mm = int(case[3:])
        cm, cf = (4, 3) if mm == 1 else (6, 5)
        return HomogeneousFacts(
            case,
            FamilyDescriptor(6, mm, mm, "homogeneous"),
            cm,
            cf,
            cf,
            provenance={"cat": f"g=6, m={mm}: cat(M) = {cm}, cat(M+-) = {cf}"},
        )
    if case == "g4_22":
        return HomogeneousFacts(
            case,
            FamilyDescriptor(4, 2, 2, "homogeneous"),
            UNKNOWN,
            3,
            3,
            facts={
                "m_plus_diffeomorphic_to": "CP^3",
                "m_minus_diffeomorphic_to": "oriented Grassmannian G2(R^5)",
                "m_plus_sphere_bundle": "S^2-bundle over S^4",
                "m_minus_sphere_bundle_over_sphere": Tri.NO,
                "m_plus_cohomology_of_S2xS4": Tri.NO,
                "m_minus_cohomology_of_S2xS4": Tri.NO,
                "m_plus_s_parallelizable": Tri.NO,
                "m_minus_s_parallelizable": Tri.NO,
            },
            provenance={
                "cat_m_plus": "CP^3 is simply connected Kaehler, cat = complex dimension 3",
                "cat_m_minus": "oriented Grassmannian G2(R^5) has cat 3",
                "cat_hypersurface": "not determined",
            },
        )
    return HomogeneousFacts(
        case,
        FamilyDescriptor(4, 4, 5, "homogeneous"),
        UNKNOWN,
        2,
        CatInterval(2, 3),
        facts={
            "m_plus_diffeomorphic_to": "U(5)/(Sp(2) x U(1))",
            "m_minus_diffeomorphic_to": "U(5)/(SU(2) x U(3))",
            "m_plus_sphere_bundle": "S^5-bundle over S^9 only",
            "m_minus_sphere_bundle_over_sphere": Tri.NO,
            "m_plus_normal_bundle_trivial": Tri.NO,
            "m_minus_normal_bundle_stably_trivial": Tri.NO,
        },
        provenance={
            "cat_m_plus": "S^5-bundle over S^9, 4-connected, not a homotopy sphere: cat 2",
            "cat_m_minus": "not a homotopy sphere and has a Morse function with 4 critical points: 2 <= cat <= 3",
            "cat_hypersurface": "not determined",
        },
    )
