"""Numerical and exact checks for isoparametric hypersurfaces of OT-FKM type,
their focal submanifolds, and a few homogeneous families."""

__version__ = "0.1.0"

from .clifford import CliffordSystem, build_system, delta_of_m, trace_invariant, verify_clifford_relations
from .curvature import (
    CurvatureCertificate,
    FamilyDescriptor,
    HypersurfaceState,
    min_sectional_scan,
    ricci_form,
    scalar_curvature,
    sectional_curvature,
)
from .field import evaluate_F, gradient_F, laplacian_F, verify_cartan_munzner
from .focal import FocalFrame, Side, frame_at, block_pair_witness, minus_witness, registry_witness, sample_focal_point
from .homogeneous import ModelCase, load_model, model_witness, polarize
from .topology import bernoulli_number, classify_family, homogeneous_facts, j_denominator, normalize_congruence

__all__ = [
    "CliffordSystem",
    "CurvatureCertificate",
    "FamilyDescriptor",
    "FocalFrame",
    "HypersurfaceState",
    "ModelCase",
    "Side",
    "bernoulli_number",
    "build_system",
    "classify_family",
    "delta_of_m",
    "evaluate_F",
    "frame_at",
    "gradient_F",
    "homogeneous_facts",
    "j_denominator",
    "laplacian_F",
    "block_pair_witness",
    "load_model",
    "min_sectional_scan",
    "minus_witness",
    "model_witness",
    "normalize_congruence",
    "polarize",
    "registry_witness",
    "ricci_form",
    "sample_focal_point",
    "scalar_curvature",
    "sectional_curvature",
    "trace_invariant",
    "verify_clifford_relations",
    "verify_cartan_munzner",
]
