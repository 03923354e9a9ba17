"""Exact construction and verification of the dihedral permutation
polytopes DP_n and the companion polytopes Q_n."""

from .config import CapacityError, Caps, caps_from_env
from .dihedral import DihedralGroup, Perm, Subgroup, all_subgroups, build_V, build_W
from .ehrhart import EhrhartData, ehrhart_counts, ehrhart_data, hstar_from_counts, normalized_volume
from .exact import LinearSystem, LPResult, lp_feasible
from .faces import SubgroupFaceVerdict, subgroup_face_test, verify_conjecture58
from .models import DPnModel, QnModel, make_model
from .polytope import HPolytope, VPolytope, facets, h_vertex_enumeration, is_face, lattice_points
from .report import Claim, Report

__all__ = [
    "CapacityError",
    "Caps",
    "Claim",
    "DPnModel",
    "DihedralGroup",
    "EhrhartData",
    "HPolytope",
    "LPResult",
    "LinearSystem",
    "Perm",
    "QnModel",
    "Report",
    "Subgroup",
    "SubgroupFaceVerdict",
    "VPolytope",
    "all_subgroups",
    "build_V",
    "build_W",
    "caps_from_env",
    "ehrhart_counts",
    "ehrhart_data",
    "facets",
    "h_vertex_enumeration",
    "hstar_from_counts",
    "is_face",
    "lattice_points",
    "lp_feasible",
    "make_model",
    "normalized_volume",
    "subgroup_face_test",
    "verify_conjecture58",
]
