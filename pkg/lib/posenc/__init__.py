"""
lib.posenc (facade)
=================================
フラグメントグラフの位置特徴（hop / WL role / Coulomb）と Gasteiger 電荷。
"""

from .spatial import (
    DEFAULT_D0, DEFAULT_BUCKET_WIDTH, ZMode,
    FragmentGraph, HopMatrix, WLRoleIds, CoulombFeatures,
    build_fragment_graph, hop_matrix, wl_role_ids, coulomb_features, fragment_z, bucketize,
)
from .gasteiger import PartialCharges, gasteiger_charges, fragment_charges

__all__ = [
    "DEFAULT_D0", "DEFAULT_BUCKET_WIDTH", "ZMode",
    "FragmentGraph", "HopMatrix", "WLRoleIds", "CoulombFeatures",
    "build_fragment_graph", "hop_matrix", "wl_role_ids", "coulomb_features", "fragment_z", "bucketize",
    "PartialCharges", "gasteiger_charges", "fragment_charges",
]
