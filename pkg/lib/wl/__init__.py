# lib/wl/__init__.py
"""
WL 精密化とダイジェストの公開 API（ファサード）。
"""

from __future__ import annotations

from .hashing import (
    DEFAULT_T,
    MolDigest,
    WLLabels,
    atom_ranks,
    atom_seed_label,
    bond_label,
    digest,
    refine_labels,
    refine_until_stable,
    wl_hash,
    wl_refine,
)

__all__ = [
    "DEFAULT_T",
    "MolDigest",
    "WLLabels",
    "digest",
    "atom_seed_label",
    "bond_label",
    "refine_labels",
    "refine_until_stable",
    "wl_refine",
    "wl_hash",
    "atom_ranks",
]
