"""
lib/sequence/descriptors.py
=================================
CLS 用の分子記述子（固定順 10 個）。

 0 heavy_atoms      重原子数（H・ダミー以外）
 1 mol_weight       分子量（標準原子量、水素込み）
 2 ring_count       結合数 − 原子数 + 連結成分数
 3 aromatic_atoms   芳香族原子数
 4 hbd              水素を 1 つ以上持つ N/O の数
 5 hba              N/O の数
 6 rotatable_bonds  環外の単結合で、両端が重原子 2 本以上・三重結合に関与しないもの
 7 net_charge       形式電荷の和
 8 fsp3             sp3 炭素 / 炭素数（炭素が無ければ 0）
 9 halogens         ハロゲン数
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import networkx as nx

from lib.chem.elements import HALOGENS, atomic_weight
from lib.chem.graph import BondOrder, Hybridization, MolGraph

__all__ = ["DESCRIPTOR_NAMES", "DescriptorVector", "descriptors"]

DESCRIPTOR_NAMES: Tuple[str, ...] = (
    "heavy_atoms",
    "mol_weight",
    "ring_count",
    "aromatic_atoms",
    "hbd",
    "hba",
    "rotatable_bonds",
    "net_charge",
    "fsp3",
    "halogens",
)

_H_WEIGHT = atomic_weight(1)


@dataclass(frozen=True)
class DescriptorVector:
    d: Tuple[float, ...]

    def as_dict(self) -> dict:
        return dict(zip(DESCRIPTOR_NAMES, self.d))


def descriptors(mol: MolGraph) -> DescriptorVector:
    atoms = mol.atoms
    heavy = sum(1 for a in atoms if a.atomic_number > 1)
    mw = sum(atomic_weight(a.atomic_number) + a.total_h * _H_WEIGHT for a in atoms)
    components = nx.number_connected_components(mol.to_networkx()) if mol.num_atoms else 0
    rings = mol.num_bonds - mol.num_atoms + components
    aromatic = sum(1 for a in atoms if a.aromatic)
    no = [a for a in atoms if a.atomic_number in (7, 8)]
    hbd = sum(1 for a in no if a.total_h >= 1)
    hba = len(no)

    heavy_deg = [
        sum(1 for _, j in mol.neighbors(i) if atoms[j].atomic_number > 1)
        for i in range(mol.num_atoms)
    ]
    in_triple = [
        any(mol.bonds[bi].order is BondOrder.TRIPLE for bi in mol.adjacency[i])
        for i in range(mol.num_atoms)
    ]
    rot = sum(
        1
        for b in mol.bonds
        if b.order is BondOrder.SINGLE
        and not b.in_ring
        and heavy_deg[b.begin] >= 2
        and heavy_deg[b.end] >= 2
        and not in_triple[b.begin]
        and not in_triple[b.end]
    )
    charge = sum(a.formal_charge for a in atoms)
    carbons = [a for a in atoms if a.atomic_number == 6]
    fsp3 = (
        sum(1 for a in carbons if a.hybridization is Hybridization.SP3) / len(carbons) if carbons else 0.0
    )
    halogens = sum(1 for a in atoms if a.atomic_number in HALOGENS)
    return DescriptorVector(
        (float(heavy), float(mw), float(rings), float(aromatic), float(hbd), float(hba),
         float(rot), float(charge), float(fsp3), float(halogens))
    )
