"""
tests/helpers.py
=================================
テスト用の小さなヘルパー（fixture ではない普通の関数）。
"""

from __future__ import annotations

import random
from dataclasses import replace
from typing import List, Sequence

from lib.chem import MolGraph, parse_smiles, sanitize


def mol_from(smiles: str) -> MolGraph:
    m = parse_smiles(smiles)
    sanitize(m)
    return m


def permute_mol(mol: MolGraph, perm: Sequence[int]) -> MolGraph:
    """原子 i を perm[i] に移した同型グラフ（結合の並びと向きも入れ替える）。"""
    atoms = [None] * mol.num_atoms
    for old, new in enumerate(perm):
        atoms[new] = mol.atoms[old]
    bonds = []
    for b in mol.bonds:
        refs = None
        if b.stereo_atoms is not None:
            refs = (perm[b.stereo_atoms[1]], perm[b.stereo_atoms[0]])
        bonds.append(replace(b, begin=perm[b.end], end=perm[b.begin], stereo_atoms=refs))
    bonds.reverse()
    return MolGraph.from_parts(atoms, bonds)


def random_perm(n: int, seed: int) -> List[int]:
    p = list(range(n))
    random.Random(seed).shuffle(p)
    return p


# ============================================================
# 決定的な合成コーパス
# ============================================================
# 環ユニット: 先頭原子と末尾原子が前後とつながる。{} は置換基スロット
RING_UNITS = (
    "c1cc{}ccc1",
    "c1ccc{}cc1",
    "c1cnc{}cc1",
    "c1cc{}ncc1",
    "c1nc{}cnc1",
    "c1c{}csc1",
    "c1c{}coc1",
    "c1sc{}nc1",
    "c1ccc2cc{}ccc2c1",
    "c1ccc2[nH]cc{}c2c1",
    "C1CC{}CCN1",
    "C1CCN{}CC1",
    "C1COC{}CN1",
    "C1CCC{}CC1",
    "C1CCC{}C1",
    "C1CC1",
)
RING_SUBSTITUENTS = (
    "", "", "", "C", "F", "Cl", "Br", "O", "N", "OC", "OCC", "C#N", "C(F)(F)F",
    "C(=O)O", "N(C)C", "S(C)(=O)=O", "C(C)C", "C(=O)N", "CC",
)
LINKERS = (
    "", "", "C(=O)N", "NC(=O)", "O", "S", "S(=O)(=O)", "NS(=O)(=O)", "C(=O)",
    "C(=O)O", "OC(=O)", "C=C", "C#C", "N(C)", "C(F)(F)", "C(O)",
)
HEADS = (
    "", "", "C", "CC", "CC(C)", "O=C(O)", "N#C", "FC(F)(F)", "CO", "CN(C)",
    "CC(=O)N", "OC", "CS(=O)(=O)", "CCOC(=O)", "Cl", "F", "N",
)
TAILS = (
    "", "", "C", "F", "Cl", "O", "N", "OC", "C(=O)O", "C(=O)N", "C#N", "C(F)(F)F",
    "CC(C)C", "N(C)C", "S(C)(=O)=O", "CCO", "C(=O)OC", "NC(C)=O", "CCN(C)C",
)


def _chain(rng: random.Random) -> str:
    """1-5 原子の鎖状リンカー（O / N を混ぜ、C に時々メチル分岐）。"""
    out = []
    prev = ""
    for _ in range(rng.randint(1, 5)):
        sym = rng.choice("CCCCNO")
        if sym == "O" and prev in ("O", "N"):
            sym = "C"
        out.append(sym)
        if sym == "C" and rng.random() < 0.2:
            out.append("(C)")
        prev = sym
    return "".join(out)


def drug_like_smiles(n: int, seed: int = 0) -> List[str]:
    """環ユニット・リンカー・末端基を組み合わせた重複なしの SMILES を n 個作る（seed で決定的）。

    重原子はおおむね 70 以下（大半は 20-40）。
    """
    rng = random.Random(seed)
    out: List[str] = []
    seen = set()
    while len(out) < n:
        parts = [rng.choice(HEADS)]
        for k in range(rng.randint(1, 3)):
            if k:
                parts.append(_chain(rng) if rng.random() < 0.4 else rng.choice(LINKERS))
            sub = rng.choice(RING_SUBSTITUENTS)
            parts.append(rng.choice(RING_UNITS).format(f"({sub})" if sub else ""))
        parts.append(rng.choice(TAILS))
        smi = "".join(parts)
        if smi not in seen:
            seen.add(smi)
            out.append(smi)
    return out
