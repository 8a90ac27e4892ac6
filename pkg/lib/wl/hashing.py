"""
lib/wl/hashing.py
=================================
Weisfeiler-Lehman（WL）ラベル精密化と 128bit ダイジェスト。

ダイジェストの作り方（固定仕様）
------------------------------
- ハッシュ関数: BLAKE2b（digest_size=16、鍵・salt なし）
- 整数はすべて符号付き 64bit little-endian で直列化
- 多重集合はバイト列として昇順ソートしてから連結
- 種類ごとに 1 バイトのタグ（A: 原子 / B: 結合 / N: 近傍 / M: 分子）を先頭に付ける

反復 t の原子ラベル:
    l_t(i) = H( "N" | l_{t-1}(i) | sorted[ bond_label(b_ij) | l_{t-1}(j) ] )

公開関数一覧
------------
- digest(payload: bytes) -> bytes
- atom_seed_label(atom) -> bytes
- bond_label(bond, stereo=True) -> bytes
- refine_labels(seeds, neighbors, iterations) -> list[bytes]
- refine_until_stable(seeds, neighbors, max_iterations) -> (labels, iterations)
- wl_refine(mol, T=3, stereo=True) -> WLLabels
- wl_hash(mol, T=3) -> MolDigest
- atom_ranks(mol) -> list[int]
"""

from __future__ import annotations

import hashlib
import re
import struct
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from lib.chem.graph import Atom, Bond, BondStereo, MolGraph

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

DEFAULT_T = 3
DIGEST_SIZE = 16
_HEX_RE = re.compile(r"^[0-9a-f]{32}$")

Neighbors = Sequence[Sequence[Tuple[bytes, int]]]


@dataclass(frozen=True, order=True)
class MolDigest:
    """32 桁小文字 16 進のダイジェスト。"""

    hex: str

    def __post_init__(self) -> None:
        if not _HEX_RE.match(self.hex):
            raise ValueError(f"not a 128-bit lowercase hex digest: {self.hex!r}")

    def __str__(self) -> str:
        return self.hex


@dataclass(frozen=True)
class WLLabels:
    per_node: Tuple[bytes, ...]
    iteration: int

    def hex(self) -> List[str]:
        return [b.hex() for b in self.per_node]


# ============================================================
# 基本ラベル
# ============================================================
def digest(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=DIGEST_SIZE).digest()


def _ints(*values: int) -> bytes:
    return struct.pack(f"<{len(values)}q", *values)


def atom_seed_label(atom: Atom) -> bytes:
    """反復 0 のラベル: (Z, 混成, ラジカル, 総水素数, 形式電荷, 芳香族, ダミー)。"""
    return digest(
        b"A"
        + _ints(
            atom.atomic_number,
            int(atom.hybridization),
            atom.radical_electrons,
            atom.total_h,
            atom.formal_charge,
            int(atom.aromatic),
            int(atom.is_dummy),
        )
    )


def bond_label(bond: Bond, stereo: bool = True) -> bytes:
    """結合ラベル: (次数, 共役, 立体, 環内, 最小環サイズ)。"""
    st = int(bond.stereo) if stereo else int(BondStereo.NONE)
    return digest(
        b"B" + _ints(int(bond.order), int(bond.conjugated), st, int(bond.in_ring), bond.ring_size)
    )


# ============================================================
# 汎用の精密化（分子グラフ・フラグメントグラフ共通）
# ============================================================
def _step(labels: Sequence[bytes], neighbors: Neighbors) -> List[bytes]:
    out: List[bytes] = []
    for i, own in enumerate(labels):
        multiset = sorted(el + labels[j] for el, j in neighbors[i])
        out.append(digest(b"N" + own + b"".join(multiset)))
    return out


def refine_labels(seeds: Sequence[bytes], neighbors: Neighbors, iterations: int) -> List[bytes]:
    """seeds から iterations 回だけ精密化したラベル。

    Parameters
    ----------
    seeds : list[bytes]
        反復 0 のラベル
    neighbors : list[list[(edge_label, j)]]
        ノードごとの (辺ラベル, 隣接ノード)
    """
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0 (got {iterations})")
    labels = list(seeds)
    for _ in range(iterations):
        labels = _step(labels, neighbors)
    return labels


def refine_until_stable(
    seeds: Sequence[bytes], neighbors: Neighbors, max_iterations: int
) -> Tuple[List[bytes], int]:
    """分割（同値類の数）が変わらなくなるか max_iterations まで精密化する。

    Returns
    -------
    (labels, iterations)
        収束時は「分割が増えなかった反復」の直前のラベルを返す。
    """
    labels = list(seeds)
    classes = len(set(labels))
    done = 0
    while done < max_iterations:
        nxt = _step(labels, neighbors)
        n_classes = len(set(nxt))
        done += 1
        if n_classes == classes:
            # 分割は細分化しかしないので、同数なら同じ分割
            return nxt, done
        labels, classes = nxt, n_classes
    return labels, done


# ============================================================
# 分子グラフ
# ============================================================
def _mol_neighbors(mol: MolGraph, stereo: bool) -> List[List[Tuple[bytes, int]]]:
    blabels = [bond_label(b, stereo) for b in mol.bonds]
    return [[(blabels[bi], j) for bi, j in mol.neighbors(i)] for i in range(mol.num_atoms)]


def wl_refine(mol: MolGraph, T: int = DEFAULT_T, stereo: bool = True) -> WLLabels:
    """T 回の WL 精密化（T=0 は種ラベル）。"""
    if T < 0:
        raise ValueError(f"T must be >= 0 (got {T})")
    seeds = [atom_seed_label(a) for a in mol.atoms]
    labels = refine_labels(seeds, _mol_neighbors(mol, stereo), T)
    return WLLabels(per_node=tuple(labels), iteration=T)


def wl_hash(mol: MolGraph, T: int = DEFAULT_T) -> MolDigest:
    """分子（フラグメント）のダイジェスト = 最終ラベル多重集合のハッシュ。"""
    labels = wl_refine(mol, T).per_node
    return MolDigest(digest(b"M" + _ints(T) + b"".join(sorted(labels))).hex())


def atom_ranks(mol: MolGraph) -> List[int]:
    """立体を無視して収束まで精密化したラベルの密な順位（0 始まり）。

    SMILES 出力順と二重結合立体の参照原子選択に使う。
    """
    if mol.num_atoms == 0:
        return []
    seeds = [atom_seed_label(a) for a in mol.atoms]
    labels, _ = refine_until_stable(seeds, _mol_neighbors(mol, stereo=False), mol.num_atoms)
    order = {lab: r for r, lab in enumerate(sorted(set(labels)))}
    return [order[lab] for lab in labels]
