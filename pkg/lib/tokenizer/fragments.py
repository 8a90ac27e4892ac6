"""
lib/tokenizer/fragments.py
=================================
分割（Partition）からフラグメント（ダミー原子付き部分グラフ）を作る。

- フラグメント間の結合は「両側」でダミー原子に置き換える（次数は元の結合のまま）
- フラグメントの原子番号付けは write_smiles の出力順に揃える
  （辞書に保存した SMILES を parse し直したグラフと同じ番号付けになる）
- links は対になったダミー原子の組で、溶接すれば元の分子に戻る
- フラグメントをまたぐ二重結合の立体は StereoSpec として別に持つ

公開関数一覧
------------
- fragmentize(mol, part) -> (fragments, links)
- stereo_specs(mol, fragments) -> list[StereoSpec]
- canonical_renumber(mol) -> (smiles, graph, order)
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, NamedTuple, Tuple

from lib.chem.edit import StereoSpec, WeldPair, cut_out
from lib.chem.graph import BondOrder, BondStereo, MolGraph
from lib.chem.smiles import write_smiles_ordered
from lib.tokenizer.merges import Partition
from lib.wl.hashing import MolDigest, wl_hash

__all__ = ["Fragment", "Link", "fragmentize", "stereo_specs", "canonical_renumber"]


@dataclass(frozen=True)
class Fragment:
    graph: MolGraph
    digest: MolDigest
    smiles: str
    # 局所 index → 元分子の原子 index（ダミーは -1）
    atom_map: Tuple[int, ...]

    @property
    def heavy_atoms(self) -> int:
        return sum(1 for i in self.atom_map if i >= 0)


class Link(NamedTuple):
    frag_i: int
    dummy_i: int
    frag_j: int
    dummy_j: int
    order: BondOrder

    def as_weld(self) -> WeldPair:
        return WeldPair(self.frag_i, self.dummy_i, self.frag_j, self.dummy_j, self.order)


def canonical_renumber(mol: MolGraph) -> Tuple[str, MolGraph, List[int]]:
    """SMILES 出力順に原子を並べ替えたグラフを返す。order[k] = 旧 index。"""
    smiles, order = write_smiles_ordered(mol)
    new_of = {old: k for k, old in enumerate(order)}
    atoms = [mol.atoms[old] for old in order]
    bonds = []
    for b in mol.bonds:
        refs = None
        if b.stereo_atoms is not None:
            refs = (new_of[b.stereo_atoms[0]], new_of[b.stereo_atoms[1]])
        bonds.append(replace(b, begin=new_of[b.begin], end=new_of[b.end], stereo_atoms=refs))
    bonds.sort(key=lambda b: b.key)
    return smiles, MolGraph(tuple(atoms), tuple(bonds)), order


@lru_cache(maxsize=65536)
def _canonical_cut(graph: MolGraph) -> Tuple[str, MolGraph, Tuple[int, ...], MolDigest]:
    # MolGraph は atoms / bonds の値で等価・ハッシュ可能。同じ切り出しは同じ結果
    smiles, renumbered, order = canonical_renumber(graph)
    return smiles, renumbered, tuple(order), wl_hash(renumbered)


def fragmentize(mol: MolGraph, part: Partition) -> Tuple[List[Fragment], List[Link]]:
    """分割に従って分子をフラグメントに切る。

    Returns
    -------
    fragments : list[Fragment]
        Partition のフラグメント番号順
    links : list[Link]
        フラグメント間結合ごとに 1 つ（結合の (min, max) 原子 index 昇順）
    """
    if len(part.fragment_of) != mol.num_atoms:
        raise ValueError(f"partition covers {len(part.fragment_of)} atoms, molecule has {mol.num_atoms}")

    fragments: List[Fragment] = []
    # 各フラグメントの (元の局所 index → 正準 index)
    canon: List[Dict[int, int]] = []
    dummies: List[Dict[Tuple[int, int], int]] = []
    for members in part.members():
        cut = cut_out(mol, members)
        smiles, graph, order, dg = _canonical_cut(cut.graph)
        new_of = {old: k for k, old in enumerate(order)}
        orig_of = {v: k for k, v in cut.local_of.items()}
        atom_map = tuple(orig_of.get(old, -1) for old in order)
        fragments.append(Fragment(graph, dg, smiles, atom_map))
        canon.append(new_of)
        dummies.append(cut.dummy_of)

    links: List[Link] = []
    fo = part.fragment_of
    for b in sorted(mol.bonds, key=lambda b: b.key):
        a, c = b.key
        fa, fc = fo[a], fo[c]
        if fa == fc:
            continue
        da = canon[fa][dummies[fa][(a, c)]]
        dc = canon[fc][dummies[fc][(c, a)]]
        links.append(Link(fa, da, fc, dc, b.order))
    return fragments, links


def stereo_specs(mol: MolGraph, fragments: List[Fragment]) -> List[StereoSpec]:
    """元分子の立体二重結合を (フラグメント番号, 局所 index) で表したもの。"""
    where: Dict[int, Tuple[int, int]] = {}
    for f, frag in enumerate(fragments):
        for k, orig in enumerate(frag.atom_map):
            if orig >= 0:
                where[orig] = (f, k)
    out: List[StereoSpec] = []
    for b in mol.bonds:
        if b.stereo is BondStereo.NONE or b.stereo_atoms is None:
            continue
        x, y = b.stereo_atoms
        out.append(StereoSpec(where[b.begin], where[b.end], where[x], where[y], b.stereo))
    return out
