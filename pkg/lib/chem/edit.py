"""
lib/chem/edit.py
=================================
ダミー原子を介したグラフ編集（切り出し・溶接）。

- cut_out: 原子集合を切り出し、外へ出る結合ごとに同じ次数のダミー原子を付ける
- weld_graphs: 複数グラフのダミー原子ペアを結合に戻す（ペアのダミーとその結合は消える）

どちらも最後に MolGraph.from_parts を通すので、環・共役・混成・水素は作り直される。
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from lib.chem.graph import Atom, Bond, BondOrder, BondStereo, MolGraph
from lib.errors import LinkMismatch, OrderMismatch

__all__ = ["CutResult", "StereoSpec", "WeldPair", "cut_out", "weld_graphs", "dummy_anchor"]


@dataclass(frozen=True)
class CutResult:
    graph: MolGraph
    # 元原子 index → 切り出し後 index
    local_of: Dict[int, int]
    # (内側原子, 外側原子) → その結合を置き換えたダミーの index
    dummy_of: Dict[Tuple[int, int], int]


@dataclass(frozen=True)
class WeldPair:
    graph_a: int
    dummy_a: int
    graph_b: int
    dummy_b: int
    order: Optional[BondOrder] = None


@dataclass(frozen=True)
class StereoSpec:
    """溶接後に付け直す二重結合立体。原子は (グラフ番号, 原子 index) で指す。"""

    begin: Tuple[int, int]
    end: Tuple[int, int]
    ref_begin: Tuple[int, int]
    ref_end: Tuple[int, int]
    stereo: BondStereo


def dummy_anchor(mol: MolGraph, idx: int) -> Tuple[int, int]:
    """ダミー原子の (結合 index, 相手原子 index)。ダミーでない/結合数≠1 は LinkMismatch。"""
    if not mol.atoms[idx].is_dummy:
        raise LinkMismatch(f"atom {idx} is not a dummy atom")
    if mol.degree(idx) != 1:
        raise LinkMismatch(f"dummy atom {idx} has {mol.degree(idx)} bonds (expected 1)")
    return mol.neighbors(idx)[0]


@lru_cache(maxsize=65536)
def _perceived(atoms: Tuple[Atom, ...], bonds: Tuple[Bond, ...]) -> MolGraph:
    # from_parts は atoms / bonds だけで決まる
    return MolGraph.from_parts(atoms, bonds)


def cut_out(mol: MolGraph, atoms: Sequence[int]) -> CutResult:
    """atoms を切り出す。ダミー原子は内側原子の後ろに、外向き結合の走査順で付く。"""
    inside = sorted(set(atoms))
    local_of = {a: k for k, a in enumerate(inside)}
    new_atoms: List[Atom] = [mol.atoms[a] for a in inside]
    new_bonds: List[Tuple[Bond, int]] = []  # (bond, 元の bond index)
    dummy_of: Dict[Tuple[int, int], int] = {}

    for bi, b in sorted(enumerate(mol.bonds), key=lambda t: t[1].key):
        a_in, b_in = b.begin in local_of, b.end in local_of
        if a_in and b_in:
            new_bonds.append((replace(b, begin=local_of[b.begin], end=local_of[b.end]), bi))
        elif a_in or b_in:
            inner, outer = (b.begin, b.end) if a_in else (b.end, b.begin)
            d = len(new_atoms)
            new_atoms.append(Atom.dummy())
            dummy_of[(inner, outer)] = d
            new_bonds.append((Bond(local_of[inner], d, b.order), -1))

    bonds: List[Bond] = []
    for b, bi in new_bonds:
        if b.stereo is not BondStereo.NONE and b.stereo_atoms is not None:
            src = mol.bonds[bi]
            refs = []
            for end, ref in ((src.begin, src.stereo_atoms[0]), (src.end, src.stereo_atoms[1])):
                refs.append(local_of[ref] if ref in local_of else dummy_of.get((end, ref), -1))
            if -1 in refs:
                b = replace(b, stereo=BondStereo.NONE, stereo_atoms=None)
            else:
                b = replace(b, stereo_atoms=(refs[0], refs[1]))
        bonds.append(b)
    return CutResult(_perceived(tuple(new_atoms), tuple(bonds)), local_of, dummy_of)


def weld_graphs(
    graphs: Sequence[MolGraph],
    pairs: Sequence[WeldPair],
    stereo: Sequence[StereoSpec] = (),
) -> Tuple[MolGraph, Dict[Tuple[int, int], int]]:
    """ダミー原子ペアを結合に戻して 1 つのグラフにする。

    Returns
    -------
    (mol, index_of)
        index_of は (グラフ番号, 原子 index) → 溶接後 index（消えたダミーは含まない）

    Raises
    ------
    OrderMismatch
        ペアのダミー結合の次数が異なる
    LinkMismatch
        ダミーでない原子の指定・ダミーの重複使用・溶接で重複結合ができる など
    """
    offsets: List[int] = []
    total = 0
    for g in graphs:
        offsets.append(total)
        total += g.num_atoms

    removed: Dict[int, int] = {}  # 消すダミー（全体 index）→ 代わりに参照する原子（全体 index）
    added: List[Tuple[int, int, BondOrder]] = []
    for p in pairs:
        if not (0 <= p.graph_a < len(graphs) and 0 <= p.graph_b < len(graphs)):
            raise LinkMismatch(f"graph index out of range in {p}")
        ga, gb = graphs[p.graph_a], graphs[p.graph_b]
        ba, na = dummy_anchor(ga, p.dummy_a)
        bb, nb = dummy_anchor(gb, p.dummy_b)
        oa, ob = ga.bonds[ba].order, gb.bonds[bb].order
        if oa is not ob:
            raise OrderMismatch(p.dummy_a, p.dummy_b, oa.name, ob.name)
        if p.order is not None and p.order is not oa:
            raise LinkMismatch(f"link order {p.order.name} but dummy bonds are {oa.name}")
        da, db = offsets[p.graph_a] + p.dummy_a, offsets[p.graph_b] + p.dummy_b
        if da in removed or db in removed or da == db:
            raise LinkMismatch(f"dummy atom used twice in {p}")
        xa, xb = offsets[p.graph_a] + na, offsets[p.graph_b] + nb
        removed[da] = xb
        removed[db] = xa
        added.append((xa, xb, oa))

    index_of: Dict[Tuple[int, int], int] = {}
    new_index: Dict[int, int] = {}
    atoms: List[Atom] = []
    for gi, g in enumerate(graphs):
        for ai, a in enumerate(g.atoms):
            glob = offsets[gi] + ai
            if glob in removed:
                continue
            new_index[glob] = len(atoms)
            index_of[(gi, ai)] = len(atoms)
            atoms.append(a)

    def mapped(glob: int) -> int:
        return new_index[removed.get(glob, glob)]

    bonds: List[Bond] = []
    seen: set = set()

    def push(b: Bond) -> None:
        if b.begin == b.end:
            raise LinkMismatch(f"weld would bond atom {b.begin} to itself")
        key = b.key
        if key in seen:
            raise LinkMismatch(f"weld would duplicate the bond {key}")
        seen.add(key)
        bonds.append(b)

    for gi, g in enumerate(graphs):
        off = offsets[gi]
        for b in g.bonds:
            if off + b.begin in removed or off + b.end in removed:
                continue
            refs = None
            if b.stereo_atoms is not None:
                refs = (mapped(off + b.stereo_atoms[0]), mapped(off + b.stereo_atoms[1]))
            push(replace(b, begin=new_index[off + b.begin], end=new_index[off + b.end], stereo_atoms=refs))
    for xa, xb, order in added:
        push(Bond(new_index[xa], new_index[xb], order))

    for spec in stereo:
        try:
            a, b = index_of[spec.begin], index_of[spec.end]
            x, y = index_of[spec.ref_begin], index_of[spec.ref_end]
        except KeyError as e:
            raise LinkMismatch(f"stereo reference {e} is not an atom of the welded graph") from None
        key = (a, b) if a < b else (b, a)
        for k, bond in enumerate(bonds):
            if bond.key == key:
                if bond.begin != a:
                    x, y = y, x
                bonds[k] = replace(bond, stereo=spec.stereo, stereo_atoms=(x, y))
                break
        else:
            raise LinkMismatch(f"stereo bond {spec.begin}-{spec.end} not found after weld")

    return MolGraph.from_parts(atoms, bonds), index_of
