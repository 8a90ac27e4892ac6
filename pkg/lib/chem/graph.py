"""
lib/chem/graph.py
=================================
分子グラフのデータモデル（Atom / Bond / MolGraph）と派生フィールドの計算。

設計メモ
--------
- すべて frozen dataclass。構築後は不変なのでスレッド間で共有してよい。
- 派生フィールド（暗黙水素・環フラグ・最小環サイズ・共役・混成・二重結合の立体参照）は
  `MolGraph.from_parts()` が毎回計算し直す。parse / fragmentize / weld / JSON 読み込みの
  どの経路でも同じ規則で埋まるようにするため。
- 芳香族性は入力表記のまま（知覚・ケクレ化はしない）。

公開クラス一覧
--------------
- BondOrder / Hybridization / BondStereo / ChiralTag（IntEnum）
- Atom(atomic_number, formal_charge, explicit_h, implicit_h, aromatic, ...)
- Bond(begin, end, order, in_ring, conjugated, stereo, stereo_atoms, ring_size)
- MolGraph(atoms, bonds) / MolGraph.from_parts(atoms, bonds)
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from lib.chem.elements import HALOGENS, symbol_of

__all__ = [
    "BondOrder",
    "Hybridization",
    "BondStereo",
    "ChiralTag",
    "Atom",
    "Bond",
    "MolGraph",
]


# ============================================================
# 列挙型
# ============================================================
class BondOrder(IntEnum):
    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    AROMATIC = 4

    @property
    def valence(self) -> int:
        """原子価計算での寄与。芳香族結合は 1（π 分は valence 側で補う）。"""
        return 1 if self is BondOrder.AROMATIC else int(self)

    @property
    def is_multiple(self) -> bool:
        return self is not BondOrder.SINGLE


class Hybridization(IntEnum):
    UNSPECIFIED = 0
    SP = 1
    SP2 = 2
    SP3 = 3


class BondStereo(IntEnum):
    NONE = 0
    CIS = 1
    TRANS = 2

    def flipped(self) -> "BondStereo":
        if self is BondStereo.CIS:
            return BondStereo.TRANS
        if self is BondStereo.TRANS:
            return BondStereo.CIS
        return self


class ChiralTag(IntEnum):
    """四面体キラリティの注釈（v1 ではハッシュに使わない）。"""
    NONE = 0
    CW = 1   # '@@'
    CCW = 2  # '@'


# ============================================================
# Atom / Bond
# ============================================================
@dataclass(frozen=True)
class Atom:
    atomic_number: int
    formal_charge: int = 0
    explicit_h: int = 0
    implicit_h: int = 0
    aromatic: bool = False
    radical_electrons: int = 0
    hybridization: Hybridization = Hybridization.UNSPECIFIED
    no_implicit: bool = False
    chiral_tag: ChiralTag = ChiralTag.NONE

    @property
    def is_dummy(self) -> bool:
        return self.atomic_number == 0

    @property
    def total_h(self) -> int:
        return self.explicit_h + self.implicit_h

    @property
    def symbol(self) -> str:
        return symbol_of(self.atomic_number)

    @classmethod
    def dummy(cls) -> "Atom":
        """化学属性を持たないダミー原子（原子番号 0）。"""
        return cls(atomic_number=0, no_implicit=True)


@dataclass(frozen=True)
class Bond:
    begin: int
    end: int
    order: BondOrder = BondOrder.SINGLE
    in_ring: bool = False
    conjugated: bool = False
    stereo: BondStereo = BondStereo.NONE
    # (begin 側の参照隣接原子, end 側の参照隣接原子)。stereo != NONE のときのみ
    stereo_atoms: Optional[Tuple[int, int]] = None
    ring_size: int = 0

    def other(self, idx: int) -> int:
        return self.end if idx == self.begin else self.begin

    @property
    def key(self) -> Tuple[int, int]:
        """無向ペアとしてのキー（小さい順）。"""
        return (self.begin, self.end) if self.begin < self.end else (self.end, self.begin)


# ============================================================
# MolGraph
# ============================================================
@dataclass(frozen=True)
class MolGraph:
    atoms: Tuple[Atom, ...]
    bonds: Tuple[Bond, ...]
    adjacency: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _pairs: Dict[Tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        bonds = tuple(self.bonds)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "bonds", bonds)
        n = len(atoms)
        adj: List[List[int]] = [[] for _ in range(n)]
        pairs: Dict[Tuple[int, int], int] = {}
        for bi, b in enumerate(bonds):
            if b.begin == b.end or not (0 <= b.begin < n and 0 <= b.end < n):
                raise ValueError(f"bond {bi} has invalid endpoints ({b.begin}, {b.end})")
            if b.key in pairs:
                raise ValueError(f"duplicate bond between atoms {b.key}")
            if b.stereo is not BondStereo.NONE and b.order is not BondOrder.DOUBLE:
                raise ValueError(f"bond {bi}: stereo only allowed on double bonds")
            pairs[b.key] = bi
            adj[b.begin].append(bi)
            adj[b.end].append(bi)
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))
        object.__setattr__(self, "_pairs", pairs)

    # ---------- 参照系 ----------
    @property
    def num_atoms(self) -> int:
        return len(self.atoms)

    @property
    def num_bonds(self) -> int:
        return len(self.bonds)

    def neighbors(self, idx: int) -> List[Tuple[int, int]]:
        """(bond index, 隣接原子 index) のリスト。"""
        return [(bi, self.bonds[bi].other(idx)) for bi in self.adjacency[idx]]

    def bond_between(self, i: int, j: int) -> Optional[int]:
        return self._pairs.get((i, j) if i < j else (j, i))

    def degree(self, idx: int) -> int:
        return len(self.adjacency[idx])

    def dummy_indices(self) -> List[int]:
        return [i for i, a in enumerate(self.atoms) if a.is_dummy]

    def heavy_atom_count(self) -> int:
        return sum(1 for a in self.atoms if a.atomic_number > 1)

    def to_networkx(self) -> nx.Graph:
        """networkx.Graph へ変換（ノード属性 atom / エッジ属性 bond）。"""
        g = nx.Graph()
        for i, a in enumerate(self.atoms):
            g.add_node(i, atom=a)
        for b in self.bonds:
            g.add_edge(b.begin, b.end, bond=b)
        return g

    # ---------- 構築 ----------
    @classmethod
    def from_parts(cls, atoms: Sequence[Atom], bonds: Sequence[Bond]) -> "MolGraph":
        """原子・結合から派生フィールドを計算し直した MolGraph を作る。

        計算するもの
        ------------
        - 暗黙水素（no_implicit でない非ダミー原子）と括弧原子のラジカル
        - in_ring / ring_size（最小環サイズ）
        - conjugated
        - hybridization
        - 二重結合 stereo の参照原子の正規化（環内 8 員未満は NONE）
        """
        from lib.chem import valence  # 循環 import 回避

        atoms = list(atoms)
        bonds = list(bonds)
        n = len(atoms)
        inc: List[List[int]] = [[] for _ in range(n)]
        for bi, b in enumerate(bonds):
            inc[b.begin].append(bi)
            inc[b.end].append(bi)

        # 1) 環（bridge でない結合が環上）
        sizes = _ring_sizes(n, bonds)

        # 2) 共役
        conj = _conjugation(bonds, inc)

        bonds = [
            replace(b, in_ring=sizes[bi] > 0, ring_size=sizes[bi], conjugated=conj[bi])
            for bi, b in enumerate(bonds)
        ]

        # 3) 水素・ラジカル・混成
        fixed: List[Atom] = []
        for i, a in enumerate(atoms):
            orders = [bonds[bi].order for bi in inc[i]]
            if a.is_dummy:
                fixed.append(replace(a, implicit_h=0, formal_charge=0, aromatic=False,
                                     explicit_h=0, radical_electrons=0,
                                     hybridization=Hybridization.UNSPECIFIED,
                                     chiral_tag=ChiralTag.NONE))
                continue
            if a.no_implicit:
                imp = 0
                rad = valence.bracket_radicals(a, orders)
            else:
                imp = valence.implicit_hydrogens(a, orders)
                rad = 0
            fixed.append(replace(a, implicit_h=imp, radical_electrons=rad,
                                 hybridization=_hybridization(a, orders)))

        mol = cls(tuple(fixed), tuple(bonds))
        if any(b.stereo is not BondStereo.NONE for b in bonds):
            mol = _normalize_stereo(mol)
        return mol


# ============================================================
# 派生フィールド計算（内部）
# ============================================================
def _ring_sizes(n: int, bonds: Sequence[Bond]) -> List[int]:
    """各結合を含む最小環のサイズ（環に乗らない結合は 0）。"""
    sizes = [0] * len(bonds)
    if len(bonds) < 3:
        return sizes
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((b.begin, b.end) for b in bonds)
    bridges = {frozenset(e) for e in nx.bridges(g)}
    for bi, b in enumerate(bonds):
        if frozenset((b.begin, b.end)) in bridges:
            continue
        g.remove_edge(b.begin, b.end)
        sizes[bi] = nx.shortest_path_length(g, b.begin, b.end) + 1
        g.add_edge(b.begin, b.end)
    return sizes


def _conjugation(bonds: Sequence[Bond], inc: Sequence[Sequence[int]]) -> List[bool]:
    """共役フラグ。

    - 芳香族結合は常に共役
    - 単結合は両端がそれぞれ別の多重結合を持つとき共役
    - 多重結合は共役な単結合と原子を共有するとき共役
    """
    has_multi = [any(bonds[bi].order.is_multiple for bi in lst) for lst in inc]
    conj = [False] * len(bonds)
    for bi, b in enumerate(bonds):
        if b.order is BondOrder.AROMATIC:
            conj[bi] = True
        elif b.order is BondOrder.SINGLE:
            conj[bi] = has_multi[b.begin] and has_multi[b.end]
    for bi, b in enumerate(bonds):
        if b.order in (BondOrder.DOUBLE, BondOrder.TRIPLE):
            conj[bi] = any(
                conj[bj] and bonds[bj].order is BondOrder.SINGLE
                for end in (b.begin, b.end)
                for bj in inc[end]
                if bj != bi
            )
    return conj


def _hybridization(atom: Atom, orders: Sequence[BondOrder]) -> Hybridization:
    if atom.atomic_number <= 1:
        return Hybridization.UNSPECIFIED
    if atom.aromatic:
        return Hybridization.SP2
    triples = sum(1 for o in orders if o is BondOrder.TRIPLE)
    doubles = sum(1 for o in orders if o is BondOrder.DOUBLE)
    if atom.atomic_number in HALOGENS:
        return Hybridization.SP3
    if triples or doubles >= 2:
        return Hybridization.SP
    if doubles or any(o is BondOrder.AROMATIC for o in orders):
        return Hybridization.SP2
    return Hybridization.SP3


def _normalize_stereo(mol: MolGraph) -> MolGraph:
    """立体参照原子を「順位が最大の隣接原子」に揃える。

    - 片側の置換基 2 つが同順位なら立体は成立しない → NONE
    - 参照を付け替えるたびに CIS/TRANS を反転
    """
    from lib.wl.hashing import atom_ranks

    ranks = atom_ranks(mol)
    bonds = list(mol.bonds)
    for bi, b in enumerate(bonds):
        if b.stereo is BondStereo.NONE:
            continue
        if b.stereo_atoms is None or (b.in_ring and b.ring_size < 8):
            bonds[bi] = replace(b, stereo=BondStereo.NONE, stereo_atoms=None)
            continue
        stereo = b.stereo
        refs: List[int] = []
        ok = True
        for end, ref in ((b.begin, b.stereo_atoms[0]), (b.end, b.stereo_atoms[1])):
            others = [o for _, o in mol.neighbors(end) if o != b.other(end)]
            if ref not in others:
                ok = False
                break
            if len(others) == 2 and ranks[others[0]] == ranks[others[1]]:
                ok = False
                break
            best = max(others, key=lambda o: ranks[o])
            if best != ref:
                stereo = stereo.flipped()
            refs.append(best)
        if ok:
            bonds[bi] = replace(b, stereo=stereo, stereo_atoms=(refs[0], refs[1]))
        else:
            bonds[bi] = replace(b, stereo=BondStereo.NONE, stereo_atoms=None)
    return MolGraph(mol.atoms, tuple(bonds))
