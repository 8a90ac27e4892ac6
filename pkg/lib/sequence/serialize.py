"""
lib/sequence/serialize.py
=================================
分子 ⇄ フラグメントトークン系列。

serialize の流れ
----------------
sanitize → apply_merges → fragmentize（フラグメント順 = 最小原子 index の昇順）
→ トークン lookup（UNK 可）→ Gasteiger フラグメント電荷 → hop / WL role / Coulomb → 記述子

reconstruct は辞書のフラグメントグラフを links どおりに溶接し、
フラグメントをまたぐ二重結合の立体を付け直す。

公開関数一覧
------------
- serialize(mol, table, t, dictionary, mol_id="", d0=1.0, z_mode="atomic_sum") -> FragmentSequence
- reconstruct(seq, dictionary) -> MolGraph
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from lib.chem.edit import StereoSpec, weld_graphs
from lib.chem.graph import MolGraph
from lib.chem.valence import sanitize
from lib.errors import LinkMismatch, UnreconstructableUNK
from lib.posenc.gasteiger import fragment_charges, gasteiger_charges
from lib.posenc.spatial import (
    DEFAULT_D0,
    CoulombFeatures,
    FragmentGraph,
    HopMatrix,
    WLRoleIds,
    ZMode,
    build_fragment_graph,
    coulomb_features,
    fragment_z,
    hop_matrix,
    wl_role_ids,
)
from lib.sequence.descriptors import DescriptorVector, descriptors
from lib.tokenizer.dictionary import UNK, TokenDictionary, lookup
from lib.tokenizer.fragments import Link, fragmentize, stereo_specs
from lib.tokenizer.merges import MergeTable, apply_merges

__all__ = ["FragmentSequence", "serialize", "reconstruct"]


@dataclass(frozen=True)
class FragmentSequence:
    mol_id: str
    t: int
    token_ids: Tuple[int, ...]
    # マスク位置は None
    digests: Tuple[Optional[str], ...]
    fragment_graph: FragmentGraph
    links: Tuple[Link, ...]
    hop: HopMatrix
    roles: WLRoleIds
    coulomb: CoulombFeatures
    charges: Tuple[float, ...]
    descriptors: DescriptorVector
    stereo: Tuple[StereoSpec, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.token_ids)

    @property
    def unk_count(self) -> int:
        return sum(1 for i in self.token_ids if i == UNK)


def serialize(
    mol: MolGraph,
    table: MergeTable,
    t: int,
    dictionary: TokenDictionary,
    mol_id: str = "",
    d0: float = DEFAULT_D0,
    z_mode: ZMode = ZMode.ATOMIC_SUM,
) -> FragmentSequence:
    sanitize(mol)
    part = apply_merges(mol, table, t)
    frags, links = fragmentize(mol, part)
    token_ids = tuple(lookup(dictionary, f) for f in frags)
    digests = tuple(f.digest.hex for f in frags)

    charges = fragment_charges(gasteiger_charges(mol), [f.atom_map for f in frags])
    fg = build_fragment_graph(digests, links, charges)
    z = fragment_z(frags, z_mode, charges)

    return FragmentSequence(
        mol_id=mol_id,
        t=t,
        token_ids=token_ids,
        digests=digests,
        fragment_graph=fg,
        links=tuple(links),
        hop=hop_matrix(fg),
        roles=wl_role_ids(fg),
        coulomb=coulomb_features(fg, z, d0),
        charges=tuple(charges),
        descriptors=descriptors(mol),
        stereo=tuple(stereo_specs(mol, frags)),
    )


def reconstruct(seq: FragmentSequence, dictionary: TokenDictionary) -> MolGraph:
    """系列から分子を組み立て直す。

    Raises
    ------
    UnreconstructableUNK
        UNK（またはグラフを引けない特殊トークン）を含む
    LinkMismatch
        ダイジェスト・リンクが辞書のグラフと合わない
    """
    graphs: List[MolGraph] = []
    for pos, tid in enumerate(seq.token_ids):
        if tid == UNK:
            raise UnreconstructableUNK(pos)
        entry = dictionary.entry_for_id(tid)
        if entry is None:
            raise UnreconstructableUNK(pos)
        want = seq.digests[pos] if pos < len(seq.digests) else None
        if want is not None and want != entry.digest:
            raise LinkMismatch(f"position {pos}: token {tid} is {entry.digest}, sequence says {want}")
        graphs.append(entry.graph)
    mol, _ = weld_graphs(graphs, [l.as_weld() for l in seq.links], seq.stereo)
    return mol
