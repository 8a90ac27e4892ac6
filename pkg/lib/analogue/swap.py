"""
lib/analogue/swap.py
=================================
フラグメント差し替えによる類縁体生成。

手順
----
1) スキャフォールドと候補の接続シグネチャ（ダミー結合の次数 → 本数）を比べ、
   キー集合または本数が違う候補はスキップ
2) 同じ次数のダミー同士の全単射を列挙（候補あたり max_mappings で打ち切り、truncated を立てる）
3) 各対応で溶接 → sanitize → ダイジェストで重複除去
4) 結果はダイジェスト昇順（候補の入力順に依存しない）

公開関数一覧
------------
- attachment_signature(structure) -> AttachmentSignature
- weld(a, b, mapping) -> MolGraph
- excise(mol, atom_indices) -> MolGraph
- evaluate_candidate(scaffold, candidate, index, max_mappings) -> CandidateOutcome
- merge_outcomes(scaffold, outcomes) -> AnalogueSet
- generate_analogues(scaffold, candidates, max_mappings=10000) -> AnalogueSet
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence, Tuple

from lib.chem.edit import WeldPair, cut_out, dummy_anchor, weld_graphs
from lib.chem.graph import BondOrder, MolGraph
from lib.chem.smiles import write_smiles
from lib.chem.valence import sanitize
from lib.errors import LinkMismatch, NoAttachmentPoints, OrderMismatch, ValenceError
from lib.wl.hashing import wl_hash

__all__ = [
    "MAX_MAPPINGS",
    "AttachmentSignature",
    "AnalogueResult",
    "CandidateOutcome",
    "AnalogueSet",
    "attachment_signature",
    "weld",
    "excise",
    "evaluate_candidate",
    "merge_outcomes",
    "generate_analogues",
]

logger = logging.getLogger(__name__)

MAX_MAPPINGS = 10_000

Mapping = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class AttachmentSignature:
    # (次数, 本数) を次数順に
    counts: Tuple[Tuple[BondOrder, int], ...] = ()

    def __bool__(self) -> bool:
        return bool(self.counts)

    def as_dict(self) -> Dict[str, int]:
        return {o.name: n for o, n in self.counts}

    def key(self) -> str:
        return ",".join(f"{o.name}:{n}" for o, n in self.counts)


def _dummies_by_order(mol: MolGraph) -> Dict[BondOrder, List[int]]:
    groups: Dict[BondOrder, List[int]] = {}
    for d in mol.dummy_indices():
        if mol.degree(d) != 1:
            continue
        bi, _ = dummy_anchor(mol, d)
        groups.setdefault(mol.bonds[bi].order, []).append(d)
    return groups


def attachment_signature(structure: MolGraph) -> AttachmentSignature:
    groups = _dummies_by_order(structure)
    return AttachmentSignature(tuple(sorted((o, len(v)) for o, v in groups.items())))


def weld(a: MolGraph, b: MolGraph, mapping: Sequence[Tuple[int, int]]) -> MolGraph:
    """a のダミーと b のダミーを対応どおりに結合へ戻す（対応外のダミーは残る）。

    Raises
    ------
    OrderMismatch
    """
    pairs = [WeldPair(0, da, 1, db) for da, db in mapping]
    mol, _ = weld_graphs([a, b], pairs)
    return mol


def excise(mol: MolGraph, atom_indices: Sequence[int]) -> MolGraph:
    """atom_indices を取り除き、切れた結合ごとにダミー原子を付けたスキャフォールドを返す。"""
    drop = set(atom_indices)
    keep = [i for i in range(mol.num_atoms) if i not in drop]
    if not keep:
        raise ValueError("excise would remove every atom")
    return cut_out(mol, keep).graph


# ============================================================
# 生成
# ============================================================
@dataclass(frozen=True)
class AnalogueResult:
    candidate_index: int
    mapping: Mapping
    product: MolGraph
    digest: str
    smiles: str


@dataclass
class CandidateOutcome:
    index: int
    results: List[AnalogueResult] = field(default_factory=list)
    rejected: Counter = field(default_factory=Counter)
    truncated: bool = False


@dataclass
class AnalogueSet:
    scaffold: MolGraph
    results: List[AnalogueResult] = field(default_factory=list)
    rejected: Counter = field(default_factory=Counter)
    truncated: List[int] = field(default_factory=list)

    @property
    def digests(self) -> List[str]:
        return [r.digest for r in self.results]


def _mappings(scaf: Dict[BondOrder, List[int]], cand: Dict[BondOrder, List[int]]) -> Iterator[Mapping]:
    """次数グループごとの順列の直積を 1 件ずつ生成する（先頭グループが最も外側のループ）。"""
    orders = sorted(scaf)

    def walk(k: int, prefix: Mapping) -> Iterator[Mapping]:
        if k == len(orders):
            yield prefix
            return
        o = orders[k]
        for perm in itertools.permutations(cand[o]):
            yield from walk(k + 1, prefix + tuple(zip(scaf[o], perm)))

    return walk(0, ())


def evaluate_candidate(
    scaffold: MolGraph,
    candidate: MolGraph,
    index: int,
    max_mappings: int = MAX_MAPPINGS,
) -> CandidateOutcome:
    """1 候補ぶんの溶接と検証（候補内の重複は除去済み）。"""
    out = CandidateOutcome(index)
    if attachment_signature(candidate) != attachment_signature(scaffold):
        out.rejected["signature_mismatch"] += 1
        return out

    scaf_groups = _dummies_by_order(scaffold)
    cand_groups = _dummies_by_order(candidate)
    seen: set = set()
    for k, mapping in enumerate(_mappings(scaf_groups, cand_groups)):
        if k >= max_mappings:
            out.truncated = True
            break
        try:
            product = weld(scaffold, candidate, mapping)
            sanitize(product)
        except ValenceError:
            out.rejected["sanitize"] += 1
            continue
        except (OrderMismatch, LinkMismatch, ValueError):
            out.rejected["weld"] += 1
            continue
        dg = wl_hash(product).hex
        if dg in seen:
            out.rejected["duplicate"] += 1
            continue
        seen.add(dg)
        out.results.append(AnalogueResult(index, mapping, product, dg, write_smiles(product)))
    return out


def merge_outcomes(scaffold: MolGraph, outcomes: Sequence[CandidateOutcome]) -> AnalogueSet:
    """候補ごとの結果をまとめ、ダイジェストで重複除去して昇順に並べる。"""
    aset = AnalogueSet(scaffold)
    best: Dict[str, AnalogueResult] = {}
    for oc in outcomes:
        aset.rejected.update(oc.rejected)
        if oc.truncated:
            aset.truncated.append(oc.index)
        for r in oc.results:
            cur = best.get(r.digest)
            if cur is None or (r.candidate_index, r.mapping) < (cur.candidate_index, cur.mapping):
                if cur is not None:
                    aset.rejected["duplicate"] += 1
                best[r.digest] = r
            else:
                aset.rejected["duplicate"] += 1
    aset.results = [best[k] for k in sorted(best)]
    aset.truncated.sort()
    return aset


def generate_analogues(
    scaffold: MolGraph,
    candidates: Sequence[MolGraph],
    max_mappings: int = MAX_MAPPINGS,
) -> AnalogueSet:
    """スキャフォールドのダミー原子に候補フラグメントを差し込んだ類縁体を列挙する。

    Raises
    ------
    NoAttachmentPoints
        スキャフォールドにダミー原子が無い
    """
    if not attachment_signature(scaffold):
        raise NoAttachmentPoints("scaffold has no dummy atoms")
    outcomes = [evaluate_candidate(scaffold, c, i, max_mappings) for i, c in enumerate(candidates)]
    aset = merge_outcomes(scaffold, outcomes)
    logger.info("analogues: %d products from %d candidates", len(aset.results), len(candidates),
                extra={"products": len(aset.results), "rejected": dict(aset.rejected)})
    return aset
