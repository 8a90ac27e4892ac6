"""
lib/tokenizer/merges.py
=================================
反復ペアマージ（BPE 風）によるマージ表の学習と、マージ表の再生（apply）。

ラベル
------
- 反復 0 のノードラベル = 原子番号（ダミー原子は 0）
- 新ラベルは BASE_LABEL + 1 + k（k = ルール番号）。BASE_LABEL は周期表の上限 118 に固定し、
  学習コーパスに無い重元素が来てもマージ由来ラベルと衝突しないようにする。

1 回のマージパス（train / apply_merges 共通）
-------------------------------------------
- 結合を (小さい原子 index, 大きい原子 index) の昇順に走査
- 両端が別スーパーノードで、ラベルと結合次数がルールに一致すればマージ
- 同じパスで既にマージに使われたスーパーノードは以後スキップ

公開関数一覧
------------
- count_pairs(graphs) -> (pair_count, node_count)
- score_pairs(pair_count, node_count) -> dict
- best_pair(pair_count, node_count) -> PairKey | None
- train(corpus, num_iter, progress_cb=None, workers=1) -> MergeTable
- apply_merges(mol, table, t) -> Partition
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from lib.chem.graph import BondOrder, MolGraph
from lib.errors import EmptyCorpus, GranularityOutOfRange
from lib.logs import ProgressCB, emit_progress
from lib.pipeline import ordered_map, worker_pool
from lib.wl.hashing import digest, wl_hash

__all__ = [
    "BASE_LABEL",
    "FORMAT_VERSION",
    "PairKey",
    "MergeRule",
    "MergeTable",
    "Partition",
    "LabeledGraph",
    "count_pairs",
    "score_pairs",
    "best_pair",
    "train",
    "apply_merges",
    "corpus_fingerprint",
]

logger = logging.getLogger(__name__)

BASE_LABEL = 118
FORMAT_VERSION = 1

# (min label, max label, bond order)
PairKey = Tuple[int, int, int]


@dataclass(frozen=True)
class MergeRule:
    left: int
    right: int
    order: BondOrder
    new: int

    @property
    def key(self) -> PairKey:
        return (self.left, self.right, int(self.order))


@dataclass(frozen=True)
class MergeTable:
    rules: Tuple[MergeRule, ...] = ()
    corpus_fingerprint: str = ""
    version: int = FORMAT_VERSION
    base_label: int = BASE_LABEL

    def __len__(self) -> int:
        return len(self.rules)

    def prefix(self, t: int) -> "MergeTable":
        """先頭 t 個のルールだけを持つ表（粒度 t）。"""
        _check_t(t, len(self.rules))
        return MergeTable(self.rules[:t], self.corpus_fingerprint, self.version, self.base_label)

    def fingerprint(self) -> str:
        """ルール列のダイジェスト（辞書の出所記録用）。"""
        payload = ";".join(f"{r.left},{r.right},{int(r.order)},{r.new}" for r in self.rules)
        return digest(f"{self.base_label}|{payload}".encode("ascii")).hex()


@dataclass(frozen=True)
class Partition:
    """原子 → フラグメント番号。番号はフラグメント内の最小原子 index の昇順。"""

    fragment_of: Tuple[int, ...]
    fragment_count: int

    def members(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.fragment_count)]
        for atom, f in enumerate(self.fragment_of):
            out[f].append(atom)
        return out

    def refines(self, coarser: "Partition") -> bool:
        """self の各フラグメントが coarser のちょうど 1 フラグメントに含まれるか。"""
        return all(len({coarser.fragment_of[a] for a in m}) == 1 for m in self.members())


# ============================================================
# ラベル付きグラフ（スーパーノード）
# ============================================================
@dataclass
class LabeledGraph:
    """マージ途中の分子。スーパーノード id は代表原子 index。"""

    node_of: List[int]
    label: Dict[int, int]
    members: Dict[int, List[int]]
    # (a, b, order) を (min, max) 昇順に並べた結合
    bonds: List[Tuple[int, int, int]] = field(default_factory=list)

    @classmethod
    def from_mol(cls, mol: MolGraph) -> "LabeledGraph":
        n = mol.num_atoms
        bonds = sorted(
            (min(b.begin, b.end), max(b.begin, b.end), int(b.order)) for b in mol.bonds
        )
        return cls(
            node_of=list(range(n)),
            label={i: a.atomic_number for i, a in enumerate(mol.atoms)},
            members={i: [i] for i in range(n)},
            bonds=bonds,
        )

    def cross_bonds(self) -> Iterable[Tuple[int, int, int]]:
        """異なるスーパーノードをまたぐ結合 (u, v, order)。"""
        for a, b, order in self.bonds:
            u, v = self.node_of[a], self.node_of[b]
            if u != v:
                yield u, v, order

    def labels_present(self) -> set:
        return set(self.label.values())

    def merge_pass(self, rule: MergeRule) -> int:
        """ルールを 1 パス適用し、マージ回数を返す。"""
        lo, hi, order = rule.key
        consumed: set = set()
        merged = 0
        for a, b, o in self.bonds:
            if o != order:
                continue
            u, v = self.node_of[a], self.node_of[b]
            if u == v or u in consumed or v in consumed:
                continue
            lu, lv = self.label[u], self.label[v]
            if (min(lu, lv), max(lu, lv)) != (lo, hi):
                continue
            keep, drop = (u, v) if u < v else (v, u)
            for atom in self.members[drop]:
                self.node_of[atom] = keep
            self.members[keep].extend(self.members.pop(drop))
            del self.label[drop]
            self.label[keep] = rule.new
            consumed.add(keep)
            merged += 1
        return merged

    def partition(self) -> Partition:
        order: Dict[int, int] = {}
        out: List[int] = []
        for atom, node in enumerate(self.node_of):
            if node not in order:
                order[node] = len(order)
            out.append(order[node])
        return Partition(tuple(out), len(order))


# ============================================================
# 数え上げとスコア
# ============================================================
def count_pairs(graphs: Iterable[LabeledGraph]) -> Tuple[Counter, Counter]:
    """結合 1 本ごとに pair_count +1、その両端ノードに node_count +1。"""
    pair_count: Counter = Counter()
    node_count: Counter = Counter()
    for g in graphs:
        for u, v, order in g.cross_bonds():
            lu, lv = g.label[u], g.label[v]
            pair_count[(min(lu, lv), max(lu, lv), order)] += 1
            node_count[lu] += 1
            node_count[lv] += 1
    return pair_count, node_count


def score_pairs(pair_count: Dict[PairKey, int], node_count: Dict[int, int]) -> Dict[PairKey, float]:
    """score = pair_count / sqrt(node_count[l_i] * node_count[l_j])"""
    return {
        key: c / math.sqrt(node_count[key[0]] * node_count[key[1]])
        for key, c in pair_count.items()
        if c > 0
    }


def best_pair(pair_count: Dict[PairKey, int], node_count: Dict[int, int]) -> Optional[PairKey]:
    """スコア最大のペア。同点は (min, max, order) の辞書順で最小。

    比較は score^2 = c^2 / (n_i * n_j) を有理数で行う（浮動小数の丸め差で順位が揺れない）。
    """
    best: Optional[Tuple[Fraction, PairKey]] = None
    for key, c in pair_count.items():
        if c <= 0:
            continue
        s2 = Fraction(c * c, node_count[key[0]] * node_count[key[1]])
        if best is None or s2 > best[0] or (s2 == best[0] and key < best[1]):
            best = (s2, key)
    return None if best is None else best[1]


def corpus_fingerprint(mols: Iterable[MolGraph]) -> str:
    """分子ダイジェストをソートして連結したもののダイジェスト（入力順に依存しない）。"""
    hexes = sorted(wl_hash(m).hex for m in mols)
    return digest("\n".join(hexes).encode("ascii")).hex()


# ============================================================
# 学習と再生
# ============================================================
Shard = List[LabeledGraph]


def _merge_and_count(item: Tuple[Shard, Optional[MergeRule]]) -> Tuple[Shard, int, Counter, Counter]:
    """シャードに直前のルールを 1 パス適用してから、次のペアを数える。"""
    shard, rule = item
    merged = sum(g.merge_pass(rule) for g in shard) if rule is not None else 0
    pair_count, node_count = count_pairs(shard)
    return shard, merged, pair_count, node_count


def _split(graphs: List[LabeledGraph], n: int) -> List[Shard]:
    size = -(-len(graphs) // max(1, n))
    return [graphs[i:i + size] for i in range(0, len(graphs), size)]


def train(
    corpus: Iterable[MolGraph],
    num_iter: int,
    progress_cb: ProgressCB = None,
    base_label: int = BASE_LABEL,
    workers: int = 1,
) -> MergeTable:
    """マージ表を学習する。

    Parameters
    ----------
    corpus : Iterable[MolGraph]
        学習分子（sanitize 済み）
    num_iter : int
        マージ回数の上限。ペアが無くなれば早期終了
    progress_cb : callable, optional
        progress_cb(msg, frac)
    workers : int
        ペア数え上げとマージパスを分子のシャードに分けて並列に回す。
        学習されるルール列は workers によらない

    Raises
    ------
    EmptyCorpus
    """
    mols = list(corpus)
    if not mols:
        raise EmptyCorpus()
    if num_iter < 0:
        raise ValueError(f"num_iter must be >= 0 (got {num_iter})")

    fp = corpus_fingerprint(mols)
    shards = _split([LabeledGraph.from_mol(m) for m in mols], workers)
    rules: List[MergeRule] = []
    rule: Optional[MergeRule] = None
    score = 0.0

    with worker_pool(workers) as pool:
        while True:
            steps = list(ordered_map(_merge_and_count, [(s, rule) for s in shards],
                                     workers=workers, chunksize=1, executor=pool))
            shards = [s for s, _, _, _ in steps]
            if rule is not None:
                k = len(rules)
                merged = sum(m for _, m, _, _ in steps)
                rules.append(rule)
                logger.info(
                    "merge %d: (%d, %d, %s) -> %d score=%.6f",
                    k, rule.left, rule.right, rule.order.name, rule.new, score,
                    extra={"iteration": k, "pair": list(rule.key), "score": score, "merged": merged},
                )
                emit_progress(progress_cb, f"merge {k + 1}/{num_iter}", (k + 1) / num_iter)
            if len(rules) >= num_iter:
                break

            pair_count: Counter = Counter()
            node_count: Counter = Counter()
            for _, _, pc, nc in steps:
                pair_count.update(pc)
                node_count.update(nc)
            key = best_pair(pair_count, node_count)
            if key is None:
                logger.info("no pairs left after %d merges", len(rules), extra={"iteration": len(rules)})
                break
            score = pair_count[key] / math.sqrt(node_count[key[0]] * node_count[key[1]])
            rule = MergeRule(key[0], key[1], BondOrder(key[2]), base_label + 1 + len(rules))

    return MergeTable(tuple(rules), fp, FORMAT_VERSION, base_label)


def _check_t(t: int, available: int) -> None:
    if t < 0 or t > available:
        raise GranularityOutOfRange(t, available)


def apply_merges(mol: MolGraph, table: MergeTable, t: int) -> Partition:
    """マージ表の先頭 t 個を順に再生して分割を得る（t=0 は原子単位）。"""
    _check_t(t, len(table.rules))
    g = LabeledGraph.from_mol(mol)
    present = g.labels_present()
    for rule in table.rules[:t]:
        if rule.left not in present or rule.right not in present:
            continue
        if g.merge_pass(rule):
            present = g.labels_present()
    return g.partition()
