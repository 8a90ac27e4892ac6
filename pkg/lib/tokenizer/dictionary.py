"""
lib/tokenizer/dictionary.py
=================================
トークン辞書（フラグメントのダイジェスト → トークン id + 正準レコード）。

- 特殊トークン: PAD=0 / UNK=1 / MASK=2 / CLS=3
- 通常トークンは 4 から、出現回数の降順 → ダイジェスト昇順で密に採番
- 同じダイジェストに別の SMILES が来た場合は warning を出して後勝ち

公開関数一覧
------------
- count_fragments(mols, table, t) -> FragmentCounts
- build_dictionary(corpus, table, t, progress_cb=None) -> TokenDictionary
- lookup(dictionary, frag) -> int
- tokenize(mol, table, t, dictionary) -> Tokenized
- fragment_stats(mols, table, t) -> FragmentStats
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Union

import pandas as pd

from lib.chem.graph import MolGraph
from lib.logs import ProgressCB, emit_progress
from lib.tokenizer.fragments import Fragment, Link, fragmentize
from lib.tokenizer.merges import FORMAT_VERSION, MergeTable, Partition, apply_merges, corpus_fingerprint
from lib.wl.hashing import MolDigest

__all__ = [
    "PAD", "UNK", "MASK", "CLS", "SPECIALS", "FIRST_TOKEN_ID",
    "TokenEntry",
    "TokenDictionary",
    "FragmentCounts",
    "Tokenized",
    "FragmentStats",
    "count_fragments",
    "dictionary_from_counts",
    "build_dictionary",
    "lookup",
    "tokenize",
    "fragment_stats",
]

logger = logging.getLogger(__name__)

PAD, UNK, MASK, CLS = 0, 1, 2, 3
SPECIALS: Dict[str, int] = {"PAD": PAD, "UNK": UNK, "MASK": MASK, "CLS": CLS}
FIRST_TOKEN_ID = 4


@dataclass(frozen=True)
class TokenEntry:
    digest: str
    token_id: int
    smiles: str
    graph: MolGraph
    count: int


@dataclass
class TokenDictionary:
    entries: Dict[str, TokenEntry] = field(default_factory=dict)
    t: int = 0
    specials: Dict[str, int] = field(default_factory=lambda: dict(SPECIALS))
    corpus_fingerprint: str = ""
    merges_fingerprint: str = ""
    merges_corpus_fingerprint: str = ""
    version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        self._by_id: Dict[int, TokenEntry] = {e.token_id: e for e in self.entries.values()}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, digest: object) -> bool:
        return str(digest) in self.entries

    @property
    def size(self) -> int:
        """特殊トークン込みの語彙サイズ。"""
        return len(self.entries) + len(self.specials)

    def entry_for_id(self, token_id: int) -> Optional[TokenEntry]:
        return self._by_id.get(token_id)

    def id_of(self, digest: Union[str, MolDigest]) -> int:
        e = self.entries.get(str(digest))
        return e.token_id if e is not None else self.specials["UNK"]


# ============================================================
# 数え上げ
# ============================================================
@dataclass
class FragmentCounts:
    counts: Counter = field(default_factory=Counter)
    smiles: Dict[str, str] = field(default_factory=dict)
    graphs: Dict[str, MolGraph] = field(default_factory=dict)
    collisions: int = 0

    def add(self, frag: Fragment) -> None:
        key = frag.digest.hex
        prev = self.smiles.get(key)
        if prev is not None and prev != frag.smiles:
            self.collisions += 1
            logger.warning("digest %s maps to %s and %s; keeping the latter", key, prev, frag.smiles,
                           extra={"digest": key})
        self.counts[key] += 1
        self.smiles[key] = frag.smiles
        self.graphs[key] = frag.graph

    def update(self, other: "FragmentCounts") -> None:
        """結合的・可換なマージ（並列集計用）。"""
        for key, n in other.counts.items():
            prev = self.smiles.get(key)
            if prev is not None and prev != other.smiles[key]:
                self.collisions += 1
                logger.warning("digest %s maps to %s and %s; keeping the latter", key, prev, other.smiles[key],
                               extra={"digest": key})
            self.counts[key] += n
            self.smiles[key] = other.smiles[key]
            self.graphs[key] = other.graphs[key]
        self.collisions += other.collisions


def count_fragments(mols: Iterable[MolGraph], table: MergeTable, t: int) -> FragmentCounts:
    out = FragmentCounts()
    for mol in mols:
        frags, _ = fragmentize(mol, apply_merges(mol, table, t))
        for f in frags:
            out.add(f)
    return out


def dictionary_from_counts(
    counts: FragmentCounts,
    table: MergeTable,
    t: int,
    corpus_fp: str = "",
) -> TokenDictionary:
    ranked = sorted(counts.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = {
        key: TokenEntry(key, FIRST_TOKEN_ID + k, counts.smiles[key], counts.graphs[key], n)
        for k, (key, n) in enumerate(ranked)
    }
    return TokenDictionary(
        entries=entries,
        t=t,
        corpus_fingerprint=corpus_fp,
        merges_fingerprint=table.fingerprint(),
        merges_corpus_fingerprint=table.corpus_fingerprint,
    )


def build_dictionary(
    corpus: Iterable[MolGraph],
    table: MergeTable,
    t: int,
    progress_cb: ProgressCB = None,
) -> TokenDictionary:
    """コーパスの全フラグメントを粒度 t で数えて辞書を作る。空コーパスなら特殊トークンのみ。"""
    table.prefix(t)  # t の範囲チェック
    mols = list(corpus)
    counts = FragmentCounts()
    for k, mol in enumerate(mols):
        frags, _ = fragmentize(mol, apply_merges(mol, table, t))
        for f in frags:
            counts.add(f)
        if (k + 1) % 500 == 0 or k + 1 == len(mols):
            emit_progress(progress_cb, f"dictionary {k + 1}/{len(mols)}", (k + 1) / len(mols))
    d = dictionary_from_counts(counts, table, t, corpus_fingerprint(mols) if mols else "")
    logger.info("dictionary built: %d tokens from %d molecules", len(d), len(mols),
                extra={"tokens": len(d), "molecules": len(mols), "t": t})
    return d


def lookup(dictionary: TokenDictionary, frag: Union[Fragment, MolDigest, str]) -> int:
    """フラグメントのトークン id（未登録は UNK）。"""
    key = frag.digest if isinstance(frag, Fragment) else frag
    return dictionary.id_of(key)


# ============================================================
# 便利関数
# ============================================================
@dataclass(frozen=True)
class Tokenized:
    partition: Partition
    fragments: List[Fragment]
    links: List[Link]
    token_ids: List[int]

    @property
    def unk_count(self) -> int:
        return sum(1 for i in self.token_ids if i == UNK)


def tokenize(mol: MolGraph, table: MergeTable, t: int, dictionary: TokenDictionary) -> Tokenized:
    part = apply_merges(mol, table, t)
    frags, links = fragmentize(mol, part)
    return Tokenized(part, frags, links, [lookup(dictionary, f) for f in frags])


@dataclass
class FragmentStats:
    """フラグメント数/分子 と 原子数/トークン のヒストグラム。

    token_atoms（ダイジェスト → 非ダミー原子数）を持つので、分子ごとの部分結果を
    update で足し合わせても異なるトークンの数え方は変わらない。
    """

    fragments_per_molecule: Counter = field(default_factory=Counter)
    token_atoms: Dict[str, int] = field(default_factory=dict)
    molecules: int = 0

    def add(self, frags: Sequence[Fragment]) -> None:
        """1 分子ぶんのフラグメントを足す。"""
        self.molecules += 1
        self.fragments_per_molecule[len(frags)] += 1
        for f in frags:
            self.token_atoms.setdefault(f.digest.hex, f.heavy_atoms)

    def update(self, other: "FragmentStats") -> None:
        self.molecules += other.molecules
        self.fragments_per_molecule.update(other.fragments_per_molecule)
        for hx, n in other.token_atoms.items():
            self.token_atoms.setdefault(hx, n)

    @property
    def atoms_per_token(self) -> Counter:
        return Counter(self.token_atoms.values())

    @property
    def mean_fragments(self) -> float:
        if not self.molecules:
            return 0.0
        return sum(k * n for k, n in self.fragments_per_molecule.items()) / self.molecules

    def to_frames(self) -> Dict[str, pd.DataFrame]:
        fpm = pd.DataFrame(sorted(self.fragments_per_molecule.items()), columns=["fragments", "molecules"])
        apt = pd.DataFrame(sorted(self.atoms_per_token.items()), columns=["atoms", "tokens"])
        return {"fragments_per_molecule": fpm, "atoms_per_token": apt}


def fragment_stats(mols: Iterable[MolGraph], table: MergeTable, t: int) -> FragmentStats:
    """atoms_per_token は異なるトークン（ダイジェスト）ごとに非ダミー原子数を数える。"""
    stats = FragmentStats()
    for mol in mols:
        frags, _ = fragmentize(mol, apply_merges(mol, table, t))
        stats.add(frags)
    return stats
