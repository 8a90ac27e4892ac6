# lib/tokenizer/store.py
"""
マージ表・トークン辞書の JSON 入出力。

- どちらも整数 `version` を持ち、読み込み側は FORMAT_VERSION 以外を FormatVersionError で拒否
- 書き出しは json.dumps(ensure_ascii=False, indent=2)、キー順は固定（同じ入力ならバイト一致）
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from lib.chem.graph import Atom, Bond, BondOrder, BondStereo, ChiralTag, MolGraph
from lib.errors import FormatVersionError
from lib.tokenizer.dictionary import TokenDictionary, TokenEntry
from lib.tokenizer.merges import BASE_LABEL, FORMAT_VERSION, MergeRule, MergeTable
from lib.wl.hashing import wl_hash

__all__ = [
    "graph_to_record",
    "graph_from_record",
    "merge_table_to_dict",
    "merge_table_from_dict",
    "dictionary_to_dict",
    "dictionary_from_dict",
    "save_merge_table",
    "load_merge_table",
    "save_dictionary",
    "load_dictionary",
]

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


# ---------- graph ----------
def graph_to_record(mol: MolGraph) -> Dict[str, List[List[int]]]:
    """atoms: [Z, charge, explicit_h, aromatic, no_implicit, chiral]
    bonds: [begin, end, order, stereo, ref_begin, ref_end]（参照なしは -1）"""
    atoms = [
        [a.atomic_number, a.formal_charge, a.explicit_h, int(a.aromatic), int(a.no_implicit), int(a.chiral_tag)]
        for a in mol.atoms
    ]
    bonds = []
    for b in mol.bonds:
        x, y = b.stereo_atoms if b.stereo_atoms is not None else (-1, -1)
        bonds.append([b.begin, b.end, int(b.order), int(b.stereo), x, y])
    return {"atoms": atoms, "bonds": bonds}


def graph_from_record(rec: Dict[str, Any]) -> MolGraph:
    atoms = [
        Atom(
            atomic_number=int(z),
            formal_charge=int(q),
            explicit_h=int(h),
            aromatic=bool(ar),
            no_implicit=bool(ni),
            chiral_tag=ChiralTag(int(ch)),
        )
        for z, q, h, ar, ni, ch in rec["atoms"]
    ]
    bonds = [
        Bond(
            int(i), int(j), BondOrder(int(o)),
            stereo=BondStereo(int(s)),
            stereo_atoms=None if int(x) < 0 else (int(x), int(y)),
        )
        for i, j, o, s, x, y in rec["bonds"]
    ]
    return MolGraph.from_parts(atoms, bonds)


def _check_version(kind: str, data: Dict[str, Any]) -> None:
    v = data.get("version")
    if v != FORMAT_VERSION:
        raise FormatVersionError(kind, v, FORMAT_VERSION)


def _write_json(path: PathLike, payload: Dict[str, Any]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    return p


def _read_json(path: PathLike) -> Dict[str, Any]:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{p}: invalid JSON ({e})") from e
    if not isinstance(data, dict):
        raise ValueError(f"{p}: expected a JSON object")
    return data


# ---------- merge table ----------
def merge_table_to_dict(table: MergeTable) -> Dict[str, Any]:
    return {
        "version": table.version,
        "corpus_fingerprint": table.corpus_fingerprint,
        "base_label": table.base_label,
        "rules": [
            {"left": r.left, "right": r.right, "order": r.order.name, "new": r.new}
            for r in table.rules
        ],
    }


def merge_table_from_dict(data: Dict[str, Any]) -> MergeTable:
    _check_version("merge table", data)
    rules = tuple(
        MergeRule(int(r["left"]), int(r["right"]), BondOrder[r["order"]], int(r["new"]))
        for r in data.get("rules", [])
    )
    return MergeTable(
        rules=rules,
        corpus_fingerprint=str(data.get("corpus_fingerprint", "")),
        version=FORMAT_VERSION,
        base_label=int(data.get("base_label", BASE_LABEL)),
    )


def save_merge_table(table: MergeTable, path: PathLike) -> Path:
    return _write_json(path, merge_table_to_dict(table))


def load_merge_table(path: PathLike) -> MergeTable:
    return merge_table_from_dict(_read_json(path))


# ---------- dictionary ----------
def dictionary_to_dict(d: TokenDictionary) -> Dict[str, Any]:
    entries = sorted(d.entries.values(), key=lambda e: e.token_id)
    return {
        "version": d.version,
        "t": d.t,
        "specials": dict(d.specials),
        "corpus_fingerprint": d.corpus_fingerprint,
        "merges_fingerprint": d.merges_fingerprint,
        "merges_corpus_fingerprint": d.merges_corpus_fingerprint,
        "entries": [
            {"digest": e.digest, "token_id": e.token_id, "smiles": e.smiles, "count": e.count,
             **graph_to_record(e.graph)}
            for e in entries
        ],
    }


def dictionary_from_dict(data: Dict[str, Any], verify: bool = False) -> TokenDictionary:
    """verify=True なら各エントリのグラフを再ハッシュしてダイジェストと照合（不一致は warning）。"""
    _check_version("token dictionary", data)
    entries: Dict[str, TokenEntry] = {}
    for rec in data.get("entries", []):
        graph = graph_from_record(rec)
        key = str(rec["digest"])
        if verify and wl_hash(graph).hex != key:
            logger.warning("entry %s: stored graph hashes differently", key, extra={"digest": key})
        entries[key] = TokenEntry(key, int(rec["token_id"]), str(rec["smiles"]), graph, int(rec["count"]))
    return TokenDictionary(
        entries=entries,
        t=int(data.get("t", 0)),
        specials={str(k): int(v) for k, v in data.get("specials", {}).items()},
        corpus_fingerprint=str(data.get("corpus_fingerprint", "")),
        merges_fingerprint=str(data.get("merges_fingerprint", "")),
        merges_corpus_fingerprint=str(data.get("merges_corpus_fingerprint", "")),
    )


def save_dictionary(d: TokenDictionary, path: PathLike) -> Path:
    return _write_json(path, dictionary_to_dict(d))


def load_dictionary(path: PathLike, verify: bool = False) -> TokenDictionary:
    return dictionary_from_dict(_read_json(path), verify=verify)
