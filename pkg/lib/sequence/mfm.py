"""
lib/sequence/mfm.py
=================================
MFM（masked fragment modeling）レコードの作成と JSONL 書き出し。

- 1 レコード 1 マスク。位置と構造（links / hop / role / Coulomb）はそのまま残し、
  トークン id を MASK に、入力側ダイジェストを null に置き換える
- RANDOM 位置は numpy の Generator（seed = [rng_seed, 分子の通し番号]）で決める
  → ワーカー数に関係なく同じ位置になる
- 学習用（mask=True）では N=1 と UNK を含む系列をスキップしてカウント
- 推論用（mask=False）では全系列をマスクなしで書き出す
- 実数は有効数字 9 桁

公開関数一覧
------------
- make_mfm_record(seq, position, rng_seed) -> MFMRecord
- sequence_to_record(seq, masked=None) -> dict
- emit_dataset(corpus, table, t, dictionary, out_path, rng_seed, ...) -> EmitSummary
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from lib.chem.graph import MolGraph
from lib.errors import FragtokError, SequenceTooShort
from lib.logs import ProgressCB, emit_progress
from lib.pipeline import ordered_map
from lib.posenc.spatial import DEFAULT_BUCKET_WIDTH, DEFAULT_D0, ZMode, bucketize
from lib.sequence.serialize import FragmentSequence, serialize
from lib.tokenizer.dictionary import MASK, TokenDictionary
from lib.tokenizer.merges import MergeTable

__all__ = [
    "RANDOM",
    "MFMRecord",
    "EmitSummary",
    "make_mfm_record",
    "sequence_to_record",
    "emit_dataset",
]

logger = logging.getLogger(__name__)

RANDOM = "random"
_SIG = 9


@dataclass(frozen=True)
class MFMRecord:
    sequence: FragmentSequence
    masked_position: int
    target_token_id: int
    target_digest: str


def _pick_position(n: int, rng_seed: Union[int, Tuple[int, ...]]) -> int:
    seed = list(rng_seed) if isinstance(rng_seed, tuple) else [int(rng_seed)]
    return int(np.random.default_rng(seed).integers(n))


def make_mfm_record(
    seq: FragmentSequence,
    position: Union[int, str] = RANDOM,
    rng_seed: Union[int, Tuple[int, ...]] = 0,
) -> MFMRecord:
    """1 か所だけマスクしたレコードを作る。

    Raises
    ------
    SequenceTooShort
        N < 2
    """
    n = len(seq)
    if n < 2:
        raise SequenceTooShort(n)
    pos = _pick_position(n, rng_seed) if position == RANDOM else int(position)
    if not 0 <= pos < n:
        raise ValueError(f"mask position {pos} outside 0..{n - 1}")
    target_id = seq.token_ids[pos]
    target_digest = seq.digests[pos]
    tokens = list(seq.token_ids)
    tokens[pos] = MASK
    digests = list(seq.digests)
    digests[pos] = None
    masked = replace(seq, token_ids=tuple(tokens), digests=tuple(digests))
    return MFMRecord(masked, pos, target_id, str(target_digest))


def _r(v: float) -> float:
    return float(f"{float(v):.{_SIG}g}")


def sequence_to_record(
    seq: FragmentSequence,
    masked: Optional[MFMRecord] = None,
    bucket_width: float = DEFAULT_BUCKET_WIDTH,
) -> Dict[str, Any]:
    """JSONL 1 行ぶんの dict（キー順固定）。"""
    s = masked.sequence if masked is not None else seq
    buckets = bucketize(s.hop, s.coulomb, bucket_width)
    return {
        "mol_id": s.mol_id,
        "t": s.t,
        "token_ids": list(s.token_ids),
        "digests": list(s.digests),
        "edges": [list(e) for e in s.fragment_graph.edges],
        "links": [[l.frag_i, l.dummy_i, l.frag_j, l.dummy_j, int(l.order)] for l in s.links],
        "hop": buckets["hop"],
        "roles": list(s.roles.w),
        "coulomb_row_means": [_r(v) for v in s.coulomb.row_means],
        "coulomb_buckets": buckets["coulomb"],
        "coulomb_bucket_width": buckets["coulomb_bucket_width"],
        "charges": [_r(v) for v in s.charges],
        "descriptors": [_r(v) for v in s.descriptors.d],
        "masked_position": masked.masked_position if masked else None,
        "masked_positions": [masked.masked_position] if masked else [],
        "target_token_id": masked.target_token_id if masked else None,
        "target_digest": masked.target_digest if masked else None,
    }


@dataclass
class EmitSummary:
    records: int = 0
    skipped_short: int = 0
    skipped_unk: int = 0
    failed: int = 0
    tokens: int = 0
    unk_tokens: int = 0

    @property
    def skipped(self) -> int:
        return self.skipped_short + self.skipped_unk

    @property
    def unk_rate(self) -> float:
        return self.unk_tokens / self.tokens if self.tokens else 0.0

    def as_dict(self) -> Dict[str, Any]:
        return {
            "records": self.records,
            "skipped": self.skipped,
            "skipped_short": self.skipped_short,
            "skipped_unk": self.skipped_unk,
            "failed": self.failed,
            "unk_rate": _r(self.unk_rate),
        }


# ---------- worker ----------
_STATE: Dict[str, Any] = {}


def _init_worker(table: MergeTable, t: int, dictionary: TokenDictionary, rng_seed: int,
                 mask: bool, d0: float, z_mode: str, bucket_width: float) -> None:
    _STATE.update(table=table, t=t, dictionary=dictionary, rng_seed=rng_seed,
                  mask=mask, d0=d0, z_mode=ZMode(z_mode), bucket_width=bucket_width)


def _process(item: Tuple[int, str, MolGraph]) -> Tuple[str, Any, int, int]:
    """(status, payload, tokens, unk_tokens) を返す。status: ok / short / unk / error"""
    index, mol_id, mol = item
    st = _STATE
    try:
        seq = serialize(mol, st["table"], st["t"], st["dictionary"], mol_id, st["d0"], st["z_mode"])
    except FragtokError as e:
        return "error", f"{mol_id}: {e}", 0, 0
    n, unk = len(seq), seq.unk_count
    if not st["mask"]:
        rec = sequence_to_record(seq, None, st["bucket_width"])
        return "ok", json.dumps(rec, ensure_ascii=False), n, unk
    if n < 2:
        return "short", None, n, unk
    if unk:
        return "unk", None, n, unk
    masked = make_mfm_record(seq, RANDOM, (st["rng_seed"], index))
    rec = sequence_to_record(seq, masked, st["bucket_width"])
    return "ok", json.dumps(rec, ensure_ascii=False), n, unk


def emit_dataset(
    corpus: Iterable[Union[MolGraph, Tuple[str, MolGraph]]],
    table: MergeTable,
    t: int,
    dictionary: TokenDictionary,
    out_path: Union[str, Path],
    rng_seed: int = 0,
    mask: bool = True,
    d0: float = DEFAULT_D0,
    z_mode: ZMode = ZMode.ATOMIC_SUM,
    bucket_width: float = DEFAULT_BUCKET_WIDTH,
    workers: int = 1,
    progress_cb: ProgressCB = None,
) -> EmitSummary:
    """コーパスを JSONL に書き出す（入力順、同じ seed ならバイト一致）。

    Raises
    ------
    OSError
        出力ファイルに書けない（メッセージにパスを含む）
    """
    table.prefix(t)
    items: List[Tuple[int, str, MolGraph]] = []
    for k, entry in enumerate(corpus):
        if isinstance(entry, MolGraph):
            items.append((k, f"M{k}", entry))
        else:
            items.append((k, str(entry[0]), entry[1]))

    out = Path(out_path)
    summary = EmitSummary()
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        f = out.open("w", encoding="utf-8", newline="\n")
    except OSError as e:
        raise OSError(f"cannot write dataset {out}: {e.strerror or e}") from e

    initargs = (table, t, dictionary, rng_seed, mask, d0, ZMode(z_mode).value, bucket_width)
    with f:
        results = ordered_map(_process, items, workers=workers, initializer=_init_worker, initargs=initargs)
        for k, (status, payload, n, unk) in enumerate(results):
            summary.tokens += n
            summary.unk_tokens += unk
            if status == "ok":
                try:
                    f.write(payload + "\n")
                except OSError as e:
                    raise OSError(f"cannot write dataset {out}: {e.strerror or e}") from e
                summary.records += 1
            elif status == "short":
                summary.skipped_short += 1
            elif status == "unk":
                summary.skipped_unk += 1
            else:
                summary.failed += 1
                logger.warning("dataset: %s", payload)
            if (k + 1) % 1000 == 0 or k + 1 == len(items):
                emit_progress(progress_cb, f"dataset {k + 1}/{len(items)}", (k + 1) / len(items))

    logger.info("dataset written to %s", out, extra=summary.as_dict())
    return summary
