"""
lib/cli/main.py
=================================
fragtok コマンドライン。

サブコマンド
------------
- train      SMILES コーパスからマージ表を学習
- dict       マージ表の先頭 t 個でトークン辞書を作成
- tokenize   分子ごとのトークン id / ダイジェスト / フラグメント SMILES（jsonl / csv）
- hash       1 行 1 ダイジェスト（失敗した分子は空行）
- dataset    MFM 用 JSONL（--no-mask で推論用）
- stats      fragments_per_molecule.csv / atoms_per_token.csv
- analogues  スキャフォールド × 候補フラグメントの類縁体 JSONL

終了コード: 0 正常 / 1 一部失敗（ログ参照） / 2 設定・入力エラー
ログは stderr に 1 行 1 JSON。
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

from tqdm import tqdm

from lib.analogue import generate_analogues
from lib.app_settings import RunConfig, build_run_config
from lib.chem import MolGraph, iter_smiles, parse_corpus, parse_smiles, sanitize
from lib.errors import ConfigError, FragtokError
from lib.logs import setup_logging
from lib.pipeline import ordered_map
from lib.posenc import ZMode
from lib.sequence import emit_dataset
from lib.tokenizer import (
    FragmentCounts,
    FragmentStats,
    MergeTable,
    TokenDictionary,
    apply_merges,
    corpus_fingerprint,
    dictionary_from_counts,
    fragmentize,
    load_dictionary,
    load_merge_table,
    lookup,
    save_dictionary,
    save_merge_table,
    train,
)
from lib.wl import wl_hash

__all__ = ["main", "build_parser"]

logger = logging.getLogger("fragtok")

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2


# ============================================================
# 引数
# ============================================================
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fragtok", description="molecular graph tokenizer")
    p.add_argument("--log-level", default="INFO")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, *, inputs: bool = True) -> None:
        if inputs:
            sp.add_argument("--input", "-i", action="append", help="SMILES file ('-' = stdin); repeatable")
        sp.add_argument("--workers", type=int, default=None)
        sp.add_argument("--out", "-o", default=None)

    def gran(sp: argparse.ArgumentParser, *, with_dict: bool) -> None:
        sp.add_argument("--merges", default=None)
        if with_dict:
            sp.add_argument("--dict", default=None)
        sp.add_argument("--t", type=int, default=None)

    sp = sub.add_parser("train", help="learn the merge table")
    common(sp)
    sp.add_argument("--num-iter", dest="num_iter", type=int, default=None)
    sp.add_argument("--max-failure-rate", dest="max_failure_rate", type=float, default=None)

    sp = sub.add_parser("dict", help="build the token dictionary")
    common(sp)
    gran(sp, with_dict=False)

    sp = sub.add_parser("tokenize", help="tokenize molecules")
    common(sp)
    gran(sp, with_dict=True)
    sp.add_argument("--format", choices=["jsonl", "csv"], default=None)

    sp = sub.add_parser("hash", help="print one WL digest per molecule")
    common(sp)
    sp.add_argument("--wl-iterations", dest="wl_iterations", type=int, default=None)

    sp = sub.add_parser("dataset", help="emit the MFM dataset (JSONL)")
    common(sp)
    gran(sp, with_dict=True)
    sp.add_argument("--d0", type=float, default=None)
    sp.add_argument("--z-mode", dest="z_mode", choices=[m.value for m in ZMode], default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--no-mask", dest="no_mask", action="store_true", help="inference records (no masking)")

    sp = sub.add_parser("stats", help="fragment statistics CSVs")
    common(sp)
    gran(sp, with_dict=False)

    sp = sub.add_parser("analogues", help="fragment-swap analogue generation")
    common(sp, inputs=False)
    sp.add_argument("--scaffold", required=True, help="scaffold SMILES with '*' attachment points")
    sp.add_argument("--input", "-i", action="append", help="candidate fragment SMILES file")
    sp.add_argument("--max-mappings", dest="max_mappings", type=int, default=None)
    return p


# ============================================================
# 共通処理
# ============================================================
def _progress() -> bool:
    return sys.stderr.isatty()


def _read_corpus(cfg: RunConfig) -> Tuple[List[Tuple[str, MolGraph]], int]:
    """入力ファイルを順に読み、(mol_id, MolGraph) と失敗数を返す。"""
    if not cfg.inputs:
        raise ConfigError("no --input given")
    entries = []
    for path in cfg.inputs:
        entries.extend(iter_smiles(path))
    parsed = parse_corpus(tqdm(entries, desc="parse", disable=not _progress(), file=sys.stderr))
    if parsed.failures:
        logger.warning("%d of %d molecules failed to parse", len(parsed.failures), parsed.total,
                       extra={"failed": len(parsed.failures), "total": parsed.total})
    return parsed.molecules, len(parsed.failures)


def _load_table(cfg: RunConfig) -> MergeTable:
    if cfg.merges is None or not cfg.merges.exists():
        raise ConfigError(f"merge table not found: {cfg.merges}")
    table = load_merge_table(cfg.merges)
    cfg.check_t(len(table))
    return table


def _load_dict(cfg: RunConfig) -> TokenDictionary:
    if cfg.dictionary is None or not cfg.dictionary.exists():
        raise ConfigError(f"token dictionary not found: {cfg.dictionary}")
    d = load_dictionary(cfg.dictionary)
    if d.t != cfg.t:
        logger.warning("dictionary was built at t=%d, tokenizing at t=%d", d.t, cfg.t,
                       extra={"dict_t": d.t, "t": cfg.t})
    return d


@contextmanager
def _output(path: Optional[Path]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        yield f


# ---------- ワーカー（プロセス間で共有する状態） ----------
_W: Dict[str, Any] = {}


def _init_worker(table: Optional[MergeTable], t: int, dictionary: Optional[TokenDictionary]) -> None:
    _W.clear()
    _W.update(table=table, t=t, dictionary=dictionary)


def _tokenize_one(item: Tuple[str, MolGraph]) -> Dict[str, Any]:
    mol_id, mol = item
    frags, _ = fragmentize(mol, apply_merges(mol, _W["table"], _W["t"]))
    return {
        "mol_id": mol_id,
        "token_ids": [lookup(_W["dictionary"], f) for f in frags],
        "digests": [f.digest.hex for f in frags],
        "fragments": [f.smiles for f in frags],
    }


def _count_one(item: Tuple[str, MolGraph]) -> FragmentCounts:
    _, mol = item
    out = FragmentCounts()
    frags, _ = fragmentize(mol, apply_merges(mol, _W["table"], _W["t"]))
    for f in frags:
        out.add(f)
    return out


def _stats_one(item: Tuple[str, MolGraph]) -> FragmentStats:
    _, mol = item
    out = FragmentStats()
    out.add(fragmentize(mol, apply_merges(mol, _W["table"], _W["t"]))[0])
    return out


def _hash_one(item: Tuple[int, str, str, int]) -> Tuple[int, Optional[str], Optional[str]]:
    no, _mol_id, smi, T = item
    try:
        mol = parse_smiles(smi)
        sanitize(mol)
    except FragtokError as e:
        return no, None, str(e)
    return no, wl_hash(mol, T).hex, None


# ============================================================
# サブコマンド
# ============================================================
def cmd_train(cfg: RunConfig) -> int:
    mols, failed = _read_corpus(cfg)
    total = len(mols) + failed
    rate = failed / total if total else 0.0
    if rate > cfg.parse_failure_threshold:
        logger.error("parse failure rate %.3f exceeds %.3f", rate, cfg.parse_failure_threshold,
                     extra={"failure_rate": rate})
        return EXIT_PARTIAL
    bar = tqdm(total=cfg.num_iter, desc="train", disable=not _progress(), file=sys.stderr)

    def cb(msg: str, frac: Optional[float]) -> None:
        bar.update(1)

    try:
        table = train((m for _, m in mols), cfg.num_iter, progress_cb=cb, workers=cfg.workers)
    finally:
        bar.close()
    out = cfg.out or cfg.merges
    save_merge_table(table, out)
    logger.info("merge table written to %s", out, extra={"rules": len(table), "molecules": len(mols)})
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_dict(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    mols, failed = _read_corpus(cfg)
    counts = FragmentCounts()
    results = ordered_map(_count_one, mols, workers=cfg.workers,
                          initializer=_init_worker, initargs=(table, cfg.t, None))
    for part in tqdm(results, total=len(mols), desc="dict", disable=not _progress(), file=sys.stderr):
        counts.update(part)
    d = dictionary_from_counts(counts, table, cfg.t, corpus_fingerprint(m for _, m in mols) if mols else "")
    out = cfg.out or cfg.dictionary
    save_dictionary(d, out)
    logger.info("dictionary written to %s", out, extra={"tokens": len(d), "t": cfg.t})
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_tokenize(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    d = _load_dict(cfg)
    mols, failed = _read_corpus(cfg)
    results = ordered_map(_tokenize_one, mols, workers=cfg.workers,
                          initializer=_init_worker, initargs=(table, cfg.t, d))
    with _output(cfg.out) as f:
        writer = None
        for rec in results:
            if cfg.fmt == "jsonl":
                f.write(json.dumps(rec, ensure_ascii=False) + "\n")
            else:
                if writer is None:
                    writer = csv.writer(f)
                    writer.writerow(["mol_id", "token_ids", "digests", "fragments"])
                writer.writerow([rec["mol_id"], " ".join(map(str, rec["token_ids"])),
                                 " ".join(rec["digests"]), " ".join(rec["fragments"])])
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_hash(cfg: RunConfig) -> int:
    if not cfg.inputs:
        raise ConfigError("no --input given")
    items = [(no, mol_id, smi, cfg.wl_iterations) for path in cfg.inputs for no, mol_id, smi in iter_smiles(path)]
    failed = 0
    with _output(cfg.out) as f:
        for no, hx, err in ordered_map(_hash_one, items, workers=cfg.workers):
            if hx is None:
                failed += 1
                logger.warning("line %d: %s", no, err, extra={"line": no})
                # 入力 1 分子 = 出力 1 行（失敗は空行）
                hx = ""
            f.write(hx + "\n")
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_dataset(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    d = _load_dict(cfg)
    mols, failed = _read_corpus(cfg)
    out = cfg.out or Path("dataset.jsonl")
    summary = emit_dataset(
        mols, table, cfg.t, d, out,
        rng_seed=cfg.seed, mask=cfg.mask, d0=cfg.d0, z_mode=ZMode(cfg.z_mode),
        bucket_width=cfg.bucket_width, workers=cfg.workers,
    )
    return EXIT_PARTIAL if (failed or summary.failed) else EXIT_OK


def cmd_stats(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    mols, failed = _read_corpus(cfg)
    stats = FragmentStats()
    for part in ordered_map(_stats_one, mols, workers=cfg.workers,
                            initializer=_init_worker, initargs=(table, cfg.t, None)):
        stats.update(part)
    out_dir = cfg.out or Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, df in stats.to_frames().items():
        df.to_csv(out_dir / f"{name}.csv", index=False)
    logger.info("stats written to %s", out_dir,
                extra={"molecules": stats.molecules, "mean_fragments": stats.mean_fragments})
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_analogues(cfg: RunConfig, scaffold_smiles: str) -> int:
    scaffold = parse_smiles(scaffold_smiles)
    sanitize(scaffold)
    cands, failed = _read_corpus(cfg)
    aset = generate_analogues(scaffold, [m for _, m in cands], cfg.max_mappings)
    with _output(cfg.out) as f:
        for r in aset.results:
            f.write(json.dumps({"candidate_index": r.candidate_index,
                                "mapping": [list(p) for p in r.mapping],
                                "smiles": r.smiles, "digest": r.digest}, ensure_ascii=False) + "\n")
        f.write(json.dumps({"summary": {"products": len(aset.results),
                                        "candidates": len(cands),
                                        "rejected": dict(sorted(aset.rejected.items())),
                                        "truncated": aset.truncated}}) + "\n")
    return EXIT_PARTIAL if failed else EXIT_OK


_COMMANDS = {
    "train": cmd_train,
    "dict": cmd_dict,
    "tokenize": cmd_tokenize,
    "hash": cmd_hash,
    "dataset": cmd_dataset,
    "stats": cmd_stats,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        cfg = build_run_config(args.command, vars(args))
        if args.command == "analogues":
            return cmd_analogues(cfg, args.scaffold)
        return _COMMANDS[args.command](cfg)
    except (FragtokError, OSError, ValueError) as e:
        # 設定・入力ファイル・引数の問題（ConfigError / EmptyCorpus / FormatVersionError / 壊れた JSON など）
        logger.error("%s", e, extra={"error": type(e).__name__})
        return EXIT_CONFIG
    except KeyboardInterrupt:
        logger.warning("interrupted")
        return 130


if __name__ == "__main__":
    sys.exit(main())
