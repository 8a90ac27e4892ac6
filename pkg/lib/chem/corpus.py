"""
lib/chem/corpus.py
=================================
SMILES コーパス（1 行 1 分子）の読み込み。

- UTF-8、LF / CRLF どちらも可
- 空行と '#' で始まる行はスキップ
- 2 列目（空白区切り）があれば mol_id、無ければ "L<行番号>"
- path に "-" を渡すと標準入力

公開関数一覧
------------
- iter_smiles(path) -> Iterator[(line_no, mol_id, smiles)]
- iter_smiles_lines(lines) -> Iterator[(line_no, mol_id, smiles)]
- parse_corpus(entries, strict=False) -> ParsedCorpus
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, List, Tuple, Union

from lib.chem.graph import MolGraph
from lib.chem.smiles import parse_smiles
from lib.chem.valence import sanitize
from lib.errors import FragtokError

__all__ = ["CorpusEntry", "ParsedCorpus", "iter_smiles", "iter_smiles_lines", "parse_corpus"]

logger = logging.getLogger(__name__)

CorpusEntry = Tuple[int, str, str]


def iter_smiles_lines(lines: Iterable[str]) -> Iterator[CorpusEntry]:
    for no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n").strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 1)
        mol_id = parts[1].strip() if len(parts) > 1 else f"L{no}"
        yield no, mol_id, parts[0]


def iter_smiles(path: Union[str, Path]) -> Iterator[CorpusEntry]:
    """ファイル（または '-' = stdin）から SMILES を読む。

    Raises
    ------
    OSError
        ファイルが開けない（メッセージにパスを含める）
    """
    if str(path) == "-":
        yield from iter_smiles_lines(sys.stdin)
        return
    p = Path(path)
    try:
        f = p.open("r", encoding="utf-8", newline="")
    except OSError as e:
        raise OSError(f"cannot read SMILES file {p}: {e.strerror or e}") from e
    with f:
        yield from iter_smiles_lines(f)


@dataclass
class ParsedCorpus:
    molecules: List[Tuple[str, MolGraph]] = field(default_factory=list)
    failures: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.molecules) + len(self.failures)

    @property
    def failure_rate(self) -> float:
        return len(self.failures) / self.total if self.total else 0.0


def parse_corpus(entries: Iterable[CorpusEntry], strict: bool = False) -> ParsedCorpus:
    """SMILES を parse + sanitize する。strict=False なら失敗は記録して続行。"""
    out = ParsedCorpus()
    for no, mol_id, smi in entries:
        try:
            mol = parse_smiles(smi)
            sanitize(mol)
        except FragtokError as e:
            if strict:
                raise
            logger.warning("skip line %d (%s): %s", no, smi, e, extra={"line": no})
            out.failures.append((no, str(e)))
            continue
        out.molecules.append((mol_id, mol))
    return out
