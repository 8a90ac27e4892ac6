"""
lib/ui/loaders.py
=================================
UI 用のキャッシュ付きローダ。

キャッシュキーは (パス, mtime_ns)。ファイルを作り直せば自動で読み直す。

公開関数一覧
------------
- file_stamp(path) -> int | None
- load_table_cached(path) -> MergeTable | None
- load_dictionary_cached(path) -> TokenDictionary | None
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from lib.tokenizer import MergeTable, TokenDictionary, load_dictionary, load_merge_table
from lib.ui.cache import cache_resource


def file_stamp(path: Optional[Path]) -> Optional[int]:
    if path is None or not Path(path).is_file():
        return None
    return Path(path).stat().st_mtime_ns


@cache_resource()(show_spinner=False)
def _load_table(path: str, mtime_ns: int) -> MergeTable:
    return load_merge_table(path)


@cache_resource()(show_spinner=False)
def _load_dictionary(path: str, mtime_ns: int) -> TokenDictionary:
    return load_dictionary(path)


def load_table_cached(path: Optional[Path]) -> Optional[MergeTable]:
    stamp = file_stamp(path)
    return None if stamp is None else _load_table(str(path), stamp)


def load_dictionary_cached(path: Optional[Path]) -> Optional[TokenDictionary]:
    stamp = file_stamp(path)
    return None if stamp is None else _load_dictionary(str(path), stamp)
