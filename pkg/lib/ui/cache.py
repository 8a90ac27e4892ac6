"""
lib/ui/cache.py
=================================
Streamlit があれば `st.cache_data` / `st.cache_resource` を返し、
無ければ no-op デコレータを返すファクトリ。

ライブラリ層（lib/chem, lib/tokenizer ...）は Streamlit に依存しない。
UI 層（pages/）と lib/ui/loaders.py だけがこのファクトリ経由でキャッシュする。

使い方
------
    from lib.ui.cache import cache_resource

    @cache_resource()(show_spinner=False)
    def load_table(path: str, mtime_ns: int): ...

公開関数一覧
------------
- cache_data() -> Callable
- cache_resource() -> Callable
"""

from __future__ import annotations

from typing import Callable


def _noop(*args, **kwargs) -> Callable:
    def _wrap(func):
        return func
    return _wrap


def cache_data() -> Callable:
    """Streamlit 環境では `st.cache_data`、それ以外では no-op デコレータ。"""
    try:
        import streamlit as st  # type: ignore
        return st.cache_data
    except Exception:
        return _noop


def cache_resource() -> Callable:
    """マージ表・辞書のように pickle したくない大きなオブジェクト用。"""
    try:
        import streamlit as st  # type: ignore
        return st.cache_resource
    except Exception:
        return _noop
