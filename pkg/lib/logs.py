# lib/logs.py
"""
lib/logs.py
=================================
ログ出力と進捗コールバックの共通部品。

- ライブラリ側は `logging.getLogger(__name__)` だけを使い、ハンドラは付けない
- CLI は `setup_logging()` で stderr に JSON Lines フォーマッタを取り付ける
  （1 行 1 オブジェクト: ts / level / logger / msg + extra フィールド）
- 進捗は `progress_cb(msg, frac)`。1 引数の callable でも受け付け、
  コールバック側の例外は握りつぶす
"""

from __future__ import annotations

import inspect
import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Callable, Optional

__all__ = ["ProgressCB", "emit_progress", "JsonLineFormatter", "setup_logging"]

ProgressCB = Optional[Callable[..., Any]]

# LogRecord が標準で持つ属性（extra 判定用）
_STD_ATTRS = set(vars(logging.LogRecord("x", 0, "", 0, "", (), None))) | {"message", "asctime"}


def emit_progress(cb: ProgressCB, msg: str, frac: Optional[float] = None) -> None:
    """progress_cb を安全に呼ぶ（1引数/2引数の両対応）"""
    if cb is None:
        return
    try:
        sig = inspect.signature(cb)
        n_params = len([p for p in sig.parameters.values()
                        if p.kind in (p.POSITIONAL_ONLY, p.POSITIONAL_OR_KEYWORD)])
        if n_params >= 2:
            cb(msg, frac)
        else:
            cb(msg)
    except Exception:
        # フォールバック（とにかく落とさない）
        try:
            cb(msg)
        except Exception:
            pass


class JsonLineFormatter(logging.Formatter):
    """LogRecord → 1 行の JSON。"""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "ts": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(timespec="milliseconds"),
            "level": record.levelname.lower(),
            "logger": record.name,
            "msg": record.getMessage(),
        }
        for key, value in vars(record).items():
            if key not in _STD_ATTRS and not key.startswith("_"):
                payload[key] = value
        if record.exc_info:
            payload["exc"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False, default=str)


def setup_logging(level: str = "INFO", stream=None) -> logging.Handler:
    """root logger に JSON Lines ハンドラを 1 つだけ取り付ける。"""
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(JsonLineFormatter())
    root = logging.getLogger()
    for h in list(root.handlers):
        if isinstance(h.formatter, JsonLineFormatter):
            root.removeHandler(h)
    root.addHandler(handler)
    root.setLevel(level.upper())
    return handler
