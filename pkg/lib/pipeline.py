# lib/pipeline.py
"""
lib/pipeline.py
=================================
コーパス処理用の順序保存 map。

- workers == 1 ならプロセス内で逐次実行
- workers > 1 なら ProcessPoolExecutor.map（結果は入力順に yield される）
- KeyboardInterrupt では未着手のタスクを取り消し、プールを片付けてから再送出
- initializer / initargs でワーカーごとの重い状態（マージ表・辞書）を 1 回だけ渡す
- 反復ごとに何度も map する処理（マージ学習）は worker_pool で開いたプールを
  executor= に渡して使い回す
"""

from __future__ import annotations

import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence, TypeVar

__all__ = ["ordered_map", "worker_pool"]

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@contextmanager
def worker_pool(workers: int) -> Iterator[Optional[Executor]]:
    """workers > 1 ならプロセスプール、そうでなければ None を渡す。"""
    if workers <= 1:
        yield None
        return
    ex = ProcessPoolExecutor(max_workers=workers)
    try:
        yield ex
    except KeyboardInterrupt:
        logger.warning("interrupted; cancelling pending work")
        ex.shutdown(wait=True, cancel_futures=True)
        raise
    finally:
        ex.shutdown(wait=True)


def ordered_map(
    func: Callable[[T], R],
    items: Iterable[T],
    workers: int = 1,
    chunksize: int = 16,
    initializer: Optional[Callable[..., Any]] = None,
    initargs: Sequence[Any] = (),
    executor: Optional[Executor] = None,
) -> Iterator[R]:
    if executor is not None:
        # 呼び出し側のプール（片付けも呼び出し側）
        yield from executor.map(func, items, chunksize=max(1, chunksize))
        return

    if workers <= 1:
        if initializer is not None:
            initializer(*initargs)
        for item in items:
            yield func(item)
        return

    ex = ProcessPoolExecutor(max_workers=workers, initializer=initializer, initargs=tuple(initargs))
    try:
        yield from ex.map(func, items, chunksize=max(1, chunksize))
    except KeyboardInterrupt:
        logger.warning("interrupted; cancelling pending work")
        ex.shutdown(wait=True, cancel_futures=True)
        raise
    finally:
        ex.shutdown(wait=True)
