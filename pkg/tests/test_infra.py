"""
tests/test_infra.py
=================================
ログ・進捗・並列 map・コーパス読み込み。
"""

from __future__ import annotations

import io
import json
import logging

import pytest

from lib.chem import iter_smiles, iter_smiles_lines, parse_corpus
from lib.errors import ValenceError
from lib.logs import JsonLineFormatter, emit_progress, setup_logging
from lib.pipeline import ordered_map, worker_pool


# ---------- logs ----------
def test_json_line_formatter_keeps_extra():
    rec = logging.LogRecord("fragtok.x", logging.WARNING, __file__, 1, "n=%d", (3,), None)
    rec.line = 12
    payload = json.loads(JsonLineFormatter().format(rec))
    assert payload["level"] == "warning"
    assert payload["logger"] == "fragtok.x"
    assert payload["msg"] == "n=3"
    assert payload["line"] == 12
    assert "ts" in payload


def test_setup_logging_replaces_own_handler():
    buf = io.StringIO()
    setup_logging("INFO", buf)
    h = setup_logging("DEBUG", buf)
    root = logging.getLogger()
    try:
        assert sum(isinstance(x.formatter, JsonLineFormatter) for x in root.handlers) == 1
        logging.getLogger("fragtok.test").debug("hello", extra={"k": 1})
        line = json.loads(buf.getvalue().splitlines()[-1])
        assert (line["msg"], line["k"]) == ("hello", 1)
    finally:
        root.removeHandler(h)


def test_emit_progress_arities():
    two, one = [], []
    emit_progress(lambda m, f: two.append((m, f)), "step", 0.5)
    emit_progress(lambda m: one.append(m), "step", 0.5)
    emit_progress(None, "ignored")
    assert two == [("step", 0.5)]
    assert one == ["step"]


def test_emit_progress_swallows_errors():
    def boom(msg, frac):
        raise RuntimeError("ui gone")

    emit_progress(boom, "x", 0.1)


# ---------- pipeline ----------
@pytest.mark.parametrize("workers", [1, 2])
def test_ordered_map_preserves_order(workers):
    items = list(range(-50, 50))
    assert list(ordered_map(abs, items, workers=workers, chunksize=7)) == [abs(i) for i in items]


def test_ordered_map_runs_initializer_inline():
    seen = []
    out = list(ordered_map(str, [1, 2], workers=1, initializer=seen.append, initargs=("init",)))
    assert out == ["1", "2"] and seen == ["init"]


@pytest.mark.parametrize("workers", [1, 2])
def test_worker_pool_is_reused_across_maps(workers):
    with worker_pool(workers) as pool:
        assert (pool is None) == (workers == 1)
        for _ in range(3):
            out = list(ordered_map(abs, [-3, 2, -1], workers=workers, chunksize=1, executor=pool))
            assert out == [3, 2, 1]


# ---------- corpus ----------
def test_iter_smiles_lines():
    lines = ["CCO ethanol\r\n", "\n", "# comment\n", "  c1ccccc1  \n", "C(=O)O acetic acid\n"]
    assert list(iter_smiles_lines(lines)) == [
        (1, "ethanol", "CCO"),
        (4, "L4", "c1ccccc1"),
        (5, "acetic acid", "C(=O)O"),
    ]


def test_iter_smiles_missing_file(tmp_path):
    missing = tmp_path / "none.smi"
    with pytest.raises(OSError, match="none.smi"):
        list(iter_smiles(missing))


def test_iter_smiles_crlf_file(tmp_path):
    p = tmp_path / "c.smi"
    p.write_bytes(b"CCO a\r\nCC b\r\n")
    assert [e[1:] for e in iter_smiles(p)] == [("a", "CCO"), ("b", "CC")]


def test_parse_corpus_records_failures():
    entries = [(1, "a", "CCO"), (2, "b", "C1CC"), (3, "c", "C(C)(C)(C)(C)C"), (4, "d", "N")]
    parsed = parse_corpus(entries)
    assert [mid for mid, _ in parsed.molecules] == ["a", "d"]
    assert [no for no, _ in parsed.failures] == [2, 3]
    assert parsed.total == 4
    assert parsed.failure_rate == pytest.approx(0.5)


def test_parse_corpus_strict():
    with pytest.raises(ValenceError):
        parse_corpus([(1, "x", "C(C)(C)(C)(C)C")], strict=True)
