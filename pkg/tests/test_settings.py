"""
tests/test_settings.py
=================================
AppSettings / RunConfig（決定順・検証・パス解決）。
"""

from __future__ import annotations

from pathlib import Path

import pytest

from lib.app_settings import APP_ROOT, DEFAULTS, AppSettings, RunConfig, build_run_config, resolve_path
from lib.errors import ConfigError


@pytest.fixture
def toml_file(tmp_path):
    p = tmp_path / "settings.toml"
    p.write_text(
        '[tokenizer]\nt = 7\nnum_iter = 12\n\n[run]\nworkers = 3\nseed = 5\n\n[paths]\nmerges = "project:work/m.json"\n',
        encoding="utf-8",
    )
    return p


def test_defaults_without_file(tmp_path):
    s = AppSettings(tmp_path / "missing.toml", environ={})
    assert s.get("tokenizer", "t") == DEFAULTS["tokenizer"]["t"]
    assert s.errors == []
    assert s.merges_path == (APP_ROOT / "data" / "merges.json").resolve()


def test_toml_overrides_defaults(toml_file):
    s = AppSettings(toml_file, environ={})
    assert s.get("tokenizer", "t") == 7
    assert s.get("run", "workers") == 3
    assert s.get("posenc", "d0") == DEFAULTS["posenc"]["d0"]
    assert s.merges_path == (APP_ROOT / "work" / "m.json").resolve()


def test_env_overrides_toml(toml_file):
    s = AppSettings(toml_file, environ={"FRAGTOK_T": "9", "FRAGTOK_WORKERS": " 2 "})
    assert s.get("tokenizer", "t") == 9
    assert s.get("run", "workers") == 2
    assert s.get("run", "seed") == 5


def test_cli_overrides_env(toml_file):
    s = AppSettings(toml_file, environ={"FRAGTOK_T": "9"})
    assert build_run_config("dict", {"t": 4}, s).t == 4
    assert build_run_config("dict", {"t": None}, s).t == 9
    cfg = build_run_config("train", {}, s)
    assert (cfg.num_iter, cfg.workers, cfg.seed) == (12, 3, 5)


def test_bad_env_value_is_deferred(toml_file):
    s = AppSettings(toml_file, environ={"FRAGTOK_SEED": "abc"})
    assert s.get("run", "seed") == 5
    assert len(s.errors) == 1 and "FRAGTOK_SEED" in s.errors[0]
    with pytest.raises(ConfigError, match="FRAGTOK_SEED"):
        build_run_config("dataset", {}, s)


def test_broken_toml_falls_back(tmp_path):
    p = tmp_path / "settings.toml"
    p.write_text("[tokenizer\nt = ", encoding="utf-8")
    assert AppSettings(p, environ={}).get("tokenizer", "t") == DEFAULTS["tokenizer"]["t"]


@pytest.mark.parametrize(
    "flags",
    [
        {"workers": 0},
        {"t": -1},
        {"num_iter": -2},
        {"d0": 0.0},
        {"z_mode": "mulliken"},
        {"max_failure_rate": 1.5},
        {"max_mappings": 0},
        {"format": "xml"},
    ],
)
def test_validation(tmp_path, flags):
    s = AppSettings(tmp_path / "missing.toml", environ={})
    with pytest.raises(ConfigError):
        build_run_config("tokenize", flags, s)


def test_check_t():
    cfg = RunConfig("dict", t=5)
    cfg.check_t(5)
    with pytest.raises(ConfigError):
        cfg.check_t(4)


def test_cli_paths(tmp_path):
    s = AppSettings(tmp_path / "missing.toml", environ={})
    cfg = build_run_config("dataset", {"out": "rel/out.jsonl", "merges": "project:x/m.json", "no_mask": True}, s)
    assert cfg.out == Path("rel/out.jsonl")
    assert cfg.merges == (APP_ROOT / "x" / "m.json").resolve()
    assert cfg.dictionary == s.dictionary_path
    assert cfg.mask is False
    assert cfg.to_dict()["out"] == str(Path("rel/out.jsonl"))


def test_resolve_path():
    assert resolve_path(None) is None
    assert resolve_path("", Path("d")) == Path("d")
    assert resolve_path("project:data") == (APP_ROOT / "data").resolve()
    assert resolve_path("sub/a\\ b.json") == (APP_ROOT / "sub" / "a b.json").resolve()
    assert resolve_path("/abs/x.json") == Path("/abs/x.json").resolve()


def test_to_dict_for_ui(toml_file):
    d = AppSettings(toml_file, environ={}).to_dict()
    assert d["tokenizer.t"] == "7"
    assert d["settings_path"] == str(toml_file)
