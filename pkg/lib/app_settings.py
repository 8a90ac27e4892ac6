# lib/app_settings.py
# =================================
# fragtok 用 設定マネージャ
# - 設定: config/settings.toml / .streamlit/settings.toml / settings.toml
# - 値の決定順: CLI 引数 > 環境変数 > settings.toml > 既定値
# - RunConfig: CLI サブコマンド 1 回ぶんの確定済み設定
# ---------------------------------

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from lib.errors import ConfigError

# --- toml loader (3.11+: tomllib / fallback: tomli) ---
try:  # Python 3.11+
    import tomllib as _toml
except Exception:  # 3.10 以下など
    try:
        import tomli as _toml  # type: ignore
    except Exception:
        _toml = None  # toml 読み込み不可

APP_ROOT = Path(__file__).resolve().parents[1]

Z_MODES = ("atomic_sum", "gasteiger")
FORMATS = ("jsonl", "csv")

# 既定値（settings.toml に無いとき）
DEFAULTS: Dict[str, Dict[str, Any]] = {
    "paths": {
        "data_dir": "project:data",
        "merges": "project:data/merges.json",
        "dictionary": "project:data/dictionary.json",
        "out_dir": "project:data/out",
    },
    "tokenizer": {"t": 100, "num_iter": 100, "wl_iterations": 3},
    "posenc": {"d0": 1.0, "z_mode": "atomic_sum", "coulomb_bucket_width": 0.05},
    "run": {"seed": 0, "workers": 1, "parse_failure_threshold": 0.05, "max_mappings": 10000},
}

# 環境変数 → (section, key, 型)
ENV_OVERRIDES = {
    "FRAGTOK_WORKERS": ("run", "workers", int),
    "FRAGTOK_SEED": ("run", "seed", int),
    "FRAGTOK_T": ("tokenizer", "t", int),
}

# ================= ユーティリティ =================

def _load_toml(path: Path) -> Dict[str, Any]:
    """TOML を辞書で返す。存在しない/読めない場合は空 dict。"""
    if not path.exists() or not path.is_file() or _toml is None:
        return {}
    try:
        with path.open("rb") as f:
            return dict(_toml.load(f))
    except Exception:
        return {}

def _get_settings_file() -> Path:
    """
    設定ファイルの探索順:
      1) FRAGTOK_SETTINGS_FILE（相対なら APP_ROOT 基準）
      2) APP_ROOT/config/settings.toml
      3) APP_ROOT/.streamlit/settings.toml
      4) APP_ROOT/settings.toml
    """
    env = os.getenv("FRAGTOK_SETTINGS_FILE")
    if env:
        p = Path(env)
        if not p.is_absolute():
            p = APP_ROOT / p
        return p.resolve()

    candidates = [
        APP_ROOT / "config" / "settings.toml",
        APP_ROOT / ".streamlit" / "settings.toml",
        APP_ROOT / "settings.toml",
    ]
    for c in candidates:
        c = c.resolve()
        if c.exists() and c.is_file():
            return c
    return (APP_ROOT / "config" / "settings.toml").resolve()

def resolve_path(spec: Optional[str], default: Optional[Path] = None) -> Optional[Path]:
    """
    パス指定子を実パスに解決。
      - project:SUBPATH   → APP_ROOT/SUBPATH
      - 絶対/ホーム(~)    → そのまま
      - 相対              → APP_ROOT 基準
      - '\\ ' は ' ' に戻す
    """
    if not spec:
        return default
    s = str(spec).replace("\\ ", " ").strip()
    if not s:
        return default
    if s.startswith("project:"):
        return (APP_ROOT / s.split(":", 1)[1].strip()).resolve()
    p = Path(s).expanduser()
    if not p.is_absolute():
        p = APP_ROOT / p
    return p.resolve()

# ================= 本体クラス =================

class AppSettings:
    """
    settings.toml を既定値に重ね、環境変数で上書きした設定。

    主要属性:
      - settings_path, values（section → key → value）
      - data_dir, merges_path, dictionary_path, out_dir
    """

    def __init__(self, settings_path: Optional[Path] = None, environ: Optional[Mapping[str, str]] = None) -> None:
        self.settings_path: Path = settings_path or _get_settings_file()
        loaded = _load_toml(self.settings_path)
        env = os.environ if environ is None else environ

        self.values: Dict[str, Dict[str, Any]] = {}
        self.errors: List[str] = []
        for section, defaults in DEFAULTS.items():
            merged = dict(defaults)
            sec = loaded.get(section, {})
            if isinstance(sec, dict):
                merged.update({k: v for k, v in sec.items() if k in defaults})
            self.values[section] = merged

        for name, (section, key, cast) in ENV_OVERRIDES.items():
            raw = env.get(name)
            if raw is None or not raw.strip():
                continue
            try:
                self.values[section][key] = cast(raw.strip())
            except ValueError:
                # 不正な環境変数は RunConfig 作成時に ConfigError にする
                self.errors.append(f"{name}={raw!r} is not a valid {cast.__name__}")

        paths = self.values["paths"]
        self.data_dir = resolve_path(paths["data_dir"])
        self.merges_path = resolve_path(paths["merges"])
        self.dictionary_path = resolve_path(paths["dictionary"])
        self.out_dir = resolve_path(paths["out_dir"])

    def get(self, section: str, key: str) -> Any:
        return self.values[section][key]

    # ---------- 便利メソッド ----------
    def to_dict(self) -> Dict[str, str]:
        """主要設定を文字列化して dict で返す（UI表示用）。"""
        out = {
            "settings_path": str(self.settings_path),
            "app_root": str(APP_ROOT),
            "data_dir": str(self.data_dir),
            "merges": str(self.merges_path),
            "dictionary": str(self.dictionary_path),
            "out_dir": str(self.out_dir),
        }
        for section in ("tokenizer", "posenc", "run"):
            for k, v in self.values[section].items():
                out[f"{section}.{k}"] = str(v)
        return out

    def __repr__(self) -> str:
        rows = [f"  {k:28s}= {v}" for k, v in self.to_dict().items()]
        return "AppSettings(\n" + "\n".join(rows) + "\n)"


# ================= RunConfig =================

@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: List[str] = field(default_factory=list)
    merges: Optional[Path] = None
    dictionary: Optional[Path] = None
    t: int = 0
    num_iter: int = 0
    wl_iterations: int = 3
    d0: float = 1.0
    z_mode: str = "atomic_sum"
    bucket_width: float = 0.05
    seed: int = 0
    workers: int = 1
    out: Optional[Path] = None
    fmt: str = "jsonl"
    parse_failure_threshold: float = 0.05
    max_mappings: int = 10000
    mask: bool = True

    def validate(self) -> "RunConfig":
        """不変条件のチェック（違反は ConfigError）。"""
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1 (got {self.workers})")
        if self.t < 0:
            raise ConfigError(f"t must be >= 0 (got {self.t})")
        if self.num_iter < 0:
            raise ConfigError(f"num-iter must be >= 0 (got {self.num_iter})")
        if self.wl_iterations < 0:
            raise ConfigError(f"wl iterations must be >= 0 (got {self.wl_iterations})")
        if not self.d0 > 0:
            raise ConfigError(f"d0 must be > 0 (got {self.d0})")
        if self.z_mode not in Z_MODES:
            raise ConfigError(f"z-mode must be one of {Z_MODES} (got {self.z_mode!r})")
        if not self.bucket_width > 0:
            raise ConfigError(f"coulomb bucket width must be > 0 (got {self.bucket_width})")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS} (got {self.fmt!r})")
        if not 0.0 <= self.parse_failure_threshold <= 1.0:
            raise ConfigError("parse failure threshold must lie in [0, 1]")
        if self.max_mappings < 1:
            raise ConfigError(f"max mappings must be >= 1 (got {self.max_mappings})")
        return self

    def check_t(self, table_length: int) -> None:
        if self.t > table_length:
            raise ConfigError(f"t={self.t} exceeds merge table length {table_length}")

    def to_dict(self) -> Dict[str, Any]:
        return {k: (str(v) if isinstance(v, Path) else v) for k, v in asdict(self).items()}


def build_run_config(subcommand: str, flags: Mapping[str, Any], settings: Optional[AppSettings] = None) -> RunConfig:
    """CLI 引数（None は未指定）と AppSettings から RunConfig を作る。"""
    s = settings or SETTINGS
    if s.errors:
        raise ConfigError("; ".join(s.errors))

    def pick(flag: str, section: str, key: str) -> Any:
        v = flags.get(flag)
        return s.get(section, key) if v is None else v

    def path(flag: str, default: Optional[Path]) -> Optional[Path]:
        v = flags.get(flag)
        if not v:
            return default
        # CLI の相対パスはカレント基準（project: 指定のみ APP_ROOT 基準）
        return resolve_path(v) if str(v).startswith("project:") else Path(v).expanduser()

    inputs = flags.get("input") or []
    if isinstance(inputs, str):
        inputs = [inputs]
    try:
        cfg = RunConfig(
            subcommand=subcommand,
            inputs=[str(p) for p in inputs],
            merges=path("merges", s.merges_path),
            dictionary=path("dict", s.dictionary_path),
            t=int(pick("t", "tokenizer", "t")),
            num_iter=int(pick("num_iter", "tokenizer", "num_iter")),
            wl_iterations=int(pick("wl_iterations", "tokenizer", "wl_iterations")),
            d0=float(pick("d0", "posenc", "d0")),
            z_mode=str(pick("z_mode", "posenc", "z_mode")),
            bucket_width=float(s.get("posenc", "coulomb_bucket_width")),
            seed=int(pick("seed", "run", "seed")),
            workers=int(pick("workers", "run", "workers")),
            out=path("out", None),
            fmt=str(flags.get("format") or "jsonl"),
            parse_failure_threshold=float(pick("max_failure_rate", "run", "parse_failure_threshold")),
            max_mappings=int(pick("max_mappings", "run", "max_mappings")),
            mask=not bool(flags.get("no_mask", False)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid setting: {e}") from None
    return cfg.validate()


# 既定インスタンス
SETTINGS = AppSettings()
