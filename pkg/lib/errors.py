"""
lib/errors.py
=================================
fragtok 全体で共有する例外クラス階層。

方針
----
- すべて `FragtokError` を基底にする（CLI はこれを捕まえて終了コードを決める）。
- 例外は構造化フィールドを属性として持ち、`str()` は人が読める 1 行にする。
- ライブラリ層は print しない。失敗は例外、部分失敗はサマリ dict で返す。

公開クラス一覧
--------------
- FragtokError
- SmilesSyntaxError(position, message) / UnsupportedFeature / ValenceError
- EmptyCorpus / GranularityOutOfRange / FormatVersionError
- NegativeBase / MissingParameters
- UnreconstructableUNK / LinkMismatch / SequenceTooShort
- NoAttachmentPoints / OrderMismatch
- ConfigError
"""

from __future__ import annotations

from typing import Sequence, Tuple

__all__ = [
    "FragtokError",
    "SmilesSyntaxError",
    "UnsupportedFeature",
    "ValenceError",
    "EmptyCorpus",
    "GranularityOutOfRange",
    "FormatVersionError",
    "NegativeBase",
    "MissingParameters",
    "UnreconstructableUNK",
    "LinkMismatch",
    "SequenceTooShort",
    "NoAttachmentPoints",
    "OrderMismatch",
    "ConfigError",
]


class FragtokError(Exception):
    """fragtok の基底例外。"""


# ============================================================
# chem
# ============================================================
class SmilesSyntaxError(FragtokError, ValueError):
    """SMILES の構文エラー（位置つき）。"""

    def __init__(self, position: int, message: str, text: str = "") -> None:
        self.position = int(position)
        self.message = message
        self.text = text
        super().__init__(f"SMILES syntax error at {self.position}: {message}")


class UnsupportedFeature(FragtokError, ValueError):
    """サポート外の SMILES 構文（反応 SMILES、@TH1 など）。"""

    def __init__(self, feature: str, position: int = -1) -> None:
        self.feature = feature
        self.position = int(position)
        where = f" at {position}" if position >= 0 else ""
        super().__init__(f"unsupported SMILES feature{where}: {feature}")


class ValenceError(FragtokError, ValueError):
    """原子価チェック（sanitize）違反。"""

    def __init__(self, atom_index: int, observed: float, allowed: Sequence[int], reason: str = "") -> None:
        self.atom_index = int(atom_index)
        self.observed = observed
        self.allowed: Tuple[int, ...] = tuple(allowed)
        self.reason = reason
        detail = reason or f"valence {observed} not in {list(self.allowed)}"
        super().__init__(f"atom {self.atom_index}: {detail}")


# ============================================================
# tokenizer
# ============================================================
class EmptyCorpus(FragtokError, ValueError):
    """学習コーパスが空。"""

    def __init__(self, message: str = "corpus is empty") -> None:
        super().__init__(message)


class GranularityOutOfRange(FragtokError, ValueError):
    """t がマージ表の長さを超えている（または負）。"""

    def __init__(self, t: int, available: int) -> None:
        self.t = int(t)
        self.available = int(available)
        super().__init__(f"granularity t={t} outside 0..{available}")


class FormatVersionError(FragtokError, ValueError):
    """未知のメジャーバージョンのファイル。"""

    def __init__(self, kind: str, version: object, supported: int) -> None:
        self.kind = kind
        self.version = version
        self.supported = supported
        super().__init__(f"{kind}: unsupported format version {version!r} (reader supports {supported})")


# ============================================================
# posenc
# ============================================================
class NegativeBase(FragtokError, ValueError):
    """Coulomb の自己項（Z^2.4）に負の Z が渡された。"""

    def __init__(self, index: int, value: float) -> None:
        self.index = int(index)
        self.value = float(value)
        super().__init__(f"Z[{index}]={value} is negative; the 2.4 power needs Z >= 0")


class MissingParameters(FragtokError, KeyError):
    """Gasteiger パラメータが無い元素。"""

    def __init__(self, element: str) -> None:
        self.element = element
        super().__init__(f"no Gasteiger parameters for element {element}")

    def __str__(self) -> str:
        return self.args[0]


# ============================================================
# sequence
# ============================================================
class UnreconstructableUNK(FragtokError, ValueError):
    """UNK トークンを含む系列は再構成できない。"""

    def __init__(self, position: int) -> None:
        self.position = int(position)
        super().__init__(f"position {position} holds UNK; fragment graph unknown")


class LinkMismatch(FragtokError, ValueError):
    """リンク情報と断片グラフが食い違う。"""


class SequenceTooShort(FragtokError, ValueError):
    """MFM にはフラグメントが 2 個以上必要。"""

    def __init__(self, length: int) -> None:
        self.length = int(length)
        super().__init__(f"sequence of length {length} cannot be masked (need >= 2)")


# ============================================================
# analogue
# ============================================================
class NoAttachmentPoints(FragtokError, ValueError):
    """ダミー原子を持たない構造が渡された。"""


class OrderMismatch(FragtokError, ValueError):
    """溶接（weld）しようとしたダミー結合の次数が一致しない。"""

    def __init__(self, dummy_a: int, dummy_b: int, order_a: object, order_b: object) -> None:
        self.dummy_a = dummy_a
        self.dummy_b = dummy_b
        super().__init__(f"dummy {dummy_a} ({order_a}) cannot weld to dummy {dummy_b} ({order_b})")


# ============================================================
# cli
# ============================================================
class ConfigError(FragtokError, ValueError):
    """設定値の不整合（終了コード 2）。"""
