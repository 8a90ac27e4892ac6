"""
lib/chem/elements.py
=================================
元素記号・原子番号・標準原子量と、原子価テーブル（valence table）。

原子価テーブル
--------------
- B:3 / C:4 / N:3,5 / O:2 / P:3,5 / S:2,4,6 / ハロゲン:1 / H:1
- 形式電荷は符号の向きに |charge| だけ許容原子価をずらす（N+ → 4,6 / O- → 1）。
- テーブルに無い元素は原子価チェックの対象外（暗黙水素も付けない）。

公開関数一覧
------------
- symbol_of(z) -> str
- atomic_number(symbol) -> int
- atomic_weight(z) -> float
- allowed_valences(z, charge) -> tuple[int, ...]
"""

from __future__ import annotations

from typing import Dict, Tuple

__all__ = [
    "SYMBOLS",
    "ORGANIC_SUBSET",
    "AROMATIC_SYMBOLS",
    "HALOGENS",
    "symbol_of",
    "atomic_number",
    "atomic_weight",
    "allowed_valences",
]

# index = 原子番号（0 はダミー原子）
SYMBOLS: Tuple[str, ...] = (
    "*",
    "H", "He",
    "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar",
    "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr",
    "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
    "In", "Sn", "Sb", "Te", "I", "Xe",
    "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy",
    "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt",
    "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn",
)

_WEIGHTS: Tuple[float, ...] = (
    0.0,
    1.008, 4.0026,
    6.94, 9.0122, 10.81, 12.011, 14.007, 15.999, 18.998, 20.180,
    22.990, 24.305, 26.982, 28.085, 30.974, 32.06, 35.45, 39.948,
    39.098, 40.078, 44.956, 47.867, 50.942, 51.996, 54.938, 55.845, 58.933, 58.693, 63.546, 65.38,
    69.723, 72.630, 74.922, 78.971, 79.904, 83.798,
    85.468, 87.62, 88.906, 91.224, 92.906, 95.95, 97.0, 101.07, 102.91, 106.42, 107.87, 112.41,
    114.82, 118.71, 121.76, 127.60, 126.90, 131.29,
    132.91, 137.33, 138.91, 140.12, 140.91, 144.24, 145.0, 150.36, 151.96, 157.25, 158.93, 162.50,
    164.93, 167.26, 168.93, 173.05, 174.97, 178.49, 180.95, 183.84, 186.21, 190.23, 192.22, 195.08,
    196.97, 200.59, 204.38, 207.2, 208.98, 209.0, 210.0, 222.0,
)

_Z_OF: Dict[str, int] = {s: z for z, s in enumerate(SYMBOLS)}

# 括弧なしで書ける元素（organic subset）
ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})
# 小文字（芳香族）で書ける元素
AROMATIC_SYMBOLS = frozenset({"b", "c", "n", "o", "p", "s", "se", "as"})
HALOGENS = frozenset({9, 17, 35, 53})

_VALENCES: Dict[int, Tuple[int, ...]] = {
    1: (1,),
    5: (3,),
    6: (4,),
    7: (3, 5),
    8: (2,),
    15: (3, 5),
    16: (2, 4, 6),
    9: (1,),
    17: (1,),
    35: (1,),
    53: (1,),
}


def symbol_of(z: int) -> str:
    """原子番号 → 元素記号（0 は '*'）。"""
    return SYMBOLS[z]


def atomic_number(symbol: str) -> int:
    """元素記号 → 原子番号。芳香族の小文字表記も受け付ける。

    Raises
    ------
    KeyError
        未知の記号
    """
    if symbol in _Z_OF:
        return _Z_OF[symbol]
    return _Z_OF[symbol.capitalize()]


def atomic_weight(z: int) -> float:
    """標準原子量（ダミー原子は 0.0）。"""
    return _WEIGHTS[z]


def allowed_valences(z: int, charge: int = 0) -> Tuple[int, ...]:
    """許容原子価の組を返す。テーブル外の元素は空タプル。

    Notes
    -----
    - 電荷は符号の向きに |charge| だけシフト（負になったものは捨てる）。
    """
    base = _VALENCES.get(z, ())
    if not base or charge == 0:
        return base
    return tuple(v + charge for v in base if v + charge >= 0)
