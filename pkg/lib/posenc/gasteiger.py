"""
lib/posenc/gasteiger.py
=================================
Gasteiger-Marsili（PEOE）部分電荷とフラグメント電荷。

手順
----
1) 暗黙/明示水素をノードとして展開し、ダミー原子は除外
2) 初期電荷 = 形式電荷
3) k = 1..6 で電気陰性度 χ = a + b q + c q² を計算し、結合ごとに
   dq = (χ_高 − χ_低) / χ⁺_低 × 0.5^k を低い側 → 高い側へ移す
   （χ⁺ = a + b + c、水素のみ 20.02）
4) 移動は対称なので総電荷は形式電荷の和に保存される

パラメータが無い元素は MissingParameters（strict=False なら NaN + warning）。
フラグメント電荷は非ダミー原子（＋付いている水素）の和で、非有限なら 0。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from lib.chem.graph import Hybridization, MolGraph
from lib.errors import MissingParameters

__all__ = ["ITERATIONS", "PartialCharges", "gasteiger_charges", "fragment_charges"]

logger = logging.getLogger(__name__)

ITERATIONS = 6
_H_CHI_PLUS = 20.02

_S3, _S2, _S1 = Hybridization.SP3, Hybridization.SP2, Hybridization.SP

# 原子番号 → 混成 → (a, b, c)
_PARAMS: Dict[int, Dict[Hybridization, Tuple[float, float, float]]] = {
    1: {_S3: (7.17, 6.24, -0.56)},
    5: {_S3: (5.98, 6.82, 1.605)},
    6: {_S3: (7.98, 9.18, 1.88), _S2: (8.79, 9.32, 1.51), _S1: (10.39, 9.45, 0.73)},
    7: {_S3: (11.54, 10.82, 1.36), _S2: (12.87, 11.15, 0.85), _S1: (15.68, 11.70, -0.27)},
    8: {_S3: (14.18, 12.92, 1.39), _S2: (17.07, 13.79, 0.47)},
    9: {_S3: (14.66, 13.85, 2.31)},
    15: {_S3: (8.90, 8.24, 0.96)},
    16: {_S3: (10.14, 9.13, 1.38), _S2: (10.88, 9.485, 1.325)},
    17: {_S3: (11.00, 9.69, 1.35)},
    35: {_S3: (10.08, 8.47, 1.16)},
    53: {_S3: (9.90, 7.96, 0.96)},
}


def _params_for(z: int, hyb: Hybridization, symbol: str) -> Tuple[float, float, float]:
    table = _PARAMS.get(z)
    if not table:
        raise MissingParameters(symbol)
    if hyb in table:
        return table[hyb]
    if hyb is Hybridization.SP and _S2 in table:
        return table[_S2]
    if _S3 in table:
        return table[_S3]
    return next(iter(table.values()))


@dataclass(frozen=True)
class PartialCharges:
    """原子ごとの電荷（ダミー原子は 0）。

    q_atom : 原子自身の電荷
    q_hydrogens : その原子に付いた水素（暗黙＋明示カウント）の電荷の和
    """

    q_atom: np.ndarray
    q_hydrogens: np.ndarray

    @property
    def q(self) -> np.ndarray:
        """水素を畳み込んだ原子電荷。総和は正味の形式電荷に一致する。"""
        return self.q_atom + self.q_hydrogens

    @property
    def ok(self) -> bool:
        return bool(np.all(np.isfinite(self.q)))


def gasteiger_charges(mol: MolGraph, strict: bool = False) -> PartialCharges:
    """PEOE 電荷を計算する。

    Parameters
    ----------
    strict : bool
        True なら MissingParameters を送出。False なら全原子 NaN を返して warning。
    """
    n = mol.num_atoms
    heavy = [i for i, a in enumerate(mol.atoms) if not a.is_dummy]
    try:
        return _peoe(mol, heavy)
    except MissingParameters as e:
        if strict:
            raise
        logger.warning("gasteiger charges unavailable: %s", e, extra={"element": e.element})
        nan = np.full(n, np.nan)
        return PartialCharges(nan, nan.copy())


def _peoe(mol: MolGraph, heavy: Sequence[int]) -> PartialCharges:
    n = mol.num_atoms
    node_of = {a: k for k, a in enumerate(heavy)}
    a_list: List[Tuple[float, float, float]] = []
    chi_plus: List[float] = []
    q0: List[float] = []
    owner: List[int] = []  # 水素ノード → 親原子（重原子ノードは -1）
    edges: List[Tuple[int, int]] = []

    for i in heavy:
        atom = mol.atoms[i]
        if atom.atomic_number == 1:
            p = _PARAMS[1][_S3]
            chi_plus.append(_H_CHI_PLUS)
        else:
            p = _params_for(atom.atomic_number, atom.hybridization, atom.symbol)
            chi_plus.append(sum(p))
        a_list.append(p)
        q0.append(float(atom.formal_charge))
        owner.append(-1)

    for b in mol.bonds:
        if b.begin in node_of and b.end in node_of:
            edges.append((node_of[b.begin], node_of[b.end]))

    hp = _PARAMS[1][_S3]
    for i in heavy:
        for _ in range(mol.atoms[i].total_h):
            k = len(a_list)
            a_list.append(hp)
            chi_plus.append(_H_CHI_PLUS)
            q0.append(0.0)
            owner.append(i)
            edges.append((node_of[i], k))

    abc = np.asarray(a_list, dtype=float).reshape(-1, 3)
    cp = np.asarray(chi_plus, dtype=float)
    q = np.asarray(q0, dtype=float)
    if edges:
        I = np.fromiter((e[0] for e in edges), dtype=int, count=len(edges))
        J = np.fromiter((e[1] for e in edges), dtype=int, count=len(edges))
        for k in range(1, ITERATIONS + 1):
            chi = abc[:, 0] + abc[:, 1] * q + abc[:, 2] * q * q
            diff = chi[J] - chi[I]
            # 電気陰性度の低い側の χ⁺ で割る
            denom = np.where(diff > 0, cp[I], cp[J])
            t = diff / denom * (0.5 ** k)
            dq = np.zeros_like(q)
            np.add.at(dq, I, t)
            np.add.at(dq, J, -t)
            q = q + dq

    q_atom = np.zeros(n)
    q_h = np.zeros(n)
    for i, k in node_of.items():
        q_atom[i] = q[k]
    for k, parent in enumerate(owner):
        if parent >= 0:
            q_h[parent] += q[k]
    return PartialCharges(q_atom, q_h)


def fragment_charges(charges: PartialCharges, atom_maps: Sequence[Sequence[int]]) -> List[float]:
    """フラグメントごとの電荷合計（非有限は 0）。atom_maps は Fragment.atom_map。"""
    q = charges.q
    out: List[float] = []
    for amap in atom_maps:
        total = float(sum(q[i] for i in amap if i >= 0))
        out.append(total if np.isfinite(total) else 0.0)
    return out
