"""
lib/chem/valence.py
=================================
原子価（valence）に関する計算と sanitize。

規則
----
- 結合次数の和: 単=1 / 二重=2 / 三重=3 / 芳香族=1。
- 芳香族原子（芳香族結合を持つもの）は、和がそのまま許容原子価に一致しなければ
  π 分として +1 して扱う（c → CH、n → N、o/s → そのまま）。
- 暗黙水素 = 「和以上で最小の許容原子価」− 和。上限超過なら 0（sanitize で落ちる）。

公開関数一覧
------------
- implicit_hydrogens(atom, orders) -> int
- bracket_radicals(atom, orders) -> int
- atom_valence(mol, idx) -> int
- sanitize(mol) -> None   （違反時 ValenceError）
- is_sane(mol) -> bool
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import networkx as nx

from lib.chem.elements import allowed_valences
from lib.chem.graph import Atom, BondOrder, MolGraph
from lib.errors import ValenceError

__all__ = [
    "implicit_hydrogens",
    "bracket_radicals",
    "atom_valence",
    "sanitize",
    "is_sane",
]


def _order_sum(orders: Sequence[BondOrder]) -> int:
    return sum(o.valence for o in orders)


def _pi_bump(atom: Atom, orders: Sequence[BondOrder], total: int, allowed: Sequence[int]) -> int:
    if atom.aromatic and any(o is BondOrder.AROMATIC for o in orders) and total not in allowed:
        return 1
    return 0


def implicit_hydrogens(atom: Atom, orders: Sequence[BondOrder]) -> int:
    """organic subset 原子の暗黙水素数。"""
    allowed = allowed_valences(atom.atomic_number, atom.formal_charge)
    if not allowed or atom.is_dummy:
        return 0
    s = _order_sum(orders) + atom.explicit_h
    s += _pi_bump(atom, orders, s, allowed)
    for v in allowed:
        if v >= s:
            return v - s
    return 0


def bracket_radicals(atom: Atom, orders: Sequence[BondOrder]) -> int:
    """括弧原子で最小の許容原子価に足りないぶんをラジカル電子とみなす（非芳香族のみ）。

    最小値を超えて許容原子価の間に落ちる原子価（中性 N の 4 など）はラジカルで埋めず、
    sanitize で ValenceError になる。
    """
    allowed = allowed_valences(atom.atomic_number, atom.formal_charge)
    if not allowed or atom.aromatic or atom.is_dummy:
        return 0
    s = _order_sum(orders) + atom.explicit_h
    return allowed[0] - s if s < allowed[0] else 0


def atom_valence(mol: MolGraph, idx: int) -> int:
    """観測原子価（結合次数和 + 水素 + 芳香族の π 分）。"""
    atom = mol.atoms[idx]
    orders = [mol.bonds[bi].order for bi in mol.adjacency[idx]]
    allowed = allowed_valences(atom.atomic_number, atom.formal_charge)
    total = _order_sum(orders) + atom.total_h
    return total + _pi_bump(atom, orders, total, allowed)


def sanitize(mol: MolGraph) -> None:
    """原子価と芳香族環の整合をチェックする。問題なければ None。

    Raises
    ------
    ValenceError
        - 非ダミー原子の観測原子価が許容原子価のどれとも一致しない
          （最小値未満は括弧原子のラジカルとして許容）
        - 芳香族結合が芳香族原子の環に乗っていない
          （ダミー原子に芳香族結合で繋がる「開いた」芳香族系は許容）
        - 芳香族原子が芳香族結合を 1 本も持たない
    """
    for i, atom in enumerate(mol.atoms):
        if atom.is_dummy:
            continue
        allowed = allowed_valences(atom.atomic_number, atom.formal_charge)
        if not allowed:
            continue
        observed = atom_valence(mol, i)
        if observed in allowed or observed < allowed[0]:
            continue
        raise ValenceError(i, observed, allowed)

    _check_aromatic_rings(mol)


def _check_aromatic_rings(mol: MolGraph) -> None:
    arom = [b for b in mol.bonds if b.order is BondOrder.AROMATIC]
    for i, a in enumerate(mol.atoms):
        if a.aromatic and not any(mol.bonds[bi].order is BondOrder.AROMATIC for bi in mol.adjacency[i]):
            raise ValenceError(i, atom_valence(mol, i), (), reason="aromatic atom outside an aromatic ring")
    if not arom:
        return
    for b in arom:
        for end in (b.begin, b.end):
            a = mol.atoms[end]
            if not a.is_dummy and not a.aromatic:
                raise ValenceError(end, atom_valence(mol, end), (), reason="aromatic bond on non-aromatic atom")

    # 芳香族結合だけの部分グラフで bridge になる結合は芳香環に乗っていない
    g = nx.Graph()
    g.add_edges_from((b.begin, b.end) for b in arom)
    for comp in nx.connected_components(g):
        if any(mol.atoms[i].is_dummy for i in comp):
            continue
        sub = g.subgraph(comp)
        bridges: List[Tuple[int, int]] = list(nx.bridges(sub))
        if bridges:
            first = min(bridges[0])
            raise ValenceError(first, atom_valence(mol, first), (),
                               reason="aromatic bond outside an aromatic ring")


def is_sane(mol: MolGraph) -> bool:
    """sanitize が通るかどうか（例外を握って bool で返す）。"""
    try:
        sanitize(mol)
        return True
    except ValenceError:
        return False
