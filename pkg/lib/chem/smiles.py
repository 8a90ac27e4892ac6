"""
lib/chem/smiles.py
=================================
SMILES サブセットのパーサとライタ。

サポート範囲
------------
- organic subset（B C N O P S F Cl Br I）と芳香族小文字（b c n o p s）、ダミー原子 `*`
- 括弧原子 `[13CH3+:1]` 形式（同位体・原子クラスは読み捨て）
- 結合 `- = # :`、方向結合 `/ \\`、分岐 `( )`、環結合の数字と `%nn`、成分区切り `.`
- 四面体 `@` / `@@` は注釈として保持のみ（ハッシュ・出力には使わない）
- 反応 SMILES（`>`）、`$` 四重結合、`@TH1` などの拡張キラリティは UnsupportedFeature

出力の決定性
------------
- 各連結成分で WL 精密化順位（lib.wl.atom_ranks）が最小の原子から DFS を開始し、
  隣接原子も (順位, 元 index) 順に辿る。
- 二重結合の cis/trans は方向結合 `/` `\\` として書き戻す。

公開関数一覧
------------
- parse_smiles(text: str) -> MolGraph
- write_smiles(mol: MolGraph) -> str
- write_smiles_ordered(mol: MolGraph) -> (str, list[int])
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import networkx as nx

from lib.chem.elements import AROMATIC_SYMBOLS, ORGANIC_SUBSET, atomic_number
from lib.chem.graph import Atom, Bond, BondOrder, BondStereo, ChiralTag, MolGraph
from lib.errors import SmilesSyntaxError, UnsupportedFeature

__all__ = ["parse_smiles", "write_smiles", "write_smiles_ordered"]

_BRACKET_RE = re.compile(
    r"\[(?P<isotope>\d+)?"
    r"(?P<element>se|as|b|c|n|o|p|s|\*|[A-Z][a-z]?)"
    r"(?P<chiral>@@|@(?:TH[12]|AL[12]|SP[1-3]|TB\d{1,2}|OH\d{1,2})?)?"
    r"(?P<hcount>H\d?)?"
    r"(?P<charge>[+-](?:\d{1,2}|\++|-+)?)?"
    r"(?::(?P<cls>\d+))?\]"
)

_BOND_SYMBOLS = {"-": BondOrder.SINGLE, "=": BondOrder.DOUBLE, "#": BondOrder.TRIPLE,
                 ":": BondOrder.AROMATIC, "/": BondOrder.SINGLE, "\\": BondOrder.SINGLE}
_ORGANIC_TWO = ("Cl", "Br")
_ORGANIC_ONE = set("BCNOPSFI")
_AROMATIC_ONE = set("bcnops")


@dataclass
class _RawBond:
    begin: int  # 先に書かれた原子
    end: int
    symbol: Optional[str]
    position: int


# ============================================================
# parse
# ============================================================
def parse_smiles(text: str) -> MolGraph:
    """SMILES 文字列を MolGraph に変換する。

    Raises
    ------
    SmilesSyntaxError
        構文エラー（位置つき）
    UnsupportedFeature
        サポート外の構文
    """
    s = (text or "").strip()
    if not s:
        raise SmilesSyntaxError(0, "empty SMILES", text)
    if ">" in s:
        raise UnsupportedFeature("reaction SMILES", s.index(">"))

    atoms: List[Atom] = []
    raw: List[_RawBond] = []
    pairs: set = set()
    branch: List[int] = []
    rings: Dict[int, Tuple[int, Optional[str], int]] = {}
    prev: Optional[int] = None
    pending: Optional[str] = None
    pending_pos = -1
    i = 0

    def add_bond(a: int, b: int, sym: Optional[str], pos: int) -> None:
        key = (a, b) if a < b else (b, a)
        if a == b:
            raise SmilesSyntaxError(pos, "ring closure to the same atom", text)
        if key in pairs:
            raise SmilesSyntaxError(pos, f"duplicate bond between atoms {key}", text)
        pairs.add(key)
        raw.append(_RawBond(a, b, sym, pos))

    while i < len(s):
        ch = s[i]

        # ---- 原子 ----
        atom: Optional[Atom] = None
        start = i
        if ch == "[":
            m = _BRACKET_RE.match(s, i)
            if m is None:
                j = s.find("]", i)
                raise SmilesSyntaxError(i, f"malformed bracket atom {s[i:j + 1] if j > 0 else s[i:]!r}", text)
            atom = _bracket_atom(m, i, text)
            i = m.end()
        elif s.startswith(_ORGANIC_TWO, i):
            atom = Atom(atomic_number=atomic_number(s[i:i + 2]))
            i += 2
        elif ch in _ORGANIC_ONE:
            atom = Atom(atomic_number=atomic_number(ch))
            i += 1
        elif ch in _AROMATIC_ONE:
            atom = Atom(atomic_number=atomic_number(ch), aromatic=True)
            i += 1
        elif ch == "*":
            atom = Atom.dummy()
            i += 1

        if atom is not None:
            idx = len(atoms)
            atoms.append(atom)
            if prev is not None:
                add_bond(prev, idx, pending, pending_pos if pending else start)
            elif pending is not None:
                raise SmilesSyntaxError(pending_pos, "bond without a preceding atom", text)
            pending = None
            prev = idx
            continue

        # ---- 結合・分岐・環 ----
        if ch in _BOND_SYMBOLS:
            if pending is not None:
                raise SmilesSyntaxError(i, "two consecutive bond symbols", text)
            if prev is None:
                raise SmilesSyntaxError(i, "bond without a preceding atom", text)
            pending, pending_pos = ch, i
            i += 1
        elif ch == "$":
            raise UnsupportedFeature("quadruple bond '$'", i)
        elif ch == ".":
            if pending is not None or prev is None:
                raise SmilesSyntaxError(i, "misplaced '.'", text)
            prev = None
            i += 1
        elif ch == "(":
            if prev is None or pending is not None:
                raise SmilesSyntaxError(i, "branch without a preceding atom", text)
            branch.append(prev)
            i += 1
        elif ch == ")":
            if not branch or pending is not None:
                raise SmilesSyntaxError(i, "unbalanced ')'", text)
            prev = branch.pop()
            i += 1
        elif ch.isdigit() or ch == "%":
            if prev is None:
                raise SmilesSyntaxError(i, "ring bond without a preceding atom", text)
            if ch == "%":
                if len(s[i + 1:i + 3]) != 2 or not s[i + 1:i + 3].isdigit():
                    raise SmilesSyntaxError(i, "'%' must be followed by two digits", text)
                num = int(s[i + 1:i + 3])
                step = 3
            else:
                num = int(ch)
                step = 1
            if num in rings:
                opener, sym_open, pos_open = rings.pop(num)
                sym = pending if pending is not None else sym_open
                if pending is not None and sym_open is not None and pending != sym_open:
                    raise SmilesSyntaxError(i, f"conflicting ring bond symbols for ring {num}", text)
                add_bond(opener, prev, sym, i)
            else:
                rings[num] = (prev, pending, i)
            pending = None
            i += step
        elif ch.isspace():
            raise SmilesSyntaxError(i, "whitespace inside SMILES", text)
        else:
            raise SmilesSyntaxError(i, f"unexpected character {ch!r}", text)

    if pending is not None:
        raise SmilesSyntaxError(pending_pos, "dangling bond symbol at end", text)
    if s.endswith("."):
        raise SmilesSyntaxError(len(s) - 1, "misplaced '.'", text)
    if branch:
        raise SmilesSyntaxError(len(s), "unclosed branch '('", text)
    if rings:
        num, (_, _, pos) = next(iter(rings.items()))
        raise SmilesSyntaxError(pos, f"unclosed ring bond {num}", text)

    bonds = _resolve_bonds(atoms, raw)
    return MolGraph.from_parts(atoms, bonds)


def _bracket_atom(m: "re.Match[str]", pos: int, text: str) -> Atom:
    g = m.groupdict()
    el = g["element"]
    chiral = g["chiral"]
    if chiral and chiral not in ("@", "@@"):
        raise UnsupportedFeature(f"chirality class {chiral}", pos)
    tag = {None: ChiralTag.NONE, "@": ChiralTag.CCW, "@@": ChiralTag.CW}[chiral]

    hcount = 0
    if g["hcount"]:
        hcount = int(g["hcount"][1:] or 1)
    charge = 0
    c = g["charge"]
    if c:
        sign = 1 if c[0] == "+" else -1
        rest = c[1:]
        if not rest:
            charge = sign
        elif rest.isdigit():
            charge = sign * int(rest)
        else:
            if set(rest) != {c[0]}:
                raise SmilesSyntaxError(pos, f"malformed charge {c!r}", text)
            charge = sign * (len(rest) + 1)

    if el == "*":
        return Atom.dummy()
    aromatic = el.islower()
    if aromatic and el not in AROMATIC_SYMBOLS:
        raise SmilesSyntaxError(pos, f"{el!r} cannot be aromatic", text)
    try:
        z = atomic_number(el)
    except KeyError:
        raise SmilesSyntaxError(pos, f"unknown element {el!r}", text) from None
    if z == 1 and hcount:
        raise SmilesSyntaxError(pos, "hydrogen atom cannot carry hydrogens", text)
    return Atom(
        atomic_number=z,
        formal_charge=charge,
        explicit_h=hcount,
        aromatic=aromatic,
        no_implicit=True,
        chiral_tag=tag,
    )


def _resolve_bonds(atoms: List[Atom], raw: List[_RawBond]) -> List[Bond]:
    """結合次数の既定値と方向結合からの cis/trans 解決。

    記号なしの芳香族原子間結合は AROMATIC。ただし環に乗らないもの（ビフェニルの連結など）は SINGLE。
    """
    bonds: List[Bond] = []
    direction: Dict[int, int] = {}
    implicit_arom: List[int] = []
    for bi, rb in enumerate(raw):
        if rb.symbol is None:
            both_arom = atoms[rb.begin].aromatic and atoms[rb.end].aromatic
            order = BondOrder.AROMATIC if both_arom else BondOrder.SINGLE
            if both_arom:
                implicit_arom.append(bi)
        else:
            order = _BOND_SYMBOLS[rb.symbol]
            if rb.symbol == "/":
                direction[bi] = 1
            elif rb.symbol == "\\":
                direction[bi] = -1
        bonds.append(Bond(rb.begin, rb.end, order))

    if implicit_arom:
        g = nx.Graph()
        g.add_edges_from((rb.begin, rb.end) for rb in raw)
        bridges = {frozenset(e) for e in nx.bridges(g)}
        for bi in implicit_arom:
            if frozenset((raw[bi].begin, raw[bi].end)) in bridges:
                bonds[bi] = replace(bonds[bi], order=BondOrder.SINGLE)

    if not direction:
        return bonds

    incident: Dict[int, List[int]] = {}
    for bi, b in enumerate(bonds):
        incident.setdefault(b.begin, []).append(bi)
        incident.setdefault(b.end, []).append(bi)

    def side(end: int, double_bi: int, is_first_end: bool) -> Optional[Tuple[int, int]]:
        for bj in incident.get(end, []):
            if bj == double_bi or bj not in direction:
                continue
            nb = bonds[bj]
            other = nb.other(end)
            d = direction[bj]
            if is_first_end:
                # 参照原子が先に書かれていれば d、後なら反転
                s = d if nb.begin == other else -d
            else:
                s = d if nb.begin == end else -d
            return other, s
        return None

    for bi, b in enumerate(bonds):
        if b.order is not BondOrder.DOUBLE:
            continue
        left = side(b.begin, bi, True)
        right = side(b.end, bi, False)
        if left is None or right is None:
            continue
        stereo = BondStereo.TRANS if left[1] == right[1] else BondStereo.CIS
        bonds[bi] = replace(b, stereo=stereo, stereo_atoms=(left[0], right[0]))
    return bonds


# ============================================================
# write
# ============================================================
def write_smiles(mol: MolGraph) -> str:
    """決定的な SMILES を返す（ダミー原子は '*'）。"""
    return write_smiles_ordered(mol)[0]


def write_smiles_ordered(mol: MolGraph) -> Tuple[str, List[int]]:
    """SMILES と、文字列中に現れる順の原子 index を返す。

    parse_smiles(smiles) の原子番号付けは order の並びと一致する。
    """
    if mol.num_atoms == 0:
        return "", []
    from lib.wl.hashing import atom_ranks

    ranks = atom_ranks(mol)
    visited = [False] * mol.num_atoms
    parts: List[str] = []
    order: List[int] = []
    for start in sorted(range(mol.num_atoms), key=lambda k: (ranks[k], k)):
        if visited[start]:
            continue
        parts.append(_write_component(mol, start, ranks, visited, order))
    return ".".join(parts), order


def _write_component(
    mol: MolGraph, start: int, ranks: List[int], visited: List[bool], order: List[int]
) -> str:
    n = mol.num_atoms

    def nbrs(u: int) -> List[Tuple[int, int]]:
        return sorted(mol.neighbors(u), key=lambda t: (ranks[t[1]], t[1]))

    # ---- pass 1: DFS 木と環結合 ----
    handled = [False] * mol.num_bonds
    parent_bond = [-1] * n
    children: Dict[int, List[int]] = {}
    openings: Dict[int, List[int]] = {}
    closings: Dict[int, List[int]] = {}
    first: Dict[int, int] = {}

    visited[start] = True
    stack = [(start, -1, iter(nbrs(start)))]
    while stack:
        u, pb, it = stack[-1]
        for bi, v in it:
            if bi == pb or handled[bi]:
                continue
            handled[bi] = True
            if visited[v]:
                openings.setdefault(v, []).append(bi)
                closings.setdefault(u, []).append(bi)
                first[bi] = v
            else:
                visited[v] = True
                parent_bond[v] = bi
                first[bi] = u
                children.setdefault(u, []).append(v)
                stack.append((v, bi, iter(nbrs(v))))
                break
        else:
            stack.pop()

    directions = _assign_directions(mol, first)

    # ---- pass 2: 文字列化 ----
    out: List[str] = []
    digits: Dict[int, int] = {}
    in_use: set = set()
    todo: List[Tuple[str, object]] = [("atom", start)]
    while todo:
        kind, payload = todo.pop()
        if kind == "text":
            out.append(str(payload))
            continue
        x = int(payload)  # type: ignore[arg-type]
        pb = parent_bond[x]
        if pb >= 0:
            out.append(_bond_token(mol, pb, directions))
        out.append(_atom_token(mol, x))
        order.append(x)

        for bi in closings.get(x, []):
            out.append(_bond_token(mol, bi, directions))
            out.append(_ring_label(digits[bi]))
        for bi in openings.get(x, []):
            d = 1
            while d in in_use:
                d += 1
            in_use.add(d)
            digits[bi] = d
            out.append(_ring_label(d))
        for bi in closings.get(x, []):
            in_use.discard(digits[bi])

        ch = children.get(x, [])
        items: List[Tuple[str, object]] = []
        for c in ch[:-1]:
            items += [("text", "("), ("atom", c), ("text", ")")]
        if ch:
            items.append(("atom", ch[-1]))
        todo.extend(reversed(items))
    return "".join(out)


def _ring_label(d: int) -> str:
    return str(d) if d < 10 else f"%{d:02d}"


def _assign_directions(mol: MolGraph, first: Dict[int, int]) -> Dict[int, str]:
    """立体二重結合ごとに参照結合へ '/' '\\' を割り当てる。"""
    dirs: Dict[int, int] = {}
    for bi, b in enumerate(mol.bonds):
        if b.stereo is BondStereo.NONE or b.stereo_atoms is None:
            continue
        x, y = b.stereo_atoms
        bx = mol.bond_between(b.begin, x)
        by = mol.bond_between(b.end, y)
        if bx is None or by is None or bx not in first or by not in first:
            continue
        if mol.bonds[bx].order is not BondOrder.SINGLE or mol.bonds[by].order is not BondOrder.SINGLE:
            continue
        same = b.stereo is BondStereo.TRANS
        if bx in dirs:
            d = dirs[bx]
            s_a = d if first[bx] == x else -d
        elif by in dirs:
            d = dirs[by]
            s_b = d if first[by] == b.end else -d
            s_a = s_b if same else -s_b
            dirs[bx] = s_a if first[bx] == x else -s_a
        else:
            s_a = 1
            dirs[bx] = 1 if first[bx] == x else -1
        s_b = s_a if same else -s_a
        want = s_b if first[by] == b.end else -s_b
        if by in dirs and dirs[by] != want:
            continue  # 共役系で矛盾する場合は表現できない
        dirs[by] = want
    return {bi: ("/" if d > 0 else "\\") for bi, d in dirs.items()}


def _bond_token(mol: MolGraph, bi: int, directions: Dict[int, str]) -> str:
    b = mol.bonds[bi]
    both_arom = mol.atoms[b.begin].aromatic and mol.atoms[b.end].aromatic
    if b.order is BondOrder.SINGLE:
        if bi in directions:
            return directions[bi]
        return "-" if both_arom else ""
    if b.order is BondOrder.DOUBLE:
        return "="
    if b.order is BondOrder.TRIPLE:
        return "#"
    return "" if both_arom and b.in_ring else ":"


def _atom_token(mol: MolGraph, idx: int) -> str:
    from lib.chem.valence import implicit_hydrogens

    a = mol.atoms[idx]
    if a.is_dummy:
        return "*"
    sym = a.symbol
    if a.aromatic:
        sym = sym.lower()
    organic_ok = (
        a.symbol in ORGANIC_SUBSET
        and a.formal_charge == 0
        and a.radical_electrons == 0
        and (not a.aromatic or sym in _AROMATIC_ONE)
    )
    if organic_ok:
        orders = [mol.bonds[bi].order for bi in mol.adjacency[idx]]
        trial = replace(a, explicit_h=0, no_implicit=False)
        if implicit_hydrogens(trial, orders) == a.total_h:
            return sym
    h = a.total_h
    htxt = "" if h == 0 else ("H" if h == 1 else f"H{h}")
    q = a.formal_charge
    if q == 0:
        qtxt = ""
    elif abs(q) == 1:
        qtxt = "+" if q > 0 else "-"
    else:
        qtxt = f"{'+' if q > 0 else '-'}{abs(q)}"
    return f"[{sym}{htxt}{qtxt}]"
