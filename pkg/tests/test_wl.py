"""
tests/test_wl.py
=================================
WL 精密化とダイジェスト。

網羅チェック
------------
小さなグラフアトラス（networkx.graph_atlas_g）の全グラフに元素・結合次数を
割り当て、同じダイジェストになった分子どうしが VF2 で同型かを確かめる。
- 既定: 4 頂点以下 × {C,N,O} × {単,二重}
- slow: 5 頂点（元素のみ / 結合次数のみ）、6 頂点 × {C,N} × 単結合
- slow: 6 頂点 × {C,N,O} × {単,二重}（最大原子価以下のもの、自己同型で割った代表のみ）
"""

from __future__ import annotations

import itertools
from collections import defaultdict

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import categorical_edge_match, categorical_node_match

from lib.chem import Atom, Bond, BondOrder, BondStereo, Hybridization, MolGraph, allowed_valences, parse_smiles
from lib.wl import MolDigest, atom_ranks, atom_seed_label, bond_label, wl_hash, wl_refine
from tests.helpers import random_perm


# ---------- 種ラベル ----------
def test_seed_label_is_deterministic():
    assert atom_seed_label(Atom(6, hybridization=Hybridization.SP3)) == atom_seed_label(
        Atom(6, hybridization=Hybridization.SP3)
    )


def test_seed_label_sees_hybridization():
    assert atom_seed_label(Atom(6, hybridization=Hybridization.SP3)) != atom_seed_label(
        Atom(6, hybridization=Hybridization.SP2)
    )


def test_dummy_differs_from_oxygen():
    assert atom_seed_label(Atom.dummy()) != atom_seed_label(Atom(8))


def test_bond_labels():
    assert bond_label(Bond(0, 1)) == bond_label(Bond(2, 3))
    cis = Bond(0, 1, BondOrder.DOUBLE, stereo=BondStereo.CIS)
    trans = Bond(0, 1, BondOrder.DOUBLE, stereo=BondStereo.TRANS)
    assert bond_label(cis) != bond_label(trans)
    assert bond_label(cis, stereo=False) == bond_label(trans, stereo=False)
    assert bond_label(Bond(0, 1, in_ring=True, ring_size=6)) != bond_label(Bond(0, 1))


# ---------- 精密化 ----------
def test_t0_is_seed_labels():
    m = parse_smiles("CCO")
    assert list(wl_refine(m, 0).per_node) == [atom_seed_label(a) for a in m.atoms]


def test_ccO_t1_separates_terminal_and_middle_carbon():
    labels = wl_refine(parse_smiles("CCO"), 1).per_node
    assert labels[0] != labels[1]


@pytest.mark.parametrize("T", [0, 1, 2, 3, 5])
def test_benzene_atoms_equal(T):
    labels = wl_refine(parse_smiles("c1ccccc1"), T).per_node
    assert len(set(labels)) == 1


def test_negative_t_rejected():
    with pytest.raises(ValueError):
        wl_refine(parse_smiles("C"), -1)


# ---------- ダイジェスト ----------
def test_digest_relabeling_invariant():
    assert wl_hash(parse_smiles("CCO")) == wl_hash(parse_smiles("OCC"))


def test_butenes_differ():
    assert wl_hash(parse_smiles("C/C=C/C")) != wl_hash(parse_smiles("C/C=C\\C"))


def test_dangling_bond_counts_differ():
    digests = {wl_hash(parse_smiles(s)) for s in ("*C", "*C*", "*C(*)*")}
    assert len(digests) == 3


def test_digest_format():
    d = wl_hash(parse_smiles("CCO"))
    assert isinstance(d, MolDigest) and len(d.hex) == 32 and str(d) == d.hex
    with pytest.raises(ValueError):
        MolDigest("XYZ")


def test_digest_depends_on_t():
    m = parse_smiles("CCO")
    assert wl_hash(m, 1) != wl_hash(m, 3)


def test_permutation_invariance(sample_mols, permute):
    for k, m in enumerate(sample_mols):
        for seed in range(3):
            p = permute(m, random_perm(m.num_atoms, seed * 101 + k))
            assert wl_hash(p) == wl_hash(m)
            assert sorted(atom_ranks(p)) == sorted(atom_ranks(m))


# ---------- アトラス網羅 ----------
def _mol_of(g: nx.Graph, zs, orders) -> MolGraph:
    atoms = [Atom(z) for z in zs]
    bonds = [Bond(u, v, o) for (u, v), o in zip(sorted(g.edges()), orders)]
    return MolGraph.from_parts(atoms, bonds)


def _labeled(g: nx.Graph, zs, orders) -> nx.Graph:
    h = nx.Graph()
    for i, z in enumerate(zs):
        h.add_node(i, z=z)
    for (u, v), o in zip(sorted(g.edges()), orders):
        h.add_edge(u, v, order=o)
    return h


def _sweep(sizes, elements, orders):
    buckets = defaultdict(list)
    count = 0
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n not in sizes:
            continue
        m = g.number_of_edges()
        for zs in itertools.product(elements, repeat=n):
            for os_ in itertools.product(orders, repeat=m):
                buckets[wl_hash(_mol_of(g, zs, os_))].append((g, zs, os_))
                count += 1

    nm = categorical_node_match("z", None)
    em = categorical_edge_match("order", None)
    for members in buckets.values():
        ref = _labeled(*members[0])
        for g, zs, os_ in members[1:]:
            assert nx.is_isomorphic(ref, _labeled(g, zs, os_), node_match=nm, edge_match=em), (zs, os_)
    return count, len(buckets)


def test_atlas_up_to_four_atoms():
    count, classes = _sweep({1, 2, 3, 4}, (6, 7, 8), (BondOrder.SINGLE, BondOrder.DOUBLE))
    assert classes < count


@pytest.mark.slow
def test_atlas_five_atoms():
    _sweep({5}, (6, 7, 8), (BondOrder.SINGLE,))
    _sweep({5}, (6,), (BondOrder.SINGLE, BondOrder.DOUBLE))


@pytest.mark.slow
def test_atlas_six_atoms_single_bonds():
    _sweep({6}, (6, 7), (BondOrder.SINGLE,))


def _automorphisms(g: nx.Graph, edges):
    index = {frozenset(e): k for k, e in enumerate(edges)}
    for p in nx.algorithms.isomorphism.GraphMatcher(g, g).isomorphisms_iter():
        yield p, [index[frozenset((p[u], p[v]))] for u, v in edges]


def _is_orbit_min(zs, os_, autos) -> bool:
    """(zs, os_) が自己同型で移した像の中で辞書順最小か。"""
    for p, ep in autos:
        z2 = [0] * len(zs)
        for i, z in enumerate(zs):
            z2[p[i]] = z
        o2 = [0] * len(os_)
        for j, o in enumerate(os_):
            o2[ep[j]] = o
        if (tuple(z2), tuple(o2)) < (zs, os_):
            return False
    return True


def _valence_bounded_sweep(n, elements, orders):
    """n 頂点の全グラフ × 元素 × 結合次数のうち、各原子の次数和が最大原子価以下のものを
    自己同型で割った代表だけハッシュし、同じダイジェストどうしが同型かを確かめる。"""
    cap = {z: max(allowed_valences(z, 0)) for z in elements}
    buckets = defaultdict(list)
    count = 0
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() != n:
            continue
        edges = sorted(tuple(sorted(e)) for e in g.edges())
        autos = list(_automorphisms(g, edges))
        for zs in itertools.product(elements, repeat=n):
            if any(g.degree(i) > cap[z] for i, z in enumerate(zs)):
                continue
            for os_ in itertools.product(orders, repeat=len(edges)):
                load = [0] * n
                for (u, v), o in zip(edges, os_):
                    load[u] += int(o)
                    load[v] += int(o)
                if any(load[i] > cap[z] for i, z in enumerate(zs)):
                    continue
                if not _is_orbit_min(zs, os_, autos):
                    continue
                h = nx.Graph()
                h.add_nodes_from(range(n))
                h.add_edges_from(edges)
                buckets[wl_hash(_mol_of(h, zs, os_))].append((h, zs, os_))
                count += 1

    nm = categorical_node_match("z", None)
    em = categorical_edge_match("order", None)
    for members in buckets.values():
        ref = _labeled(*members[0])
        for g, zs, os_ in members[1:]:
            assert nx.is_isomorphic(ref, _labeled(g, zs, os_), node_match=nm, edge_match=em), (zs, os_)
    return count, len(buckets)


def test_orbit_min_keeps_one_per_orbit():
    # 3 頂点の鎖: 端の入れ替えで (C,C,N) と (N,C,C) は同じ軌道
    g = nx.path_graph(3)
    edges = sorted(g.edges())
    autos = list(_automorphisms(g, edges))
    single = (BondOrder.SINGLE, BondOrder.SINGLE)
    kept = [zs for zs in itertools.product((6, 7), repeat=3) if _is_orbit_min(zs, single, autos)]
    assert len(kept) == 6
    assert (6, 6, 7) in kept and (7, 6, 6) not in kept


@pytest.mark.slow
def test_atlas_six_atoms_all_elements_and_orders():
    count, classes = _valence_bounded_sweep(6, (6, 7, 8), (BondOrder.SINGLE, BondOrder.DOUBLE))
    # 代表は互いに非同型なので、衝突が無ければクラス数 = 代表数
    assert classes == count
