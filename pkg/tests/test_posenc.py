"""
tests/test_posenc.py
=================================
hop / WL role / Coulomb / Gasteiger。
"""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from lib.chem import parse_smiles
from lib.errors import MissingParameters, NegativeBase
from lib.posenc import (
    FragmentGraph,
    ZMode,
    bucketize,
    build_fragment_graph,
    coulomb_features,
    fragment_charges,
    fragment_z,
    gasteiger_charges,
    hop_matrix,
    wl_role_ids,
)
from lib.tokenizer import MergeTable, apply_merges, fragmentize
from tests.helpers import random_perm


def _fg(n, edges, digests=None):
    digests = digests or ["0" * 32] * n
    return FragmentGraph(n, tuple((i, j, 1) for i, j in edges), tuple(digests), tuple([0.0] * n))


def _path(n):
    return _fg(n, [(i, i + 1) for i in range(n - 1)])


# ---------- hop ----------
def test_hop_path_of_three():
    assert hop_matrix(_path(3)).H.tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]


def test_hop_single_fragment():
    assert hop_matrix(_fg(1, [])).H.tolist() == [[0]]


def test_hop_disconnected_is_zero():
    assert hop_matrix(_fg(2, [])).H.tolist() == [[0, 0], [0, 0]]


def _floyd_warshall(n, edges):
    inf = math.inf
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for i, j in edges:
        d[i][j] = d[j][i] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return [[0 if v == inf else int(v) for v in row] for row in d]


@pytest.mark.parametrize("seed", range(500))
def test_hop_matches_floyd_warshall(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 9)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3]
    # 多重辺（同じフラグメント対の 2 本目のリンク）も混ぜる
    if edges and rng.random() < 0.2:
        edges.append(edges[0])
    assert hop_matrix(_fg(n, edges)).H.tolist() == _floyd_warshall(n, edges)


# ---------- WL role ----------
def test_roles_path_of_three():
    w = wl_role_ids(_path(3)).w
    assert w[0] == w[2] != w[1]


def test_roles_distinct_payloads():
    digests = [f"{k:032x}" for k in range(4)]
    w = wl_role_ids(_fg(4, [(0, 1), (1, 2), (2, 3)], digests)).w
    assert sorted(w) == [0, 1, 2, 3]


def test_roles_cycle_is_uniform():
    w = wl_role_ids(_fg(6, [(i, (i + 1) % 6) for i in range(6)])).w
    assert set(w) == {0}


def test_roles_are_dense_and_permutation_invariant():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(2, 8)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        digests = [f"{rng.randrange(3):032x}" for _ in range(n)]
        w = wl_role_ids(_fg(n, edges, digests)).w
        assert sorted(set(w)) == list(range(len(set(w))))
        p = random_perm(n, rng.randrange(1000))
        inv = {new: old for old, new in enumerate(p)}
        pw = wl_role_ids(_fg(n, [(p[i], p[j]) for i, j in edges], [digests[inv[k]] for k in range(n)])).w
        assert [pw[p[i]] for i in range(n)] == list(w)


# ---------- Coulomb ----------
def test_coulomb_single_node():
    c = coulomb_features(_fg(1, []), [1.0], 2.0)
    assert c.C.tolist() == [[0.5]]


def test_coulomb_two_equal_nodes():
    c = coulomb_features(_path(2), [1.0, 1.0], 1.0)
    assert np.allclose(c.C, 0.75)


def test_coulomb_two_nodes():
    c = coulomb_features(_path(2), [2.0, 1.0], 1.0)
    want0 = (0.5 * 2 ** 2.4 + 2) / 2
    assert np.allclose(c.C[:, 0], want0)
    assert np.allclose(c.C[:, 1], 1.25)


def test_coulomb_matches_direct_formula():
    rng = np.random.default_rng(0)
    for n in range(1, 8):
        z = rng.uniform(0.1, 30.0, n)
        d0 = float(rng.uniform(0.5, 3.0))
        c = coulomb_features(_path(n), z, d0)
        for i in range(n):
            for j in range(n):
                want = sum((0.5 * z[j] ** 2.4 if j == k else z[j] * z[k] / d0 ** 2) for k in range(n)) / n
                assert c.C[i, j] == pytest.approx(want, rel=1e-9)


def test_coulomb_negative_base():
    with pytest.raises(NegativeBase) as ei:
        coulomb_features(_path(2), [1.0, -0.5], 1.0)
    assert ei.value.index == 1


@pytest.mark.parametrize("d0", [0.0, -1.0])
def test_coulomb_bad_d0(d0):
    with pytest.raises(ValueError):
        coulomb_features(_path(2), [1.0, 1.0], d0)


def test_fragment_z_modes():
    m = parse_smiles("CCO")
    frags, _ = fragmentize(m, apply_merges(m, MergeTable(), 0))
    assert fragment_z(frags, ZMode.ATOMIC_SUM) == [6.0, 6.0, 8.0]
    z = fragment_z(frags, ZMode.GASTEIGER, [-0.3, 0.1, 0.2])
    assert z == pytest.approx([1.0, 1.4, 1.5])
    assert min(z) >= 1.0
    with pytest.raises(ValueError):
        fragment_z(frags, ZMode.GASTEIGER)


def test_bucketize():
    c = coulomb_features(_path(2), [1.0, 1.0], 1.0)
    b = bucketize(hop_matrix(_path(2)), c, 0.25)
    assert b["hop"] == [[0, 1], [1, 0]]
    assert b["coulomb"] == [3, 3]
    assert b["coulomb_bucket_width"] == 0.25


# ---------- Gasteiger ----------
def test_methane_charges():
    pc = gasteiger_charges(parse_smiles("C"), strict=True)
    assert pc.q.sum() == pytest.approx(0.0, abs=1e-6)
    assert pc.q_atom[0] < 0
    assert pc.q_hydrogens[0] > 0


@pytest.mark.parametrize("smiles, total", [("CCO", 0), ("CC(=O)[O-]", -1), ("[NH4+]", 1), ("O=[N+]([O-])c1ccccc1", 0)])
def test_charge_conservation(smiles, total):
    pc = gasteiger_charges(parse_smiles(smiles), strict=True)
    assert pc.ok
    assert pc.q.sum() == pytest.approx(total, abs=1e-6)


def test_charges_follow_atoms(permute):
    m = parse_smiles("CC(=O)Nc1ccc(O)cc1")
    q = gasteiger_charges(m).q
    p = random_perm(m.num_atoms, 11)
    qp = gasteiger_charges(permute(m, p)).q
    assert np.allclose([qp[p[i]] for i in range(m.num_atoms)], q, atol=1e-9)


def test_missing_parameters():
    m = parse_smiles("C[Si](C)(C)C")
    with pytest.raises(MissingParameters):
        gasteiger_charges(m, strict=True)
    pc = gasteiger_charges(m)
    assert not pc.ok
    assert fragment_charges(pc, [[0, 1], [2]]) == [0.0, 0.0]


def test_fragment_charges_skip_dummies():
    m = parse_smiles("CCO")
    pc = gasteiger_charges(m)
    q = pc.q
    assert fragment_charges(pc, [[0, -1], [1, 2, -1]]) == pytest.approx([q[0], q[1] + q[2]])


def test_build_fragment_graph_from_links():
    fg = build_fragment_graph(["a" * 32, "b" * 32], [(0, 1, 1, 0, 2)])
    assert fg.node_count == 2 and fg.edges == ((0, 1, 2),)
    assert fg.charges == (0.0, 0.0)
