"""
lib/posenc/spatial.py
=================================
フラグメントグラフ上の位置特徴（埋め込み前の数値層）。

- hop_matrix: BFS による全点対最短路長（到達不能・対角は 0）
- wl_role_ids: フラグメントダイジェストを種にした WL 精密化の収束ラベル → 密な id
- coulomb_features: C[i][j] = (1/N) Σ_k (0.5 Z_j^2.4 δ_jk + Z_j Z_k / d0² (1 − δ_jk))
  右辺は i に依存しないので全行が同じになる（式のとおり実装）
- bucketize: 埋め込みテーブル用の整数バケット（hop はそのまま、Coulomb 行平均は幅 0.05）

公開関数一覧
------------
- build_fragment_graph(digests, links, payload) -> FragmentGraph
- hop_matrix(fg) -> HopMatrix
- wl_role_ids(fg, max_iterations=8) -> WLRoleIds
- coulomb_features(fg, Z, d0=1.0) -> CoulombFeatures
- fragment_z(fragments, mode, charges=None) -> list[float]
- bucketize(hop, coulomb, width=0.05) -> dict
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from lib.errors import NegativeBase
from lib.wl.hashing import digest, refine_until_stable

__all__ = [
    "DEFAULT_D0",
    "DEFAULT_BUCKET_WIDTH",
    "ROLE_MAX_ITERATIONS",
    "ZMode",
    "FragmentGraph",
    "HopMatrix",
    "WLRoleIds",
    "CoulombFeatures",
    "build_fragment_graph",
    "hop_matrix",
    "wl_role_ids",
    "coulomb_features",
    "fragment_z",
    "bucketize",
]

DEFAULT_D0 = 1.0
DEFAULT_BUCKET_WIDTH = 0.05
ROLE_MAX_ITERATIONS = 8


class ZMode(str, Enum):
    ATOMIC_SUM = "atomic_sum"
    GASTEIGER = "gasteiger"


@dataclass(frozen=True)
class FragmentGraph:
    node_count: int
    edges: Tuple[Tuple[int, int, int], ...] = ()
    digests: Tuple[str, ...] = ()
    charges: Tuple[float, ...] = ()

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.node_count))
        g.add_edges_from((i, j, {"order": o}) for i, j, o in self.edges)
        return g


@dataclass(frozen=True)
class HopMatrix:
    H: np.ndarray


@dataclass(frozen=True)
class WLRoleIds:
    w: Tuple[int, ...]
    iterations: int = 0


@dataclass(frozen=True)
class CoulombFeatures:
    C: np.ndarray
    d0: float
    Z: Tuple[float, ...] = field(default=())

    @property
    def row_means(self) -> np.ndarray:
        if self.C.size == 0:
            return np.zeros(0)
        return self.C.mean(axis=1)


def build_fragment_graph(
    digests: Sequence[str],
    links: Sequence[Any],
    charges: Optional[Sequence[float]] = None,
) -> FragmentGraph:
    """tokenizer の links（frag_i, _, frag_j, _, order）からフラグメントグラフを作る。"""
    edges = tuple((int(l[0]), int(l[2]), int(l[4])) for l in links)
    n = len(digests)
    return FragmentGraph(
        node_count=n,
        edges=edges,
        digests=tuple(str(d) for d in digests),
        charges=tuple(float(c) for c in charges) if charges is not None else tuple([0.0] * n),
    )


# ============================================================
# hop
# ============================================================
def hop_matrix(fg: FragmentGraph) -> HopMatrix:
    n = fg.node_count
    H = np.zeros((n, n), dtype=np.int64)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i, j, _ in fg.edges)
    for i, dist in nx.all_pairs_shortest_path_length(g):
        for j, d in dist.items():
            H[i, j] = d
    return HopMatrix(H)


# ============================================================
# WL role
# ============================================================
def wl_role_ids(fg: FragmentGraph, max_iterations: int = ROLE_MAX_ITERATIONS) -> WLRoleIds:
    """分割が安定するか max_iterations 回まで精密化し、ラベルのソート順で 0 から採番。"""
    n = fg.node_count
    if n == 0:
        return WLRoleIds(())
    seeds = [digest(b"F" + d.encode("ascii")) for d in fg.digests]
    neighbors: List[List[Tuple[bytes, int]]] = [[] for _ in range(n)]
    for i, j, order in fg.edges:
        el = digest(b"E" + struct.pack("<q", order))
        neighbors[i].append((el, j))
        neighbors[j].append((el, i))
    labels, iters = refine_until_stable(seeds, neighbors, max_iterations)
    ids = {lab: k for k, lab in enumerate(sorted(set(labels)))}
    return WLRoleIds(tuple(ids[lab] for lab in labels), iters)


# ============================================================
# Coulomb
# ============================================================
def coulomb_features(fg: FragmentGraph, Z: Sequence[float], d0: float = DEFAULT_D0) -> CoulombFeatures:
    """式どおりの Coulomb 特徴。

    Raises
    ------
    ValueError
        d0 <= 0、Z の長さ不一致・非有限
    NegativeBase
        Z_j < 0（2.4 乗が定義できない）
    """
    n = fg.node_count
    z = np.asarray(list(Z), dtype=float)
    if z.shape != (n,):
        raise ValueError(f"Z has {z.size} values for {n} nodes")
    if not d0 > 0:
        raise ValueError(f"d0 must be > 0 (got {d0})")
    if not np.all(np.isfinite(z)):
        raise ValueError("Z must be finite")
    neg = np.flatnonzero(z < 0)
    if neg.size:
        raise NegativeBase(int(neg[0]), float(z[neg[0]]))
    if n == 0:
        return CoulombFeatures(np.zeros((0, 0)), d0, ())
    # 列 j の値: (0.5 Z_j^2.4 + Z_j (ΣZ − Z_j) / d0²) / N
    col = (0.5 * np.power(z, 2.4) + z * (z.sum() - z) / (d0 * d0)) / n
    C = np.tile(col, (n, 1))
    return CoulombFeatures(C, float(d0), tuple(float(v) for v in z))


def fragment_z(
    fragments: Sequence[Any],
    mode: ZMode = ZMode.ATOMIC_SUM,
    charges: Optional[Sequence[float]] = None,
) -> List[float]:
    """Coulomb 用のノード Z。

    - ATOMIC_SUM: フラグメントの非ダミー原子の原子番号の和
    - GASTEIGER: フラグメント電荷 Q を Q + |min Q| + 1 にずらした値
    """
    mode = ZMode(mode)
    if mode is ZMode.ATOMIC_SUM:
        return [float(sum(a.atomic_number for a in f.graph.atoms)) for f in fragments]
    if charges is None:
        raise ValueError("GASTEIGER mode needs fragment charges")
    q = [float(c) for c in charges]
    if not q:
        return []
    shift = abs(min(q)) + 1.0
    return [v + shift for v in q]


def bucketize(hop: HopMatrix, coulomb: CoulombFeatures, width: float = DEFAULT_BUCKET_WIDTH) -> Dict[str, Any]:
    if not width > 0:
        raise ValueError(f"bucket width must be > 0 (got {width})")
    return {
        "hop": hop.H.astype(int).tolist(),
        "coulomb": [int(np.floor(v / width)) for v in coulomb.row_means],
        "coulomb_bucket_width": width,
    }
