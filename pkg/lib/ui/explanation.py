# -*- coding: utf-8 -*-
# lib/ui/explanation.py
#
# 各ページの「使い方」expander をここに集約する

from __future__ import annotations

import streamlit as st


def render_overview_expander() -> None:
    with st.expander("ℹ️ fragtok の処理の流れ（クリックで展開）", expanded=False):
        st.markdown(
            """
1. **train**: コーパス全体で「隣り合うラベル対 (a, b, 結合次数)」を数え、  
   `count / sqrt(n_a · n_b)` が最大の対を 1 つずつマージしてマージ表を作る。
2. **dict**: マージ表の先頭 `t` 個を各分子に再生し、得られたフラグメントを  
   WL ダイジェストで同定してトークン辞書を作る（PAD=0, UNK=1, MASK=2, CLS=3）。
3. **tokenize / dataset**: 分子 → トークン列 + フラグメントグラフ上の位置特徴  
   （hop 距離・WL role id・Coulomb 行列）+ 分子記述子。
4. **analogues**: ダミー原子 `*` を持つスキャフォールドに候補フラグメントを溶接する。

`t` が小さいほど原子に近い細かいトークン、大きいほど大きな部分構造になる。
"""
        )


def render_tokenize_expander() -> None:
    with st.expander("ℹ️ 表示の見方", expanded=False):
        st.markdown(
            """
- **フラグメント表**: トークン id（辞書に無ければ UNK=1）、ダイジェスト先頭、SMILES（`*` は切断点）
- **リンク**: フラグメント i のダミー原子 ↔ フラグメント j のダミー原子、結合次数
- **hop**: フラグメントグラフ上の最短ホップ数（到達不能は 0）
- **Coulomb**: `C[i][j] = (1/N) Σ_k (0.5·Z_j^2.4 δ_jk + Z_j·Z_k / d0² (1 − δ_jk))`（全行が同じ）
- **再構成**: トークン列とリンクから元の分子に戻し、WL ダイジェストが一致するかを確認
"""
        )


def render_analogue_expander() -> None:
    with st.expander("ℹ️ 類縁体生成のルール", expanded=False):
        st.markdown(
            """
- スキャフォールドと候補の **接続シグネチャ**（結合次数ごとのダミー原子数）が一致する候補のみ使う
- 同じ次数のダミー同士で全ての対応付けを試す（1 候補あたり上限 `max_mappings`）
- 原子価チェックに通らない生成物は `sanitize` として除外
- WL ダイジェストが同じ生成物は 1 つにまとめ、ダイジェスト昇順に並べる
"""
        )
