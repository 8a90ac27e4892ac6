# app.py
# ------------------------------------------------------------
# 🧪 fragtok (Streamlit)
# - 現在の設定（settings.toml / 環境変数）とファイルの有無を表示
# - 各ページへのナビゲーション
# ------------------------------------------------------------
from __future__ import annotations

import streamlit as st

from lib.app_settings import SETTINGS, APP_ROOT
from lib.ui import load_dictionary_cached, load_table_cached
from lib.ui.explanation import render_overview_expander

# ===============================
# 基本設定（ページ）
# ===============================
st.set_page_config(page_title="fragtok", page_icon="🧪", layout="wide")
st.title("🧪 fragtok: 分子グラフのフラグメント・トークナイザ")

render_overview_expander()

# ===============================
# 📂 現在の設定
# ===============================
st.subheader("📂 現在の設定")
st.text(f"APP_ROOT        : {APP_ROOT}")
st.text(f"settings file   : {SETTINGS.settings_path}")
if SETTINGS.errors:
    for e in SETTINGS.errors:
        st.error(f"環境変数エラー: {e}")

with st.expander("全設定値", expanded=False):
    st.dataframe(
        [{"key": k, "value": v} for k, v in SETTINGS.to_dict().items()],
        width="stretch",
        hide_index=True,
    )

# ===============================
# 📦 学習済みファイル
# ===============================
st.subheader("📦 学習済みファイル")
col1, col2 = st.columns(2)
with col1:
    table = load_table_cached(SETTINGS.merges_path)
    if table is None:
        st.warning(f"マージ表がありません: `{SETTINGS.merges_path}`")
        st.caption("`python fragtok.py train --input corpus.smi` で作成できます。")
    else:
        st.success(f"マージ表: {len(table)} ルール")
        st.caption(f"corpus fingerprint: `{table.corpus_fingerprint[:16]}…`")
with col2:
    d = load_dictionary_cached(SETTINGS.dictionary_path)
    if d is None:
        st.warning(f"トークン辞書がありません: `{SETTINGS.dictionary_path}`")
        st.caption("`python fragtok.py dict --input corpus.smi --t 100` で作成できます。")
    else:
        st.success(f"トークン辞書: {len(d)} トークン（t={d.t}）")

# ===============================
# ナビゲーション
# ===============================
with st.sidebar:
    st.header("ナビゲーション")
    st.page_link("pages/10_トークナイズ.py", label="🧩 トークナイズ")
    st.page_link("pages/20_WLハッシュ.py", label="🔑 WL ハッシュ")
    st.page_link("pages/30_類縁体生成.py", label="🧬 類縁体生成")
    st.page_link("pages/40_統計.py", label="📊 フラグメント統計")
