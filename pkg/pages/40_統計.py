# pages/40_統計.py
# ------------------------------------------------------------
# 📊 フラグメント統計
# - SMILES ファイル（.smi / .txt）をアップロード
# - 粒度 t ごとのフラグメント数/分子、原子数/トークンのヒストグラム
# - CSV ダウンロード（fragments_per_molecule.csv / atoms_per_token.csv）
# ------------------------------------------------------------

from __future__ import annotations

import streamlit as st

from lib.app_settings import SETTINGS
from lib.chem import iter_smiles_lines, parse_corpus
from lib.tokenizer import fragment_stats
from lib.ui import cache_data, load_table_cached

st.set_page_config(page_title="フラグメント統計", page_icon="📊", layout="wide")
st.title("📊 フラグメント統計")

table = load_table_cached(SETTINGS.merges_path)
if table is None:
    st.error("マージ表がありません。先に `fragtok.py train` を実行してください。")
    st.stop()

uploaded = st.file_uploader("SMILES ファイル", type=["smi", "txt"])
if uploaded is None:
    st.stop()

t = st.slider("粒度 t", min_value=0, max_value=len(table), value=min(int(SETTINGS.get("tokenizer", "t")), len(table)))


@cache_data()(show_spinner=False)
def _stats(data: bytes, t: int, merges_fp: str):
    parsed = parse_corpus(iter_smiles_lines(data.decode("utf-8").splitlines()))
    stats = fragment_stats((m for _, m in parsed.molecules), table, t)
    return stats.to_frames(), stats.mean_fragments, len(parsed.failures)


with st.spinner("集計中…"):
    frames, mean_frag, failed = _stats(uploaded.getvalue(), t, table.fingerprint())

if failed:
    st.warning(f"{failed} 分子は読み込めませんでした")
st.write(f"- 平均フラグメント数/分子: **{mean_frag:.2f}**")

c1, c2 = st.columns(2)
with c1:
    st.caption("フラグメント数 / 分子")
    st.bar_chart(frames["fragments_per_molecule"].set_index("fragments"))
with c2:
    st.caption("原子数 / トークン")
    st.bar_chart(frames["atoms_per_token"].set_index("atoms"))

for name, df in frames.items():
    st.download_button(
        f"📥 {name}.csv",
        data=df.to_csv(index=False).encode("utf-8"),
        file_name=f"{name}.csv",
        mime="text/csv",
    )
