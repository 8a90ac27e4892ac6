# pages/10_トークナイズ.py
# ------------------------------------------------------------
# 🧩 トークナイズ（1 分子）
#
# 仕様
# ----
# - SMILES を入力し、粒度 t をスライダーで選ぶ
# - フラグメント / リンク / hop / WL role / Coulomb / 記述子を表示
# - 再構成して WL ダイジェストが元と一致するか確認
#
# 依存
# ----
# - lib.sequence.serialize / reconstruct
# - lib.ui.loaders（マージ表・辞書のキャッシュ）
# ------------------------------------------------------------

from __future__ import annotations

import pandas as pd
import streamlit as st

from lib.app_settings import SETTINGS
from lib.chem import parse_smiles, write_smiles
from lib.errors import FragtokError
from lib.posenc import ZMode
from lib.sequence import DESCRIPTOR_NAMES, reconstruct, serialize
from lib.ui import load_dictionary_cached, load_table_cached
from lib.ui.explanation import render_tokenize_expander
from lib.wl import wl_hash

st.set_page_config(page_title="トークナイズ", page_icon="🧩", layout="wide")
st.title("🧩 トークナイズ")
render_tokenize_expander()

table = load_table_cached(SETTINGS.merges_path)
dictionary = load_dictionary_cached(SETTINGS.dictionary_path)
if table is None or dictionary is None:
    st.error("マージ表またはトークン辞書がありません。先に `fragtok.py train` / `fragtok.py dict` を実行してください。")
    st.stop()

smiles = st.text_input("SMILES", value="CC(C)Cc1ccc(cc1)C(C)C(=O)O")
col1, col2, col3 = st.columns(3)
with col1:
    t = st.slider("粒度 t", min_value=0, max_value=len(table), value=min(dictionary.t, len(table)))
with col2:
    d0 = st.number_input("d0", min_value=0.01, value=float(SETTINGS.get("posenc", "d0")), step=0.1)
with col3:
    z_mode = st.selectbox("Z モード", [m.value for m in ZMode])

if t != dictionary.t:
    st.caption(f"※ 辞書は t={dictionary.t} で作成されています。t が異なると UNK が増えます。")

try:
    mol = parse_smiles(smiles)
    seq = serialize(mol, table, t, dictionary, "input", d0, ZMode(z_mode))
except FragtokError as e:
    st.error(f"{type(e).__name__}: {e}")
    st.stop()

st.subheader("📌 フラグメント")
rows = []
for k, (tid, dg) in enumerate(zip(seq.token_ids, seq.digests)):
    entry = dictionary.entry_for_id(tid)
    rows.append({
        "pos": k,
        "token_id": tid,
        "digest": (dg or "")[:12],
        "smiles": entry.smiles if entry else "(UNK)",
        "charge": round(seq.charges[k], 4),
        "role": seq.roles.w[k],
    })
st.dataframe(pd.DataFrame(rows), width="stretch", hide_index=True)
st.caption(f"UNK: {seq.unk_count} / {len(seq)}")

with st.expander("🔗 リンク", expanded=False):
    st.dataframe(
        pd.DataFrame([{**l._asdict(), "order": l.order.name} for l in seq.links]),
        width="stretch",
        hide_index=True,
    )

c1, c2 = st.columns(2)
with c1:
    st.caption("hop 行列")
    st.dataframe(pd.DataFrame(seq.hop.H), width="stretch")
with c2:
    st.caption("Coulomb 行列")
    st.dataframe(pd.DataFrame(seq.coulomb.C).round(3), width="stretch")

st.subheader("🧮 分子記述子")
st.dataframe(
    pd.DataFrame([dict(zip(DESCRIPTOR_NAMES, seq.descriptors.d))]),
    width="stretch",
    hide_index=True,
)

st.subheader("♻️ 再構成")
try:
    rebuilt = reconstruct(seq, dictionary)
except FragtokError as e:
    st.warning(f"再構成できません: {type(e).__name__}: {e}")
else:
    same = wl_hash(rebuilt) == wl_hash(mol)
    st.write(f"- 再構成 SMILES: `{write_smiles(rebuilt)}`")
    st.write(f"- ダイジェスト一致: **{'✅' if same else '❌'}**")
