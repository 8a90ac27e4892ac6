# pages/20_WLハッシュ.py
# ------------------------------------------------------------
# 🔑 WL ハッシュ
# - 複数 SMILES（1 行 1 つ）のダイジェストを並べ、同一グラフをグループ化
# - 原子ごとのラベル（先頭 8 桁）を表示
# ------------------------------------------------------------

from __future__ import annotations

import pandas as pd
import streamlit as st

from lib.chem import parse_smiles, sanitize, write_smiles
from lib.errors import FragtokError
from lib.wl import DEFAULT_T, atom_ranks, wl_hash, wl_refine

st.set_page_config(page_title="WL ハッシュ", page_icon="🔑", layout="centered")
st.title("🔑 WL ハッシュ")

text = st.text_area("SMILES（1 行 1 つ）", value="OCC\nC(O)C\nC/C=C/C\nC/C=C\\C", height=160)
T = st.slider("反復回数 T", min_value=0, max_value=8, value=DEFAULT_T)

rows = []
for line in text.splitlines():
    smi = line.strip()
    if not smi:
        continue
    try:
        mol = parse_smiles(smi)
        sanitize(mol)
    except FragtokError as e:
        rows.append({"input": smi, "digest": "", "canonical": "", "error": str(e)})
        continue
    rows.append({"input": smi, "digest": wl_hash(mol, T).hex, "canonical": write_smiles(mol), "error": ""})

if not rows:
    st.stop()

df = pd.DataFrame(rows)
st.dataframe(df, width="stretch", hide_index=True)
groups = df[df["digest"] != ""].groupby("digest")["input"].apply(list)
dup = groups[groups.map(len) > 1]
if len(dup):
    st.subheader("同一ダイジェスト")
    for dg, members in dup.items():
        st.write(f"- `{dg[:16]}…`: " + ", ".join(f"`{m}`" for m in members))

st.subheader("原子ラベル")
pick = st.selectbox("分子", [r["input"] for r in rows if not r["error"]])
if pick:
    mol = parse_smiles(pick)
    sanitize(mol)
    labels = wl_refine(mol, T)
    ranks = atom_ranks(mol)
    st.dataframe(
        pd.DataFrame([
            {"atom": i, "symbol": a.symbol, "H": a.total_h, "rank": ranks[i], "label": labels.per_node[i].hex()[:8]}
            for i, a in enumerate(mol.atoms)
        ]),
        width="stretch",
        hide_index=True,
    )
