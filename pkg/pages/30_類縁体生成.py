# pages/30_類縁体生成.py
# ------------------------------------------------------------
# 🧬 類縁体生成（フラグメント差し替え）
#
# 仕様
# ----
# - スキャフォールド SMILES（'*' が接続点）と候補フラグメント（1 行 1 つ）
# - 生成物を表示し JSONL でダウンロード
# ------------------------------------------------------------

from __future__ import annotations

import json

import pandas as pd
import streamlit as st

from lib.analogue import attachment_signature, generate_analogues
from lib.app_settings import SETTINGS
from lib.chem import parse_smiles, sanitize
from lib.errors import FragtokError
from lib.ui.explanation import render_analogue_expander

st.set_page_config(page_title="類縁体生成", page_icon="🧬", layout="wide")
st.title("🧬 類縁体生成")
render_analogue_expander()

scaffold_smi = st.text_input("スキャフォールド", value="CC(C)Cc1ccc(*)cc1")
cand_text = st.text_area("候補フラグメント（1 行 1 つ）", value="*C(C)C(=O)O\n*Cl\n*C(=O)O\n*N", height=140)
max_mappings = st.number_input("max_mappings", min_value=1, value=int(SETTINGS.get("run", "max_mappings")))

try:
    scaffold = parse_smiles(scaffold_smi)
    sanitize(scaffold)
except FragtokError as e:
    st.error(f"スキャフォールド: {e}")
    st.stop()

st.caption(f"接続シグネチャ: {attachment_signature(scaffold).as_dict()}")

candidates, bad = [], []
for line in cand_text.splitlines():
    smi = line.strip()
    if not smi:
        continue
    try:
        m = parse_smiles(smi)
        sanitize(m)
        candidates.append(m)
    except FragtokError as e:
        bad.append(f"{smi}: {e}")
for b in bad:
    st.warning(b)

try:
    aset = generate_analogues(scaffold, candidates, int(max_mappings))
except FragtokError as e:
    st.error(f"{type(e).__name__}: {e}")
    st.stop()

st.subheader(f"生成物 {len(aset.results)} 件")
rows = [
    {"candidate": r.candidate_index, "mapping": str(list(r.mapping)), "smiles": r.smiles, "digest": r.digest[:12]}
    for r in aset.results
]
st.dataframe(pd.DataFrame(rows), width="stretch", hide_index=True)
if aset.rejected:
    st.caption("除外: " + ", ".join(f"{k}={v}" for k, v in sorted(aset.rejected.items())))
if aset.truncated:
    st.caption(f"対応付けが上限で打ち切られた候補: {aset.truncated}")

payload = "".join(
    json.dumps({"candidate_index": r.candidate_index, "mapping": [list(p) for p in r.mapping],
                "smiles": r.smiles, "digest": r.digest}, ensure_ascii=False) + "\n"
    for r in aset.results
)
st.download_button("📥 JSONL をダウンロード", data=payload.encode("utf-8"),
                   file_name="analogues.jsonl", mime="application/json")
