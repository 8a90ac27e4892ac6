"""
tests/test_dictionary.py
=================================
トークン辞書・lookup・保存形式・統計。
"""

from __future__ import annotations

import json

import pytest

from lib.chem import parse_smiles
from lib.errors import FormatVersionError, GranularityOutOfRange
from lib.tokenizer import (
    CLS,
    MASK,
    PAD,
    UNK,
    FragmentCounts,
    FragmentStats,
    MergeTable,
    apply_merges,
    build_dictionary,
    count_fragments,
    dictionary_from_counts,
    fragment_stats,
    fragmentize,
    load_dictionary,
    load_merge_table,
    lookup,
    save_dictionary,
    save_merge_table,
    tokenize,
    train,
)
from lib.wl import wl_hash


def _mols(*smiles):
    return [parse_smiles(s) for s in smiles]


def test_specials_are_fixed():
    assert (PAD, UNK, MASK, CLS) == (0, 1, 2, 3)


def test_empty_corpus_has_only_specials():
    d = build_dictionary([], MergeTable(), 0)
    assert len(d) == 0 and d.size == 4


def test_ids_are_dense_and_ranked(dict_at, sample_table):
    d = dict_at(len(sample_table))
    entries = sorted(d.entries.values(), key=lambda e: e.token_id)
    assert [e.token_id for e in entries] == list(range(4, 4 + len(d)))
    keys = [(-e.count, e.digest) for e in entries]
    assert keys == sorted(keys)
    assert d.size == len(d) + 4


def test_lookup_known_and_novel():
    table = MergeTable()
    d = build_dictionary(_mols("CCO"), table, 0)
    frags, _ = fragmentize(parse_smiles("CCO"), apply_merges(parse_smiles("CCO"), table, 0))
    assert all(lookup(d, f) >= 4 for f in frags)
    novel, _ = fragmentize(parse_smiles("CCl"), apply_merges(parse_smiles("CCl"), table, 0))
    ids = [lookup(d, f) for f in novel]
    assert ids[1] == UNK and ids[0] >= 4


def test_two_spellings_same_id():
    mols = _mols("CCO")
    table = train(mols, 5)
    t = len(table)
    d = build_dictionary(mols, table, t)
    a = tokenize(parse_smiles("CCO"), table, t, d)
    b = tokenize(parse_smiles("OCC"), table, t, d)
    assert len(a.token_ids) == 1
    assert a.token_ids == b.token_ids and a.unk_count == 0


def test_dangling_bond_variants_are_separate_entries():
    d = build_dictionary(_mols("CC", "CCC", "CC(C)C"), MergeTable(), 0)
    want = {wl_hash(parse_smiles(s)).hex for s in ("C*", "*C*", "*C(*)*")}
    assert set(d.entries) == want
    assert d.entries[wl_hash(parse_smiles("C*")).hex].count == 2 + 2 + 3


def test_entry_smiles_reparse_to_digest(dict_at, sample_table):
    for t in (0, len(sample_table)):
        for key, e in dict_at(t).entries.items():
            assert wl_hash(parse_smiles(e.smiles)).hex == key
            assert wl_hash(e.graph).hex == key


def test_build_rejects_bad_t(sample_mols, sample_table):
    with pytest.raises(GranularityOutOfRange):
        build_dictionary(sample_mols, sample_table, len(sample_table) + 1)


def test_parallel_counts_merge_like_serial(sample_mols, sample_table):
    t = 10
    half = len(sample_mols) // 2
    merged = FragmentCounts()
    merged.update(count_fragments(sample_mols[half:], sample_table, t))
    merged.update(count_fragments(sample_mols[:half], sample_table, t))
    serial = count_fragments(sample_mols, sample_table, t)
    assert merged.counts == serial.counts
    a = dictionary_from_counts(merged, sample_table, t)
    b = dictionary_from_counts(serial, sample_table, t)
    assert {k: e.token_id for k, e in a.entries.items()} == {k: e.token_id for k, e in b.entries.items()}


# ---------- 保存形式 ----------
def test_merge_table_round_trip(tmp_path, sample_table):
    p = save_merge_table(sample_table, tmp_path / "merges.json")
    data = json.loads(p.read_text(encoding="utf-8"))
    assert data["version"] == 1
    assert data["rules"][0]["order"] in {"SINGLE", "DOUBLE", "TRIPLE", "AROMATIC"}
    assert load_merge_table(p) == sample_table


def test_dictionary_round_trip(tmp_path, dict_at, sample_table):
    d = dict_at(len(sample_table))
    p = save_dictionary(d, tmp_path / "dict.json")
    back = load_dictionary(p, verify=True)
    assert back.t == d.t and back.size == d.size
    assert back.merges_fingerprint == sample_table.fingerprint()
    for key, e in d.entries.items():
        got = back.entries[key]
        assert (got.token_id, got.smiles, got.count) == (e.token_id, e.smiles, e.count)
        assert wl_hash(got.graph).hex == key


@pytest.mark.parametrize("loader, name", [(load_merge_table, "merges.json"), (load_dictionary, "dict.json")])
def test_unknown_version_rejected(tmp_path, loader, name):
    p = tmp_path / name
    p.write_text(json.dumps({"version": 2, "rules": [], "entries": []}), encoding="utf-8")
    with pytest.raises(FormatVersionError):
        loader(p)


def test_broken_json_is_value_error(tmp_path):
    p = tmp_path / "merges.json"
    p.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValueError):
        load_merge_table(p)


# ---------- 統計 ----------
def test_fragment_stats_atom_level():
    stats = fragment_stats(_mols("CCO", "C"), MergeTable(), 0)
    assert stats.molecules == 2
    assert dict(stats.fragments_per_molecule) == {3: 1, 1: 1}
    assert set(stats.atoms_per_token) == {1}
    assert stats.mean_fragments == pytest.approx(2.0)
    frames = stats.to_frames()
    assert list(frames["fragments_per_molecule"].columns) == ["fragments", "molecules"]
    assert list(frames["atoms_per_token"].columns) == ["atoms", "tokens"]


def test_fragment_stats_empty():
    frames = fragment_stats([], MergeTable(), 0).to_frames()
    assert all(f.empty for f in frames.values())
    assert list(frames["atoms_per_token"].columns) == ["atoms", "tokens"]


def test_fragment_stats_merge_of_parts(sample_mols, sample_table):
    t = len(sample_table)
    whole = fragment_stats(sample_mols, sample_table, t)
    merged = FragmentStats()
    for mol in sample_mols:
        part = FragmentStats()
        part.add(fragmentize(mol, apply_merges(mol, sample_table, t))[0])
        merged.update(part)
    assert merged.molecules == whole.molecules == len(sample_mols)
    assert merged.fragments_per_molecule == whole.fragments_per_molecule
    assert merged.atoms_per_token == whole.atoms_per_token
    # 同じトークンを 2 分子が持っても 1 回だけ数える
    assert sum(whole.atoms_per_token.values()) == len(whole.token_atoms)


def test_coarser_table_means_fewer_fragments(sample_mols, sample_table):
    fine = fragment_stats(sample_mols, sample_table, 0).mean_fragments
    coarse = fragment_stats(sample_mols, sample_table, len(sample_table)).mean_fragments
    assert coarse < fine
