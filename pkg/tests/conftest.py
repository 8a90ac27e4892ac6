"""
tests/conftest.py
=================================
テスト共通の fixture。

- sample_entries / sample_mols : tests/data/sample.smi を parse + sanitize したもの
- sample_table : sample_mols で学習したマージ表（セッションで 1 回）
- dict_at : 粒度 t ごとの辞書（キャッシュ付きファクトリ）
- mol / permute : tests.helpers の関数をそのまま渡す
- generated_entries / generated_table : 合成コーパス 1000 分子と、それで 100 回学習したマージ表
  （slow / perf のテストだけが使う）
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

import pytest

from lib.chem import MolGraph, iter_smiles, iter_smiles_lines, parse_corpus
from lib.tokenizer import MergeTable, TokenDictionary, build_dictionary, train
from tests.helpers import drug_like_smiles, mol_from, permute_mol

DATA_DIR = Path(__file__).resolve().parent / "data"
SAMPLE_SMI = DATA_DIR / "sample.smi"

SAMPLE_NUM_ITER = 40
GENERATED_SIZE = 1000
GENERATED_NUM_ITER = 100


@pytest.fixture(scope="session")
def sample_entries() -> List[Tuple[str, MolGraph]]:
    parsed = parse_corpus(iter_smiles(SAMPLE_SMI), strict=True)
    return parsed.molecules


@pytest.fixture(scope="session")
def sample_mols(sample_entries) -> List[MolGraph]:
    return [m for _, m in sample_entries]


@pytest.fixture(scope="session")
def sample_table(sample_mols) -> MergeTable:
    return train(sample_mols, SAMPLE_NUM_ITER)


@pytest.fixture(scope="session")
def dict_at(sample_mols, sample_table) -> Callable[[int], TokenDictionary]:
    cache: Dict[int, TokenDictionary] = {}

    def get(t: int) -> TokenDictionary:
        if t not in cache:
            cache[t] = build_dictionary(sample_mols, sample_table, t)
        return cache[t]

    return get


@pytest.fixture(scope="session")
def generated_entries() -> List[Tuple[str, MolGraph]]:
    lines = [f"{smi} G{k}" for k, smi in enumerate(drug_like_smiles(GENERATED_SIZE, seed=0))]
    return parse_corpus(iter_smiles_lines(lines), strict=True).molecules


@pytest.fixture(scope="session")
def generated_table(generated_entries) -> MergeTable:
    return train([m for _, m in generated_entries], GENERATED_NUM_ITER)


@pytest.fixture
def mol() -> Callable[[str], MolGraph]:
    return mol_from


@pytest.fixture
def permute() -> Callable[[MolGraph, Sequence[int]], MolGraph]:
    return permute_mol
