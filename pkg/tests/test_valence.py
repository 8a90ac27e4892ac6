"""
tests/test_valence.py
=================================
sanitize と原子価・暗黙水素。
"""

from __future__ import annotations

import pytest

from lib.chem import allowed_valences, atom_valence, is_sane, parse_smiles, sanitize
from lib.errors import ValenceError

DIAZEPAM_DEMO = "CN1C(=O)c2ccccc2C1c3ccccc3Cl"


def test_methane_ok():
    sanitize(parse_smiles("C"))


def test_pentavalent_carbon():
    with pytest.raises(ValenceError) as ei:
        sanitize(parse_smiles("C(C)(C)(C)(C)C"))
    e = ei.value
    assert (e.atom_index, e.observed, e.allowed) == (0, 5, (4,))


@pytest.mark.parametrize("smiles", ["FC(F)(F)(F)F", "CO(C)C", "C=C=C=C(C)(C)C#C"])
def test_overvalent_atoms(smiles):
    assert not is_sane(parse_smiles(smiles))


@pytest.mark.parametrize(
    "smiles",
    [
        DIAZEPAM_DEMO,
        "CN1C(=O)CN=C(c2ccccc2)c2cc(Cl)ccc21",
        "O=[N+]([O-])c1ccccc1",
        "[NH4+]",
        "CS(C)=O",
        "Nc1ccc(cc1)S(N)(=O)=O",
        "CCOP(=O)(OCC)OCC",
        "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
        "c1ccc2[nH]ccc2c1",
    ],
)
def test_drug_like_molecules_ok(smiles):
    sanitize(parse_smiles(smiles))


@pytest.mark.parametrize("smiles", ["cc", "c", "C1CCc2ccccc21c"])
def test_aromatic_outside_ring(smiles):
    assert not is_sane(parse_smiles(smiles))


def test_open_aromatic_fragment_is_allowed():
    # ダミー原子で切れた芳香環
    assert is_sane(parse_smiles("*c1ccccc1"))
    assert is_sane(parse_smiles("*:c(:*)Cl"))


def test_radical_is_not_an_error():
    m = parse_smiles("[CH3]")
    sanitize(m)
    assert atom_valence(m, 0) == 3


@pytest.mark.parametrize(
    "smiles, index, h",
    [
        ("CN", 1, 2),
        ("CS", 1, 1),
        ("CS(C)=O", 1, 0),
        ("CCOP(=O)(OCC)OCC", 3, 0),
        ("OB(O)c1ccccc1", 1, 0),
        ("CC#N", 2, 0),
    ],
)
def test_implicit_hydrogens(smiles, index, h):
    assert parse_smiles(smiles).atoms[index].implicit_h == h


def test_charge_shifts_allowed_valence():
    assert allowed_valences(7, 1) == (4, 6)
    assert allowed_valences(8, -1) == (1,)
    assert allowed_valences(26) == ()


@pytest.mark.parametrize("smiles, index", [("C[N](C)(C)C", 1), ("C[S](C)C", 1), ("C[P](C)(C)C", 1)])
def test_valence_between_table_entries(smiles, index):
    m = parse_smiles(smiles)
    assert m.atoms[index].radical_electrons == 0
    with pytest.raises(ValenceError) as ei:
        sanitize(m)
    assert ei.value.atom_index == index


@pytest.mark.parametrize("smiles", ["C[N+](C)(C)C", "C[N](C)(C)(C)C", "C[S](C)(C)(C)(C)C", "[NH2]"])
def test_valence_on_table_entries(smiles):
    sanitize(parse_smiles(smiles))
