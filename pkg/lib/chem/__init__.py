"""
lib.chem (facade)
=================================
分子グラフ・SMILES・原子価チェックの公開 API。

主な関数（抜粋）:
- parse_smiles, write_smiles
- sanitize, is_sane
- iter_smiles, parse_corpus
"""

from .graph import Atom, Bond, BondOrder, BondStereo, ChiralTag, Hybridization, MolGraph
from .elements import atomic_number, atomic_weight, symbol_of, allowed_valences
from .valence import sanitize, is_sane, atom_valence, implicit_hydrogens
from .smiles import parse_smiles, write_smiles
from .corpus import iter_smiles, iter_smiles_lines, parse_corpus, ParsedCorpus

__all__ = [
    "Atom", "Bond", "BondOrder", "BondStereo", "ChiralTag", "Hybridization", "MolGraph",
    "atomic_number", "atomic_weight", "symbol_of", "allowed_valences",
    "sanitize", "is_sane", "atom_valence", "implicit_hydrogens",
    "parse_smiles", "write_smiles",
    "iter_smiles", "iter_smiles_lines", "parse_corpus", "ParsedCorpus",
]
