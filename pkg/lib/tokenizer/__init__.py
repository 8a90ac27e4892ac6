"""
lib.tokenizer (facade)
=================================
マージ学習・分割・フラグメント化・トークン辞書の公開 API。

主な関数（抜粋）:
- count_pairs, score_pairs, train, apply_merges
- fragmentize, stereo_specs
- build_dictionary, lookup, tokenize, fragment_stats
- save_merge_table / load_merge_table, save_dictionary / load_dictionary
"""

from .merges import (
    BASE_LABEL, MergeRule, MergeTable, Partition, LabeledGraph,
    count_pairs, score_pairs, best_pair, train, apply_merges, corpus_fingerprint,
)
from .fragments import Fragment, Link, fragmentize, stereo_specs, canonical_renumber
from .dictionary import (
    PAD, UNK, MASK, CLS, SPECIALS,
    TokenEntry, TokenDictionary, FragmentCounts, Tokenized, FragmentStats,
    count_fragments, dictionary_from_counts, build_dictionary, lookup, tokenize, fragment_stats,
)
from .store import (
    graph_to_record, graph_from_record,
    save_merge_table, load_merge_table, save_dictionary, load_dictionary,
)

__all__ = [
    "BASE_LABEL", "MergeRule", "MergeTable", "Partition", "LabeledGraph",
    "count_pairs", "score_pairs", "best_pair", "train", "apply_merges", "corpus_fingerprint",
    "Fragment", "Link", "fragmentize", "stereo_specs", "canonical_renumber",
    "PAD", "UNK", "MASK", "CLS", "SPECIALS",
    "TokenEntry", "TokenDictionary", "FragmentCounts", "Tokenized", "FragmentStats",
    "count_fragments", "dictionary_from_counts", "build_dictionary", "lookup", "tokenize", "fragment_stats",
    "graph_to_record", "graph_from_record",
    "save_merge_table", "load_merge_table", "save_dictionary", "load_dictionary",
]
