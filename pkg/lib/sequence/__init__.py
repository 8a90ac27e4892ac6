"""
lib.sequence (facade)
=================================
フラグメント系列化・再構成・記述子・MFM データセット書き出し。
"""

from .descriptors import DESCRIPTOR_NAMES, DescriptorVector, descriptors
from .serialize import FragmentSequence, serialize, reconstruct
from .mfm import RANDOM, MFMRecord, EmitSummary, make_mfm_record, sequence_to_record, emit_dataset

__all__ = [
    "DESCRIPTOR_NAMES", "DescriptorVector", "descriptors",
    "FragmentSequence", "serialize", "reconstruct",
    "RANDOM", "MFMRecord", "EmitSummary", "make_mfm_record", "sequence_to_record", "emit_dataset",
]
