"""
lib.analogue (facade)
=================================
接続シグネチャ・溶接・類縁体生成。
"""

from .swap import (
    MAX_MAPPINGS,
    AttachmentSignature, AnalogueResult, CandidateOutcome, AnalogueSet,
    attachment_signature, weld, excise, evaluate_candidate, merge_outcomes, generate_analogues,
)

__all__ = [
    "MAX_MAPPINGS",
    "AttachmentSignature", "AnalogueResult", "CandidateOutcome", "AnalogueSet",
    "attachment_signature", "weld", "excise", "evaluate_candidate", "merge_outcomes", "generate_analogues",
]
