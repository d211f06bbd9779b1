"""Base, normal and near-normal sequence toolkit.

Library + CLI for verifying, canonicalizing and exhaustively searching
quads of +1/-1 sequences whose aperiodic autocorrelations cancel.
"""

from .seqcore import (
    Kind,
    SeqQuad,
    SignSeq,
    SumProfile,
    VerifyReport,
    hall_f,
    paf,
    parse_quads,
    quad_to_text,
    row_sums,
    verify,
)

__all__ = [
    "Kind",
    "SeqQuad",
    "SignSeq",
    "SumProfile",
    "VerifyReport",
    "hall_f",
    "paf",
    "parse_quads",
    "quad_to_text",
    "row_sums",
    "verify",
]

__version__ = "0.1.0"
