"""Dependency trees as labeled token sequences, for parsing noisy transcriptions."""

from depseq.codec import DecodedAnnotation, LabelRegistry, build_registry, decode, encode
from depseq.oracle import AlignmentScript, align_words, oracle_tree, rewrite_oracle
from depseq.recovery import repair, resolve_heads
from depseq.treebank import Corpus, DepTree, Token, read_corpus, validate_tree, write_corpus

__all__ = [
    "AlignmentScript",
    "Corpus",
    "DecodedAnnotation",
    "DepTree",
    "LabelRegistry",
    "Token",
    "align_words",
    "build_registry",
    "decode",
    "encode",
    "oracle_tree",
    "read_corpus",
    "repair",
    "resolve_heads",
    "rewrite_oracle",
    "validate_tree",
    "write_corpus",
]
