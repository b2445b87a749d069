"""Labeled-sequence encoding of dependency trees.

Each token becomes ``form<POSj><Lk|Rk><RELm>``: the POS index, the signed
distance to the head (``L`` = head to the left, ``R`` = to the right; the
root points left at the virtual ROOT, so a root at position ``i`` carries
``<Li>``) and the relation index. Tokens are joined by a single space::

    est<POS1><L1><REL0> un<POS2><R1><REL2> probléme<POS0><L2><REL1>
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from depseq.treebank import ROOT, Corpus, DepTree

FALLBACK_POS = "X"
FALLBACK_REL = "dep"

_SYMBOL = re.compile(r"<([^<>]*)>")
_LABEL = re.compile(r"(POS|REL|L|R)(\d+)")


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class LabelRegistry:
    pos: tuple[str, ...]
    rel: tuple[str, ...]
    max_offset: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "pos", tuple(self.pos))
        object.__setattr__(self, "rel", tuple(self.rel))
        for name, tags in (("pos", self.pos), ("rel", self.rel)):
            if len(set(tags)) != len(tags):
                raise ValueError(f"duplicate {name} tags in registry")
        if self.max_offset < 1:
            raise ValueError("max_offset must be >= 1")
        object.__setattr__(self, "_pos_index", {t: j for j, t in enumerate(self.pos)})
        object.__setattr__(self, "_rel_index", {t: j for j, t in enumerate(self.rel)})

    def pos_symbol(self, tag: str) -> str:
        try:
            return f"<POS{self._pos_index[tag]}>"  # type: ignore[attr-defined]
        except KeyError:
            raise EncodingError(f"POS tag {tag!r} not in registry") from None

    def rel_symbol(self, tag: str) -> str:
        try:
            return f"<REL{self._rel_index[tag]}>"  # type: ignore[attr-defined]
        except KeyError:
            raise EncodingError(f"relation {tag!r} not in registry") from None

    def symbols(self) -> list[str]:
        """Every label symbol the registry can emit, in a stable order."""
        out = [f"<POS{j}>" for j in range(len(self.pos))]
        out += [f"<L{k}>" for k in range(1, self.max_offset + 1)]
        out += [f"<R{k}>" for k in range(1, self.max_offset + 1)]
        out += [f"<REL{j}>" for j in range(len(self.rel))]
        return out

    def classify(self, symbol_body: str) -> tuple[str, object] | None:
        """Map the inside of ``<...>`` to ``(category, value)``; None if unregistered."""
        m = _LABEL.fullmatch(symbol_body)
        if m is None:
            return None
        kind, num = m.group(1), int(m.group(2))
        if kind == "POS":
            return ("pos", self.pos[num]) if num < len(self.pos) else None
        if kind == "REL":
            return ("rel", self.rel[num]) if num < len(self.rel) else None
        if not 1 <= num <= self.max_offset:
            return None
        return ("head", -num if kind == "L" else num)

    def to_json(self) -> dict:
        return {"pos": list(self.pos), "rel": list(self.rel), "max_offset": self.max_offset}

    @classmethod
    def from_json(cls, data: dict) -> "LabelRegistry":
        return cls(tuple(data["pos"]), tuple(data["rel"]), int(data["max_offset"]))

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_json(), f, ensure_ascii=False, indent=1)
            f.write("\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "LabelRegistry":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))


class DecodedAnnotation(NamedTuple):
    word: str
    pos: str
    head_offset: int | None  # head index minus own index; None when no head label was found
    rel: str


def build_registry(trees: Corpus | Iterable[DepTree]) -> LabelRegistry:
    """Registry with tags in order of first appearance and the widest observed offset."""
    pos: dict[str, None] = {}
    rel: dict[str, None] = {}
    max_offset = 0
    n_trees = 0
    for tree in trees:
        n_trees += 1
        for i, tok in enumerate(tree.tokens, start=1):
            pos.setdefault(tok.pos)
            rel.setdefault(tok.rel)
            max_offset = max(max_offset, abs(_offset(i, tok.head)))
    if n_trees == 0:
        raise ValueError("cannot build a registry from an empty corpus")
    return LabelRegistry(tuple(pos), tuple(rel), max(max_offset, 1))


def _offset(position: int, head: int) -> int:
    # the root points at position 0
    return head - position if head != ROOT else -position


def encode(tree: DepTree, registry: LabelRegistry, sep: str = " ") -> str:
    segments = []
    for i, tok in enumerate(tree.tokens, start=1):
        off = _offset(i, tok.head)
        if off == 0:
            raise EncodingError(f"token {i} ({tok.form!r}) is its own head")
        if abs(off) > registry.max_offset:
            raise EncodingError(
                f"token {i} ({tok.form!r}): head offset {off} exceeds max_offset {registry.max_offset}"
            )
        direction = "L" if off < 0 else "R"
        segments.append(
            f"{tok.form}{registry.pos_symbol(tok.pos)}<{direction}{abs(off)}>{registry.rel_symbol(tok.rel)}"
        )
    return sep.join(segments)


def decode_segment(segment: str, registry: LabelRegistry) -> DecodedAnnotation | None:
    cut = segment.find("<")
    word = segment if cut < 0 else segment[:cut]
    # a stray '>' in the word part cannot be a form character
    word = word.replace(">", "")
    if not word:
        return None
    found: dict[str, object] = {}
    if cut >= 0:
        for m in _SYMBOL.finditer(segment, cut):
            label = registry.classify(m.group(1))
            if label is not None:
                found.setdefault(label[0], label[1])
    return DecodedAnnotation(
        word,
        found.get("pos", FALLBACK_POS),  # type: ignore[arg-type]
        found.get("head"),  # type: ignore[arg-type]
        found.get("rel", FALLBACK_REL),  # type: ignore[arg-type]
    )


def decode(seq: str, registry: LabelRegistry, sep: str | None = None) -> list[DecodedAnnotation]:
    """Recover per-token annotations from a (possibly malformed) labeled sequence.

    Never raises on content: the leftmost label of each category wins,
    unknown symbols are skipped, text after the first ``<`` is not part of
    the word, missing categories fall back to ``X``/no head/``dep``, and
    segments with no word are dropped.
    """
    out = []
    for segment in seq.split(sep):
        anno = decode_segment(segment, registry)
        if anno is not None:
            out.append(anno)
    return out
