"""Turn decoded annotations into well-formed trees.

Decoded heads are relative offsets that may point outside the sentence, at
the token itself, or nowhere at all. :func:`resolve_heads` turns them into
absolute indices (``None`` when unusable) and :func:`repair` enforces a
single root, one head per token and acyclicity with a fixed pipeline:

1. pick the root candidate: leftmost token with head 0 and relation
   ``root``, else leftmost token with head 0, else token 1 (which is then
   forced to head 0 / ``root``);
2. attach every unresolved token to the root candidate;
3. reattach every other head-0 token to the root candidate, keeping its
   relation;
4. break each remaining cycle by reattaching its smallest-index token to
   the root candidate.

Valid trees pass through unchanged, so ``repair`` is idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from depseq.codec import DecodedAnnotation
from depseq.treebank import ROOT, DepTree, Token

ROOT_REL = "root"


@dataclass(frozen=True)
class ProvisionalTree:
    forms: tuple[str, ...]
    pos: tuple[str, ...]
    heads: tuple[int | None, ...]
    rels: tuple[str, ...]
    sentence_id: str = ""

    def __len__(self) -> int:
        return len(self.forms)

    @classmethod
    def from_tree(cls, tree: DepTree) -> "ProvisionalTree":
        n = len(tree)
        heads = tuple(h if 0 <= h <= n and h != i else None for i, h in enumerate(tree.heads, start=1))
        return cls(
            tuple(tree.forms),
            tuple(t.pos for t in tree),
            heads,
            tuple(t.rel for t in tree),
            tree.sentence_id,
        )


def resolve_heads(annos: Sequence[DecodedAnnotation], sentence_id: str = "") -> ProvisionalTree:
    n = len(annos)
    heads: list[int | None] = []
    for i, a in enumerate(annos, start=1):
        if a.head_offset is None:
            heads.append(None)
            continue
        h = i + a.head_offset
        heads.append(h if 0 <= h <= n and h != i else None)
    return ProvisionalTree(
        tuple(a.word for a in annos),
        tuple(a.pos for a in annos),
        tuple(heads),
        tuple(a.rel for a in annos),
        sentence_id,
    )


def _root_candidate(heads: list[int | None], rels: list[str]) -> int:
    zero = [i for i, h in enumerate(heads, start=1) if h == ROOT]
    for i in zero:
        if rels[i - 1] == ROOT_REL:
            return i
    if zero:
        return zero[0]
    heads[0] = ROOT
    rels[0] = ROOT_REL
    return 1


def repair(tree: ProvisionalTree | DepTree) -> DepTree:
    if isinstance(tree, DepTree):
        metadata = tree.metadata
        tree = ProvisionalTree.from_tree(tree)
    else:
        metadata = {}
    n = len(tree)
    if n == 0:
        raise ValueError("empty sentence")

    heads = list(tree.heads)
    rels = list(tree.rels)
    root = _root_candidate(heads, rels)

    for i in range(1, n + 1):
        if i == root:
            continue
        if heads[i - 1] is None or heads[i - 1] == ROOT:
            heads[i - 1] = root

    # every token now has an in-range head; only cycles remain
    state = [0] * (n + 1)
    state[0] = 2
    state[root] = 2
    for start in range(1, n + 1):
        path = []
        i = start
        while state[i] == 0:
            state[i] = 1
            path.append(i)
            i = heads[i - 1]  # type: ignore[assignment]
        if state[i] == 1:
            heads[min(path[path.index(i):]) - 1] = root
        for j in path:
            state[j] = 2

    return DepTree(
        tuple(Token(f, p, h, r) for f, p, h, r in zip(tree.forms, tree.pos, heads, rels)),  # type: ignore[arg-type]
        sentence_id=tree.sentence_id,
        metadata=metadata,
    )


def recover_tree(annos: Sequence[DecodedAnnotation], sentence_id: str = "") -> DepTree:
    return repair(resolve_heads(annos, sentence_id))
