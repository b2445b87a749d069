"""Word alignment and oracle-tree rewriting under transcription errors.

Given a gold tree and a hypothesis word sequence, the oracle tree is the
gold tree rewritten onto the hypothesis words:

* substituted words keep their (re-mapped) head and gold POS; every edge
  touching a substituted or inserted word is relabeled ``error``;
* inserted words attach to the previous hypothesis word (ROOT if first)
  with POS ``X`` and relation ``error``;
* deleted words disappear, and any token whose head chain ran through them
  reattaches to its nearest surviving ancestor with relation ``error``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

from depseq.treebank import ROOT, DepTree, Token

ERROR_REL = "error"
INSERTED_POS = "X"

OpKind = Literal["match", "substitute", "insert", "delete"]


class AlignOp(NamedTuple):
    kind: OpKind
    gold: int | None  # 0-based
    hyp: int | None  # 0-based


@dataclass(frozen=True)
class AlignmentScript:
    ops: tuple[AlignOp, ...]

    def __iter__(self):
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def kinds(self) -> list[str]:
        return [op.kind for op in self.ops]

    def count(self, kind: OpKind) -> int:
        return sum(op.kind == kind for op in self.ops)

    @property
    def cost(self) -> int:
        return sum(op.kind != "match" for op in self.ops)

    @property
    def gold_length(self) -> int:
        return sum(op.gold is not None for op in self.ops)

    @property
    def hyp_length(self) -> int:
        return sum(op.hyp is not None for op in self.ops)


def align_words(gold: Sequence[str], hyp: Sequence[str]) -> AlignmentScript:
    """Minimum edit-distance alignment with unit costs.

    Among optimal scripts the one chosen prefers, scanning left to right,
    match over substitute over delete over insert.
    """
    n, m = len(gold), len(hyp)
    # cost[i][j]: cheapest alignment of gold[i:] with hyp[j:]
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n, -1, -1):
        row = cost[i]
        for j in range(m, -1, -1):
            if i == n:
                row[j] = m - j
            elif j == m:
                row[j] = n - i
            else:
                diag = cost[i + 1][j + 1] + (gold[i] != hyp[j])
                row[j] = min(diag, cost[i + 1][j] + 1, row[j + 1] + 1)

    ops: list[AlignOp] = []
    i = j = 0
    while i < n or j < m:
        here = cost[i][j]
        if i < n and j < m and gold[i] == hyp[j] and cost[i + 1][j + 1] == here:
            ops.append(AlignOp("match", i, j))
            i, j = i + 1, j + 1
        elif i < n and j < m and gold[i] != hyp[j] and cost[i + 1][j + 1] + 1 == here:
            ops.append(AlignOp("substitute", i, j))
            i, j = i + 1, j + 1
        elif i < n and cost[i + 1][j] + 1 == here:
            ops.append(AlignOp("delete", i, None))
            i += 1
        else:
            ops.append(AlignOp("insert", None, j))
            j += 1
    return AlignmentScript(tuple(ops))


def _check_script(script: AlignmentScript, gold: Sequence[str], hyp: Sequence[str]) -> None:
    gi = hi = 0
    for op in script:
        if op.kind in ("match", "substitute", "delete"):
            if op.gold != gi:
                raise ValueError(f"alignment script out of order at gold index {op.gold} (expected {gi})")
            gi += 1
        elif op.gold is not None:
            raise ValueError("insert op carries a gold index")
        if op.kind in ("match", "substitute", "insert"):
            if op.hyp != hi:
                raise ValueError(f"alignment script out of order at hyp index {op.hyp} (expected {hi})")
            hi += 1
        elif op.hyp is not None:
            raise ValueError("delete op carries a hyp index")
        if op.kind == "match" and gold[op.gold] != hyp[op.hyp]:  # type: ignore[index]
            raise ValueError(f"match op pairs different words {gold[op.gold]!r} / {hyp[op.hyp]!r}")  # type: ignore[index]
    if gi != len(gold):
        raise ValueError(f"alignment script covers {gi} gold words, tree has {len(gold)}")
    if hi != len(hyp):
        raise ValueError(f"alignment script covers {hi} hypothesis words, got {len(hyp)}")


def rewrite_oracle(
    gold_tree: DepTree, script: AlignmentScript | None, hyp: Sequence[str]
) -> DepTree:
    """Rewrite ``gold_tree`` onto the hypothesis words ``hyp``.

    ``script`` must align the gold forms with ``hyp``; pass None to compute it
    with :func:`align_words`.
    """
    gold = gold_tree.forms
    if script is None:
        script = align_words(gold, hyp)
    _check_script(script, gold, hyp)
    if not hyp:
        raise ValueError("hypothesis is empty; no oracle tree exists")

    gold_heads = gold_tree.heads
    to_hyp: dict[int, int] = {}  # 1-based gold index -> 1-based hyp index
    damaged: set[int] = set()  # 1-based hyp indices that are substituted or inserted
    for op in script:
        if op.kind in ("match", "substitute"):
            to_hyp[op.gold + 1] = op.hyp + 1  # type: ignore[operator]
        if op.kind in ("substitute", "insert"):
            damaged.add(op.hyp + 1)  # type: ignore[operator]

    heads: list[int] = [ROOT] * len(hyp)
    pos: list[str] = [INSERTED_POS] * len(hyp)
    rels: list[str] = [ERROR_REL] * len(hyp)
    for op in script:
        if op.kind == "delete":
            continue
        j = op.hyp + 1  # type: ignore[operator]
        if op.kind == "insert":
            heads[j - 1] = j - 1  # previous hyp word, or ROOT for the first
            continue
        gold_tok = gold_tree.tokens[op.gold]  # type: ignore[index]
        pos[j - 1] = gold_tok.pos
        h = gold_tok.head
        rerouted = False
        while h != ROOT and h not in to_hyp:
            h = gold_heads[h - 1]
            rerouted = True
        new_head = to_hyp[h] if h != ROOT else ROOT
        heads[j - 1] = new_head
        if rerouted or j in damaged or new_head in damaged:
            rels[j - 1] = ERROR_REL
        else:
            rels[j - 1] = gold_tok.rel

    # Settle on one root: the surviving gold root if there is one, else the
    # leftmost token left pointing at ROOT. Everything else hangs off it.
    gold_root = gold_tree.root
    roots = [j for j, h in enumerate(heads, start=1) if h == ROOT]
    if gold_root is not None and gold_root in to_hyp:
        keep = to_hyp[gold_root]
    else:
        keep = roots[0]
    for j in roots:
        if j != keep:
            heads[j - 1] = keep
            rels[j - 1] = ERROR_REL

    return DepTree(
        tuple(Token(w, p, h, r) for w, p, h, r in zip(hyp, pos, heads, rels)),
        sentence_id=gold_tree.sentence_id,
        metadata=gold_tree.metadata,
    )


def oracle_tree(gold_tree: DepTree, hyp: Sequence[str]) -> DepTree:
    return rewrite_oracle(gold_tree, align_words(gold_tree.forms, hyp), hyp)
