"""Random well-formed trees and corpora for tests and experiments."""

from __future__ import annotations

import random
from typing import Sequence

from depseq.treebank import ROOT, Corpus, DepTree, Token

POS_TAGS = ("NOUN", "VERB", "ADJ", "ADV", "DET", "PRON", "ADP", "CCONJ", "X")
RELATIONS = ("nsubj", "obj", "det", "amod", "advmod", "case", "cc", "conj", "dep")
LEXICON = (
    "go buy me some strawberries but it 's just wide open i went horseback riding "
    "est un probléme le chat dort sur la table très vite and then we saw a big dog"
).split()


def random_heads(n: int, rng: random.Random) -> list[int]:
    """Heads of a uniformly shaped random tree: a random attachment order over a random permutation."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * n
    attached = [order[0]]
    for node in order[1:]:
        heads[node - 1] = rng.choice(attached)
        attached.append(node)
    return heads


def random_tree(
    rng: random.Random,
    n: int | None = None,
    max_len: int = 40,
    pos_tags: Sequence[str] = POS_TAGS,
    relations: Sequence[str] = RELATIONS,
    lexicon: Sequence[str] = LEXICON,
    sentence_id: str = "",
) -> DepTree:
    if n is None:
        n = rng.randint(1, max_len)
    heads = random_heads(n, rng)
    tokens = tuple(
        Token(rng.choice(lexicon), rng.choice(pos_tags), h, "root" if h == ROOT else rng.choice(relations))
        for h in heads
    )
    return DepTree(tokens, sentence_id=sentence_id)


def random_corpus(n_trees: int, seed: int = 0, max_len: int = 40, **kwargs) -> Corpus:
    rng = random.Random(seed)
    return Corpus(tuple(random_tree(rng, max_len=max_len, sentence_id=f"s{k + 1}", **kwargs) for k in range(n_trees)))
