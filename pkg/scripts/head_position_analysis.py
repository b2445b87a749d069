#!/usr/bin/env python3
"""Head accuracy by POS and signed head offset for a prediction that only
errs on long-distance attachments. Writes the CSV used for plotting."""

import argparse
import sys

from depseq.metrics import REPRESENTATIVE_POS, head_accuracy_by_pos, write_analysis_csv
from depseq.synthetic import random_corpus
from depseq.treebank import DepTree, Token


def damage_far_heads(tree, min_distance):
    root = tree.root
    toks = [
        Token(t.form, t.pos, root, t.rel) if t.head and abs(t.head - i) >= min_distance and t.head != root else t
        for i, t in enumerate(tree.tokens, start=1)
    ]
    return DepTree(tuple(toks), sentence_id=tree.sentence_id)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sentences", type=int, default=2000)
    ap.add_argument("--min-distance", type=int, default=3)
    ap.add_argument("--clip", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-o", "--output", help="CSV path (default: stdout)")
    args = ap.parse_args()

    gold = random_corpus(args.sentences, seed=args.seed, max_len=25)
    pairs = [(t, damage_far_heads(t, args.min_distance)) for t in gold]
    table = head_accuracy_by_pos(pairs, REPRESENTATIVE_POS, args.clip)
    write_analysis_csv(table, args.output or sys.stdout)


if __name__ == "__main__":
    main()
