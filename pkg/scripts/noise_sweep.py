#!/usr/bin/env python3
"""Score oracle trees against gold as transcription noise grows.

For each noise level: corrupt a synthetic corpus, rewrite gold trees onto the
noisy transcripts, and report WER/CER/POS/UAS/LAS of the oracle trees.
"""

import argparse

from depseq.metrics import corpus_report
from depseq.oracle import oracle_tree
from depseq.simulate import NoiseConfig, corrupt_corpus
from depseq.synthetic import random_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sentences", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--levels", default="0,0.05,0.1,0.2,0.3", help="total error rates, split 2:1:1 sub/del/ins")
    args = ap.parse_args()

    gold = random_corpus(args.sentences, seed=args.seed, max_len=25)
    print("rate\tWER\tCER\tPOS\tUAS\tLAS")
    for level in map(float, args.levels.split(",")):
        cfg = NoiseConfig(p_sub=level / 2, p_del=level / 4, p_ins=level / 4, seed=args.seed)
        hyps = corrupt_corpus(gold, cfg)
        kept = [t for t in gold if hyps[t.sentence_id]]
        preds = [oracle_tree(t, hyps[t.sentence_id]) for t in kept]
        report = corpus_report(kept, preds, {t.sentence_id: " ".join(hyps[t.sentence_id]) for t in kept})
        print(f"{level:.2f}\t" + "\t".join(f"{v:.1f}" for v in report.values()))


if __name__ == "__main__":
    main()
