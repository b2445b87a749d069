"""Command-line pipelines.

File formats besides the treebank TSV:

* labeled sequences and transcripts: one ``<sentence_id>\\t<text>`` per line;
* label registry: JSON ``{"pos": [...], "rel": [...], "max_offset": N}``;
* subword vocabulary: one ``<id>\\t<piece>`` per line, id 0 is the blank;
* emissions directory: ``<sentence_id>.npy`` or ``.csv`` files plus an
  ``index.tsv`` listing sentence ids in corpus order.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Iterable, Sequence

from depseq import codec, ctcdec, metrics, oracle, recovery, simulate, treebank
from depseq.treebank import Corpus, DepTree, Token

logger = logging.getLogger("depseq")

PLACEHOLDER = Token("_", codec.FALLBACK_POS, 0, recovery.ROOT_REL)


def read_pairs(path: str | os.PathLike) -> list[tuple[str, str]]:
    out = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            sid, sep, text = line.partition("\t")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected '<sentence_id>\\t<text>'")
            if sid in seen:
                raise ValueError(f"{path}:{lineno}: duplicate sentence_id {sid!r}")
            seen.add(sid)
            out.append((sid, text))
    return out


def write_pairs(path: str | os.PathLike, pairs: Iterable[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for sid, text in pairs:
            f.write(f"{sid}\t{text}\n")


def sequence_to_tree(text: str, registry: codec.LabelRegistry, sentence_id: str) -> DepTree:
    annos = codec.decode(text, registry)
    if not annos:
        logger.warning("sentence %s: no words recovered, emitting placeholder tree", sentence_id)
        return DepTree((PLACEHOLDER,), sentence_id=sentence_id)
    return recovery.recover_tree(annos, sentence_id)


def registry_path_for(out: str | os.PathLike) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".registry.json")


# ---------------------------------------------------------------------------
# subcommands


def cmd_encode(args: argparse.Namespace) -> None:
    corpus = treebank.read_corpus(args.corpus, strict=True)
    if args.registry and Path(args.registry).exists():
        registry = codec.LabelRegistry.load(args.registry)
    else:
        if not len(corpus):
            write_pairs(args.output, [])
            return
        registry = codec.build_registry(corpus)
        reg_path = Path(args.registry) if args.registry else registry_path_for(args.output)
        registry.save(reg_path)
        logger.info("wrote registry to %s", reg_path)
    write_pairs(args.output, ((t.sentence_id, codec.encode(t, registry)) for t in corpus))


def cmd_decode(args: argparse.Namespace) -> None:
    registry = codec.LabelRegistry.load(args.registry)
    trees = [sequence_to_tree(text, registry, sid) for sid, text in read_pairs(args.sequences)]
    treebank.write_corpus(Corpus(tuple(trees)), args.output)


def cmd_oracle(args: argparse.Namespace) -> None:
    gold = treebank.read_corpus(args.gold, strict=True)
    hyps = dict(read_pairs(args.hyps))
    missing = [t.sentence_id for t in gold if t.sentence_id not in hyps]
    if missing:
        raise ValueError("no transcript for sentence ids: " + ", ".join(missing))
    out = []
    for tree in gold:
        words = hyps[tree.sentence_id].split()
        if not words:
            logger.warning("sentence %s: empty transcript, no oracle tree", tree.sentence_id)
            continue
        out.append(oracle.oracle_tree(tree, words))
    treebank.write_corpus(Corpus(tuple(out)), args.output)


def _noise_config(args: argparse.Namespace) -> simulate.NoiseConfig:
    data = {}
    if args.config:
        data = simulate.NoiseConfig.load(args.config).to_json()
    for key in ("p_sub", "p_del", "p_ins", "char_corrupt", "seed"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    return simulate.NoiseConfig.from_json(data)


def cmd_simulate(args: argparse.Namespace) -> None:
    gold = treebank.read_corpus(args.gold, strict=True)
    cfg = _noise_config(args)
    logger.info("noise config: %s", json.dumps(cfg.to_json()))
    hyps = simulate.corrupt_corpus(gold, cfg)
    write_pairs(args.output, ((sid, " ".join(words)) for sid, words in hyps.items()))
    meta = {"noise": cfg.to_json(), "gold": os.fspath(args.gold), "sentences": len(gold)}
    with open(f"{args.output}.meta.json", "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=1)
        f.write("\n")


def cmd_synth(args: argparse.Namespace) -> None:
    import numpy as np

    pairs = read_pairs(args.sequences)
    vocab_path = Path(args.vocab)
    if vocab_path.exists():
        vocab = ctcdec.SubwordVocab.load(vocab_path)
    else:
        labels = codec.LabelRegistry.load(args.registry).symbols() if args.registry else ()
        vocab = ctcdec.build_vocab((text for _, text in pairs), labels, size=args.vocab_size)
        vocab.save(vocab_path)
        logger.info("wrote %d-piece vocabulary to %s", len(vocab), vocab_path)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    for sid, text in pairs:
        em = simulate.synth_emissions(ctcdec.tokenize(text, vocab), vocab, args.frames_per_token, args.noise_temp, rng)
        ctcdec.save_emissions(out_dir / f"{sid}.{args.format}", em)
    write_pairs(out_dir / "index.tsv", ((sid, f"{sid}.{args.format}") for sid, _ in pairs))


def _emission_files(directory: Path) -> list[tuple[str, Path]]:
    index = directory / "index.tsv"
    if index.exists():
        return [(sid, directory / name) for sid, name in read_pairs(index)]
    files = sorted(p for p in directory.iterdir() if p.suffix in (".npy", ".csv"))
    return [(p.stem, p) for p in files]


def cmd_ctc(args: argparse.Namespace) -> None:
    vocab = ctcdec.SubwordVocab.load(args.vocab, blank_id=args.blank_id)
    registry = codec.LabelRegistry.load(args.registry)
    trees = []
    transcripts = []
    for sid, path in _emission_files(Path(args.emissions)):
        text = ctcdec.decode_emissions(ctcdec.load_emissions(path), vocab)
        trees.append(sequence_to_tree(text, registry, sid))
        transcripts.append((sid, " ".join(a.word for a in codec.decode(text, registry))))
    treebank.write_corpus(Corpus(tuple(trees)), args.output)
    if args.hyps_out:
        write_pairs(args.hyps_out, transcripts)


def _pos_filter(args: argparse.Namespace) -> tuple[str, ...] | None:
    if args.all_pos:
        return None
    return tuple(p for p in args.pos.split(",") if p)


def cmd_eval(args: argparse.Namespace) -> None:
    gold = treebank.read_corpus(args.gold, strict=True)
    pred = treebank.read_corpus(args.pred, strict=True)
    hyps = dict(read_pairs(args.hyps)) if args.hyps else None
    report = metrics.corpus_report(gold, pred, hyps)
    print(report.to_table())
    if args.report:
        Path(args.report).write_text(report.to_tsv(), encoding="utf-8")
    if args.analysis:
        pairs = _paired(gold, pred)
        metrics.write_analysis_csv(metrics.head_accuracy_by_pos(pairs, _pos_filter(args), args.clip), args.analysis)


def _paired(gold: Corpus, pred: Corpus) -> list[tuple[DepTree, DepTree]]:
    by_id = pred.by_id()
    missing = [t.sentence_id for t in gold if t.sentence_id not in by_id]
    if missing:
        raise ValueError("missing from prediction: " + ", ".join(missing))
    return [(t, by_id[t.sentence_id]) for t in gold]


def cmd_analyze(args: argparse.Namespace) -> None:
    gold = treebank.read_corpus(args.gold, strict=True)
    pred = treebank.read_corpus(args.pred, strict=True)
    table = metrics.head_accuracy_by_pos(_paired(gold, pred), _pos_filter(args), args.clip)
    if args.output:
        metrics.write_analysis_csv(table, args.output)
    else:
        metrics.write_analysis_csv(table, sys.stdout)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="depseq", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="treebank -> labeled sequences")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--registry", help="registry JSON; built from the corpus and written here if missing")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="labeled sequences -> repaired treebank")
    p.add_argument("sequences")
    p.add_argument("--registry", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("oracle", help="rewrite gold trees onto hypothesis transcripts")
    p.add_argument("gold")
    p.add_argument("hyps")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", help="noisy-channel hypothesis transcripts from a gold treebank")
    p.add_argument("gold")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--config", help="NoiseConfig JSON; flags below override it")
    p.add_argument("--p-sub", type=float)
    p.add_argument("--p-del", type=float)
    p.add_argument("--p-ins", type=float)
    p.add_argument("--char-corrupt", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("synth", help="labeled sequences -> synthetic emission matrices")
    p.add_argument("sequences")
    p.add_argument("--vocab", required=True, help="vocabulary file; built and written if missing")
    p.add_argument("--registry", help="include every registry symbol when building the vocabulary")
    p.add_argument("--vocab-size", type=int, default=1000)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--frames-per-token", type=int, default=3)
    p.add_argument("--noise-temp", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("npy", "csv"), default="npy")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ctc", help="emission matrices -> decoded, repaired treebank")
    p.add_argument("emissions", help="directory of emission matrices")
    p.add_argument("--vocab", required=True)
    p.add_argument("--registry", required=True)
    p.add_argument("--blank-id", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--hyps-out", help="also write the decoded word transcripts")
    p.set_defaults(func=cmd_ctc)

    for name, func, text in (
        ("eval", cmd_eval, "WER/CER/POS/UAS/LAS report"),
        ("analyze", cmd_analyze, "head accuracy by POS and head offset (CSV)"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("gold")
        p.add_argument("pred")
        p.add_argument("--pos", default=",".join(metrics.REPRESENTATIVE_POS), help="comma-separated POS filter")
        p.add_argument("--all-pos", action="store_true")
        p.add_argument("--clip", type=int, default=5, help="pool head offsets beyond +/-clip")
        if name == "eval":
            p.add_argument("--hyps", help="transcripts for WER/CER; default: predicted tree words")
            p.add_argument("--report", help="write the report as TSV")
            p.add_argument("--analysis", help="also write the head-position CSV")
        else:
            p.add_argument("-o", "--output", help="CSV path (default: stdout)")
        p.set_defaults(func=func)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        args.func(args)
    except (ValueError, OSError, KeyError) as e:
        logger.error("%s", e)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
