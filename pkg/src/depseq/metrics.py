"""Transcription (WER/CER) and parsing (POS/UAS/LAS) metrics.

Parsing scores are computed on the gold tokenization: the predicted tree is
projected onto the gold words through a word alignment. Gold words with no
matching predicted word (deleted or misrecognized) count as wrong, and a
predicted head is only right if it maps back onto the gold head.
"""

from __future__ import annotations

import csv
import io
import os
from collections import defaultdict
from dataclasses import dataclass, fields
from typing import Collection, Hashable, Iterable, Mapping, NamedTuple, Sequence

from depseq.oracle import ERROR_REL, align_words
from depseq.treebank import ROOT, Corpus, DepTree

REPRESENTATIVE_POS = ("ADJ", "ADV", "NOUN", "VERB")


def edit_distance(ref: Sequence[Hashable], hyp: Sequence[Hashable]) -> int:
    """Unit-cost Levenshtein distance, two-row dynamic programme."""
    if len(ref) < len(hyp):
        ref, hyp = hyp, ref
    prev = list(range(len(hyp) + 1))
    for i, r in enumerate(ref, start=1):
        cur = [i]
        for j, h in enumerate(hyp, start=1):
            cur.append(min(prev[j - 1] + (r != h), prev[j] + 1, cur[j - 1] + 1))
        prev = cur
    return prev[-1]


def normalize_spaces(text: str) -> str:
    return " ".join(text.split())


def wer(gold: Sequence[str], hyp: Sequence[str]) -> float:
    if not gold:
        raise ValueError("WER is undefined for an empty reference")
    return edit_distance(gold, hyp) / len(gold)


def cer(gold: str, hyp: str) -> float:
    """Character error rate; whitespace runs are collapsed to one space (and trimmed) first."""
    gold, hyp = normalize_spaces(gold), normalize_spaces(hyp)
    if not gold:
        raise ValueError("CER is undefined for an empty reference")
    return edit_distance(gold, hyp) / len(gold)


class TokenOutcome(NamedTuple):
    gold_index: int  # 1-based
    pos_ok: bool
    head_ok: bool
    label_ok: bool  # head and relation both right


@dataclass
class AttachmentCounts:
    tokens: int = 0
    pos: int = 0
    uas: int = 0
    las: int = 0

    def __add__(self, other: "AttachmentCounts") -> "AttachmentCounts":
        return AttachmentCounts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    @property
    def pos_acc(self) -> float:
        return self.pos / self.tokens if self.tokens else 0.0

    @property
    def uas_score(self) -> float:
        return self.uas / self.tokens if self.tokens else 0.0

    @property
    def las_score(self) -> float:
        return self.las / self.tokens if self.tokens else 0.0


class ParseScore(NamedTuple):
    pos_acc: float
    uas: float
    las: float


def project(gold: DepTree, pred: DepTree) -> list[TokenOutcome]:
    """Per-gold-token correctness of ``pred`` after aligning its words to ``gold``."""
    if len(gold) == 0:
        raise ValueError("empty gold tree")
    script = align_words(gold.forms, pred.forms)
    pred_to_gold: dict[int, int] = {ROOT: ROOT}
    matched: dict[int, int] = {}  # gold 1-based -> pred 1-based
    for op in script:
        if op.kind in ("match", "substitute"):
            pred_to_gold[op.hyp + 1] = op.gold + 1  # type: ignore[operator]
        if op.kind == "match":
            matched[op.gold + 1] = op.hyp + 1  # type: ignore[operator]

    out = []
    for g, gtok in enumerate(gold.tokens, start=1):
        p = matched.get(g)
        if p is None:
            out.append(TokenOutcome(g, False, False, False))
            continue
        ptok = pred.tokens[p - 1]
        head_ok = pred_to_gold.get(ptok.head, -1) == gtok.head
        label_ok = head_ok and ptok.rel == gtok.rel and ptok.rel != ERROR_REL
        out.append(TokenOutcome(g, ptok.pos == gtok.pos, head_ok, label_ok))
    return out


def attachment_counts(gold: DepTree, pred: DepTree) -> AttachmentCounts:
    outcomes = project(gold, pred)
    return AttachmentCounts(
        tokens=len(outcomes),
        pos=sum(o.pos_ok for o in outcomes),
        uas=sum(o.head_ok for o in outcomes),
        las=sum(o.label_ok for o in outcomes),
    )


def score_parse(gold: DepTree, pred: DepTree) -> ParseScore:
    c = attachment_counts(gold, pred)
    return ParseScore(c.pos_acc, c.uas_score, c.las_score)


# ---------------------------------------------------------------------------
# head position analysis


def offset_bucket(position: int, head: int, clip: int = 5) -> str:
    """Bucket label for the signed head offset (head minus dependent).

    Root attachments get their own bucket; offsets beyond ``clip`` are pooled.
    """
    if head == ROOT:
        return "root"
    off = head - position
    if off >= clip:
        return f">={clip}"
    if off <= -clip:
        return f"<=-{clip}"
    return f"{off:+d}"


def _bucket_sort_key(bucket: str) -> tuple[int, int]:
    if bucket == "root":
        return (0, 0)
    if bucket.startswith(">="):
        return (1, int(bucket[2:]) + 1)
    if bucket.startswith("<="):
        return (1, int(bucket[2:]) - 1)
    return (1, int(bucket))


@dataclass(frozen=True)
class BucketStat:
    count: int
    correct: int

    @property
    def accuracy(self) -> float:
        return self.correct / self.count if self.count else 0.0


def head_accuracy_by_pos(
    pairs: Iterable[tuple[DepTree, DepTree]],
    pos_filter: Collection[str] | None = REPRESENTATIVE_POS,
    clip: int = 5,
) -> dict[tuple[str, str], BucketStat]:
    """Head accuracy per (gold POS, gold offset bucket).

    ``pos_filter=None`` keeps every tag.
    """
    counts: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0])
    for gold, pred in pairs:
        for outcome in project(gold, pred):
            tok = gold.tokens[outcome.gold_index - 1]
            if pos_filter is not None and tok.pos not in pos_filter:
                continue
            cell = counts[tok.pos, offset_bucket(outcome.gold_index, tok.head, clip)]
            cell[0] += 1
            cell[1] += outcome.head_ok
    keys = sorted(counts, key=lambda k: (k[0], _bucket_sort_key(k[1])))
    return {k: BucketStat(*counts[k]) for k in keys}


def write_analysis_csv(table: Mapping[tuple[str, str], BucketStat], target: str | os.PathLike | io.TextIOBase) -> None:
    def emit(f) -> None:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["pos", "offset", "count", "accuracy"])
        for (pos, bucket), stat in table.items():
            w.writerow([pos, bucket, stat.count, f"{stat.accuracy:.6f}"])

    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="") as f:
            emit(f)
    else:
        emit(target)


# ---------------------------------------------------------------------------
# corpus-level report


@dataclass
class CorpusReport:
    sentences: int
    words: int
    word_errors: int
    chars: int
    char_errors: int
    attachment: AttachmentCounts

    @property
    def wer(self) -> float:
        return 100.0 * self.word_errors / self.words if self.words else 0.0

    @property
    def cer(self) -> float:
        return 100.0 * self.char_errors / self.chars if self.chars else 0.0

    @property
    def pos(self) -> float:
        return 100.0 * self.attachment.pos_acc

    @property
    def uas(self) -> float:
        return 100.0 * self.attachment.uas_score

    @property
    def las(self) -> float:
        return 100.0 * self.attachment.las_score

    COLUMNS = ("WER", "CER", "POS", "UAS", "LAS")

    def values(self) -> tuple[float, ...]:
        return (self.wer, self.cer, self.pos, self.uas, self.las)

    def to_tsv(self) -> str:
        head = "\t".join(("sentences", "words", *self.COLUMNS))
        row = "\t".join((str(self.sentences), str(self.words), *(f"{v:.2f}" for v in self.values())))
        return f"{head}\n{row}\n"

    def to_table(self) -> str:
        header = f"{'ASR metrics':^15}|{'Parsing metrics':^23}"
        cols = "".join(f"{c:>7}" for c in self.COLUMNS[:2]) + " |" + "".join(f"{c:>7}" for c in self.COLUMNS[2:])
        vals = "".join(f"{v:7.1f}" for v in self.values()[:2]) + " |" + "".join(f"{v:7.1f}" for v in self.values()[2:])
        return "\n".join((header, cols, vals, f"({self.sentences} sentences, {self.words} words)"))


def corpus_report(
    gold: Corpus | Iterable[DepTree],
    pred: Corpus | Iterable[DepTree],
    hyps: Mapping[str, str] | None = None,
) -> CorpusReport:
    """Micro-averaged WER/CER/POS/UAS/LAS, sentences paired by ``sentence_id``.

    ``hyps`` maps sentence ids to transcripts; when absent the predicted
    trees' word forms serve as the transcript.
    """
    gold_by_id = {t.sentence_id: t for t in gold}
    pred_by_id = {t.sentence_id: t for t in pred}
    missing = [sid for sid in gold_by_id if sid not in pred_by_id]
    extra = [sid for sid in pred_by_id if sid not in gold_by_id]
    if hyps is not None:
        missing += [f"{sid} (transcript)" for sid in gold_by_id if sid not in hyps]
    if missing or extra:
        parts = []
        if missing:
            parts.append("missing from prediction: " + ", ".join(missing))
        if extra:
            parts.append("not in gold: " + ", ".join(extra))
        raise ValueError("sentence ids do not line up; " + "; ".join(parts))

    words = word_errors = chars = char_errors = 0
    att = AttachmentCounts()
    for sid, g in gold_by_id.items():
        p = pred_by_id[sid]
        hyp_text = hyps[sid] if hyps is not None else " ".join(p.forms)
        gold_text = " ".join(g.forms)
        words += len(g)
        word_errors += edit_distance(g.forms, hyp_text.split())
        chars += len(gold_text)
        char_errors += edit_distance(gold_text, normalize_spaces(hyp_text))
        att = att + attachment_counts(g, p)
    return CorpusReport(len(gold_by_id), words, word_errors, chars, char_errors, att)
