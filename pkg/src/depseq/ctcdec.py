"""Greedy CTC decoding and subword (de)tokenization with atomic label symbols.

Emission matrices are ``t x |V|`` arrays of per-frame probabilities. The
subword inventory follows the SentencePiece convention: a piece starting
with ``▁`` opens a new word. Label symbols such as ``<POS3>`` are
user-defined pieces that are never split and never carry the marker, so in
the tokenized stream they simply attach to the word being spelled::

    est <POS1> <L1> <REL0> ▁un <POS2> <R1> <REL2> ▁prob lé me ...
"""

from __future__ import annotations

import os
import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import groupby
from typing import Iterable, Sequence

import numpy as np

BOUNDARY = "▁"  # ▁
BLANK_PIECE = "<blank>"
ROW_SUM_TOL = 1e-6

_LABEL_PIECE = re.compile(r"<[^<>\s]+>")


class VocabError(ValueError):
    pass


@dataclass(frozen=True)
class SubwordVocab:
    pieces: tuple[str, ...]
    blank_id: int = 0
    boundary: str = BOUNDARY
    user_defined: frozenset[str] | None = None
    _index: dict[str, int] = field(init=False, repr=False, compare=False)
    _label_re: re.Pattern | None = field(init=False, repr=False, compare=False)
    _max_len: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not 0 <= self.blank_id < len(pieces):
            raise VocabError(f"blank_id {self.blank_id} outside vocabulary of size {len(pieces)}")
        index: dict[str, int] = {}
        for i, p in enumerate(pieces):
            if not p:
                raise VocabError(f"empty piece at id {i}")
            if p in index:
                raise VocabError(f"duplicate piece {p!r} (ids {index[p]} and {i})")
            index[p] = i
        blank = pieces[self.blank_id]
        if self.user_defined is None:
            user = frozenset(p for p in pieces if p != blank and _LABEL_PIECE.fullmatch(p))
        else:
            user = frozenset(self.user_defined)
            missing = user - index.keys()
            if missing:
                raise VocabError(f"user-defined pieces not in vocabulary: {sorted(missing)}")
        for p in user:
            if self.boundary in p:
                raise VocabError(f"user-defined piece {p!r} contains the boundary marker")
        object.__setattr__(self, "user_defined", user)
        object.__setattr__(self, "_index", index)
        label_re = None
        if user:
            alternatives = sorted(user, key=lambda p: (-len(p), p))
            label_re = re.compile("|".join(map(re.escape, alternatives)))
        object.__setattr__(self, "_label_re", label_re)
        object.__setattr__(self, "_max_len", max(len(p) for p in pieces))

    def __len__(self) -> int:
        return len(self.pieces)

    def id_of(self, piece: str) -> int:
        return self._index[piece]

    def __contains__(self, piece: str) -> bool:
        return piece in self._index

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for i, p in enumerate(self.pieces):
                f.write(f"{i}\t{p}\n")

    @classmethod
    def load(cls, path: str | os.PathLike, blank_id: int = 0, boundary: str = BOUNDARY) -> "SubwordVocab":
        entries: dict[int, str] = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                idx, sep, piece = line.partition("\t")
                if not sep or not idx.isdigit():
                    raise VocabError(f"{path}:{lineno}: expected '<id>\\t<piece>'")
                entries[int(idx)] = piece
        if sorted(entries) != list(range(len(entries))):
            raise VocabError(f"{path}: piece ids are not dense from 0")
        return cls(tuple(entries[i] for i in range(len(entries))), blank_id=blank_id, boundary=boundary)


def build_vocab(
    sequences: Iterable[str],
    label_symbols: Sequence[str] = (),
    size: int = 1000,
    boundary: str = BOUNDARY,
) -> SubwordVocab:
    """Piece inventory covering every character of ``sequences``.

    Layout: blank, label symbols, the bare marker, single characters, then
    frequent whole words (with and without the marker) until ``size``.
    """
    labels = list(dict.fromkeys(label_symbols))
    words: Counter[str] = Counter()
    chars: set[str] = set()
    for seq in sequences:
        for segment in seq.split():
            for part in _LABEL_PIECE.split(segment):
                if part:
                    words[part] += 1
                    chars.update(part)
            for sym in _LABEL_PIECE.findall(segment):
                if sym not in labels:
                    labels.append(sym)
    pieces = [BLANK_PIECE, *labels, boundary, *sorted(chars)]
    seen = set(pieces)
    for word, _ in sorted(words.items(), key=lambda kv: (-kv[1], kv[0])):
        if len(pieces) >= size:
            break
        for cand in (boundary + word, word):
            if len(word) > 1 and cand not in seen and len(pieces) < size:
                pieces.append(cand)
                seen.add(cand)
    return SubwordVocab(tuple(pieces), blank_id=0, boundary=boundary)


def check_emissions(em: np.ndarray, tol: float = ROW_SUM_TOL) -> np.ndarray:
    em = np.asarray(em, dtype=np.float64)
    if em.ndim != 2:
        raise ValueError(f"emission matrix must be 2-D, got shape {em.shape}")
    if em.size and (em < 0).any():
        raise ValueError("emission matrix has negative entries")
    if em.shape[0] and not np.allclose(em.sum(axis=1), 1.0, rtol=0, atol=tol):
        raise ValueError("emission rows do not sum to 1")
    return em


def greedy_ctc(em: np.ndarray, blank_id: int = 0, check: bool = True) -> list[int]:
    """Best-path decoding: per-frame argmax, merge repeats, drop blanks."""
    em = check_emissions(em) if check else np.asarray(em)
    if em.shape[0] == 0:
        return []
    path = np.argmax(em, axis=1)  # first maximum wins ties
    return [int(k) for k, _ in groupby(path.tolist()) if k != blank_id]


def detokenize(ids: Iterable[int], vocab: SubwordVocab) -> str:
    parts = []
    for i in ids:
        if not 0 <= i < len(vocab.pieces):
            raise VocabError(f"unknown token id {i}")
        if i == vocab.blank_id:
            continue
        parts.append(vocab.pieces[i])
    return "".join(parts).replace(vocab.boundary, " ").lstrip(" ")


def _segment_plain(run: str, vocab: SubwordVocab, out: list[int]) -> None:
    i = 0
    user = vocab.user_defined
    blank = vocab.pieces[vocab.blank_id]
    while i < len(run):
        for length in range(min(vocab._max_len, len(run) - i), 0, -1):
            piece = run[i : i + length]
            idx = vocab._index.get(piece)
            if idx is not None and piece not in user and piece != blank:  # type: ignore[operator]
                out.append(idx)
                i += length
                break
        else:
            raise VocabError(f"character {run[i]!r} cannot be covered by the vocabulary")


def tokenize(text: str, vocab: SubwordVocab) -> list[int]:
    """Greedy longest-match segmentation; label symbols are matched whole first."""
    marked = text.replace(" ", vocab.boundary)
    out: list[int] = []
    pos = 0
    if vocab._label_re is not None:
        for m in vocab._label_re.finditer(marked):
            _segment_plain(marked[pos : m.start()], vocab, out)
            out.append(vocab._index[m.group()])
            pos = m.end()
    _segment_plain(marked[pos:], vocab, out)
    return out


# ---------------------------------------------------------------------------
# emission matrix files: .npy (dense binary) or .csv with a "# t=<t> v=<V>" header


def save_emissions(path: str | os.PathLike, em: np.ndarray) -> None:
    path = os.fspath(path)
    em = np.asarray(em, dtype=np.float64)
    if path.endswith(".npy"):
        np.save(path, em)
    elif path.endswith(".csv"):
        t, v = em.shape
        np.savetxt(path, em.reshape(t, v), delimiter=",", fmt="%.17g", header=f"t={t} v={v}", comments="# ")
    else:
        raise ValueError(f"unsupported emission file type: {path}")


def load_emissions(path: str | os.PathLike) -> np.ndarray:
    path = os.fspath(path)
    if path.endswith(".npy"):
        return check_emissions(np.load(path))
    if path.endswith(".csv"):
        with open(path, encoding="utf-8") as f:
            header = f.readline()
        m = re.match(r"#\s*t=(\d+)\s+v=(\d+)", header)
        if m is None:
            raise ValueError(f"{path}: missing '# t=<t> v=<V>' header")
        t, v = int(m.group(1)), int(m.group(2))
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2) if t else np.zeros((0, v))
        if data.shape != (t, v):
            raise ValueError(f"{path}: header says {t}x{v}, data is {data.shape[0]}x{data.shape[1]}")
        return check_emissions(data)
    raise ValueError(f"unsupported emission file type: {path}")


def decode_emissions(em: np.ndarray, vocab: SubwordVocab) -> str:
    return detokenize(greedy_ctc(em, vocab.blank_id), vocab)
