"""Word-level noisy channel and synthetic CTC emissions.

``corrupt`` draws i.i.d. edit operations per word, which is all the oracle
rules care about. ``synth_emissions`` builds emission matrices whose greedy
decode is a given token sequence, with Gaussian logit noise on top.
"""

from __future__ import annotations

import json
import os
import random
import string
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from depseq.ctcdec import SubwordVocab
from depseq.treebank import Corpus, DepTree

ALPHABET = string.ascii_lowercase
PEAK_LOGIT = 5.0


@dataclass(frozen=True)
class NoiseConfig:
    p_sub: float = 0.0
    p_del: float = 0.0
    p_ins: float = 0.0
    char_corrupt: float = 0.5  # share of substitutions that are a one-character edit
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("p_sub", "p_del", "p_ins", "char_corrupt"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} is not a probability")
        if self.p_sub + self.p_del > 1.0:
            raise ValueError(f"p_sub + p_del = {self.p_sub + self.p_del} exceeds 1")

    @property
    def total_rate(self) -> float:
        return self.p_sub + self.p_del + self.p_ins

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "NoiseConfig":
        unknown = set(data) - {"p_sub", "p_del", "p_ins", "char_corrupt", "seed"}
        if unknown:
            raise ValueError(f"unknown noise config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "NoiseConfig":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))


def _char_edit(word: str, rng: random.Random) -> str:
    """A different word at character edit distance one."""
    while True:
        kind = rng.choice(("sub", "ins", "del") if len(word) > 1 else ("sub", "ins"))
        i = rng.randrange(len(word) + (kind == "ins"))
        if kind == "sub":
            out = word[:i] + rng.choice(ALPHABET) + word[i + 1 :]
        elif kind == "ins":
            out = word[:i] + rng.choice(ALPHABET) + word[i:]
        else:
            out = word[:i] + word[i + 1 :]
        if out != word:
            return out


def _random_word(rng: random.Random, vocabulary: Sequence[str], avoid: str | None = None) -> str:
    candidates = [w for w in vocabulary if w != avoid] if avoid is not None else vocabulary
    if candidates:
        return rng.choice(candidates)
    while True:
        w = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(1, 6)))
        if w != avoid:
            return w


def corrupt(
    words: Sequence[str],
    cfg: NoiseConfig,
    vocabulary: Sequence[str] = (),
    rng: random.Random | None = None,
    trace: list[str] | None = None,
) -> list[str]:
    """Apply deletions, substitutions and insertions to a word sequence.

    One uniform draw per word: below ``p_del`` it is deleted, below
    ``p_del + p_sub`` it is substituted, otherwise kept. After every position
    a random word is inserted with probability ``p_ins``. Substitutes always
    differ from the original word.

    If ``trace`` is given, the applied operations (``keep``, ``substitute``,
    ``delete``, ``insert``) are appended to it in order.
    """
    rng = rng if rng is not None else random.Random(cfg.seed)
    record = trace.append if trace is not None else (lambda op: None)
    out: list[str] = []
    for w in words:
        u = rng.random()
        if u < cfg.p_del:
            record("delete")
        elif u < cfg.p_del + cfg.p_sub:
            if rng.random() < cfg.char_corrupt:
                out.append(_char_edit(w, rng))
            else:
                out.append(_random_word(rng, vocabulary, avoid=w))
            record("substitute")
        else:
            out.append(w)
            record("keep")
        if rng.random() < cfg.p_ins:
            out.append(_random_word(rng, vocabulary))
            record("insert")
    return out


def sentence_rng(cfg: NoiseConfig, sentence_id: str) -> random.Random:
    # independent of corpus order, so sentences can be processed in any order
    return random.Random(f"{cfg.seed}:{sentence_id}")


def corpus_vocabulary(trees: Iterable[DepTree]) -> list[str]:
    return sorted({w for t in trees for w in t.forms})


def corrupt_corpus(corpus: Corpus, cfg: NoiseConfig) -> dict[str, list[str]]:
    vocabulary = corpus_vocabulary(corpus)
    return {t.sentence_id: corrupt(t.forms, cfg, vocabulary, sentence_rng(cfg, t.sentence_id)) for t in corpus}


def synth_emissions(
    seq: Sequence[int],
    vocab: SubwordVocab | int,
    frames_per_token: int = 3,
    noise_temp: float = 0.0,
    rng: np.random.Generator | int | None = 0,
) -> np.ndarray:
    """Emission matrix whose best path spells ``seq``.

    Layout: one leading blank frame, then for each token ``frames_per_token - 1``
    frames peaked on it followed by one blank frame. With ``noise_temp == 0``
    rows are exact one-hot; otherwise rows are ``softmax(PEAK_LOGIT * onehot
    + noise_temp * N(0, 1))``.
    """
    if frames_per_token < 2:
        raise ValueError("frames_per_token must be >= 2")
    size = vocab if isinstance(vocab, int) else len(vocab)
    blank = 0 if isinstance(vocab, int) else vocab.blank_id
    path = [blank]
    for tok in seq:
        path.extend([tok] * (frames_per_token - 1))
        path.append(blank)
    if not seq:
        path = [blank] * frames_per_token
    onehot = np.zeros((len(path), size))
    onehot[np.arange(len(path)), path] = 1.0
    if noise_temp == 0:
        return onehot
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    logits = PEAK_LOGIT * onehot + noise_temp * gen.standard_normal(onehot.shape)
    logits -= logits.max(axis=1, keepdims=True)
    probs = np.exp(logits)
    return probs / probs.sum(axis=1, keepdims=True)
