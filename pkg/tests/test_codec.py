import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIG4_SEQUENCE, FULL_REGISTRY, dep_trees
from depseq.codec import DecodedAnnotation, EncodingError, LabelRegistry, build_registry, decode, encode
from depseq.synthetic import random_corpus
from depseq.treebank import DepTree, Token


def annotations_of(tree):
    return [
        DecodedAnnotation(t.form, t.pos, (t.head - i) if t.head else -i, t.rel)
        for i, t in enumerate(tree.tokens, start=1)
    ]


def test_fig4_encoding(fig3_tree, fig4_registry):
    assert encode(fig3_tree, fig4_registry) == FIG4_SEQUENCE.replace("_", " ")
    assert encode(fig3_tree, fig4_registry, sep="_") == FIG4_SEQUENCE


def test_fig4_decoding(fig4_registry):
    assert decode(FIG4_SEQUENCE.replace("_", " "), fig4_registry) == [
        ("est", "VRB", -1, "root"),
        ("un", "DET", 1, "spe"),
        ("probléme", "NOM", -2, "dep"),
    ]
    assert decode(FIG4_SEQUENCE, fig4_registry, sep="_") == decode(FIG4_SEQUENCE.replace("_", " "), fig4_registry)


def test_single_token():
    reg = LabelRegistry(("P",), ("r",), 1)
    t = DepTree((Token("hello", "P", 0, "r"),))
    assert encode(t, reg) == "hello<POS0><L1><REL0>"


def test_fallback_labels():
    assert decode("hello", FULL_REGISTRY) == [("hello", "X", None, "dep")]


def test_leftmost_wins_example():
    reg = LabelRegistry(("N", "V"), ("root",), 2)
    assert decode("a<POS0><POS1><L1><R2><REL0>", reg) == [("a", "N", -1, "root")]


def _expected_by_scan(symbols, reg):
    # independent oracle: walk symbols, remember first hit per category
    first = {}
    for s in symbols:
        body = s[1:-1]
        if body.startswith("POS") and int(body[3:]) < len(reg.pos):
            first.setdefault("pos", reg.pos[int(body[3:])])
        elif body.startswith("REL") and int(body[3:]) < len(reg.rel):
            first.setdefault("rel", reg.rel[int(body[3:])])
        elif body[0] in "LR" and body[1:].isdigit() and 1 <= int(body[1:]) <= reg.max_offset:
            first.setdefault("head", int(body[1:]) * (-1 if body[0] == "L" else 1))
    return ("w", first.get("pos", "X"), first.get("head"), first.get("rel", "dep"))


def test_leftmost_selection_over_all_orderings():
    reg = LabelRegistry(("N", "V"), ("root", "dep"), 2)
    pool = ["<POS0>", "<POS1>", "<L1>", "<R2>", "<REL1>", "<REL0>", "<FOO>"]
    checked = 0
    for k in range(len(pool) + 1):
        for combo in itertools.permutations(pool, min(k, 4)):
            seq = "w" + "".join(combo)
            assert decode(seq, reg) == [_expected_by_scan(combo, reg)], seq
            checked += 1
    assert checked > 1000


def test_unknown_and_out_of_range_symbols_are_skipped(fig4_registry):
    assert decode("a<POS9><L3><REL7><X><POS2>", fig4_registry) == [("a", "DET", None, "dep")]


def test_trailing_text_after_labels_dropped(fig4_registry):
    assert decode("a<POS0>b", fig4_registry) == [("a", "NOM", None, "dep")]


def test_empty_word_segments_dropped(fig4_registry):
    assert decode("<POS0><L1> x <REL0>  ", fig4_registry) == [("x", "X", None, "dep")]
    assert decode("", fig4_registry) == []


def test_unregistered_tag_errors(fig3_tree):
    reg = LabelRegistry(("NOM", "VRB"), ("root", "dep", "spe"), 2)
    with pytest.raises(EncodingError, match="DET"):
        encode(fig3_tree, reg)


def test_offset_overflow_errors(fig3_tree):
    reg = LabelRegistry(("NOM", "VRB", "DET"), ("root", "dep", "spe"), 1)
    with pytest.raises(EncodingError, match="token 3"):
        encode(fig3_tree, reg)


def test_registry_validation():
    with pytest.raises(ValueError):
        LabelRegistry(("a", "a"), ("r",), 1)
    with pytest.raises(ValueError):
        LabelRegistry(("a",), ("r",), 0)


def test_registry_json_round_trip(tmp_path, fig4_registry):
    p = tmp_path / "reg.json"
    fig4_registry.save(p)
    assert LabelRegistry.load(p) == fig4_registry


def test_build_registry_first_appearance(fig3_tree):
    reg = build_registry([fig3_tree])
    assert reg.pos == ("VRB", "DET", "NOM")
    assert reg.rel == ("root", "spe", "dep")
    assert reg.max_offset == 2


def test_build_registry_single_token():
    reg = build_registry([DepTree((Token("a", "P", 0, "r"),))])
    assert (len(reg.pos), len(reg.rel), reg.max_offset) == (1, 1, 1)


def test_build_registry_empty():
    with pytest.raises(ValueError):
        build_registry([])


def test_built_registry_encodes_everything():
    corpus = random_corpus(500, seed=3)
    reg = build_registry(corpus)
    for t in corpus:
        assert decode(encode(t, reg), reg) == annotations_of(t)


@given(dep_trees(max_len=40))
@settings(max_examples=300)
def test_round_trip(t):
    seq = encode(t, FULL_REGISTRY)
    assert seq.count(" ") == len(t) - 1
    assert decode(seq, FULL_REGISTRY) == annotations_of(t)


@given(st.text(alphabet="ab <>POSRELLR0123_é\t", max_size=60))
@settings(max_examples=500)
def test_decode_is_total(text):
    for a in decode(text, FULL_REGISTRY):
        assert a.word and "<" not in a.word and ">" not in a.word and not any(c.isspace() for c in a.word)


@given(dep_trees(max_len=10), st.randoms(use_true_random=False))
@settings(max_examples=200)
def test_extra_labels_after_first_do_not_change_decode(t, rnd):
    seq = encode(t, FULL_REGISTRY)
    noisy = []
    for seg in seq.split(" "):
        extra = "".join(rnd.choice(FULL_REGISTRY.symbols()) for _ in range(rnd.randint(0, 3)))
        noisy.append(seg + extra)
    assert decode(" ".join(noisy), FULL_REGISTRY) == decode(seq, FULL_REGISTRY)
