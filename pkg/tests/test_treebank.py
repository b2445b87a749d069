import io

import pytest
from hypothesis import given, settings

from conftest import dep_trees
from depseq.synthetic import random_corpus
from depseq.treebank import (
    Corpus,
    CorpusFormatError,
    DepTree,
    Token,
    dumps,
    loads,
    read_corpus,
    validate_tree,
    write_corpus,
)

FIG3_ROWS = "# sent_id = fig3\n1\test\tVRB\t0\troot\n2\tun\tDET\t3\tspe\n3\tprobléme\tNOM\t1\tdep\n"


def tree(heads, rels=None):
    rels = rels or ["root" if h == 0 else "dep" for h in heads]
    return DepTree.from_columns([f"w{i}" for i in range(1, len(heads) + 1)], ["X"] * len(heads), heads, rels)


def test_fig3_tree_is_valid(fig3_tree):
    assert validate_tree(fig3_tree) == []


def test_single_token_tree_is_valid():
    assert validate_tree(tree([0])) == []


def test_two_roots_reported():
    v = validate_tree(tree([0, 0]))
    assert [(x.constraint, x.index) for x in v] == [("root", 2)]


def test_no_root_and_cycle():
    v = validate_tree(tree([2, 1]))
    kinds = {x.constraint for x in v}
    assert kinds == {"root", "cycle"}
    assert [x.index for x in v if x.constraint == "cycle"] == [1]


@pytest.mark.parametrize("heads", [[0, 5], [0, 2]])
def test_bad_heads(heads):
    assert [x.constraint for x in validate_tree(tree(heads))] == ["head"]


def test_empty_sentence_rejected():
    with pytest.raises(ValueError, match="empty sentence"):
        validate_tree(DepTree(()))


@pytest.mark.parametrize("form", ["", "a b", "a<b", "x>"])
def test_token_form_rules(form):
    with pytest.raises(ValueError):
        Token(form, "X", 0, "root")


def test_read_fig3():
    corpus = read_corpus(io.StringIO(FIG3_ROWS))
    assert len(corpus) == 1
    (t,) = corpus
    assert t.sentence_id == "fig3"
    assert t.forms == ["est", "un", "probléme"]
    assert t.heads == [0, 3, 1]


def test_read_empty():
    assert len(read_corpus(io.StringIO(""))) == 0


def test_bad_head_names_line():
    text = "# sent_id = a\n1\tx\tX\t0\troot\n2\ty\tX\tx\tdep\n"
    with pytest.raises(CorpusFormatError, match=":3:") as err:
        read_corpus(io.StringIO(text))
    assert err.value.line == 3


def test_wrong_column_count():
    with pytest.raises(CorpusFormatError) as err:
        read_corpus(io.StringIO("1\tx\tX\t0\n"))
    assert err.value.line == 1


def test_duplicate_sentence_id():
    text = FIG3_ROWS + "\n" + FIG3_ROWS
    with pytest.raises(CorpusFormatError, match="duplicate"):
        read_corpus(io.StringIO(text))


def test_ill_formed_tree_is_reported(caplog):
    text = "# sent_id = bad\n1\tx\tX\t0\troot\n2\ty\tX\t0\troot\n"
    corpus = read_corpus(io.StringIO(text))
    assert len(corpus) == 1
    assert "bad" in caplog.text and ":1" in caplog.text
    with pytest.raises(CorpusFormatError):
        read_corpus(io.StringIO(text), strict=True)


def test_metadata_round_trip():
    text = "# sent_id = a\n# speaker = B\n# text = x y\n1\tx\tX\t0\troot\n2\ty\tX\t1\tdep\n"
    c = loads(text)
    assert c.trees[0].metadata == {"speaker": "B", "text": "x y"}
    assert dumps(c) == text


def test_missing_sent_id_gets_default():
    c = loads("1\tx\tX\t0\troot\n\n1\ty\tX\t0\troot\n")
    assert [t.sentence_id for t in c] == ["s1", "s2"]


def test_write_empty_corpus(tmp_path):
    p = tmp_path / "empty.tsv"
    write_corpus(Corpus(), p)
    assert p.read_bytes() == b""
    assert len(read_corpus(p)) == 0


def test_write_failure_names_path(tmp_path):
    target = tmp_path / "missing" / "out.tsv"
    with pytest.raises(OSError) as err:
        write_corpus(Corpus(), target)
    assert str(target) in str(err.value)


def test_random_corpus_round_trip(tmp_path):
    corpus = random_corpus(1000, seed=7)
    assert all(validate_tree(t) == [] for t in corpus)
    p = tmp_path / "c.tsv"
    write_corpus(corpus, p)
    again = read_corpus(p, strict=True)
    assert again == corpus
    # byte-stable
    assert dumps(again) == p.read_text(encoding="utf-8")


@given(dep_trees(max_len=20))
@settings(max_examples=200)
def test_generated_trees_validate_and_round_trip(t):
    assert validate_tree(t) == []
    assert loads(dumps([t])).trees == (t,)
