import random

import pytest
from hypothesis import strategies as st

from depseq.codec import LabelRegistry
from depseq.synthetic import LEXICON, POS_TAGS, RELATIONS
from depseq.treebank import DepTree, Token

FIG4_SEQUENCE = "est<POS1><L1><REL0>_un<POS2><R1><REL2>_probléme<POS0><L2><REL1>"


@pytest.fixture
def fig3_tree():
    return DepTree.from_columns(
        ["est", "un", "probléme"], ["VRB", "DET", "NOM"], [0, 3, 1], ["root", "spe", "dep"], sentence_id="fig3"
    )


@pytest.fixture
def fig4_registry():
    return LabelRegistry(("NOM", "VRB", "DET"), ("root", "dep", "spe"), max_offset=2)


@pytest.fixture
def rng():
    return random.Random(1234)


@st.composite
def dep_trees(draw, max_len=12, forms=st.sampled_from(LEXICON)):
    n = draw(st.integers(1, max_len))
    order = draw(st.permutations(range(1, n + 1)))
    heads = [0] * n
    for k, node in enumerate(order[1:], start=1):
        heads[node - 1] = order[draw(st.integers(0, k - 1))]
    tokens = tuple(
        Token(
            draw(forms),
            draw(st.sampled_from(POS_TAGS)),
            h,
            "root" if h == 0 else draw(st.sampled_from(RELATIONS)),
        )
        for h in heads
    )
    return DepTree(tokens, sentence_id=draw(st.text("abc123", min_size=1, max_size=5)))


FULL_REGISTRY = LabelRegistry(POS_TAGS, ("root", *RELATIONS), max_offset=40)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
