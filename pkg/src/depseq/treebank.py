"""Dependency tree data model, well-formedness checks and CoNLL-like TSV I/O.

The on-disk format has five tab-separated columns per token::

    ID  FORM  POS  HEAD  REL

Sentences are separated by a blank line. Comment lines start with ``#``;
``# sent_id = <id>`` names the sentence and any other ``# key = value``
comment is kept as metadata.
"""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

logger = logging.getLogger(__name__)

ROOT = 0
PathOrStream = Union[str, "os.PathLike[str]", IO[str]]

_FORBIDDEN_FORM_CHARS = frozenset("<>")


class CorpusFormatError(ValueError):
    """Raised on malformed treebank input. Carries the offending line number."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


@dataclass(frozen=True)
class Token:
    form: str
    pos: str
    head: int
    rel: str

    def __post_init__(self) -> None:
        if not self.form:
            raise ValueError("token form must be non-empty")
        if any(c.isspace() or c in _FORBIDDEN_FORM_CHARS for c in self.form):
            raise ValueError(f"token form {self.form!r} contains whitespace or angle brackets")
        if self.head < 0:
            raise ValueError(f"negative head {self.head} for token {self.form!r}")


@dataclass(frozen=True)
class DepTree:
    """A sentence: tokens in surface order, heads 1-based, 0 is the virtual ROOT."""

    tokens: tuple[Token, ...]
    sentence_id: str = ""
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "metadata", dict(self.metadata))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def heads(self) -> list[int]:
        return [t.head for t in self.tokens]

    @property
    def root(self) -> int | None:
        """1-based index of the first token attached to ROOT, if any."""
        for i, tok in enumerate(self.tokens, start=1):
            if tok.head == ROOT:
                return i
        return None

    @classmethod
    def from_columns(
        cls,
        forms: Sequence[str],
        pos: Sequence[str],
        heads: Sequence[int],
        rels: Sequence[str],
        sentence_id: str = "",
    ) -> "DepTree":
        if not len(forms) == len(pos) == len(heads) == len(rels):
            raise ValueError("column lengths differ")
        return cls(
            tuple(Token(f, p, h, r) for f, p, h, r in zip(forms, pos, heads, rels)),
            sentence_id=sentence_id,
        )


@dataclass(frozen=True)
class Corpus:
    trees: tuple[DepTree, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.trees, tuple):
            object.__setattr__(self, "trees", tuple(self.trees))
        seen: set[str] = set()
        for tree in self.trees:
            if tree.sentence_id in seen:
                raise ValueError(f"duplicate sentence_id {tree.sentence_id!r}")
            seen.add(tree.sentence_id)

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self) -> Iterator[DepTree]:
        return iter(self.trees)

    def by_id(self) -> dict[str, DepTree]:
        return {t.sentence_id: t for t in self.trees}


class Violation(NamedTuple):
    constraint: str  # "root", "head" or "cycle"
    index: int  # 1-based token index, 0 when the whole tree is at fault
    message: str


def validate_tree(tree: DepTree | Sequence[Token]) -> list[Violation]:
    """Check single root, in-range heads and acyclicity.

    Returns an empty list iff the tree is well formed.
    """
    tokens = tree.tokens if isinstance(tree, DepTree) else tuple(tree)
    n = len(tokens)
    if n == 0:
        raise ValueError("empty sentence")

    violations: list[Violation] = []
    heads = [t.head for t in tokens]
    bad_head = set()
    for i, h in enumerate(heads, start=1):
        if not 0 <= h <= n:
            violations.append(Violation("head", i, f"head {h} out of range [0, {n}]"))
            bad_head.add(i)
        elif h == i:
            violations.append(Violation("head", i, "token is its own head"))
            bad_head.add(i)

    roots = [i for i, h in enumerate(heads, start=1) if h == ROOT]
    if not roots:
        violations.append(Violation("root", 0, "no token attached to ROOT"))
    for i in roots[1:]:
        violations.append(Violation("root", i, f"multiple roots (first is token {roots[0]})"))

    # 0 = unvisited, 1 = on current path, 2 = known to reach ROOT or a bad head
    state = [0] * (n + 1)
    state[0] = 2
    for start in range(1, n + 1):
        path = []
        i = start
        while state[i] == 0 and i not in bad_head:
            state[i] = 1
            path.append(i)
            i = heads[i - 1]
        if i != 0 and state[i] == 1:
            cycle = path[path.index(i):]
            violations.append(
                Violation("cycle", min(cycle), "cycle through tokens " + "->".join(map(str, cycle)))
            )
        for j in path:
            state[j] = 2
    return violations


def is_well_formed(tree: DepTree) -> bool:
    return not validate_tree(tree)


# ---------------------------------------------------------------------------
# I/O


def _open_for_read(source: PathOrStream) -> tuple[IO[str], str, bool]:
    if isinstance(source, (str, os.PathLike)):
        return open(source, encoding="utf-8", newline=""), os.fspath(source), True
    return source, getattr(source, "name", "<stream>"), False


def _parse_sentence(
    rows: list[tuple[int, str]], comments: list[tuple[int, str]], default_id: str, source: str
) -> DepTree:
    sentence_id = default_id
    metadata: dict[str, str] = {}
    for lineno, comment in comments:
        body = comment[1:].strip()
        key, sep, value = body.partition("=")
        if not sep:
            metadata[body] = ""
            continue
        key, value = key.strip(), value.strip()
        if key == "sent_id":
            sentence_id = value
        else:
            metadata[key] = value

    tokens = []
    for expected_id, (lineno, line) in enumerate(rows, start=1):
        cols = line.split("\t")
        if len(cols) != 5:
            raise CorpusFormatError(f"expected 5 tab-separated columns, got {len(cols)}", lineno, source)
        tid, form, pos, head, rel = cols
        try:
            tid_int = int(tid)
        except ValueError:
            raise CorpusFormatError(f"non-integer ID {tid!r}", lineno, source) from None
        if tid_int != expected_id:
            raise CorpusFormatError(f"ID {tid_int} out of sequence (expected {expected_id})", lineno, source)
        try:
            head_int = int(head)
        except ValueError:
            raise CorpusFormatError(f"non-integer HEAD {head!r}", lineno, source) from None
        try:
            tokens.append(Token(form, pos, head_int, rel))
        except ValueError as e:
            raise CorpusFormatError(str(e), lineno, source) from None
    return DepTree(tuple(tokens), sentence_id=sentence_id, metadata=metadata)


def iter_trees(source: PathOrStream, strict: bool = False) -> Iterator[DepTree]:
    """Stream trees from a file. Ill-formed trees are logged, or raised when ``strict``."""
    stream, name, owned = _open_for_read(source)
    try:
        rows: list[tuple[int, str]] = []
        comments: list[tuple[int, str]] = []
        first_line = 0
        count = 0

        def flush() -> DepTree:
            nonlocal count
            count += 1
            tree = _parse_sentence(rows, comments, f"s{count}", name)
            problems = validate_tree(tree)
            if problems:
                desc = "; ".join(f"token {v.index}: {v.message}" for v in problems)
                if strict:
                    raise CorpusFormatError(f"ill-formed tree {tree.sentence_id!r}: {desc}", first_line, name)
                logger.warning("%s:%d: ill-formed tree %r: %s", name, first_line, tree.sentence_id, desc)
            return tree

        for lineno, raw in enumerate(stream, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                if rows:
                    yield flush()
                elif comments:
                    raise CorpusFormatError("comment block without token rows", lineno, name)
                rows, comments = [], []
                continue
            if not rows and not comments:
                first_line = lineno
            if line.startswith("#"):
                if rows:
                    raise CorpusFormatError("comment inside a sentence", lineno, name)
                comments.append((lineno, line))
            else:
                rows.append((lineno, line))
        if rows:
            yield flush()
        elif comments:
            raise CorpusFormatError("comment block without token rows", first_line, name)
    finally:
        if owned:
            stream.close()


def read_corpus(source: PathOrStream, strict: bool = False) -> Corpus:
    trees = list(iter_trees(source, strict=strict))
    seen: dict[str, int] = {}
    for k, tree in enumerate(trees):
        if tree.sentence_id in seen:
            raise CorpusFormatError(f"duplicate sentence_id {tree.sentence_id!r}", source=_name_of(source))
        seen[tree.sentence_id] = k
    return Corpus(tuple(trees))


def _name_of(source: PathOrStream) -> str:
    if isinstance(source, (str, os.PathLike)):
        return os.fspath(source)
    return getattr(source, "name", "<stream>")


def format_tree(tree: DepTree) -> str:
    lines = [f"# sent_id = {tree.sentence_id}"]
    lines.extend(f"# {k} = {v}" if v else f"# {k}" for k, v in tree.metadata.items())
    for i, tok in enumerate(tree.tokens, start=1):
        lines.append(f"{i}\t{tok.form}\t{tok.pos}\t{tok.head}\t{tok.rel}")
    return "\n".join(lines) + "\n"


def write_corpus(corpus: Corpus | Iterable[DepTree], target: PathOrStream) -> None:
    text = "\n".join(format_tree(t) for t in corpus)
    if isinstance(target, (str, os.PathLike)):
        try:
            with open(target, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as e:
            raise OSError(e.errno, f"cannot write corpus: {e.strerror}", os.fspath(target)) from e
    else:
        target.write(text)


def dumps(corpus: Corpus | Iterable[DepTree]) -> str:
    buf = io.StringIO()
    write_corpus(corpus, buf)
    return buf.getvalue()


def loads(text: str, strict: bool = False) -> Corpus:
    return read_corpus(io.StringIO(text), strict=strict)
