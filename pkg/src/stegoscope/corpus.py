"""Deterministic tokenization, sentence splitting, POS tagging, and corpus I/O.

Everything downstream (habit/psychology/focus extractors, the experiment
harness) consumes the Document objects produced here. All functions are pure
and give identical output for identical input, with no external tagger or
model involved.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable


class TokenKind(str, Enum):
    WORD = "word"
    PUNCTUATION = "punctuation"
    URL = "url"
    EMOTICON = "emoticon"
    NUMBER = "number"
    SYMBOL = "symbol"


class Tag(str, Enum):
    NOUN = "NOUN"
    PRON = "PRON"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    ADP = "ADP"
    DET = "DET"
    CONJ = "CONJ"
    INTJ = "INTJ"
    PUNCT = "PUNCT"
    URL = "URL"
    NUM = "NUM"
    SYM = "SYM"
    OTHER = "OTHER"


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind

    @property
    def lowercase(self) -> str:
        return self.surface.casefold()


@dataclass(frozen=True)
class Document:
    """One text with its tokenization, sentence ranges, and POS tags.

    sentences is a list of (start, end) half-open token-index ranges that
    partition [0, len(tokens)). tags has one entry per token.
    """

    id: str
    user_id: str
    text: str
    label: str  # "cover" | "stego"
    tokens: tuple[Token, ...]
    sentences: tuple[tuple[int, int], ...]
    tags: tuple[Tag, ...]

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        if self.label not in ("cover", "stego"):
            raise ValueError(f"unknown label {self.label!r}")
        if len(self.tags) != len(self.tokens):
            raise ValueError("tags length must equal tokens length")


class CorpusError(ValueError):
    """Raised for malformed corpus files, duplicate ids, or bad labels."""


@dataclass
class TagLexicon:
    """Word -> tag map with ordered suffix-rule fallback and a default tag."""

    entries: dict[str, Tag]
    suffix_rules: list[tuple[str, Tag]] = field(default_factory=list)
    default_tag: Tag = Tag.NOUN


# Sentence-closing tokens; the ellipsis character counts once.
SENTENCE_TERMINATORS = frozenset({".", "!", "?", ";", "…"})

_DATA = resources.files("stegoscope") / "data"


def _default_emoticons() -> frozenset[str]:
    text = (_DATA / "emoticons.tsv").read_text(encoding="utf-8")
    surfaces = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            surfaces.add(line.split("\t")[0])
    return frozenset(surfaces)


_EMOTICONS: frozenset[str] | None = None


def _emoticon_set() -> frozenset[str]:
    global _EMOTICONS
    if _EMOTICONS is None:
        _EMOTICONS = _default_emoticons()
    return _EMOTICONS


def is_url(chunk: str) -> bool:
    """URL rule: a known scheme/www prefix, or a "." immediately followed by "/"."""
    lower = chunk.casefold()
    if lower.startswith(("http://", "https://", "www.")):
        return True
    return "./" in chunk


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _is_symbol_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("S")


def _classify_core(core: str) -> TokenKind:
    stripped = core.replace(",", "").replace(".", "")
    if stripped and all(ch.isdigit() or ch in "+-" for ch in stripped) and any(
        ch.isdigit() for ch in stripped
    ):
        return TokenKind.NUMBER
    if any(ch.isalpha() for ch in core):
        return TokenKind.WORD
    return TokenKind.SYMBOL


def tokenize(text: str, emoticons: Iterable[str] | None = None) -> list[Token]:
    """Split text into tokens: whitespace split, then punctuation peeling.

    URLs and emoticon surfaces are recognized before peeling and kept whole.
    Each peeled punctuation/symbol character becomes its own token. Internal
    punctuation (apostrophes, hyphens) stays inside word tokens.
    """
    emo = frozenset(emoticons) if emoticons is not None else _emoticon_set()
    tokens: list[Token] = []
    for chunk in text.split():
        if is_url(chunk):
            tokens.append(Token(chunk, TokenKind.URL))
            continue
        if chunk in emo:
            tokens.append(Token(chunk, TokenKind.EMOTICON))
            continue
        leading: list[Token] = []
        trailing: list[Token] = []
        start, end = 0, len(chunk)
        while start < end and (_is_punct_char(chunk[start]) or _is_symbol_char(chunk[start])):
            kind = TokenKind.PUNCTUATION if _is_punct_char(chunk[start]) else TokenKind.SYMBOL
            leading.append(Token(chunk[start], kind))
            start += 1
        while end > start and (_is_punct_char(chunk[end - 1]) or _is_symbol_char(chunk[end - 1])):
            kind = TokenKind.PUNCTUATION if _is_punct_char(chunk[end - 1]) else TokenKind.SYMBOL
            trailing.append(Token(chunk[end - 1], kind))
            end -= 1
        tokens.extend(leading)
        core = chunk[start:end]
        if core:
            if core in emo:
                tokens.append(Token(core, TokenKind.EMOTICON))
            else:
                tokens.append(Token(core, _classify_core(core)))
        tokens.extend(reversed(trailing))
    return tokens


def split_sentences(tokens: list[Token]) -> list[tuple[int, int]]:
    """Half-open token ranges; a sentence closes after each terminator token."""
    ranges: list[tuple[int, int]] = []
    start = 0
    for i, tok in enumerate(tokens):
        if tok.surface in SENTENCE_TERMINATORS:
            ranges.append((start, i + 1))
            start = i + 1
    if start < len(tokens):
        ranges.append((start, len(tokens)))
    return ranges


_KIND_TAGS = {
    TokenKind.PUNCTUATION: Tag.PUNCT,
    TokenKind.URL: Tag.URL,
    TokenKind.NUMBER: Tag.NUM,
    TokenKind.SYMBOL: Tag.SYM,
    TokenKind.EMOTICON: Tag.SYM,
}


def pos_tag(tokens: list[Token], lexicon: TagLexicon) -> list[Tag]:
    """Tag every token: kind rules, then exact lookup, suffix rules, default."""
    tags: list[Tag] = []
    for tok in tokens:
        kind_tag = _KIND_TAGS.get(tok.kind)
        if kind_tag is not None:
            tags.append(kind_tag)
            continue
        word = tok.lowercase
        tag = lexicon.entries.get(word)
        if tag is None:
            for suffix, stag in lexicon.suffix_rules:
                if word.endswith(suffix) and len(word) > len(suffix):
                    tag = stag
                    break
        tags.append(tag if tag is not None else lexicon.default_tag)
    return tags


def load_tag_lexicon(
    words_path: str | Path | None = None,
    suffix_path: str | Path | None = None,
    default_tag: Tag = Tag.NOUN,
) -> TagLexicon:
    """Load word and suffix TSVs; None means the bundled defaults."""
    if words_path is None:
        words_text = (_DATA / "tags_words.tsv").read_text(encoding="utf-8")
    else:
        words_text = Path(words_path).read_text(encoding="utf-8")
    if suffix_path is None:
        suffix_text = (_DATA / "tags_suffixes.tsv").read_text(encoding="utf-8")
    else:
        suffix_text = Path(suffix_path).read_text(encoding="utf-8")

    entries: dict[str, Tag] = {}
    for line in words_text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        entries[word.casefold()] = Tag(tag)
    suffix_rules: list[tuple[str, Tag]] = []
    for line in suffix_text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        suffix, tag = line.split("\t")
        suffix_rules.append((suffix.casefold(), Tag(tag)))
    return TagLexicon(entries=entries, suffix_rules=suffix_rules, default_tag=default_tag)


def make_document(
    doc_id: str,
    user_id: str,
    text: str,
    label: str,
    lexicon: TagLexicon | None = None,
) -> Document:
    """Tokenize, split, and tag a raw text into a Document."""
    lex = lexicon if lexicon is not None else default_lexicon()
    tokens = tuple(tokenize(text))
    sentences = tuple(split_sentences(list(tokens)))
    tags = tuple(pos_tag(list(tokens), lex))
    return Document(
        id=doc_id, user_id=user_id, text=text, label=label,
        tokens=tokens, sentences=sentences, tags=tags,
    )


_DEFAULT_LEXICON: TagLexicon | None = None


def default_lexicon() -> TagLexicon:
    global _DEFAULT_LEXICON
    if _DEFAULT_LEXICON is None:
        _DEFAULT_LEXICON = load_tag_lexicon()
    return _DEFAULT_LEXICON


def load_corpus(path: str | Path, lexicon: TagLexicon | None = None) -> list[Document]:
    """Load a JSONL corpus: one {id, user, text, label} object per line.

    Blank lines are rejected as malformed. Duplicate ids and labels outside
    {"cover", "stego"} raise CorpusError naming the offender.
    """
    lex = lexicon if lexicon is not None else default_lexicon()
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: malformed JSON on line {lineno}: {exc}") from exc
            try:
                doc_id = obj["id"]
                user = obj["user"]
                text = obj["text"]
                label = obj["label"]
            except (KeyError, TypeError) as exc:
                raise CorpusError(f"{path}: missing field on line {lineno}: {exc}") from exc
            if label not in ("cover", "stego"):
                raise CorpusError(f"{path}: unknown label {label!r} on line {lineno}")
            if not doc_id:
                raise CorpusError(f"{path}: empty id on line {lineno}")
            if doc_id in seen:
                raise CorpusError(f"{path}: duplicate id {doc_id!r} on line {lineno}")
            seen.add(doc_id)
            docs.append(make_document(doc_id, user, text, label, lex))
    return docs
