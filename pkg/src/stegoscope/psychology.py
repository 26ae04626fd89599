"""Psychology features: lexicon-based emotion and subjectivity scoring with
negation/intensifier handling, and an elongation-based exaggeration score.

Emotion of a document is the sum over sentiment-word occurrences of

    (-0.5)^n * clamp(S_i * S_adverb, -1, 1) * S_punc

divided by K / S_emoticon, where n counts negations in the window before the
word, S_adverb is the product of intensifier multipliers in that window,
S_punc = 1 + boost * min(#"!" in the sentence, cap), K is the number of
sentiment-word occurrences, and S_emoticon is the mean emoticon score in the
document (1.0 when it has none). Subjectivity applies the same window logic
to per-word subjectivity values and is clamped to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .corpus import Document, TokenKind

# Tokens this many positions before a sentiment word count as its
# negation/intensifier context.
DEFAULT_WINDOW = 3

DEFAULT_EXCLAIM_BOOST = 0.292
DEFAULT_EXCLAIM_CAP = 3

_DATA = resources.files("stegoscope") / "data"


@dataclass
class SentimentLexicon:
    entries: dict[str, tuple[float, float]]  # word -> (polarity, subjectivity)
    intensifiers: dict[str, float] = field(default_factory=dict)
    negations: frozenset[str] = frozenset()
    emoticons: dict[str, float] = field(default_factory=dict)
    exclaim_boost: float = DEFAULT_EXCLAIM_BOOST
    exclaim_cap: int = DEFAULT_EXCLAIM_CAP
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        for word, (pol, subj) in self.entries.items():
            if not -1.0 <= pol <= 1.0:
                raise ValueError(f"polarity of {word!r} outside [-1, 1]")
            if not 0.0 <= subj <= 1.0:
                raise ValueError(f"subjectivity of {word!r} outside [0, 1]")
        if any(m <= 0 for m in self.intensifiers.values()):
            raise ValueError("intensifier multipliers must be > 0")
        if any(s <= 0 for s in self.emoticons.values()):
            raise ValueError("emoticon scores must be > 0")


@dataclass(frozen=True)
class PsychologyFeatures:
    emotion: float      # clamped to [-1, 1]
    subjectivity: float  # in [0, 1]
    exaggeration: float  # >= 0

    def as_list(self) -> list[float]:
        return [self.emotion, self.subjectivity, self.exaggeration]


FEATURE_NAMES = ["emotion", "subjectivity", "exaggeration"]


def _read_tsv(text: str) -> list[list[str]]:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            rows.append(line.split("\t"))
    return rows


def load_sentiment_lexicon(
    sentiment_path: str | Path | None = None,
    intensifier_path: str | Path | None = None,
    negation_path: str | Path | None = None,
    emoticon_path: str | Path | None = None,
    **constants,
) -> SentimentLexicon:
    """Load lexicon TSVs; None falls back to the bundled defaults."""

    def read(path, default_name):
        if path is None:
            return (_DATA / default_name).read_text(encoding="utf-8")
        return Path(path).read_text(encoding="utf-8")

    entries = {
        row[0].casefold(): (float(row[1]), float(row[2]))
        for row in _read_tsv(read(sentiment_path, "sentiment.tsv"))
    }
    intensifiers = {
        row[0].casefold(): float(row[1])
        for row in _read_tsv(read(intensifier_path, "intensifiers.tsv"))
    }
    negations = frozenset(
        row[0].casefold() for row in _read_tsv(read(negation_path, "negations.txt"))
    )
    emoticons = {
        row[0]: float(row[1]) for row in _read_tsv(read(emoticon_path, "emoticons.tsv"))
    }
    return SentimentLexicon(
        entries=entries, intensifiers=intensifiers, negations=negations,
        emoticons=emoticons, **constants,
    )


_DEFAULT_LEX: SentimentLexicon | None = None


def default_sentiment_lexicon() -> SentimentLexicon:
    global _DEFAULT_LEX
    if _DEFAULT_LEX is None:
        _DEFAULT_LEX = load_sentiment_lexicon()
    return _DEFAULT_LEX


def _sentence_of(doc: Document, index: int) -> tuple[int, int]:
    for start, end in doc.sentences:
        if start <= index < end:
            return start, end
    return 0, len(doc.tokens)


def _window_factors(doc: Document, index: int, lex: SentimentLexicon) -> tuple[int, float]:
    """(negation count, intensifier product) over the window before index."""
    n = 0
    product = 1.0
    for j in range(max(0, index - lex.window), index):
        word = doc.tokens[j].lowercase
        if word in lex.negations:
            n += 1
        mult = lex.intensifiers.get(word)
        if mult is not None:
            product *= mult
    return n, product


def _emoticon_mean(doc: Document, lex: SentimentLexicon) -> float:
    scores = [
        lex.emoticons[t.surface] for t in doc.tokens
        if t.kind == TokenKind.EMOTICON and t.surface in lex.emoticons
    ]
    return sum(scores) / len(scores) if scores else 1.0


def score_emotion(doc: Document, lex: SentimentLexicon | None = None) -> float:
    lex = lex if lex is not None else default_sentiment_lexicon()
    total = 0.0
    k = 0
    for i, tok in enumerate(doc.tokens):
        scores = lex.entries.get(tok.lowercase)
        if scores is None:
            continue
        k += 1
        polarity = scores[0]
        n, adverb = _window_factors(doc, i, lex)
        adjusted = max(-1.0, min(polarity * adverb, 1.0))
        start, end = _sentence_of(doc, i)
        exclaims = sum(1 for t in doc.tokens[start:end] if t.surface == "!")
        s_punc = 1.0 + lex.exclaim_boost * min(exclaims, lex.exclaim_cap)
        total += (-0.5) ** n * adjusted * s_punc
    if k == 0:
        return 0.0
    emotion = total / (k / _emoticon_mean(doc, lex))
    return max(-1.0, min(emotion, 1.0))


def score_subjectivity(
    doc: Document, lex: SentimentLexicon | None = None, mean_normalize: bool = True
) -> float:
    """Subjectivity in [0, 1]; divided by the sentiment-word count unless
    mean_normalize is False (the literal running-sum form)."""
    lex = lex if lex is not None else default_sentiment_lexicon()
    total = 0.0
    k = 0
    for i, tok in enumerate(doc.tokens):
        scores = lex.entries.get(tok.lowercase)
        if scores is None:
            continue
        k += 1
        _, adverb = _window_factors(doc, i, lex)
        total += scores[1] * adverb
    if k == 0:
        return 0.0
    if mean_normalize:
        total /= k
    return max(0.0, min(total, 1.0))


def _is_elongated(word: str) -> bool:
    """True for words longer than 4 letters dominated by one repeated char."""
    if len(word) <= 4:
        return False
    best = max(word.count(ch) for ch in set(word))
    return best >= len(word) / 2


def score_exaggeration(doc: Document) -> float:
    """Exaggeration: sum of 1/count over elongated word types, per token."""
    if not doc.tokens:
        return 0.0
    counts: dict[str, int] = {}
    for tok in doc.tokens:
        if tok.kind == TokenKind.WORD:
            counts[tok.lowercase] = counts.get(tok.lowercase, 0) + 1
    total = sum(1.0 / c for word, c in counts.items() if _is_elongated(word))
    return total / len(doc.tokens)


def extract_psychology(doc: Document, lex: SentimentLexicon | None = None) -> PsychologyFeatures:
    lex = lex if lex is not None else default_sentiment_lexicon()
    return PsychologyFeatures(
        emotion=score_emotion(doc, lex),
        subjectivity=score_subjectivity(doc, lex),
        exaggeration=score_exaggeration(doc),
    )
