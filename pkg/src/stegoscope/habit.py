"""Writing-habit features: information density, editing style, text richness,
and text complexity including the punctuation fragmentation score.

All features are bag statistics over a tagged document; permuting tokens
within a sentence never changes the ratios.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .corpus import Document, Tag, TokenKind

# Punctuation set used by the fragmentation score (comma, period, semicolon,
# question mark, exclamation mark, ellipsis).
FRAG_PUNC = frozenset({",", ".", ";", "?", "!", "…"})

# Value of the fragmentation score on punctuation-free text: 1/count is
# undefined at count 0, so it is capped at the supremum of its range.
FRAG_CAP = 1.0


@dataclass(frozen=True)
class HabitFeatures:
    noun_ratio: float
    pron_ratio: float
    verb_ratio: float
    adp_ratio: float
    det_ratio: float
    conj_ratio: float
    adj_ratio: float
    adv_ratio: float
    avg_sentence_len: float
    avg_word_len: float
    punct_ratio: float
    f_frag: float

    def as_list(self) -> list[float]:
        return [getattr(self, f.name) for f in fields(self)]


FEATURE_NAMES = [f.name for f in fields(HabitFeatures)]


def _tag_ratios(doc: Document, tags: tuple[Tag, ...]) -> tuple[float, ...]:
    total = len(doc.tokens)
    if total == 0:
        return tuple(0.0 for _ in tags)
    counts = {t: 0 for t in tags}
    for tag in doc.tags:
        if tag in counts:
            counts[tag] += 1
    return tuple(counts[t] / total for t in tags)


def info_density(doc: Document) -> tuple[float, float, float]:
    """Share of nouns, pronouns, and verbs among all tokens."""
    return _tag_ratios(doc, (Tag.NOUN, Tag.PRON, Tag.VERB))


def editing_style(doc: Document) -> tuple[float, float, float]:
    """Share of function words: adpositions, determiners, conjunctions."""
    return _tag_ratios(doc, (Tag.ADP, Tag.DET, Tag.CONJ))


def text_richness(doc: Document) -> tuple[float, float]:
    """Share of adjectives and adverbs."""
    return _tag_ratios(doc, (Tag.ADJ, Tag.ADV))


def text_complexity(doc: Document) -> tuple[float, float, float, float]:
    """(avg sentence length, avg word length, punctuation ratio, fragmentation).

    Sentence length counts word tokens only, keeping it orthogonal to the
    punctuation ratio. Fragmentation is 1/count over the FRAG_PUNC token set,
    capped at FRAG_CAP when the document has no such punctuation.
    """
    total = len(doc.tokens)
    word_tokens = [t for t in doc.tokens if t.kind == TokenKind.WORD]
    n_sent = len(doc.sentences)
    avg_sentence_len = len(word_tokens) / n_sent if n_sent else 0.0
    avg_word_len = (
        sum(len(t.surface) for t in word_tokens) / len(word_tokens) if word_tokens else 0.0
    )
    n_punct = sum(1 for t in doc.tokens if t.kind == TokenKind.PUNCTUATION)
    punct_ratio = n_punct / total if total else 0.0
    frag_count = sum(1 for t in doc.tokens if t.surface in FRAG_PUNC)
    f_frag = 1.0 / frag_count if frag_count >= 1 else FRAG_CAP
    return avg_sentence_len, avg_word_len, punct_ratio, f_frag


def extract_habit(doc: Document) -> HabitFeatures:
    """All 12 habit features of a tagged document."""
    noun, pron, verb = info_density(doc)
    adp, det, conj = editing_style(doc)
    adj, adv = text_richness(doc)
    asl, awl, punct, frag = text_complexity(doc)
    return HabitFeatures(
        noun_ratio=noun, pron_ratio=pron, verb_ratio=verb,
        adp_ratio=adp, det_ratio=det, conj_ratio=conj,
        adj_ratio=adj, adv_ratio=adv,
        avg_sentence_len=asl, avg_word_len=awl,
        punct_ratio=punct, f_frag=frag,
    )
