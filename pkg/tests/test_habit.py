import math

import pytest
from hypothesis import given, strategies as st

from stegoscope.corpus import Document, Tag, Token, TokenKind, split_sentences
from stegoscope.habit import (
    editing_style,
    extract_habit,
    info_density,
    text_complexity,
    text_richness,
)


def doc_from_tags(tags, kinds=None):
    """Document with placeholder surfaces and given tags."""
    tokens = []
    for i, tag in enumerate(tags):
        kind = kinds[i] if kinds else (
            TokenKind.PUNCTUATION if tag == Tag.PUNCT else TokenKind.WORD
        )
        surface = "." if kind == TokenKind.PUNCTUATION else f"w{i}"
        tokens.append(Token(surface, kind))
    tokens = tuple(tokens)
    return Document(
        id="t", user_id="U", text="", label="cover",
        tokens=tokens, sentences=tuple(split_sentences(list(tokens))),
        tags=tuple(tags),
    )


def doc_from_surfaces(surfaces):
    tokens = tuple(
        Token(s, TokenKind.PUNCTUATION if not any(c.isalnum() for c in s) else TokenKind.WORD)
        for s in surfaces
    )
    tags = tuple(
        Tag.PUNCT if t.kind == TokenKind.PUNCTUATION else Tag.NOUN for t in tokens
    )
    return Document(
        id="t", user_id="U", text=" ".join(surfaces), label="cover",
        tokens=tokens, sentences=tuple(split_sentences(list(tokens))), tags=tags,
    )


EMPTY = doc_from_tags([])


class TestInfoDensity:
    def test_empty(self):
        assert info_density(EMPTY) == (0, 0, 0)

    def test_mixed(self):
        doc = doc_from_tags([Tag.DET, Tag.NOUN, Tag.VERB])
        assert info_density(doc) == pytest.approx((1 / 3, 0, 1 / 3))

    def test_all_nouns(self):
        assert info_density(doc_from_tags([Tag.NOUN, Tag.NOUN])) == (1.0, 0, 0)


class TestEditingStyle:
    def test_empty(self):
        assert editing_style(EMPTY) == (0, 0, 0)

    def test_mixed(self):
        doc = doc_from_tags([Tag.ADP, Tag.DET, Tag.NOUN, Tag.NOUN])
        assert editing_style(doc) == pytest.approx((0.25, 0.25, 0))

    def test_conj_only(self):
        assert editing_style(doc_from_tags([Tag.CONJ])) == (0, 0, 1.0)


class TestTextRichness:
    def test_empty(self):
        assert text_richness(EMPTY) == (0, 0)

    def test_mixed(self):
        doc = doc_from_tags([Tag.ADJ, Tag.ADJ, Tag.NOUN, Tag.ADV])
        assert text_richness(doc) == pytest.approx((0.5, 0.25))

    def test_no_match(self):
        assert text_richness(doc_from_tags([Tag.VERB])) == (0, 0)


class TestTextComplexity:
    def test_worked_example(self):
        doc = doc_from_surfaces(["Hi", ".", "Go", "."])
        asl, awl, punct, frag = text_complexity(doc)
        assert asl == pytest.approx(1.0)
        assert awl == pytest.approx(2.0)
        assert punct == pytest.approx(0.5)
        assert frag == pytest.approx(0.5)

    def test_no_punct_cap(self):
        assert text_complexity(doc_from_surfaces(["word"]))[3] == 1.0

    def test_one_punct(self):
        assert text_complexity(doc_from_surfaces(["a", "!"]))[3] == 1.0

    def test_frag_monotone_nonincreasing(self):
        values = [
            text_complexity(doc_from_surfaces(["w"] + ["!"] * n))[3]
            for n in range(6)
        ]
        assert all(a >= b for a, b in zip(values, values[1:]))


class TestExtractHabit:
    def test_empty(self):
        feats = extract_habit(EMPTY)
        assert feats.f_frag == 1.0
        assert all(v == 0.0 for v in feats.as_list()[:-1])

    def test_the_cat_sat(self):
        doc = doc_from_tags(
            [Tag.DET, Tag.NOUN, Tag.VERB, Tag.PUNCT],
            kinds=[TokenKind.WORD] * 3 + [TokenKind.PUNCTUATION],
        )
        feats = extract_habit(doc)
        assert feats.noun_ratio == 0.25
        assert feats.avg_sentence_len == 3.0
        assert feats.f_frag == 1.0  # placeholder punct "." is in the frag set

    def test_deterministic(self):
        doc = doc_from_surfaces(["so", "good", "!"])
        assert extract_habit(doc) == extract_habit(doc)

    def test_permuting_tokens_keeps_ratios(self):
        tags = [Tag.NOUN, Tag.VERB, Tag.ADJ, Tag.ADV, Tag.DET, Tag.NOUN]
        a = extract_habit(doc_from_tags(tags))
        b = extract_habit(doc_from_tags(list(reversed(tags))))
        for field in ("noun_ratio", "verb_ratio", "adj_ratio", "adv_ratio",
                      "det_ratio", "punct_ratio"):
            assert getattr(a, field) == getattr(b, field)

    @given(st.lists(st.sampled_from(["a", "hi", "!", ".", "soooo", ",", "?"]), max_size=40))
    def test_outputs_always_finite(self, surfaces):
        feats = extract_habit(doc_from_surfaces(surfaces))
        assert all(math.isfinite(v) for v in feats.as_list())
        for name, value in zip(
            ("noun_ratio", "punct_ratio"), (feats.noun_ratio, feats.punct_ratio)
        ):
            assert 0.0 <= value <= 1.0, name
