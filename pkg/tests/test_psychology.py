import pytest
from hypothesis import given, strategies as st

from stegoscope.corpus import make_document
from stegoscope.psychology import (
    SentimentLexicon,
    extract_psychology,
    score_emotion,
    score_exaggeration,
    score_subjectivity,
)


def doc(text):
    return make_document("d", "U", text, "cover")


class TestEmotion:
    def test_no_sentiment_words(self, tiny_sentiment_lexicon):
        assert score_emotion(doc("nothing here"), tiny_sentiment_lexicon) == 0.0

    def test_single_word(self, tiny_sentiment_lexicon):
        assert score_emotion(doc("good"), tiny_sentiment_lexicon) == pytest.approx(0.7)

    def test_negated_with_exclaim(self, tiny_sentiment_lexicon):
        # (-0.5)^1 * 0.7 * (1 + 0.292) = -0.4522
        value = score_emotion(doc("not good !"), tiny_sentiment_lexicon)
        assert value == pytest.approx(-0.4522, abs=1e-9)

    def test_intensifier_clamped(self):
        lex = SentimentLexicon(entries={"great": (0.9, 0.8)}, intensifiers={"very": 1.5})
        # 0.9 * 1.5 = 1.35, clamped to 1 before anything else
        assert score_emotion(doc("very great"), lex) == pytest.approx(1.0)

    def test_exclaim_cap(self, tiny_sentiment_lexicon):
        capped = score_emotion(doc("good ! ! ! !"), tiny_sentiment_lexicon)
        at_cap = score_emotion(doc("good ! ! !"), tiny_sentiment_lexicon)
        assert capped == pytest.approx(at_cap)

    def test_emoticon_divisor(self, tiny_sentiment_lexicon):
        # S_emoticon = 2.0 doubles the mean term, then the clamp applies.
        boosted = score_emotion(doc("good :)"), tiny_sentiment_lexicon)
        assert boosted == pytest.approx(min(1.0, 0.7 * 2.0))

    def test_window_limits_negation(self, tiny_sentiment_lexicon):
        far = score_emotion(doc("not a b c d good"), tiny_sentiment_lexicon)
        assert far == pytest.approx(0.7)  # negation outside the 3-token window

    def test_mean_polarity_against_brute_force(self):
        # With no negations/intensifiers/exclaims, emotion is the mean polarity.
        words = {"alpha": 0.3, "beta": -0.2, "gamma": 0.9, "delta": -0.6}
        lex = SentimentLexicon(entries={w: (p, 0.5) for w, p in words.items()})
        import itertools
        for combo in itertools.combinations_with_replacement(sorted(words), 3):
            text = " ".join(combo)
            expected = sum(words[w] for w in combo) / len(combo)
            assert score_emotion(doc(text), lex) == pytest.approx(expected)

    def test_case_invariance(self, tiny_sentiment_lexicon):
        assert score_emotion(doc("GOOD"), tiny_sentiment_lexicon) == pytest.approx(
            score_emotion(doc("good"), tiny_sentiment_lexicon)
        )

    @given(st.lists(st.sampled_from(["good", "not", "very", "xyz", "!"]), max_size=12))
    def test_bounded(self, words):
        lex = SentimentLexicon(
            entries={"good": (0.7, 0.6)},
            intensifiers={"very": 1.3},
            negations=frozenset({"not"}),
        )
        value = score_emotion(doc(" ".join(words)), lex)
        assert -1.0 <= value <= 1.0


class TestSubjectivity:
    def test_no_sentiment_words(self, tiny_sentiment_lexicon):
        assert score_subjectivity(doc("nothing"), tiny_sentiment_lexicon) == 0.0

    def test_single_word(self, tiny_sentiment_lexicon):
        assert score_subjectivity(doc("good"), tiny_sentiment_lexicon) == pytest.approx(0.6)

    def test_intensified(self, tiny_sentiment_lexicon):
        value = score_subjectivity(doc("very good"), tiny_sentiment_lexicon)
        assert value == pytest.approx(min(0.6 * 1.3, 1.0))

    def test_literal_mode_saturates(self, tiny_sentiment_lexicon):
        value = score_subjectivity(
            doc("good good good"), tiny_sentiment_lexicon, mean_normalize=False
        )
        assert value == 1.0

    @given(st.lists(st.sampled_from(["good", "very", "zzz"]), max_size=15))
    def test_always_in_unit_interval(self, words):
        lex = SentimentLexicon(entries={"good": (0.7, 0.6)}, intensifiers={"very": 1.3})
        assert 0.0 <= score_subjectivity(doc(" ".join(words)), lex) <= 1.0


class TestExaggeration:
    def test_short_word_boundary(self):
        assert score_exaggeration(doc("good")) == 0.0  # 4 letters is not > 4

    def test_single_elongated(self):
        assert score_exaggeration(doc("soooo")) == pytest.approx(1.0)

    def test_repeated_type_normalization(self):
        # one qualifying type with count 2: (1/2) / 2 tokens = 0.25
        assert score_exaggeration(doc("coool coool")) == pytest.approx(0.25)

    def test_doubling_gives_quarter(self):
        base = doc("coool fine day")
        doubled = doc("coool fine day coool fine day")
        assert score_exaggeration(doubled) == pytest.approx(score_exaggeration(base) / 4)

    def test_case_invariance(self):
        assert score_exaggeration(doc("SOOOO")) == score_exaggeration(doc("soooo"))

    def test_not_quite_half(self):
        # "abcdea": 'a' appears 2 of 6 < 3, no qualification
        assert score_exaggeration(doc("abcdea")) == 0.0


class TestExtractPsychology:
    def test_empty(self, tiny_sentiment_lexicon):
        feats = extract_psychology(doc(""), tiny_sentiment_lexicon)
        assert feats.as_list() == [0.0, 0.0, 0.0]

    def test_composition(self, tiny_sentiment_lexicon):
        feats = extract_psychology(doc("good"), tiny_sentiment_lexicon)
        assert feats.emotion == pytest.approx(0.7)
        assert feats.subjectivity == pytest.approx(0.6)
        assert feats.exaggeration == 0.0

    def test_deterministic(self, tiny_sentiment_lexicon):
        a = extract_psychology(doc("very good !"), tiny_sentiment_lexicon)
        b = extract_psychology(doc("very good !"), tiny_sentiment_lexicon)
        assert a == b
