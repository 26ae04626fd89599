"""Synthetic cover/stego corpora with injected per-user style signatures.

Covers carry the habits a real posting history would show: skewed punctuation,
elongated interjections, a user-specific topic vocabulary, emoticons, and the
occasional hyperlink. Stegos draw from the same base vocabulary but carry none
of those signatures and mix in out-of-vocabulary strings, mimicking generated
text. Used by the bundled toy corpus, the demos, and the ablation tests.
"""

from __future__ import annotations

import json
from pathlib import Path

from .corpus import Document, make_document
from .rng import generator

BASE_VOCAB = [
    "time", "people", "day", "thing", "world", "life", "week", "night",
    "place", "home", "water", "food", "city", "friend", "family", "game",
    "team", "road", "house", "room", "door", "light", "music", "movie",
    "story", "idea", "plan", "work", "phone", "photo", "coffee", "morning",
    "weather", "school", "summer", "winter", "party", "train", "street",
    "garden", "market", "paper", "letter", "moment", "answer", "question",
    "reason", "chance", "change", "point",
]

TOPIC_VOCABS = {
    "U1": ["guitar", "melody", "concert", "album", "lyrics", "chorus",
           "stage", "band", "studio", "record", "tour", "piano"],
    "U2": ["policy", "senate", "voters", "economy", "reform", "campaign",
           "debate", "ballot", "congress", "budget", "tax", "election"],
    "U3": ["workout", "protein", "sprint", "marathon", "coach", "fitness",
           "stretch", "muscle", "training", "race", "stamina", "gym"],
    "U4": ["recipe", "garlic", "oven", "butter", "flour", "spice",
           "salad", "roast", "kitchen", "dough", "sauce", "pepper"],
}

INTERJECTIONS = ["soooo", "loool", "yaaay", "wooow", "hmmmm", "noooo",
                 "yesss", "omggg", "hahaa", "okkkk"]

SENTIMENT_WORDS = ["good", "great", "amazing", "happy", "love", "awesome",
                   "bad", "sad", "terrible", "boring"]

EMOTICONS = [":)", ":D", ";)", ":(", "<3"]

_OOV_CHARS = "bcdfghjklmnpqrstvwxz"


def _oov_word(rng) -> str:
    length = int(rng.integers(5, 9))
    return "".join(_OOV_CHARS[int(i)] for i in rng.integers(0, len(_OOV_CHARS), length))


def make_cover_text(rng, topic_vocab: list[str]) -> str:
    words: list[str] = []
    n_sentences = int(rng.integers(1, 4))
    for _ in range(n_sentences):
        length = int(rng.integers(4, 10))
        for i in range(length):
            roll = rng.random()
            if roll < 0.30:
                words.append(topic_vocab[int(rng.integers(0, len(topic_vocab)))])
            elif roll < 0.42:
                words.append(SENTIMENT_WORDS[int(rng.integers(0, len(SENTIMENT_WORDS)))])
            else:
                words.append(BASE_VOCAB[int(rng.integers(0, len(BASE_VOCAB)))])
            if rng.random() < 0.18 and i < length - 1:
                words[-1] += ","
        if rng.random() < 0.35:
            words.append(INTERJECTIONS[int(rng.integers(0, len(INTERJECTIONS)))])
        # covers end with exclamation far more often than stegos
        words[-1] += "!" if rng.random() < 0.65 else "."
    if rng.random() < 0.25:
        words.append(EMOTICONS[int(rng.integers(0, len(EMOTICONS)))])
    if rng.random() < 0.15:
        words.append(f"https://t.example/{_oov_word(rng)}")
    return " ".join(words)


def make_stego_text(rng) -> str:
    words: list[str] = []
    n_sentences = int(rng.integers(1, 4))
    for _ in range(n_sentences):
        length = int(rng.integers(4, 10))
        for _ in range(length):
            if rng.random() < 0.25:
                words.append(_oov_word(rng))
            else:
                words.append(BASE_VOCAB[int(rng.integers(0, len(BASE_VOCAB)))])
        words[-1] += "."
    return " ".join(words)


def make_user_corpus(
    user_id: str,
    n_covers: int,
    n_stegos: int,
    seed: int = 0,
    topic_vocab: list[str] | None = None,
) -> tuple[list[Document], list[Document]]:
    """Covers with this user's style signature and signature-free stegos."""
    if topic_vocab is None:
        topic_vocab = TOPIC_VOCABS.get(user_id, TOPIC_VOCABS["U1"])
    rng = generator(seed, "synth", user_id)
    covers = [
        make_document(f"{user_id}-c{i:05d}", user_id, make_cover_text(rng, topic_vocab), "cover")
        for i in range(n_covers)
    ]
    stegos = [
        make_document(f"{user_id}-s{i:05d}", user_id, make_stego_text(rng), "stego")
        for i in range(n_stegos)
    ]
    return covers, stegos


def write_corpus(docs: list[Document], path: str | Path) -> None:
    """Write documents in the JSONL corpus format."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({
                "id": doc.id, "user": doc.user_id,
                "text": doc.text, "label": doc.label,
            }, sort_keys=True) + "\n")
