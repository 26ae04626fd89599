"""Walk through the per-document feature extractors on a few posts.

Shows how raw text becomes tokens, sentences, and POS tags, then the three
user-profile feature groups: writing habits (sentence/word statistics,
punctuation usage), psychology (emotion, subjectivity, exaggeration), and
focus (topic distribution, hyperlink and out-of-vocabulary usage).
"""

from stegoscope import (
    extract_focus,
    extract_habit,
    extract_psychology,
    fit_lda,
    make_document,
)
from stegoscope.focus import build_word_vocab
from stegoscope.habit import FEATURE_NAMES
from stegoscope.psychology import default_sentiment_lexicon

POSTS = [
    ("p1", "Soooo excited for the concert tonight!!! Best band ever :)"),
    ("p2", "New recipe today. The garlic butter sauce was not bad at all."),
    ("p3", "Check the schedule at https://example.org/tour and tell me what you think!"),
]

docs = [make_document(doc_id, "demo-user", text, "cover") for doc_id, text in POSTS]

print("=== tokenization ===")
for doc in docs:
    kinds = [f"{t.surface}/{t.kind.value}" for t in doc.tokens]
    print(f"{doc.id}: {' '.join(kinds)}")
    print(f"     sentences: {doc.sentences}")

print("\n=== habit features ===")
for doc in docs:
    habit = extract_habit(doc)
    row = ", ".join(f"{n}={v:.3f}" for n, v in zip(FEATURE_NAMES, habit.as_list()))
    print(f"{doc.id}: {row}")

print("\n=== psychology features ===")
lexicon = default_sentiment_lexicon()
for doc in docs:
    psych = extract_psychology(doc, lexicon)
    print(f"{doc.id}: emotion={psych.emotion:+.3f} "
          f"subjectivity={psych.subjectivity:.3f} "
          f"exaggeration={psych.exaggeration:.3f}")

print("\n=== focus features ===")
model = fit_lda(docs, k=2, alpha=0.5, iterations=100, seed=0, min_count=1)
vocab = build_word_vocab(docs)
for doc in docs:
    focus = extract_focus(doc, model, vocab, infer_iterations=25, seed=0)
    topics = ", ".join(f"{p:.2f}" for p in focus.topic_dist)
    print(f"{doc.id}: topics=[{topics}] links={focus.link_count} "
          f"link_ratio={focus.link_ratio:.3f} oov_ratio={focus.oov_ratio:.3f}")
