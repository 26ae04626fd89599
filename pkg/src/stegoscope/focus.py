"""Focus features: topic distributions from a collapsed-Gibbs LDA plus
hyperlink and out-of-vocabulary signals.

The sampler is single-threaded and sequential on purpose: given a seed, the
fitted counts are bit-identical across runs. Punctuation, URL, and number
tokens never enter the topic vocabulary.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import Document, TokenKind
from .rng import generator

DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 500
MIN_TOKEN_LEN = 2
MIN_WORD_COUNT = 2

_DATA = resources.files("stegoscope") / "data"
_STOPWORDS: frozenset[str] | None = None


def stopwords() -> frozenset[str]:
    global _STOPWORDS
    if _STOPWORDS is None:
        text = (_DATA / "stopwords.txt").read_text(encoding="utf-8")
        _STOPWORDS = frozenset(
            line.strip() for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        )
    return _STOPWORDS


def default_alpha(k: int) -> float:
    """Standard symmetric document-topic prior, 50/k."""
    return 50.0 / k


@dataclass
class LdaModel:
    k: int
    alpha: float
    beta: float
    vocab: dict[str, int]
    topic_word_counts: np.ndarray  # (k, V) int64
    topic_totals: np.ndarray       # (k,) int64
    iterations: int
    seed: int

    def check(self) -> None:
        if not np.array_equal(self.topic_word_counts.sum(axis=1), self.topic_totals):
            raise ValueError("topic totals inconsistent with count matrix")
        indices = sorted(self.vocab.values())
        if indices != list(range(len(self.vocab))):
            raise ValueError("vocab indices are not dense in [0, V)")


def doc_topic_words(doc: Document, vocab: dict[str, int] | None = None) -> list[str]:
    """Lowercased word tokens eligible for topic modeling.

    Stop words and very short tokens are dropped; if a vocab is given, words
    outside it are dropped too.
    """
    stops = stopwords()
    words = [
        t.lowercase for t in doc.tokens
        if t.kind == TokenKind.WORD and len(t.lowercase) >= MIN_TOKEN_LEN
        and t.lowercase not in stops
    ]
    if vocab is not None:
        words = [w for w in words if w in vocab]
    return words


def build_vocab(docs: list[Document], min_count: int = MIN_WORD_COUNT) -> dict[str, int]:
    """Topic vocabulary: eligible words occurring at least min_count times."""
    freq: dict[str, int] = {}
    for doc in docs:
        for word in doc_topic_words(doc):
            freq[word] = freq.get(word, 0) + 1
    kept = sorted(w for w, c in freq.items() if c >= min_count)
    return {w: i for i, w in enumerate(kept)}


def fit_lda(
    docs: list[Document],
    k: int,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    min_count: int = MIN_WORD_COUNT,
) -> LdaModel:
    """Fit LDA by collapsed Gibbs sampling; deterministic given the seed."""
    if k < 1:
        raise ValueError("topic count must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if alpha is None:
        alpha = default_alpha(k)
    vocab = build_vocab(docs, min_count=min_count)
    if not vocab:
        raise ValueError("effective topic vocabulary is empty after filtering")

    doc_words = [
        [vocab[w] for w in doc_topic_words(doc, vocab)] for doc in docs
    ]
    rng = generator(seed, "lda-fit")

    # Plain Python lists in the sweep: per-token numpy calls would dominate
    # the runtime at these corpus sizes.
    v = len(vocab)
    n_kw = [[0] * v for _ in range(k)]
    n_k = [0] * k
    n_dk = [[0] * k for _ in doc_words]
    assignments: list[list[int]] = []
    for d, words in enumerate(doc_words):
        z = [int(t) for t in rng.integers(0, k, size=len(words))]
        assignments.append(z)
        for w, t in zip(words, z):
            n_kw[t][w] += 1
            n_k[t] += 1
            n_dk[d][t] += 1

    vbeta = v * beta
    topics = range(k)
    for _ in range(iterations):
        for d, words in enumerate(doc_words):
            if not words:
                continue
            z = assignments[d]
            dk = n_dk[d]
            uniforms = rng.random(len(words))
            for i, w in enumerate(words):
                t = z[i]
                n_kw[t][w] -= 1
                n_k[t] -= 1
                dk[t] -= 1
                total = 0.0
                weights = []
                for tt in topics:
                    p = (n_kw[tt][w] + beta) / (n_k[tt] + vbeta) * (dk[tt] + alpha)
                    total += p
                    weights.append(total)
                u = uniforms[i] * total
                t = k - 1
                for tt, acc in enumerate(weights):
                    if u < acc:
                        t = tt
                        break
                z[i] = t
                n_kw[t][w] += 1
                n_k[t] += 1
                dk[t] += 1

    counts = np.array(n_kw, dtype=np.int64)
    model = LdaModel(
        k=k, alpha=alpha, beta=beta, vocab=vocab,
        topic_word_counts=counts, topic_totals=counts.sum(axis=1),
        iterations=iterations, seed=seed,
    )
    model.check()
    return model


def infer_topics(
    model: LdaModel, doc: Document, iterations: int = 50, seed: int = 0
) -> np.ndarray:
    """Held-out topic distribution with the model's counts frozen.

    Returns the smoothed simplex (n_t + alpha) / (N + k*alpha); a document
    with no in-vocabulary words gets the uniform simplex.
    """
    words = [model.vocab[w] for w in doc_topic_words(doc, model.vocab)]
    k = model.k
    if not words:
        return np.full(k, 1.0 / k)
    if k == 1:
        return np.ones(1)
    rng = generator(seed, "lda-infer", doc.id)
    vbeta = len(model.vocab) * model.beta
    # Per-topic word weights are frozen during held-out inference.
    phi = (
        (model.topic_word_counts + model.beta)
        / (model.topic_totals[:, None] + vbeta)
    ).tolist()
    alpha = model.alpha
    topics = range(k)

    dk = [0] * k
    z = [int(t) for t in rng.integers(0, k, size=len(words))]
    for t in z:
        dk[t] += 1
    for _ in range(iterations):
        uniforms = rng.random(len(words))
        for i, w in enumerate(words):
            t = z[i]
            dk[t] -= 1
            total = 0.0
            weights = []
            for tt in topics:
                p = phi[tt][w] * (dk[tt] + alpha)
                total += p
                weights.append(total)
            u = uniforms[i] * total
            t = k - 1
            for tt, acc in enumerate(weights):
                if u < acc:
                    t = tt
                    break
            z[i] = t
            dk[t] += 1
    return (np.array(dk) + alpha) / (len(words) + k * alpha)


@dataclass(frozen=True)
class FocusFeatures:
    topic_dist: tuple[float, ...]
    link_count: int
    link_ratio: float
    oov_ratio: float

    def as_list(self) -> list[float]:
        return [*self.topic_dist, float(self.link_count), self.link_ratio, self.oov_ratio]


def feature_names(k: int) -> list[str]:
    return [f"topic_{i}" for i in range(k)] + ["link_count", "link_ratio", "oov_ratio"]


def hyperlink_features(doc: Document, train_vocab: frozenset[str] | set[str]) -> tuple[int, float, float]:
    """(link count, link ratio, OOV ratio over word tokens only)."""
    total = len(doc.tokens)
    if total == 0:
        return 0, 0.0, 0.0
    link_count = sum(1 for t in doc.tokens if t.kind == TokenKind.URL)
    words = [t.lowercase for t in doc.tokens if t.kind == TokenKind.WORD]
    oov = sum(1 for w in words if w not in train_vocab)
    oov_ratio = oov / len(words) if words else 0.0
    return link_count, link_count / total, oov_ratio


def build_word_vocab(docs: list[Document]) -> frozenset[str]:
    """Every lowercased word token in the given documents (for OOV checks)."""
    vocab: set[str] = set()
    for doc in docs:
        for t in doc.tokens:
            if t.kind == TokenKind.WORD:
                vocab.add(t.lowercase)
    return frozenset(vocab)


def extract_focus(
    doc: Document,
    model: LdaModel,
    train_vocab: frozenset[str] | set[str],
    infer_iterations: int = 50,
    seed: int = 0,
) -> FocusFeatures:
    dist = infer_topics(model, doc, iterations=infer_iterations, seed=seed)
    link_count, link_ratio, oov_ratio = hyperlink_features(doc, train_vocab)
    return FocusFeatures(
        topic_dist=tuple(float(p) for p in dist),
        link_count=link_count, link_ratio=link_ratio, oov_ratio=oov_ratio,
    )


MAGIC = b"LDA1"


def save_lda(model: LdaModel, path: str | Path) -> None:
    """Write the model in the little-endian binary format (magic "LDA1")."""
    words = sorted(model.vocab, key=model.vocab.get)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", model.k, len(words)))
        fh.write(struct.pack("<dd", model.alpha, model.beta))
        fh.write(struct.pack("<Iq", model.iterations, model.seed))
        for word in words:
            raw = word.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
        fh.write(model.topic_word_counts.astype("<i8").tobytes())


def load_lda(path: str | Path) -> LdaModel:
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise ValueError(f"{path}: not an LDA model file (bad magic)")
        k, v = struct.unpack("<II", fh.read(8))
        alpha, beta = struct.unpack("<dd", fh.read(16))
        iterations, seed = struct.unpack("<Iq", fh.read(12))
        vocab: dict[str, int] = {}
        for i in range(v):
            (n,) = struct.unpack("<H", fh.read(2))
            vocab[fh.read(n).decode("utf-8")] = i
        raw = fh.read(8 * k * v)
        if len(raw) != 8 * k * v:
            raise ValueError(f"{path}: truncated count matrix")
        counts = np.frombuffer(raw, dtype="<i8").reshape(k, v).astype(np.int64)
    model = LdaModel(
        k=k, alpha=alpha, beta=beta, vocab=vocab,
        topic_word_counts=counts, topic_totals=counts.sum(axis=1),
        iterations=iterations, seed=seed,
    )
    model.check()
    return model
