"""Ratio-controlled dataset construction and the repeated experiment driver.

Covers are split 6:2:2 by a seeded shuffle. Test stegos are reserved first
and match the test cover count exactly (1:1 test sets, identical across
training ratios); train/val stegos are then subsampled from the remaining
pool as floor(covers/ratio). Normalization statistics, the topic model, and
the OOV vocabulary are fitted on training-split covers only, so nothing
leaks from validation or test data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import content, focus, fusion, stats
from .corpus import Document, load_corpus
from .content import EmbeddingProvider
from .fusion import Normalization, TrainConfig
from .habit import extract_habit
from .psychology import SentimentLexicon, default_sentiment_lexicon, extract_psychology
from .rng import generator

RATIO_PRESETS = (50, 100, 200, 500)


class DatasetError(ValueError):
    """Raised when a corpus cannot satisfy the requested ratio protocol."""


@dataclass(frozen=True)
class DatasetSpec:
    ratio: int
    train_frac: float = 0.6
    val_frac: float = 0.2
    test_frac: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.ratio < 1:
            raise ValueError("ratio must be >= 1")
        if abs(self.train_frac + self.val_frac + self.test_frac - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")


@dataclass
class Splits:
    train: list[Document]
    val: list[Document]
    test: list[Document]

    def all_ids(self) -> list[str]:
        return [d.id for part in (self.train, self.val, self.test) for d in part]


def build_ratio_dataset(
    covers: list[Document], stegos: list[Document], spec: DatasetSpec
) -> Splits:
    """Split covers 6:2:2 and attach ratio-subsampled stegos per split."""
    rng = generator(spec.seed, "dataset-split")
    cover_order = list(rng.permutation(len(covers)))
    n = len(covers)
    n_train = math.floor(spec.train_frac * n)
    n_val = math.floor(spec.val_frac * n)
    train_covers = [covers[i] for i in cover_order[:n_train]]
    val_covers = [covers[i] for i in cover_order[n_train : n_train + n_val]]
    test_covers = [covers[i] for i in cover_order[n_train + n_val :]]

    n_test_stego = len(test_covers)
    n_train_stego = len(train_covers) // spec.ratio
    n_val_stego = len(val_covers) // spec.ratio
    required = n_test_stego + n_train_stego + n_val_stego
    if n_train_stego < 1:
        raise DatasetError(
            f"ratio {spec.ratio} with {len(train_covers)} training covers "
            "leaves no training stego"
        )
    if len(stegos) < required:
        raise DatasetError(
            f"need {required} stegos ({n_test_stego} test + {n_train_stego} train "
            f"+ {n_val_stego} val), only {len(stegos)} available"
        )
    stego_order = list(rng.permutation(len(stegos)))
    # Test stegos come first so the test set is identical across ratios.
    test_stegos = [stegos[i] for i in stego_order[:n_test_stego]]
    pool = stego_order[n_test_stego:]
    train_stegos = [stegos[i] for i in pool[:n_train_stego]]
    val_stegos = [stegos[i] for i in pool[n_train_stego : n_train_stego + n_val_stego]]
    return Splits(
        train=train_covers + train_stegos,
        val=val_covers + val_stegos,
        test=test_covers + test_stegos,
    )


@dataclass
class LdaConfig:
    topics: int = 2
    alpha: float | None = None  # None: 50/topics
    beta: float = focus.DEFAULT_BETA
    iterations: int = focus.DEFAULT_ITERATIONS
    infer_iterations: int = 50
    min_count: int = focus.MIN_WORD_COUNT


@dataclass
class EmbeddingConfig:
    provider: str = "hashed"  # "hashed" | "store"
    dim: int = content.DEFAULT_DIM
    seed: int = 0
    path: str | None = None  # vector file for the store provider

    def build(self) -> EmbeddingProvider:
        if self.provider == "hashed":
            return EmbeddingProvider.hashed(dim=self.dim, seed=self.seed)
        if self.provider == "store":
            if not self.path:
                raise ValueError("store provider needs a vector file path")
            return EmbeddingProvider.from_store(content.load_vectors(self.path))
        raise ValueError(f"unknown embedding provider {self.provider!r}")


@dataclass
class ExperimentConfig:
    covers_path: str = ""
    stegos_path: str = ""
    users: list[str] | None = None
    dataset: DatasetSpec = field(default_factory=lambda: DatasetSpec(ratio=50))
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    lda: LdaConfig = field(default_factory=LdaConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    repeats: int = 5
    use_user_features: bool = True
    base_seed: int = 0

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")


@dataclass
class FittedExtractors:
    """Everything fitted on training covers that feature extraction needs."""

    lda: focus.LdaModel
    word_vocab: frozenset[str]
    norm: Normalization
    lexicon: SentimentLexicon


def fit_extractors(
    train_covers: list[Document],
    lda_config: LdaConfig,
    seed: int,
    lexicon: SentimentLexicon | None = None,
) -> FittedExtractors:
    lex = lexicon if lexicon is not None else default_sentiment_lexicon()
    model = focus.fit_lda(
        train_covers,
        k=lda_config.topics,
        alpha=lda_config.alpha,
        beta=lda_config.beta,
        iterations=lda_config.iterations,
        seed=seed,
        min_count=lda_config.min_count,
    )
    vocab = focus.build_word_vocab(train_covers)
    rows = np.array([
        fusion.raw_user_vector(
            extract_habit(doc),
            extract_psychology(doc, lex),
            focus.extract_focus(
                doc, model, vocab,
                infer_iterations=lda_config.infer_iterations, seed=seed,
            ),
        )
        for doc in train_covers
    ])
    return FittedExtractors(
        lda=model, word_vocab=vocab, norm=fusion.fit_normalization(rows), lexicon=lex
    )


def user_features(
    doc: Document, fitted: FittedExtractors, lda_config: LdaConfig, seed: int
) -> np.ndarray:
    return fusion.assemble_user_vector(
        extract_habit(doc),
        extract_psychology(doc, fitted.lexicon),
        focus.extract_focus(
            doc, fitted.lda, fitted.word_vocab,
            infer_iterations=lda_config.infer_iterations, seed=seed,
        ),
        fitted.norm,
    )


def featurize(
    docs: list[Document],
    fitted: FittedExtractors | None,
    provider: EmbeddingProvider,
    config: ExperimentConfig,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """(model inputs, labels) for one split."""
    xs = []
    for doc in docs:
        c = content.get_embedding(doc, provider)
        if config.use_user_features:
            assert fitted is not None
            u = user_features(doc, fitted, config.lda, seed)
            xs.append(fusion.fuse(u, c, mode=config.train.fusion_mode))
        else:
            xs.append(c)
    labels = np.array([1 if d.label == "stego" else 0 for d in docs], dtype=np.int64)
    return np.array(xs), labels


def run_single(
    covers: list[Document],
    stegos: list[Document],
    config: ExperimentConfig,
    repeat: int,
    lexicon: SentimentLexicon | None = None,
) -> dict:
    """One seeded pipeline pass: split, fit, train, evaluate on the 1:1 test."""
    seed = config.base_seed + repeat
    spec = DatasetSpec(
        ratio=config.dataset.ratio,
        train_frac=config.dataset.train_frac,
        val_frac=config.dataset.val_frac,
        test_frac=config.dataset.test_frac,
        seed=seed,
    )
    splits = build_ratio_dataset(covers, stegos, spec)
    train_covers = [d for d in splits.train if d.label == "cover"]
    # The content-only ablation arm never reads user features, so skip the
    # (comparatively expensive) topic-model fit entirely.
    fitted = (
        fit_extractors(train_covers, config.lda, seed, lexicon)
        if config.use_user_features
        else None
    )
    provider = config.embedding.build()

    train_x, train_y = featurize(splits.train, fitted, provider, config, seed)
    val_x, val_y = featurize(splits.val, fitted, provider, config, seed)
    test_x, test_y = featurize(splits.test, fitted, provider, config, seed)

    tconf = TrainConfig(
        learning_rate=config.train.learning_rate,
        beta1=config.train.beta1, beta2=config.train.beta2,
        adam_eps=config.train.adam_eps,
        epochs=config.train.epochs, batch_size=config.train.batch_size,
        seed=seed, fusion_mode=config.train.fusion_mode,
        hidden=config.train.hidden, gamma=config.train.gamma,
        alpha_stego=config.train.alpha_stego,
    )
    params = fusion.train(train_x, train_y, val_x, val_y, tconf)
    test_p = fusion.forward_batch(params, test_x)
    confusion = stats.Confusion.from_predictions(
        [bool(p >= 0.5) for p in test_p], [bool(y) for y in test_y]
    )
    acc, f1 = stats.acc_f1(confusion)
    return {
        "repeat": repeat,
        "seed": seed,
        "acc": acc,
        "f1": f1,
        "confusion": {"tp": confusion.tp, "fp": confusion.fp,
                      "tn": confusion.tn, "fn": confusion.fn},
        "n_train": len(splits.train),
        "n_val": len(splits.val),
        "n_test": len(splits.test),
    }


def run_experiment(
    covers: list[Document],
    stegos: list[Document],
    config: ExperimentConfig,
    lexicon: SentimentLexicon | None = None,
) -> dict:
    """Repeat the pipeline config.repeats times and aggregate mean +- std."""
    repeats = []
    for r in range(1, config.repeats + 1):
        try:
            repeats.append(run_single(covers, stegos, config, r, lexicon))
        except (DatasetError, ValueError) as exc:
            raise DatasetError(f"repeat {r}: {exc}") from exc
    accs = [r["acc"] for r in repeats]
    f1s = [r["f1"] for r in repeats]
    mean_acc, std_acc = stats.aggregate(accs)
    mean_f1, std_f1 = stats.aggregate(f1s)
    return {
        "repeats": repeats,
        "mean_acc": mean_acc,
        "std_acc": std_acc,
        "mean_f1": mean_f1,
        "std_f1": std_f1,
        "config": config_dict(config),
    }


def run_fleet(
    covers: list[Document],
    stegos: list[Document],
    config: ExperimentConfig,
    lexicon: SentimentLexicon | None = None,
) -> dict:
    """Run per-user experiments and aggregate across users."""
    by_user_covers: dict[str, list[Document]] = {}
    by_user_stegos: dict[str, list[Document]] = {}
    for doc in covers:
        by_user_covers.setdefault(doc.user_id, []).append(doc)
    for doc in stegos:
        by_user_stegos.setdefault(doc.user_id, []).append(doc)
    users = config.users if config.users else sorted(by_user_covers)
    per_user = {}
    for user in users:
        if user not in by_user_covers:
            raise DatasetError(f"no covers for user {user!r}")
        if user not in by_user_stegos:
            raise DatasetError(f"no stegos for user {user!r}")
        per_user[user] = run_experiment(
            by_user_covers[user], by_user_stegos[user], config, lexicon
        )
    mean_acc, std_acc = stats.aggregate([r["mean_acc"] for r in per_user.values()])
    mean_f1, std_f1 = stats.aggregate([r["mean_f1"] for r in per_user.values()])
    return {
        "users": per_user,
        "mean_acc": mean_acc,
        "std_acc": std_acc,
        "mean_f1": mean_f1,
        "std_f1": std_f1,
        "config": config_dict(config),
    }


def config_dict(config: ExperimentConfig) -> dict:
    return asdict(config)


def report_json(report: dict) -> str:
    """Canonical JSON so identical runs produce byte-identical reports."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _tomllib():
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    return tomllib


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse the TOML experiment config; every field has a default."""
    with open(path, "rb") as fh:
        raw = _tomllib().load(fh)
    corpus = raw.get("corpus", {})
    dataset = raw.get("dataset", {})
    embedding = raw.get("embedding", {})
    lda = raw.get("lda", {})
    train = raw.get("train", {})
    experiment = raw.get("experiment", {})
    ablation = raw.get("ablation", {})

    lda_alpha = lda.get("alpha")
    return ExperimentConfig(
        covers_path=corpus.get("covers", ""),
        stegos_path=corpus.get("stegos", ""),
        users=corpus.get("users"),
        dataset=DatasetSpec(
            ratio=int(dataset.get("ratio", 50)),
            train_frac=float(dataset.get("train_frac", 0.6)),
            val_frac=float(dataset.get("val_frac", 0.2)),
            test_frac=float(dataset.get("test_frac", 0.2)),
        ),
        embedding=EmbeddingConfig(
            provider=embedding.get("provider", "hashed"),
            dim=int(embedding.get("dim", content.DEFAULT_DIM)),
            seed=int(embedding.get("seed", 0)),
            path=embedding.get("path"),
        ),
        lda=LdaConfig(
            topics=int(lda.get("topics", 2)),
            alpha=float(lda_alpha) if lda_alpha is not None else None,
            beta=float(lda.get("beta", focus.DEFAULT_BETA)),
            iterations=int(lda.get("iterations", focus.DEFAULT_ITERATIONS)),
            infer_iterations=int(lda.get("infer_iterations", 50)),
            min_count=int(lda.get("min_count", focus.MIN_WORD_COUNT)),
        ),
        train=TrainConfig(
            learning_rate=float(train.get("learning_rate", fusion.DEFAULT_LEARNING_RATE)),
            epochs=int(train.get("epochs", 100)),
            batch_size=int(train.get("batch_size", 32)),
            fusion_mode=ablation.get("fusion", train.get("fusion_mode", "literal")),
            hidden=int(train.get("hidden", fusion.DEFAULT_HIDDEN)),
            gamma=float(train.get("gamma", fusion.DEFAULT_GAMMA)),
            alpha_stego=(
                float(train["alpha_stego"]) if "alpha_stego" in train else None
            ),
        ),
        repeats=int(experiment.get("repeats", 5)),
        use_user_features=bool(ablation.get("user_features", True)),
        base_seed=int(experiment.get("seed", 0)),
    )


def load_experiment_docs(config: ExperimentConfig) -> tuple[list[Document], list[Document]]:
    covers = [d for d in load_corpus(config.covers_path) if d.label == "cover"]
    stegos = [d for d in load_corpus(config.stegos_path) if d.label == "stego"]
    return covers, stegos
