"""Profile-aware linguistic steganalysis toolkit.

Extracts habit, psychology, and focus features from per-user text corpora,
fuses them with content embeddings through scaled cross-attention, trains an
imbalance-aware classifier, and drives ratio-controlled experiments with
significance testing.
"""

from .corpus import Document, Token, TokenKind, Tag, load_corpus, make_document
from .habit import HabitFeatures, extract_habit
from .psychology import PsychologyFeatures, SentimentLexicon, extract_psychology
from .focus import FocusFeatures, LdaModel, extract_focus, fit_lda, infer_topics
from .content import EmbeddingProvider, VectorStore, embed_hashed, get_embedding
from .fusion import ClassifierParams, TrainConfig, focal_loss, forward, fuse, train
from .harness import (
    DatasetSpec,
    ExperimentConfig,
    build_ratio_dataset,
    run_experiment,
    run_fleet,
)
from .stats import Confusion, acc_f1, aggregate, mann_whitney_u, welch_t

__version__ = "0.1.0"

__all__ = [
    "Document", "Token", "TokenKind", "Tag", "load_corpus", "make_document",
    "HabitFeatures", "extract_habit",
    "PsychologyFeatures", "SentimentLexicon", "extract_psychology",
    "FocusFeatures", "LdaModel", "extract_focus", "fit_lda", "infer_topics",
    "EmbeddingProvider", "VectorStore", "embed_hashed", "get_embedding",
    "ClassifierParams", "TrainConfig", "focal_loss", "forward", "fuse", "train",
    "DatasetSpec", "ExperimentConfig", "build_ratio_dataset",
    "run_experiment", "run_fleet",
    "Confusion", "acc_f1", "aggregate", "mann_whitney_u", "welch_t",
]
