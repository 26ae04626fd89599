"""Content embeddings: a deterministic hashed n-gram embedder for desk-scale
runs, and a binary vector store for externally precomputed embeddings.

The store file format (magic "UPV1", little-endian) is the contract with the
offline transformer exporter: u32 dim, u64 count, then per record a u16
id length, the UTF-8 id bytes, and dim float32 values.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Document, TokenKind

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

MAGIC = b"UPV1"
MIN_DIM = 8
DEFAULT_DIM = 64


class VectorStoreError(ValueError):
    """Raised for malformed vector files and missing/duplicate records."""


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & _MASK64
    return h


def _features(doc: Document) -> list[bytes]:
    feats: list[bytes] = []
    for tok in doc.tokens:
        if tok.kind != TokenKind.WORD:
            continue
        raw = tok.lowercase.encode("utf-8")
        feats.append(raw)
        word = tok.lowercase
        for i in range(len(word) - 2):
            feats.append(word[i : i + 3].encode("utf-8"))
    return feats


def embed_hashed(doc: Document, dim: int = DEFAULT_DIM, seed: int = 0) -> np.ndarray:
    """Hash word and character-trigram features into a unit-norm vector.

    Each feature is hashed as FNV-1a(seed bytes || feature bytes) and bucketed
    modulo dim. An empty document maps to the zero vector.
    """
    if dim < MIN_DIM:
        raise ValueError(f"embedding dim must be >= {MIN_DIM}")
    prefix = struct.pack("<Q", seed & _MASK64)
    vec = np.zeros(dim)
    for feat in _features(doc):
        vec[fnv1a_64(prefix + feat) % dim] += 1.0
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


@dataclass
class VectorStore:
    dim: int
    vectors: dict[str, np.ndarray]

    def get(self, doc_id: str) -> np.ndarray:
        try:
            return self.vectors[doc_id]
        except KeyError:
            raise VectorStoreError(f"no stored vector for document id {doc_id!r}") from None


def write_vectors(store: VectorStore, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", store.dim, len(store.vectors)))
        for doc_id, vec in store.vectors.items():
            if len(vec) != store.dim:
                raise VectorStoreError(
                    f"vector for {doc_id!r} has length {len(vec)}, store dim is {store.dim}"
                )
            raw = doc_id.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(np.asarray(vec, dtype="<f4").tobytes())


def load_vectors(path: str | Path) -> VectorStore:
    """Load a UPV1 file; bad magic, truncation, duplicate ids, and dimension
    mismatches raise distinct VectorStoreError messages."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise VectorStoreError(f"{path}: bad magic {magic!r}")
        header = fh.read(12)
        if len(header) != 12:
            raise VectorStoreError(f"{path}: truncated header")
        dim, count = struct.unpack("<IQ", header)
        if dim == 0:
            raise VectorStoreError(f"{path}: dimension mismatch (dim 0)")
        vectors: dict[str, np.ndarray] = {}
        for i in range(count):
            raw_len = fh.read(2)
            if len(raw_len) != 2:
                raise VectorStoreError(f"{path}: truncated record {i}")
            (id_len,) = struct.unpack("<H", raw_len)
            raw_id = fh.read(id_len)
            if len(raw_id) != id_len:
                raise VectorStoreError(f"{path}: truncated record {i}")
            doc_id = raw_id.decode("utf-8")
            raw_vec = fh.read(4 * dim)
            if len(raw_vec) != 4 * dim:
                raise VectorStoreError(f"{path}: truncated record {i} ({doc_id!r})")
            if doc_id in vectors:
                raise VectorStoreError(f"{path}: duplicate id {doc_id!r}")
            vectors[doc_id] = np.frombuffer(raw_vec, dtype="<f4").astype(np.float64)
    return VectorStore(dim=dim, vectors=vectors)


@dataclass
class EmbeddingProvider:
    """Uniform interface the fusion stage uses to obtain content vectors."""

    mode: str  # "hashed" | "store"
    dim: int = DEFAULT_DIM
    seed: int = 0
    store: VectorStore | None = None

    @classmethod
    def hashed(cls, dim: int = DEFAULT_DIM, seed: int = 0) -> "EmbeddingProvider":
        return cls(mode="hashed", dim=dim, seed=seed)

    @classmethod
    def from_store(cls, store: VectorStore) -> "EmbeddingProvider":
        return cls(mode="store", dim=store.dim, store=store)


def get_embedding(doc: Document, provider: EmbeddingProvider) -> np.ndarray:
    if provider.mode == "hashed":
        return embed_hashed(doc, dim=provider.dim, seed=provider.seed)
    if provider.mode == "store":
        assert provider.store is not None
        return provider.store.get(doc.id)
    raise ValueError(f"unknown embedding provider mode {provider.mode!r}")
