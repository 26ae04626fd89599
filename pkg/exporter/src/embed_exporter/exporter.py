"""Compute frozen transformer embeddings and write them as a UPV1 file.

UPV1 layout (little-endian): magic b"UPV1", u32 dimension, u64 record count,
then per record a u16 UTF-8 id length, the id bytes, and dimension f32 values.
"""

from __future__ import annotations

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

log = logging.getLogger("embed_exporter")

MAGIC = b"UPV1"
DEFAULT_MODEL = "bert-base-cased"
DEFAULT_BATCH_SIZE = 16
POOLINGS = ("mean", "cls")


@dataclass(frozen=True)
class ExportJob:
    corpus_path: str | Path
    out_path: str | Path
    model_name: str = DEFAULT_MODEL
    pooling: str = "mean"  # "mean" | "cls"
    batch_size: int = DEFAULT_BATCH_SIZE

    def __post_init__(self):
        if self.pooling not in POOLINGS:
            raise ValueError(f"pooling must be one of {POOLINGS}, got {self.pooling!r}")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")


def read_corpus(path: str | Path) -> list[tuple[str, str]]:
    """(id, text) pairs from the JSONL corpus; ids must be unique."""
    pairs: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            try:
                doc_id, text = record["id"], record["text"]
            except (TypeError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: missing field {exc}") from exc
            if doc_id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate document id {doc_id!r}")
            seen.add(doc_id)
            pairs.append((doc_id, text))
    return pairs


def write_upv1(vectors: list[tuple[str, np.ndarray]], dim: int, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", dim, len(vectors)))
        for doc_id, vec in vectors:
            if vec.shape != (dim,):
                raise ValueError(f"vector for {doc_id!r} has shape {vec.shape}, expected ({dim},)")
            encoded = doc_id.encode("utf-8")
            if len(encoded) > 0xFFFF:
                raise ValueError(f"document id too long: {doc_id!r}")
            fh.write(struct.pack("<H", len(encoded)))
            fh.write(encoded)
            fh.write(vec.astype("<f4").tobytes())


def _embed_batch(model, tokenizer, texts: list[str], pooling: str) -> np.ndarray:
    import torch

    encoded = tokenizer(
        texts,
        padding=True,
        truncation=True,
        max_length=tokenizer.model_max_length,
        return_tensors="pt",
    )
    with torch.no_grad():
        hidden = model(**encoded).last_hidden_state  # (batch, seq, dim)
    if pooling == "cls":
        pooled = hidden[:, 0, :]
    else:
        mask = encoded["attention_mask"].unsqueeze(-1).to(hidden.dtype)
        pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1.0)
    return pooled.to(torch.float32).cpu().numpy()


def _warn_truncations(tokenizer, pairs: list[tuple[str, str]]) -> None:
    limit = tokenizer.model_max_length
    for doc_id, text in pairs:
        n_tokens = len(tokenizer(text)["input_ids"])
        if n_tokens > limit:
            log.warning(
                "document %s has %d tokens, exceeding the model limit %d; truncating",
                doc_id, n_tokens, limit,
            )


def export(job: ExportJob) -> int:
    """Embed every corpus document and write the UPV1 file. Returns the count."""
    import torch
    from transformers import AutoModel, AutoTokenizer

    pairs = read_corpus(job.corpus_path)
    if not pairs:
        write_upv1([], 0, job.out_path)
        log.info("empty corpus; wrote %s with 0 records", job.out_path)
        return 0

    tokenizer = AutoTokenizer.from_pretrained(job.model_name)
    model = AutoModel.from_pretrained(job.model_name)
    model.eval()
    torch.manual_seed(0)  # inference is deterministic; seed guards any dropout leftovers

    dim = int(model.config.hidden_size)
    _warn_truncations(tokenizer, pairs)

    vectors: list[tuple[str, np.ndarray]] = []
    for start in range(0, len(pairs), job.batch_size):
        batch = pairs[start : start + job.batch_size]
        pooled = _embed_batch(model, tokenizer, [t for _, t in batch], job.pooling)
        for (doc_id, _), vec in zip(batch, pooled):
            vectors.append((doc_id, vec))
    write_upv1(vectors, dim, job.out_path)
    log.info("wrote %d vectors of dim %d to %s", len(vectors), dim, job.out_path)
    return len(vectors)
