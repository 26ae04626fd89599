"""Offline transformer sentence-embedding exporter.

Reads a JSONL corpus (one {"id", "user", "text", "label"} object per line),
embeds each document with a frozen pretrained transformer (no fine-tuning),
and writes the vectors in the UPV1 binary format consumed by downstream
steganalysis tooling.
"""

from .exporter import ExportJob, export, read_corpus, write_upv1

__all__ = ["ExportJob", "export", "read_corpus", "write_upv1"]
__version__ = "0.1.0"
