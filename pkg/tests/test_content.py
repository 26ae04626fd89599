import struct

import numpy as np
import pytest

from stegoscope.content import (
    EmbeddingProvider,
    VectorStore,
    VectorStoreError,
    embed_hashed,
    fnv1a_64,
    get_embedding,
    load_vectors,
    write_vectors,
)
from stegoscope.corpus import make_document


def reference_fnv1a(data: bytes) -> int:
    # Independent restatement of the FNV-1a reference algorithm.
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) % 2**64
    return h


class TestFnv:
    def test_known_vectors(self):
        # Published FNV-1a 64 test vectors.
        assert fnv1a_64(b"") == 0xCBF29CE484222325
        assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
        assert fnv1a_64(b"foobar") == 0x85944171F73967E8

    def test_matches_reference(self):
        for data in (b"cat", b"hello world", bytes(range(50))):
            assert fnv1a_64(data) == reference_fnv1a(data)


class TestEmbedHashed:
    def test_empty_doc_zero_vector(self):
        doc = make_document("d", "U", "", "cover")
        assert embed_hashed(doc, dim=8).tolist() == [0.0] * 8

    def test_deterministic(self):
        doc = make_document("d", "U", "the cat sat", "cover")
        assert np.array_equal(embed_hashed(doc, 16, 3), embed_hashed(doc, 16, 3))

    def test_buckets_match_reference(self):
        # "cat" contributes the word itself plus its single trigram "cat".
        doc = make_document("d", "U", "cat", "cover")
        vec = embed_hashed(doc, dim=8, seed=0)
        prefix = struct.pack("<Q", 0)
        expected = np.zeros(8)
        expected[reference_fnv1a(prefix + b"cat") % 8] += 2.0
        expected /= np.linalg.norm(expected)
        assert np.allclose(vec, expected)

    def test_unit_norm_or_zero(self):
        for text in ("", "a", "hello there friend"):
            vec = embed_hashed(make_document("d", "U", text, "cover"), dim=32)
            norm = np.linalg.norm(vec)
            assert norm == pytest.approx(1.0) or norm == 0.0

    def test_word_order_irrelevant(self):
        a = embed_hashed(make_document("d", "U", "alpha beta gamma", "cover"), 32)
        b = embed_hashed(make_document("d", "U", "gamma alpha beta", "cover"), 32)
        assert np.allclose(a, b)

    def test_min_dim_enforced(self):
        with pytest.raises(ValueError):
            embed_hashed(make_document("d", "U", "x", "cover"), dim=4)


class TestVectorStore:
    def test_empty_round_trip(self, tmp_path):
        path = tmp_path / "v.upv"
        write_vectors(VectorStore(dim=4, vectors={}), path)
        store = load_vectors(path)
        assert store.dim == 4
        assert store.vectors == {}

    def test_record_round_trip_bit_exact(self, tmp_path):
        path = tmp_path / "v.upv"
        vec = np.array([1.0, 0.0, 0.25, -3.5])
        write_vectors(VectorStore(dim=4, vectors={"u1-0001": vec}), path)
        store = load_vectors(path)
        assert store.vectors["u1-0001"].tolist() == vec.tolist()

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "v.upv"
        path.write_bytes(b"XXXX" + b"\x00" * 12)
        with pytest.raises(VectorStoreError, match="magic"):
            load_vectors(path)

    def test_truncated_record(self, tmp_path):
        path = tmp_path / "v.upv"
        write_vectors(VectorStore(dim=4, vectors={"x": np.zeros(4)}), path)
        raw = path.read_bytes()
        path.write_bytes(raw[:-5])
        with pytest.raises(VectorStoreError, match="truncated"):
            load_vectors(path)

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "v.upv"
        body = b""
        for _ in range(2):
            body += struct.pack("<H", 1) + b"x" + np.zeros(2, dtype="<f4").tobytes()
        path.write_bytes(b"UPV1" + struct.pack("<IQ", 2, 2) + body)
        with pytest.raises(VectorStoreError, match="duplicate"):
            load_vectors(path)

    def test_dim_mismatch_on_write(self, tmp_path):
        store = VectorStore(dim=4, vectors={"x": np.zeros(3)})
        with pytest.raises(VectorStoreError, match="dim"):
            write_vectors(store, tmp_path / "v.upv")


class TestGetEmbedding:
    def test_hashed_dispatch(self):
        doc = make_document("d", "U", "", "cover")
        provider = EmbeddingProvider.hashed(dim=8)
        assert get_embedding(doc, provider).tolist() == [0.0] * 8

    def test_store_lookup(self):
        store = VectorStore(dim=2, vectors={"x": np.array([1.0, 2.0])})
        doc = make_document("x", "U", "anything", "cover")
        assert get_embedding(doc, EmbeddingProvider.from_store(store)).tolist() == [1.0, 2.0]

    def test_store_missing_id(self):
        store = VectorStore(dim=2, vectors={})
        doc = make_document("nope", "U", "anything", "cover")
        with pytest.raises(VectorStoreError, match="nope"):
            get_embedding(doc, EmbeddingProvider.from_store(store))
